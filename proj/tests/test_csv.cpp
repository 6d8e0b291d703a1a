#include <gtest/gtest.h>

#include <random>

#include "benchkit/csv.hpp"
#include "benchkit/error.hpp"

using namespace benchkit;

TEST(Csv, ParsesQuotedFieldsAndCrlf) {
    auto rows = csv::parse("a,b,c\r\n1,\"x, \"\"y\"\"\",3\r\n\r\n\"multi\nline\",,z\n");
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1].fields, (std::vector<std::string>{"1", "x, \"y\"", "3"}));
    EXPECT_EQ(rows[1].line, 2u);
    EXPECT_EQ(rows[2].fields, (std::vector<std::string>{"multi\nline", "", "z"}));
    EXPECT_EQ(rows[2].line, 4u);
}

TEST(Csv, StripsBomAndHandlesMissingTrailingNewline) {
    auto rows = csv::parse("\xEF\xBB\xBFsample_id,label\ns1,A");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].fields[0], "sample_id");
    EXPECT_EQ(rows[1].fields[1], "A");
}

TEST(Csv, RejectsUnterminatedQuote) {
    EXPECT_THROW(csv::parse("a,\"b\n"), ParseError);
    EXPECT_THROW(csv::parse("a,\"b\"c\n"), ParseError);
}

TEST(Csv, HeaderNamesMissingColumn) {
    csv::Header h(csv::parse("fold, A ,B\n").front());
    EXPECT_EQ(h.index("A"), 1u);
    try {
        h.index("C");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("'C'"), std::string::npos);
    }
}

TEST(Csv, NumberParsing) {
    EXPECT_DOUBLE_EQ(csv::parse_double(" 0.25 ", 1, "x"), 0.25);
    EXPECT_DOUBLE_EQ(csv::parse_double("+1e-3", 1, "x"), 1e-3);
    EXPECT_THROW(csv::parse_double("0.5abc", 3, "x"), ParseError);
    EXPECT_THROW(csv::parse_double("", 3, "x"), ParseError);
    EXPECT_EQ(csv::parse_integer("12", 1, "epoch"), 12);
    EXPECT_THROW(csv::parse_integer("1.5", 1, "epoch"), ParseError);
}

TEST(Csv, FormatExactRoundTrips) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> dist(-1e6, 1e6);
    for (int i = 0; i < 500; ++i) {
        const double v = dist(rng) / 3.0;
        EXPECT_EQ(csv::parse_double(csv::format_exact(v), 1, "v"), v);
    }
}

TEST(Csv, QuotedRowsRoundTripThroughParser) {
    std::mt19937_64 rng(11);
    const std::string alphabet = "ab ,\"\n\r1";
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::string> fields(1 + rng() % 5);
        for (auto& f : fields) {
            const auto len = 1 + rng() % 6;
            for (std::size_t i = 0; i < len; ++i) {
                f.push_back(alphabet[rng() % alphabet.size()]);
            }
        }
        auto text = csv::format_row(fields) + "\n";
        auto rows = csv::parse(text);
        ASSERT_EQ(rows.size(), 1u) << text;
        EXPECT_EQ(rows[0].fields, fields);
    }
}
