#include "benchkit/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>

#include "benchkit/error.hpp"

namespace benchkit::csv {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) {
        s.remove_suffix(1);
    }
    return s;
}

}  // namespace

std::vector<Row> parse(std::string_view text) {
    if (text.substr(0, 3) == "\xEF\xBB\xBF") {
        text.remove_prefix(3);
    }

    std::vector<Row> rows;
    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_was_quoted = false;
    bool row_has_content = false;
    std::size_t line = 1;
    std::size_t row_start = 1;

    auto end_field = [&] {
        current.fields.push_back(std::move(field));
        field.clear();
        field_was_quoted = false;
    };
    auto end_row = [&] {
        end_field();
        bool blank = !row_has_content && current.fields.size() == 1 && current.fields[0].empty();
        if (!blank) {
            current.line = row_start;
            rows.push_back(std::move(current));
        }
        current = Row{};
        row_has_content = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') {
                    ++line;
                }
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
        case '"':
            if (!field.empty() || field_was_quoted) {
                throw ParseError("unexpected quote inside unquoted field", line);
            }
            in_quotes = true;
            field_was_quoted = true;
            row_has_content = true;
            break;
        case ',':
            end_field();
            row_has_content = true;
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') {
                break;
            }
            [[fallthrough]];
        case '\n':
            end_row();
            ++line;
            row_start = line;
            break;
        default:
            if (field_was_quoted) {
                throw ParseError("text after closing quote", line);
            }
            field.push_back(c);
            row_has_content = true;
            break;
        }
    }
    if (in_quotes) {
        throw ParseError("unterminated quoted field", row_start);
    }
    if (row_has_content || !field.empty()) {
        end_row();
    }
    return rows;
}

std::string quote(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) {
        return std::string(field);
    }
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') {
            out += "\"\"";
        } else {
            out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

std::string format_row(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out.push_back(',');
        }
        out += quote(fields[i]);
    }
    return out;
}

Header::Header(const Row& header) {
    for (const auto& name : header.fields) {
        names_.emplace_back(trim(name));
    }
}

std::size_t Header::index(std::string_view name) const {
    auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
        throw ParseError("missing required column '" + std::string(name) + "'", 1);
    }
    return static_cast<std::size_t>(it - names_.begin());
}

bool Header::has(std::string_view name) const {
    return std::find(names_.begin(), names_.end(), name) != names_.end();
}

double parse_double(std::string_view field, std::size_t line, std::string_view column) {
    auto s = trim(field);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("column '" + std::string(column) + "': not a number: '" + std::string(field) + "'",
                         line);
    }
    return value;
}

long long parse_integer(std::string_view field, std::size_t line, std::string_view column) {
    auto s = trim(field);
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    long long value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
        throw ParseError("column '" + std::string(column) + "': not an integer: '" + std::string(field) + "'",
                         line);
    }
    return value;
}

std::string format_exact(double value) {
    if (std::isnan(value)) {
        return "nan";
    }
    if (std::isinf(value)) {
        return value > 0 ? "inf" : "-inf";
    }
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), ptr);
}

}  // namespace benchkit::csv
