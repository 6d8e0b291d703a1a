#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace benchkit::csv {

/// One parsed record plus the 1-based line it started on.
struct Row {
    std::vector<std::string> fields;
    std::size_t line = 0;
};

/// RFC 4180 reader: quoted fields may contain commas, doubled quotes and
/// newlines. Accepts LF or CRLF, skips blank lines, strips a UTF-8 BOM.
std::vector<Row> parse(std::string_view text);

/// Quotes a field only when it contains a comma, quote, CR or LF.
std::string quote(std::string_view field);

std::string format_row(const std::vector<std::string>& fields);

/// Column lookup over a header row; throws ParseError naming a missing column.
class Header {
public:
    explicit Header(const Row& header);

    std::size_t index(std::string_view name) const;
    bool has(std::string_view name) const;
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
};

/// Strict decimal parse of a whole field (surrounding blanks allowed).
double parse_double(std::string_view field, std::size_t line, std::string_view column);
long long parse_integer(std::string_view field, std::size_t line, std::string_view column);

/// Shortest text that parses back to exactly `value`.
std::string format_exact(double value);

}  // namespace benchkit::csv
