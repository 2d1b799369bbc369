#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace admit::csv {

// Minimal RFC 4180 reader: comma separated, double-quote escaping, CRLF or LF.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Next record, or nullopt at end of input. Throws ParseError on an
    // unterminated quote.
    std::optional<std::vector<std::string>> next();

    // Line number (1-based) where the last returned record started.
    std::size_t line() const noexcept { return record_line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
    std::size_t record_line_ = 0;
};

std::string escape(std::string_view field);
void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest round-trippable decimal form of a double.
std::string format_double(double v);
// Fixed precision, used for human-facing reports.
std::string format_fixed(double v, int digits);

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);
std::string to_lower(std::string_view s);
std::vector<std::string> split(std::string_view s, char delim);

}  // namespace admit::csv
