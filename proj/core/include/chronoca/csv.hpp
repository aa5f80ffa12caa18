#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace chronoca::csv {

struct Record {
    std::size_t line = 0;  // 1-based source line
    std::vector<std::string> fields;
};

/// Reads comma-separated records. Double-quoted fields may contain commas
/// and doubled quotes; a trailing '\r' is stripped. Blank lines are skipped.
std::vector<Record> read(std::istream& in);

/// Parses a whole field as a finite double ('.' decimal point, no padding).
bool parse_number(std::string_view text, double& out);

/// Shortest text that round-trips to the same double.
std::string format_number(double value);

/// Quotes the field when it contains a comma, quote or line break.
std::string escape(std::string_view field);

}  // namespace chronoca::csv
