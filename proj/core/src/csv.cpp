#include "chronoca/csv.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <system_error>

#include "chronoca/errors.hpp"

namespace chronoca::csv {

std::vector<Record> read(std::istream& in) {
    std::vector<Record> records;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        Record rec;
        rec.line = line_no;
        std::string field;
        bool quoted = false;
        bool was_quoted = false;
        std::size_t i = 0;
        for (;;) {
            if (i == line.size()) {
                if (!quoted) break;
                // quoted field spanning a line break
                std::string next;
                if (!std::getline(in, next)) {
                    throw ParseError("unterminated quoted field", rec.line, rec.fields.size() + 1);
                }
                ++line_no;
                if (!next.empty() && next.back() == '\r') next.pop_back();
                field += '\n';
                line = std::move(next);
                i = 0;
                continue;
            }
            const char c = line[i++];
            if (quoted) {
                if (c == '"') {
                    if (i < line.size() && line[i] == '"') {
                        field += '"';
                        ++i;
                    } else {
                        quoted = false;
                    }
                } else {
                    field += c;
                }
            } else if (c == '"' && field.empty() && !was_quoted) {
                quoted = true;
                was_quoted = true;
            } else if (c == ',') {
                rec.fields.push_back(std::move(field));
                field.clear();
                was_quoted = false;
            } else {
                field += c;
            }
        }
        rec.fields.push_back(std::move(field));
        records.push_back(std::move(rec));
    }
    if (in.bad()) throw IoError("read failure on input stream");
    return records;
}

bool parse_number(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (*first == '+') {
        ++first;  // from_chars rejects a leading '+'
        if (first == last || *first == '-') return false;
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) return false;
    out = value;
    return true;
}

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace chronoca::csv
