#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace parcelfuse::csv {

// Line-oriented CSV reader with double-quote escaping. Blank lines and
// lines starting with '#' are skipped. Quoted fields may contain commas and
// escaped quotes ("") but not newlines.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    // Reads the next data row into fields. Returns false at end of input.
    // Throws ParseError on an unterminated quote.
    bool next(std::vector<std::string>& fields);

    // 1-based line number of the row last returned by next().
    std::size_t line() const { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

// Quotes the field if it contains a comma, quote, or newline.
std::string escape(std::string_view field);

void write_row(std::ostream& out, const std::vector<std::string>& fields);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

}  // namespace parcelfuse::csv
