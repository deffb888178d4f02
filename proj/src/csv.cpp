#include "parcelfuse/csv.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include "parcelfuse/errors.hpp"

namespace parcelfuse::csv {

bool Reader::next(std::vector<std::string>& fields) {
    std::string raw;
    for (;;) {
        if (!std::getline(in_, raw)) return false;
        ++line_;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        if (raw.empty()) continue;
        if (raw[0] == '#') continue;
        break;
    }

    fields.clear();
    std::string field;
    std::size_t i = 0;
    const std::size_t n = raw.size();
    while (true) {
        field.clear();
        if (i < n && raw[i] == '"') {
            ++i;
            for (;;) {
                if (i >= n)
                    throw ParseError("line " + std::to_string(line_) + ": unterminated quote");
                if (raw[i] == '"') {
                    if (i + 1 < n && raw[i + 1] == '"') {
                        field.push_back('"');
                        i += 2;
                    } else {
                        ++i;
                        break;
                    }
                } else {
                    field.push_back(raw[i++]);
                }
            }
        } else {
            while (i < n && raw[i] != ',') field.push_back(raw[i++]);
        }
        fields.push_back(field);
        if (i >= n) break;
        if (raw[i] != ',')
            throw ParseError("line " + std::to_string(line_) + ": garbage after closing quote");
        ++i;
        if (i == n) {  // trailing comma means a final empty field
            fields.emplace_back();
            break;
        }
    }
    return true;
}

std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(',');
        out << escape(fields[i]);
    }
    out.put('\n');
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace parcelfuse::csv
