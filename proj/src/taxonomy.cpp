#include "parcelfuse/taxonomy.hpp"

#include <algorithm>
#include <stdexcept>

#include "parcelfuse/csv.hpp"
#include "parcelfuse/errors.hpp"
#include "parcelfuse/records.hpp"
#include "parcelfuse/strings.hpp"

namespace parcelfuse {

int lbcs_level(int code) {
    if (code < 1000 || code > 9999) return 0;
    if (code % 1000 == 0) return 1;
    if (code % 100 == 0) return 2;
    if (code % 10 == 0) return 3;
    return 0;
}

std::optional<int> lbcs_parent(int code) {
    switch (lbcs_level(code)) {
        case 2: return code / 1000 * 1000;
        case 3: return code / 100 * 100;
        default: return std::nullopt;
    }
}

namespace {

std::optional<int> parse_code(std::string_view text) {
    text = trim(text);
    if (text.size() != 4) return std::nullopt;
    int value = 0;
    for (const char c : text) {
        if (c < '0' || c > '9') return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return value;
}

[[noreturn]] void row_error(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

LbcsTaxonomy LbcsTaxonomy::load(std::istream& in) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || fields.size() < 2 || trim(fields[0]) != "code" ||
        trim(fields[1]) != "name")
        throw ParseError("taxonomy: expected header 'code,name'");

    LbcsTaxonomy tax;
    while (reader.next(fields)) {
        if (fields.size() < 2) row_error(reader.line(), "expected code,name");
        const auto code = parse_code(fields[0]);
        if (!code || lbcs_level(*code) == 0)
            row_error(reader.line(), "invalid LBCS code '" + fields[0] + "'");
        if (!tax.names_.emplace(LbcsCode{*code}, std::string(trim(fields[1]))).second)
            row_error(reader.line(), "duplicate code " + std::to_string(*code));
    }

    for (const auto& [code, name] : tax.names_) {
        const auto parent = lbcs_parent(code.value);
        if (!parent) continue;
        if (!tax.names_.count(LbcsCode{*parent}))
            throw ParseError("taxonomy: missing parent " + std::to_string(*parent) + " for " +
                             std::to_string(code.value));
        tax.children_[LbcsCode{*parent}].push_back(code);
    }
    return tax;
}

void LbcsTaxonomy::require(LbcsCode code) const {
    if (!has(code))
        throw std::invalid_argument("unknown LBCS code " + std::to_string(code.value));
}

int LbcsTaxonomy::level(LbcsCode code) const {
    require(code);
    return lbcs_level(code.value);
}

const std::string& LbcsTaxonomy::name(LbcsCode code) const {
    require(code);
    return names_.at(code);
}

std::optional<LbcsCode> LbcsTaxonomy::parent(LbcsCode code) const {
    require(code);
    const auto p = lbcs_parent(code.value);
    if (!p) return std::nullopt;
    return LbcsCode{*p};
}

LbcsResolution LbcsTaxonomy::resolve(LbcsCode code) const {
    require(code);
    LbcsResolution res;
    res.level = lbcs_level(code.value);
    for (auto p = parent(code); p; p = parent(*p)) res.ancestors.push_back(*p);
    return res;
}

std::vector<LbcsCode> LbcsTaxonomy::descendants(LbcsCode code) const {
    require(code);
    std::vector<LbcsCode> out;
    std::vector<LbcsCode> frontier{code};
    while (!frontier.empty()) {
        const LbcsCode cur = frontier.back();
        frontier.pop_back();
        const auto it = children_.find(cur);
        if (it == children_.end()) continue;
        for (const LbcsCode child : it->second) {
            out.push_back(child);
            frontier.push_back(child);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<LbcsCode> LbcsTaxonomy::codes() const {
    std::vector<LbcsCode> out;
    out.reserve(names_.size());
    for (const auto& [code, name] : names_) out.push_back(code);
    return out;
}

std::vector<LbcsCode> LbcsTaxonomy::codes_at_level(int level) const {
    std::vector<LbcsCode> out;
    for (const auto& [code, name] : names_)
        if (lbcs_level(code.value) == level) out.push_back(code);
    return out;
}

std::string normalize_tag_value(std::string_view value) {
    std::string lowered = ascii_lower(trim(value));
    std::string out;
    out.reserve(lowered.size());
    bool pending_space = false;
    for (const char c : lowered) {
        if (c == '_' || c == ' ' || c == '\t') {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

std::optional<GeometryKind> parse_geometry_kind(std::string_view text) {
    const std::string t = ascii_lower(trim(text));
    if (t == "point") return GeometryKind::Point;
    if (t == "polygon") return GeometryKind::Polygon;
    if (t == "any") return GeometryKind::Any;
    return std::nullopt;
}

std::string_view geometry_kind_name(GeometryKind kind) {
    switch (kind) {
        case GeometryKind::Point: return "point";
        case GeometryKind::Polygon: return "polygon";
        case GeometryKind::Any: return "any";
    }
    return "?";
}

void CrosswalkTable::add_row(CrosswalkRow row, std::size_t line) {
    Key key{row.source.name, row.kind, row.key, row.value};
    if (!index_.emplace(std::move(key), row.lbcs).second) {
        const std::string where = line ? "line " + std::to_string(line) + ": " : "";
        throw ParseError(where + "duplicate crosswalk row (" + row.source.name + ", " +
                         std::string(geometry_kind_name(row.kind)) + ", " + row.key + ", " +
                         row.value + ")");
    }
    rows_.push_back(std::move(row));
}

CrosswalkTable CrosswalkTable::load(std::istream& in, const LbcsTaxonomy& taxonomy) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || fields.size() < 5 || trim(fields[0]) != "source" ||
        trim(fields[1]) != "geometry_kind" || trim(fields[2]) != "key" ||
        trim(fields[3]) != "value" || trim(fields[4]) != "lbcs")
        throw ParseError("crosswalk: expected header 'source,geometry_kind,key,value,lbcs'");

    CrosswalkTable table;
    while (reader.next(fields)) {
        const std::size_t line = reader.line();
        if (fields.size() < 5) row_error(line, "expected source,geometry_kind,key,value,lbcs");
        CrosswalkRow row;
        row.source = Source::parse(fields[0]);
        if (row.source.name.empty()) row_error(line, "empty source");
        const auto kind = parse_geometry_kind(fields[1]);
        if (!kind) row_error(line, "bad geometry_kind '" + fields[1] + "'");
        row.kind = *kind;
        row.key = std::string(trim(fields[2]));
        if (row.key.empty()) row_error(line, "empty key");
        row.value = normalize_tag_value(fields[3]);
        if (row.value.empty()) row_error(line, "empty value");
        const auto code = parse_code(fields[4]);
        if (!code || lbcs_level(*code) == 0)
            row_error(line, "invalid LBCS code '" + fields[4] + "'");
        if (!taxonomy.has(LbcsCode{*code}))
            row_error(line, "LBCS code " + std::to_string(*code) + " not in taxonomy");
        row.lbcs = LbcsCode{*code};
        table.add_row(std::move(row), line);
    }
    return table;
}

void CrosswalkTable::merge(const CrosswalkTable& other) {
    for (const auto& row : other.rows_) add_row(row, 0);
}

std::set<LbcsCode> CrosswalkTable::align(const SourceRecord& record) const {
    const GeometryKind kind = record.is_point() ? GeometryKind::Point : GeometryKind::Polygon;
    std::set<LbcsCode> out;
    for (const auto& [key, value] : record.tags) {
        const std::string k(trim(key));
        const std::string v = normalize_tag_value(value);
        for (const GeometryKind match : {kind, GeometryKind::Any}) {
            const auto it = index_.find(Key{record.source.name, match, k, v});
            if (it != index_.end()) out.insert(it->second);
        }
    }
    return out;
}

std::optional<std::pair<std::string, std::string>> CrosswalkTable::tag_for(
    const Source& source, GeometryKind kind, LbcsCode code) const {
    std::optional<std::pair<std::string, std::string>> best;
    for (const auto& row : rows_) {
        if (row.source != source || row.lbcs != code) continue;
        if (row.kind != kind && row.kind != GeometryKind::Any) continue;
        std::pair<std::string, std::string> cand{row.key, row.value};
        if (!best || cand < *best) best = std::move(cand);
    }
    return best;
}

AuthoritativeCrosswalk AuthoritativeCrosswalk::load(std::istream& in,
                                                    const LbcsTaxonomy& taxonomy) {
    csv::Reader reader(in);
    std::vector<std::string> fields;
    if (!reader.next(fields) || fields.size() < 2 || trim(fields[0]) != "lbcs" ||
        trim(fields[1]) != "datasf")
        throw ParseError("authoritative crosswalk: expected header 'lbcs,datasf'");

    AuthoritativeCrosswalk xwalk;
    while (reader.next(fields)) {
        const std::size_t line = reader.line();
        if (fields.size() < 2) row_error(line, "expected lbcs,datasf");
        const auto code = parse_code(fields[0]);
        if (!code || lbcs_level(*code) == 0)
            row_error(line, "invalid LBCS code '" + fields[0] + "'");
        if (!taxonomy.has(LbcsCode{*code}))
            row_error(line, "LBCS code " + std::to_string(*code) + " not in taxonomy");
        const std::string name(trim(fields[1]));
        bool known = false;
        for (const auto& k : datasf_class_names())
            if (k == name) known = true;
        if (!known) row_error(line, "unknown authoritative class '" + fields[1] + "'");
        if (!xwalk.rows_.emplace(LbcsCode{*code}, name).second)
            row_error(line, "duplicate code " + std::to_string(*code));
    }
    return xwalk;
}

std::optional<std::string> AuthoritativeCrosswalk::to_authoritative(LbcsCode code) const {
    const auto it = rows_.find(code);
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

std::vector<std::string> AuthoritativeCrosswalk::class_names() const {
    std::vector<std::string> out;
    for (const auto& [code, name] : rows_) out.push_back(name);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace parcelfuse
