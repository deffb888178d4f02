#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parcelfuse/records.hpp"

namespace parcelfuse {

// A 4-digit LBCS function code. The level is encoded in the trailing
// zeros: X000 is level 1, XY00 level 2, XYZ0 level 3.
struct LbcsCode {
    int value = 0;
    auto operator<=>(const LbcsCode&) const = default;
};

// 1, 2, or 3 for a well-formed code, 0 otherwise.
int lbcs_level(int code);

// Parent by digit arithmetic: XYZ0 -> XY00 -> X000. Level 1 has no parent.
std::optional<int> lbcs_parent(int code);

struct LbcsResolution {
    int level = 0;
    std::vector<LbcsCode> ancestors;  // nearest first, root last
};

// The LBCS code hierarchy, loaded from a code,name table.
class LbcsTaxonomy {
public:
    // CSV with header "code,name". Every code must be well-formed and
    // unique, and every level 2/3 code's parent must also be present.
    static LbcsTaxonomy load(std::istream& in);

    bool has(LbcsCode code) const { return names_.count(code) != 0; }
    std::size_t size() const { return names_.size(); }

    // Throw std::invalid_argument naming the code when it is unknown.
    int level(LbcsCode code) const;
    const std::string& name(LbcsCode code) const;
    std::optional<LbcsCode> parent(LbcsCode code) const;
    LbcsResolution resolve(LbcsCode code) const;
    std::vector<LbcsCode> descendants(LbcsCode code) const;  // excludes the code itself

    std::vector<LbcsCode> codes() const;  // sorted ascending
    std::vector<LbcsCode> codes_at_level(int level) const;

private:
    std::map<LbcsCode, std::string> names_;
    std::map<LbcsCode, std::vector<LbcsCode>> children_;

    void require(LbcsCode code) const;
};

// Tag values are compared case-insensitively with underscores and spaces
// equated and surrounding whitespace ignored.
std::string normalize_tag_value(std::string_view value);

enum class GeometryKind { Point, Polygon, Any };

std::optional<GeometryKind> parse_geometry_kind(std::string_view text);
std::string_view geometry_kind_name(GeometryKind kind);

struct CrosswalkRow {
    Source source;
    GeometryKind kind = GeometryKind::Any;
    std::string key;
    std::string value;  // normalized
    LbcsCode lbcs;
};

// Maps source tags to LBCS codes. Rows are keyed by (source, geometry
// kind, key, normalized value); a row with kind "any" matches records of
// either geometry.
class CrosswalkTable {
public:
    // CSV with header "source,geometry_kind,key,value,lbcs". Every code
    // must exist in the taxonomy and row keys must be unique.
    static CrosswalkTable load(std::istream& in, const LbcsTaxonomy& taxonomy);

    // Adds all rows of another table; duplicate keys throw.
    void merge(const CrosswalkTable& other);

    // Union of the codes matched by any of the record's tags.
    std::set<LbcsCode> align(const SourceRecord& record) const;

    // The lexicographically smallest (key, value) pair that maps to the
    // code for this source and geometry kind (kind "any" rows included).
    std::optional<std::pair<std::string, std::string>> tag_for(const Source& source,
                                                               GeometryKind kind,
                                                               LbcsCode code) const;

    const std::vector<CrosswalkRow>& rows() const { return rows_; }
    std::size_t size() const { return rows_.size(); }

private:
    using Key = std::tuple<std::string, GeometryKind, std::string, std::string>;
    std::map<Key, LbcsCode> index_;
    std::vector<CrosswalkRow> rows_;

    void add_row(CrosswalkRow row, std::size_t line);
};

// Maps level-2 LBCS codes onto authoritative land-use class names for
// evaluation against the footprint dataset.
class AuthoritativeCrosswalk {
public:
    // CSV with header "lbcs,datasf". Codes must exist in the taxonomy and
    // class names must be known; one row per code.
    static AuthoritativeCrosswalk load(std::istream& in, const LbcsTaxonomy& taxonomy);

    std::optional<std::string> to_authoritative(LbcsCode code) const;
    const std::map<LbcsCode, std::string>& rows() const { return rows_; }
    std::vector<std::string> class_names() const;  // sorted unique

private:
    std::map<LbcsCode, std::string> rows_;
};

}  // namespace parcelfuse
