#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "parcelfuse/geometry.hpp"

namespace parcelfuse {

enum class SourceKind { Google, Bing, YellowPages, Osm, Other };

// Identity of a data provider. Known providers get a fixed kind; anything
// else is kept as Other under its normalized name. Equality and ordering go
// by the canonical name.
struct Source {
    SourceKind kind = SourceKind::Other;
    std::string name;

    static Source parse(std::string_view text);

    friend bool operator==(const Source& a, const Source& b) { return a.name == b.name; }
    friend std::strong_ordering operator<=>(const Source& a, const Source& b) {
        return a.name <=> b.name;
    }
};

// One parcel from the authoritative footprint dataset, in planar meters.
struct ParcelFootprint {
    std::string parcel_id;
    Polygon geometry;
    std::optional<std::string> authoritative_class;
};

// One labeled place from a source dataset: a point of interest or a tagged
// area, with at least one key/value tag.
struct SourceRecord {
    Source source;
    std::string record_id;
    std::variant<Point, Polygon> geometry;
    std::vector<std::pair<std::string, std::string>> tags;

    bool is_point() const { return std::holds_alternative<Point>(geometry); }
    const Point& point() const { return std::get<Point>(geometry); }
    const Polygon& polygon() const { return std::get<Polygon>(geometry); }
};

// The ten authoritative land-use class names used by the footprint dataset.
const std::vector<std::string>& datasf_class_names();

}  // namespace parcelfuse
