#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "parcelfuse/errors.hpp"
#include "parcelfuse/records.hpp"

namespace parcelfuse {

enum class ProjectionMode { AlreadyPlanar, Equirectangular };

// Mapping from geographic coordinates onto the local planar frame in
// meters. AlreadyPlanar treats (lon, lat) fields directly as (x, y) meters;
// Equirectangular projects around a fixed origin.
struct ProjectionSpec {
    ProjectionMode mode = ProjectionMode::AlreadyPlanar;
    double origin_lat = 0.0;
    double origin_lon = 0.0;

    // Throws ConfigError when the origin is outside lat [-90, 90] or
    // lon [-180, 180].
    void validate() const;
};

Point project(double lat, double lon, const ProjectionSpec& proj);
void unproject(const Point& p, const ProjectionSpec& proj, double& lat, double& lon);

// One skipped input element and why. position is the feature index, CSV
// line number, or XML line number depending on the format.
struct RecordIssue {
    std::size_t position = 0;
    std::string message;
};

struct GeoJsonOptions {
    std::string id_property = "mapblklot";
    std::string class_property = "landuse";
};

struct FootprintReadResult {
    std::vector<ParcelFootprint> footprints;
    std::vector<RecordIssue> issues;      // skipped features
    std::size_t features_seen = 0;
    std::size_t unknown_class_count = 0;  // kept, but class value not a known name
};

// Reads a GeoJSON FeatureCollection of Polygon/MultiPolygon features.
// MultiPolygon parts become separate footprints with "#<part>" id suffixes.
// Feature-level problems (missing id, bad geometry, duplicate id) skip the
// feature and are recorded as issues; malformed JSON throws ParseError.
FootprintReadResult read_footprints_geojson(std::istream& in, const ProjectionSpec& proj,
                                            const GeoJsonOptions& opts = {});

struct PoiReadResult {
    std::vector<SourceRecord> records;
    std::vector<RecordIssue> issues;  // skipped rows
    std::size_t rows_seen = 0;
};

// Reads a point-of-interest table with header columns id, lat, lon, type
// (located by name, extra columns ignored). Each kept row becomes a point
// record with a single "type" tag. A missing required column throws
// ParseError; bad rows are skipped and recorded.
PoiReadResult read_poi_csv(std::istream& in, const Source& source, const ProjectionSpec& proj);

struct OsmReadResult {
    std::vector<SourceRecord> records;
    std::vector<RecordIssue> issues;       // elements that could not be used
    std::size_t nodes_seen = 0;
    std::size_t ways_seen = 0;
    std::size_t untagged_skipped = 0;      // elements with no tags at all
};

// Reads the node/way subset of OSM XML. Tagged nodes become point records
// ("n<id>"); tagged closed ways become polygon records ("w<id>"). Untagged
// elements are skipped and tallied separately. Ways that are unclosed,
// reference missing nodes, or degenerate become issues. Malformed XML
// throws ParseError with line and column.
OsmReadResult read_osm_xml(std::istream& in, const ProjectionSpec& proj);

}  // namespace parcelfuse
