#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "parcelfuse/records.hpp"
#include "parcelfuse/spatial_index.hpp"
#include "parcelfuse/taxonomy.hpp"

namespace parcelfuse {

// Record-flow counters for one source. total = aligned + discarded_unaligned
// and aligned = valid + discarded_spatial always hold.
struct ValidityStats {
    std::size_t total_records = 0;
    std::size_t aligned_records = 0;
    std::size_t valid_records = 0;
    std::size_t discarded_unaligned = 0;
    std::size_t discarded_spatial = 0;
};

// Per-parcel LBCS labels for one source, with the record ids that produced
// each (parcel, code) pair.
struct LabelTable {
    Source source;
    std::map<std::string, std::set<LbcsCode>> labels;
    std::map<std::pair<std::string, LbcsCode>, std::set<std::string>> provenance;
    ValidityStats stats;
};

// Picks the parcel for a point record: a containing footprint wins;
// otherwise the nearest footprint within `radius` meters. Ties (several
// containing footprints, or exactly equal distances) break by smaller
// bounding-box area, then lexicographically smaller parcel id. Returns
// nullopt when nothing is within reach. The index must have been built
// from `footprints`. Throws std::invalid_argument for non-point records
// or a negative radius.
std::optional<std::string> assign_point(const SourceRecord& record, const FootprintIndex& index,
                                        const std::vector<ParcelFootprint>& footprints,
                                        double radius);

// All parcels whose interior overlaps the record's polygon with positive
// area. Touching along an edge does not count. Throws for non-polygon
// records.
std::set<std::string> assign_polygon(const SourceRecord& record, const FootprintIndex& index,
                                     const std::vector<ParcelFootprint>& footprints);

// Runs every record of one source through alignment and spatial assignment.
// Records sharing a record_id are counted once (first occurrence wins).
// Records that align to no code count as discarded_unaligned; aligned
// records that reach no parcel count as discarded_spatial. Every emitted
// code is validated against the taxonomy.
LabelTable build_label_table(const Source& source, const std::vector<SourceRecord>& records,
                             const CrosswalkTable& crosswalk, const LbcsTaxonomy& taxonomy,
                             const FootprintIndex& index,
                             const std::vector<ParcelFootprint>& footprints, double radius);

}  // namespace parcelfuse
