#include "parcelfuse/assign.hpp"

#include <stdexcept>
#include <unordered_set>

namespace parcelfuse {

namespace {

// (area, id) ordering used for every assignment tie-break.
bool beats(double area_a, const std::string& id_a, double area_b, const std::string& id_b) {
    if (area_a != area_b) return area_a < area_b;
    return id_a < id_b;
}

}  // namespace

std::optional<std::string> assign_point(const SourceRecord& record, const FootprintIndex& index,
                                        const std::vector<ParcelFootprint>& footprints,
                                        double radius) {
    if (!record.is_point())
        throw std::invalid_argument("assign_point: record " + record.record_id +
                                    " is not a point");
    if (radius < 0.0) throw std::invalid_argument("assign_point: radius must be >= 0");

    const Point& p = record.point();
    const auto candidates = index.query_point_ordinals(p, radius);

    const ParcelFootprint* best = nullptr;
    for (const std::uint32_t i : candidates) {
        const ParcelFootprint& fp = footprints[i];
        if (!contains(fp.geometry, p)) continue;
        if (!best || beats(fp.geometry.bounds().area(), fp.parcel_id,
                           best->geometry.bounds().area(), best->parcel_id))
            best = &fp;
    }
    if (best) return best->parcel_id;

    double best_dist = 0.0;
    for (const std::uint32_t i : candidates) {
        const ParcelFootprint& fp = footprints[i];
        const double d = distance(fp.geometry, p);
        if (d > radius) continue;
        if (!best || d < best_dist ||
            (d == best_dist && beats(fp.geometry.bounds().area(), fp.parcel_id,
                                     best->geometry.bounds().area(), best->parcel_id))) {
            best = &fp;
            best_dist = d;
        }
    }
    if (best) return best->parcel_id;
    return std::nullopt;
}

std::set<std::string> assign_polygon(const SourceRecord& record, const FootprintIndex& index,
                                     const std::vector<ParcelFootprint>& footprints) {
    if (record.is_point())
        throw std::invalid_argument("assign_polygon: record " + record.record_id +
                                    " is not a polygon");
    const Polygon& poly = record.polygon();
    std::set<std::string> out;
    for (const std::uint32_t i : index.query_box_ordinals(poly.bounds())) {
        const ParcelFootprint& fp = footprints[i];
        if (intersects_interior(poly, fp.geometry)) out.insert(fp.parcel_id);
    }
    return out;
}

LabelTable build_label_table(const Source& source, const std::vector<SourceRecord>& records,
                             const CrosswalkTable& crosswalk, const LbcsTaxonomy& taxonomy,
                             const FootprintIndex& index,
                             const std::vector<ParcelFootprint>& footprints, double radius) {
    if (index.size() != footprints.size())
        throw std::invalid_argument("build_label_table: index does not match footprints");

    LabelTable table;
    table.source = source;
    std::unordered_set<std::string> seen_ids;
    seen_ids.reserve(records.size());

    for (const auto& record : records) {
        if (record.source != source)
            throw std::invalid_argument("build_label_table: record " + record.record_id +
                                        " belongs to source '" + record.source.name +
                                        "', expected '" + source.name + "'");
        if (!seen_ids.insert(record.record_id).second) continue;
        ++table.stats.total_records;

        const std::set<LbcsCode> codes = crosswalk.align(record);
        if (codes.empty()) {
            ++table.stats.discarded_unaligned;
            continue;
        }
        ++table.stats.aligned_records;
        for (const LbcsCode code : codes)
            if (!taxonomy.has(code))
                throw std::invalid_argument("build_label_table: code " +
                                            std::to_string(code.value) + " not in taxonomy");

        std::set<std::string> parcels;
        if (record.is_point()) {
            if (auto parcel = assign_point(record, index, footprints, radius))
                parcels.insert(std::move(*parcel));
        } else {
            parcels = assign_polygon(record, index, footprints);
        }
        if (parcels.empty()) {
            ++table.stats.discarded_spatial;
            continue;
        }
        ++table.stats.valid_records;

        for (const auto& parcel : parcels) {
            auto& label_set = table.labels[parcel];
            for (const LbcsCode code : codes) {
                label_set.insert(code);
                table.provenance[{parcel, code}].insert(record.record_id);
            }
        }
    }
    return table;
}

}  // namespace parcelfuse
