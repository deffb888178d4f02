#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "parcelfuse/records.hpp"

namespace parcelfuse {

// Static packed R-tree over parcel bounding boxes, bulk-loaded with
// sort-tile-recursive packing. Queries filter by box only; exact geometry
// tests are the caller's job. Box overlap is closed-interval, so touching
// boxes match.
class FootprintIndex {
public:
    FootprintIndex() = default;

    // Throws std::invalid_argument naming the id when two footprints share
    // a parcel_id. Ordinals returned by the *_ordinals queries index into
    // the footprints vector given here.
    static FootprintIndex build(const std::vector<ParcelFootprint>& footprints);

    std::size_t size() const { return ids_.size(); }

    // Parcels whose box intersects the axis-aligned square of half-width
    // radius around p. radius must be >= 0.
    std::set<std::string> query_point(const Point& p, double radius) const;

    // Parcels whose box intersects the query box. The box must be valid.
    std::set<std::string> query_box(const BoundingBox& box) const;

    // Same queries returning sorted footprint ordinals.
    std::vector<std::uint32_t> query_point_ordinals(const Point& p, double radius) const;
    std::vector<std::uint32_t> query_box_ordinals(const BoundingBox& box) const;

    const std::string& id_of(std::uint32_t ordinal) const { return ids_[ordinal]; }
    const BoundingBox& box_of(std::uint32_t ordinal) const { return boxes_[ordinal]; }

private:
    struct Node {
        BoundingBox box;
        std::uint32_t first = 0;  // into entries_ for leaves, children_ otherwise
        std::uint32_t count = 0;
        bool leaf = true;
    };

    std::vector<std::string> ids_;
    std::vector<BoundingBox> boxes_;
    std::vector<std::uint32_t> entries_;   // ordinals grouped into leaves
    std::vector<std::uint32_t> children_;  // node indices grouped under parents
    std::vector<Node> nodes_;
    std::uint32_t root_ = 0;

    static constexpr std::uint32_t kFanout = 16;
};

}  // namespace parcelfuse
