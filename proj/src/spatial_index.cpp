#include "parcelfuse/spatial_index.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

namespace parcelfuse {

namespace {

struct CenteredBox {
    double cx = 0.0;
    double cy = 0.0;
    std::uint32_t item = 0;
};

// Sort-tile-recursive packing: order items by center into vertical slices,
// then by y within each slice, and cut the result into groups of `cap`.
// Returns the group boundaries as [start, end) offsets into items.
std::vector<std::pair<std::uint32_t, std::uint32_t>> str_pack(std::vector<CenteredBox>& items,
                                                              std::uint32_t cap) {
    const std::uint32_t n = static_cast<std::uint32_t>(items.size());
    const std::uint32_t groups = (n + cap - 1) / cap;
    const std::uint32_t slices =
        std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::ceil(
                                       std::sqrt(static_cast<double>(groups)))));
    // A slice holds a whole number of groups so groups never span slices.
    const std::uint32_t per_slice = slices * cap;

    std::sort(items.begin(), items.end(), [](const CenteredBox& a, const CenteredBox& b) {
        if (a.cx != b.cx) return a.cx < b.cx;
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.item < b.item;
    });
    for (std::uint32_t start = 0; start < n; start += per_slice) {
        const std::uint32_t end = std::min(n, start + per_slice);
        std::sort(items.begin() + start, items.begin() + end,
                  [](const CenteredBox& a, const CenteredBox& b) {
                      if (a.cy != b.cy) return a.cy < b.cy;
                      if (a.cx != b.cx) return a.cx < b.cx;
                      return a.item < b.item;
                  });
    }

    std::vector<std::pair<std::uint32_t, std::uint32_t>> out;
    out.reserve(groups);
    for (std::uint32_t start = 0; start < n; start += cap)
        out.emplace_back(start, std::min(n, start + cap));
    return out;
}

BoundingBox merge(const BoundingBox& a, const BoundingBox& b) {
    return BoundingBox{std::min(a.min_x, b.min_x), std::min(a.min_y, b.min_y),
                       std::max(a.max_x, b.max_x), std::max(a.max_y, b.max_y)};
}

}  // namespace

FootprintIndex FootprintIndex::build(const std::vector<ParcelFootprint>& footprints) {
    FootprintIndex idx;
    idx.ids_.reserve(footprints.size());
    idx.boxes_.reserve(footprints.size());
    std::unordered_set<std::string> seen;
    seen.reserve(footprints.size());
    for (const auto& fp : footprints) {
        if (!seen.insert(fp.parcel_id).second)
            throw std::invalid_argument("duplicate parcel id: " + fp.parcel_id);
        idx.ids_.push_back(fp.parcel_id);
        idx.boxes_.push_back(fp.geometry.bounds());
    }

    const std::uint32_t n = static_cast<std::uint32_t>(idx.boxes_.size());
    if (n == 0) return idx;

    std::vector<CenteredBox> items;
    items.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        const BoundingBox& b = idx.boxes_[i];
        items.push_back({0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y), i});
    }

    // Leaves over footprint ordinals.
    std::vector<std::uint32_t> level;
    for (const auto& [start, end] : str_pack(items, kFanout)) {
        Node node;
        node.leaf = true;
        node.first = static_cast<std::uint32_t>(idx.entries_.size());
        node.count = end - start;
        node.box = idx.boxes_[items[start].item];
        for (std::uint32_t i = start; i < end; ++i) {
            idx.entries_.push_back(items[i].item);
            node.box = merge(node.box, idx.boxes_[items[i].item]);
        }
        level.push_back(static_cast<std::uint32_t>(idx.nodes_.size()));
        idx.nodes_.push_back(node);
    }

    // Internal levels over node boxes until a single root remains.
    while (level.size() > 1) {
        items.clear();
        for (std::uint32_t i = 0; i < level.size(); ++i) {
            const BoundingBox& b = idx.nodes_[level[i]].box;
            items.push_back({0.5 * (b.min_x + b.max_x), 0.5 * (b.min_y + b.max_y), i});
        }
        std::vector<std::uint32_t> parents;
        for (const auto& [start, end] : str_pack(items, kFanout)) {
            Node node;
            node.leaf = false;
            node.first = static_cast<std::uint32_t>(idx.children_.size());
            node.count = end - start;
            node.box = idx.nodes_[level[items[start].item]].box;
            for (std::uint32_t i = start; i < end; ++i) {
                const std::uint32_t child = level[items[i].item];
                idx.children_.push_back(child);
                node.box = merge(node.box, idx.nodes_[child].box);
            }
            parents.push_back(static_cast<std::uint32_t>(idx.nodes_.size()));
            idx.nodes_.push_back(node);
        }
        level = std::move(parents);
    }
    idx.root_ = level.front();
    return idx;
}

std::vector<std::uint32_t> FootprintIndex::query_box_ordinals(const BoundingBox& box) const {
    if (!box.valid()) throw std::invalid_argument("query box is not valid");
    std::vector<std::uint32_t> out;
    if (nodes_.empty()) return out;
    std::vector<std::uint32_t> stack{root_};
    while (!stack.empty()) {
        const Node& node = nodes_[stack.back()];
        stack.pop_back();
        if (!node.box.intersects(box)) continue;
        if (node.leaf) {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i) {
                const std::uint32_t ordinal = entries_[i];
                if (boxes_[ordinal].intersects(box)) out.push_back(ordinal);
            }
        } else {
            for (std::uint32_t i = node.first; i < node.first + node.count; ++i)
                stack.push_back(children_[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> FootprintIndex::query_point_ordinals(const Point& p,
                                                                double radius) const {
    if (radius < 0.0) throw std::invalid_argument("query radius must be >= 0");
    return query_box_ordinals(BoundingBox{p.x - radius, p.y - radius, p.x + radius, p.y + radius});
}

std::set<std::string> FootprintIndex::query_box(const BoundingBox& box) const {
    std::set<std::string> out;
    for (const std::uint32_t ordinal : query_box_ordinals(box)) out.insert(ids_[ordinal]);
    return out;
}

std::set<std::string> FootprintIndex::query_point(const Point& p, double radius) const {
    std::set<std::string> out;
    for (const std::uint32_t ordinal : query_point_ordinals(p, radius)) out.insert(ids_[ordinal]);
    return out;
}

}  // namespace parcelfuse
