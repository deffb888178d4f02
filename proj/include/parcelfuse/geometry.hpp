#pragma once

#include <vector>

namespace parcelfuse {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline bool operator==(const Point& a, const Point& b) {
    return a.x == b.x && a.y == b.y;
}

struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    // Closed-interval overlap: boxes that merely touch still intersect.
    bool intersects(const BoundingBox& o) const {
        return min_x <= o.max_x && o.min_x <= max_x &&
               min_y <= o.max_y && o.min_y <= max_y;
    }
    bool contains(const Point& p) const {
        return min_x <= p.x && p.x <= max_x && min_y <= p.y && p.y <= max_y;
    }
    bool valid() const { return min_x <= max_x && min_y <= max_y; }
    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }
    double area() const { return width() * height(); }
};

// Closed vertex ring; the edge from the last vertex back to the first is
// implicit. A trailing vertex equal to the first is dropped on construction.
// Requires at least three distinct finite vertices. Self-intersection is
// assumed absent, not checked.
class Ring {
public:
    explicit Ring(std::vector<Point> vertices);
    const std::vector<Point>& vertices() const { return vertices_; }

private:
    std::vector<Point> vertices_;
};

// Shoelace area, positive for counterclockwise vertex order.
double signed_area(const Ring& ring);

// Simple polygon with optional holes. The exterior must enclose nonzero
// area and every hole must lie within the exterior's bounding box.
class Polygon {
public:
    explicit Polygon(Ring exterior, std::vector<Ring> holes = {});
    const Ring& exterior() const { return exterior_; }
    const std::vector<Ring>& holes() const { return holes_; }
    const BoundingBox& bounds() const { return bounds_; }

private:
    Ring exterior_;
    std::vector<Ring> holes_;
    BoundingBox bounds_;
};

// Even-odd point-in-polygon test. Points exactly on any boundary edge
// (exterior or hole) count as inside.
bool contains(const Polygon& poly, const Point& p);

// Euclidean distance from p to the polygon: 0 when contains(poly, p),
// otherwise the distance to the nearest boundary segment.
double distance(const Polygon& poly, const Point& p);

// True iff the interiors of a and b share positive area. Touching along
// edges or at single points does not count.
bool intersects_interior(const Polygon& a, const Polygon& b);

// Tight axis-aligned extent of the exterior ring, cached at construction.
BoundingBox bounding_box(const Polygon& poly);

// A point strictly inside the polygon (inside the exterior, outside every
// hole, not on any boundary).
Point interior_point(const Polygon& poly);

}  // namespace parcelfuse
