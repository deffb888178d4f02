#include "parcelfuse/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace parcelfuse {

namespace {

// Cross product of (a - o) and (b - o). Zero means collinear.
double cross3(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
    if (cross3(a, b, p) != 0.0) return false;
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= p.y && p.y <= std::max(a.y, b.y);
}

double squared_segment_distance(const Point& a, const Point& b, const Point& p) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) t = std::clamp(((p.x - a.x) * dx + (p.y - a.y) * dy) / len2, 0.0, 1.0);
    const double qx = a.x + t * dx - p.x;
    const double qy = a.y + t * dy - p.y;
    return qx * qx + qy * qy;
}

// Crossing-number parity contribution of one ring.
bool ring_even_odd_toggle(const Ring& ring, const Point& p) {
    bool toggled = false;
    const auto& v = ring.vertices();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double x_at =
                v[j].x + (v[i].x - v[j].x) * (p.y - v[j].y) / (v[i].y - v[j].y);
            if (p.x < x_at) toggled = !toggled;
        }
    }
    return toggled;
}

bool even_odd_inside(const Polygon& poly, const Point& p) {
    bool inside = ring_even_odd_toggle(poly.exterior(), p);
    for (const auto& h : poly.holes())
        if (ring_even_odd_toggle(h, p)) inside = !inside;
    return inside;
}

bool ring_on_boundary(const Ring& ring, const Point& p) {
    const auto& v = ring.vertices();
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        if (on_segment(v[j], v[i], p)) return true;
    return false;
}

bool on_boundary(const Polygon& poly, const Point& p) {
    if (ring_on_boundary(poly.exterior(), p)) return true;
    for (const auto& h : poly.holes())
        if (ring_on_boundary(h, p)) return true;
    return false;
}

bool strictly_inside(const Polygon& poly, const Point& p) {
    if (!poly.bounds().contains(p)) return false;
    return !on_boundary(poly, p) && even_odd_inside(poly, p);
}

// Segments straddle each other strictly; endpoint contact is not proper.
bool proper_crossing(const Point& a1, const Point& a2, const Point& b1, const Point& b2) {
    const double o1 = cross3(a1, a2, b1);
    const double o2 = cross3(a1, a2, b2);
    const double o3 = cross3(b1, b2, a1);
    const double o4 = cross3(b1, b2, a2);
    if (o1 == 0.0 || o2 == 0.0 || o3 == 0.0 || o4 == 0.0) return false;
    return ((o1 > 0.0) != (o2 > 0.0)) && ((o3 > 0.0) != (o4 > 0.0));
}

std::vector<const Ring*> all_rings(const Polygon& poly) {
    std::vector<const Ring*> rings{&poly.exterior()};
    for (const auto& h : poly.holes()) rings.push_back(&h);
    return rings;
}

template <typename F>
bool any_ring_pair(const Polygon& a, const Polygon& b, F&& f) {
    for (const Ring* ra : all_rings(a))
        for (const Ring* rb : all_rings(b))
            if (f(*ra, *rb)) return true;
    return false;
}

// Parameters along (p, q) where it meets segment (c, d), including the
// projections of collinear overlap endpoints.
void segment_meet_params(const Point& p, const Point& q, const Point& c, const Point& d,
                         std::vector<double>& out) {
    const double rx = q.x - p.x, ry = q.y - p.y;
    const double sx = d.x - c.x, sy = d.y - c.y;
    const double denom = rx * sy - ry * sx;
    const double wx = c.x - p.x, wy = c.y - p.y;
    if (denom != 0.0) {
        const double t = (wx * sy - wy * sx) / denom;
        const double u = (wx * ry - wy * rx) / denom;
        if (t >= 0.0 && t <= 1.0 && u >= 0.0 && u <= 1.0) out.push_back(t);
        return;
    }
    if (wx * ry - wy * rx != 0.0) return;  // parallel, not collinear
    const double len2 = rx * rx + ry * ry;
    if (len2 == 0.0) return;
    for (const Point* e : {&c, &d}) {
        const double t = ((e->x - p.x) * rx + (e->y - p.y) * ry) / len2;
        if (t >= 0.0 && t <= 1.0) out.push_back(t);
    }
}

// True when some piece of a's boundary runs strictly inside b. Each edge of
// a is subdivided at every meeting point with b's boundary and the midpoint
// of each resulting piece is tested.
bool boundary_piece_inside(const Polygon& a, const Polygon& b) {
    const auto a_rings = all_rings(a);
    const auto b_rings = all_rings(b);
    std::vector<double> params;
    for (const Ring* ra : a_rings) {
        const auto& va = ra->vertices();
        for (std::size_t i = 0, j = va.size() - 1; i < va.size(); j = i++) {
            const Point& p = va[j];
            const Point& q = va[i];
            params.assign({0.0, 1.0});
            for (const Ring* rb : b_rings) {
                const auto& vb = rb->vertices();
                for (std::size_t k = 0, l = vb.size() - 1; k < vb.size(); l = k++)
                    segment_meet_params(p, q, vb[l], vb[k], params);
            }
            std::sort(params.begin(), params.end());
            for (std::size_t k = 0; k + 1 < params.size(); ++k) {
                if (params[k + 1] - params[k] < 1e-12) continue;
                const double t = 0.5 * (params[k] + params[k + 1]);
                const Point m{p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
                if (strictly_inside(b, m)) return true;
            }
        }
    }
    return false;
}

BoundingBox ring_bounds(const Ring& ring) {
    BoundingBox box{std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity(),
                    -std::numeric_limits<double>::infinity()};
    for (const auto& p : ring.vertices()) {
        box.min_x = std::min(box.min_x, p.x);
        box.min_y = std::min(box.min_y, p.y);
        box.max_x = std::max(box.max_x, p.x);
        box.max_y = std::max(box.max_y, p.y);
    }
    return box;
}

}  // namespace

Ring::Ring(std::vector<Point> vertices) : vertices_(std::move(vertices)) {
    if (vertices_.size() > 1 && vertices_.front() == vertices_.back()) vertices_.pop_back();
    for (const auto& p : vertices_)
        if (!std::isfinite(p.x) || !std::isfinite(p.y))
            throw std::invalid_argument("ring vertex is not finite");
    std::vector<Point> sorted = vertices_;
    std::sort(sorted.begin(), sorted.end(), [](const Point& a, const Point& b) {
        return a.x != b.x ? a.x < b.x : a.y < b.y;
    });
    const auto last = std::unique(sorted.begin(), sorted.end());
    if (static_cast<std::size_t>(last - sorted.begin()) < 3)
        throw std::invalid_argument("ring needs at least 3 distinct vertices");
}

double signed_area(const Ring& ring) {
    const auto& v = ring.vertices();
    double twice = 0.0;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
        twice += v[j].x * v[i].y - v[i].x * v[j].y;
    return 0.5 * twice;
}

Polygon::Polygon(Ring exterior, std::vector<Ring> holes)
    : exterior_(std::move(exterior)), holes_(std::move(holes)) {
    if (signed_area(exterior_) == 0.0)
        throw std::invalid_argument("polygon exterior has zero area");
    bounds_ = ring_bounds(exterior_);
    for (const auto& h : holes_) {
        const BoundingBox hb = ring_bounds(h);
        if (hb.min_x < bounds_.min_x || hb.max_x > bounds_.max_x ||
            hb.min_y < bounds_.min_y || hb.max_y > bounds_.max_y)
            throw std::invalid_argument("hole outside exterior bounding box");
    }
}

bool contains(const Polygon& poly, const Point& p) {
    if (!poly.bounds().contains(p)) return false;
    if (on_boundary(poly, p)) return true;
    return even_odd_inside(poly, p);
}

double distance(const Polygon& poly, const Point& p) {
    if (contains(poly, p)) return 0.0;
    double best = std::numeric_limits<double>::infinity();
    auto scan = [&](const Ring& ring) {
        const auto& v = ring.vertices();
        for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
            best = std::min(best, squared_segment_distance(v[j], v[i], p));
    };
    scan(poly.exterior());
    for (const auto& h : poly.holes()) scan(h);
    return std::sqrt(best);
}

bool intersects_interior(const Polygon& a, const Polygon& b) {
    if (!a.bounds().intersects(b.bounds())) return false;

    // Transversal edge crossings force interior overlap on both sides.
    const bool crossed = any_ring_pair(a, b, [](const Ring& ra, const Ring& rb) {
        const auto& va = ra.vertices();
        const auto& vb = rb.vertices();
        for (std::size_t i = 0, j = va.size() - 1; i < va.size(); j = i++)
            for (std::size_t k = 0, l = vb.size() - 1; k < vb.size(); l = k++)
                if (proper_crossing(va[j], va[i], vb[l], vb[k])) return true;
        return false;
    });
    if (crossed) return true;

    for (const auto& p : a.exterior().vertices())
        if (strictly_inside(b, p)) return true;
    for (const auto& h : a.holes())
        for (const auto& p : h.vertices())
            if (strictly_inside(b, p)) return true;
    for (const auto& p : b.exterior().vertices())
        if (strictly_inside(a, p)) return true;
    for (const auto& h : b.holes())
        for (const auto& p : h.vertices())
            if (strictly_inside(a, p)) return true;

    // Degenerate contact: boundaries only meet along shared edges or at
    // vertices. Subdivided boundary pieces catch partial overlap; the
    // representative interior points catch one polygon containing the other
    // (including identical polygons).
    if (boundary_piece_inside(a, b)) return true;
    if (boundary_piece_inside(b, a)) return true;
    if (strictly_inside(b, interior_point(a))) return true;
    if (strictly_inside(a, interior_point(b))) return true;
    return false;
}

BoundingBox bounding_box(const Polygon& poly) { return poly.bounds(); }

Point interior_point(const Polygon& poly) {
    std::vector<double> ys;
    auto collect = [&](const Ring& ring) {
        for (const auto& p : ring.vertices()) ys.push_back(p.y);
    };
    collect(poly.exterior());
    for (const auto& h : poly.holes()) collect(h);
    std::sort(ys.begin(), ys.end());
    ys.erase(std::unique(ys.begin(), ys.end()), ys.end());

    // Scanlines halfway between consecutive distinct vertex heights cross no
    // vertex and no horizontal edge. Try the widest gap first.
    std::vector<std::size_t> order;
    for (std::size_t i = 0; i + 1 < ys.size(); ++i) order.push_back(i);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return ys[a + 1] - ys[a] > ys[b + 1] - ys[b];
    });

    std::vector<double> xs;
    for (const std::size_t gap : order) {
        const double y = 0.5 * (ys[gap] + ys[gap + 1]);
        xs.clear();
        auto cross_ring = [&](const Ring& ring) {
            const auto& v = ring.vertices();
            for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++)
                if ((v[i].y > y) != (v[j].y > y))
                    xs.push_back(v[j].x + (v[i].x - v[j].x) * (y - v[j].y) / (v[i].y - v[j].y));
        };
        cross_ring(poly.exterior());
        for (const auto& h : poly.holes()) cross_ring(h);
        std::sort(xs.begin(), xs.end());
        if (xs.size() >= 2 && xs[1] > xs[0]) {
            const Point cand{0.5 * (xs[0] + xs[1]), y};
            if (strictly_inside(poly, cand)) return cand;
        }
    }
    throw std::logic_error("no interior point found");
}

}  // namespace parcelfuse
