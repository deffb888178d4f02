#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <parcelfuse/geometry.hpp>

#include "oracles.hpp"

using parcelfuse::BoundingBox;
using parcelfuse::Point;
using parcelfuse::Polygon;
using parcelfuse::Ring;

namespace {

Polygon donut() {
    return Polygon(Ring({{0, 0}, {10, 0}, {10, 10}, {0, 10}}),
                   {Ring({{3, 3}, {7, 3}, {7, 7}, {3, 7}})});
}

}  // namespace

TEST_CASE("ring construction validates vertices") {
    CHECK(Ring({{0, 0}, {1, 0}, {0, 1}}).vertices().size() == 3);

    // A trailing copy of the first vertex (GeoJSON-style closure) is dropped.
    Ring closed({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}});
    CHECK(closed.vertices().size() == 4);

    CHECK_THROWS_AS(Ring({{0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Ring({{0, 0}, {1, 0}, {0, 0}, {1, 0}}), std::invalid_argument);
    CHECK_THROWS_AS(Ring({{0, 0}, {1, 0}, {1, std::nan("")}}), std::invalid_argument);
    double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(Ring({{0, 0}, {inf, 0}, {1, 1}}), std::invalid_argument);
}

TEST_CASE("signed area reflects vertex order") {
    CHECK(parcelfuse::signed_area(Ring({{0, 0}, {1, 0}, {1, 1}, {0, 1}})) == doctest::Approx(1.0));
    CHECK(parcelfuse::signed_area(Ring({{0, 0}, {0, 1}, {1, 1}, {1, 0}})) == doctest::Approx(-1.0));
}

TEST_CASE("polygon construction rejects degenerate shapes") {
    CHECK_THROWS_AS(Polygon(Ring({{0, 0}, {1, 1}, {2, 2}, {3, 3}})), std::invalid_argument);
    // Hole outside the exterior's bounding box.
    CHECK_THROWS_AS(Polygon(Ring({{0, 0}, {1, 0}, {1, 1}, {0, 1}}),
                            {Ring({{5, 5}, {6, 5}, {6, 6}, {5, 6}})}),
                    std::invalid_argument);
}

TEST_CASE("contains handles edges, vertices, and holes") {
    Polygon square = oracle::box_polygon(0, 0, 10, 10);

    CHECK(parcelfuse::contains(square, {5, 5}));
    CHECK(parcelfuse::contains(square, {0, 0}));     // vertex
    CHECK(parcelfuse::contains(square, {5, 0}));     // edge
    CHECK(parcelfuse::contains(square, {10, 10}));   // far vertex
    CHECK(parcelfuse::contains(square, {10, 4.5}));  // right edge
    CHECK_FALSE(parcelfuse::contains(square, {10.0001, 5}));
    CHECK_FALSE(parcelfuse::contains(square, {-1, 5}));
    CHECK_FALSE(parcelfuse::contains(square, {5, 11}));

    Polygon ring = donut();
    CHECK_FALSE(parcelfuse::contains(ring, {5, 5}));  // inside the hole
    CHECK(parcelfuse::contains(ring, {1, 5}));        // in the band
    CHECK(parcelfuse::contains(ring, {3, 5}));        // on the hole boundary
    CHECK(parcelfuse::contains(ring, {3, 3}));        // hole vertex
}

TEST_CASE("contains is unaffected by ray-through-vertex alignments") {
    // Probe y-values that exactly hit vertices of a zig-zag boundary.
    Polygon zig(Ring({{0, 0}, {4, 0}, {4, 4}, {3, 2}, {2, 4}, {1, 2}, {0, 4}}));
    CHECK(parcelfuse::contains(zig, {2, 1}));
    CHECK(parcelfuse::contains(zig, {0.5, 2}));   // crosses vertex height y=2
    CHECK(parcelfuse::contains(zig, {3.5, 2}));
    CHECK(parcelfuse::contains(zig, {2, 3.5}));        // middle prong interior
    CHECK_FALSE(parcelfuse::contains(zig, {2.6, 3.5}));  // notch between prongs
    CHECK_FALSE(parcelfuse::contains(zig, {1.3, 3.5}));
    CHECK_FALSE(parcelfuse::contains(zig, {-0.5, 4}));
    CHECK_FALSE(parcelfuse::contains(zig, {5, 2}));
}

TEST_CASE("contains matches a winding-number reference on random polygons") {
    std::mt19937_64 rng(20260814);
    std::uniform_real_distribution<double> coord(-15.0, 15.0);
    for (int iter = 0; iter < 300; ++iter) {
        Ring ring = oracle::random_convex_ring(rng, coord(rng), coord(rng), 5.0);
        Polygon poly(ring);
        for (const Point& v : ring.vertices()) {
            CAPTURE(v.x);
            CAPTURE(v.y);
            CHECK(parcelfuse::contains(poly, v));
        }
        for (int probe = 0; probe < 60; ++probe) {
            Point p{coord(rng), coord(rng)};
            CAPTURE(p.x);
            CAPTURE(p.y);
            CHECK(parcelfuse::contains(poly, p) == oracle::contains(poly, p));
        }
    }
}

TEST_CASE("contains agrees with the reference on star-shaped polygons") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.2, 1.0);
    std::uniform_real_distribution<double> coord(-3.0, 3.0);
    for (int iter = 0; iter < 150; ++iter) {
        // Radial profile around the origin: simple but generally non-convex.
        std::vector<Point> pts;
        int n = 12;
        for (int i = 0; i < n; ++i) {
            double a = 2.0 * std::numbers::pi * i / n;
            double r = unit(rng) * 2.0;
            pts.push_back({r * std::cos(a), r * std::sin(a)});
        }
        Polygon poly{Ring(pts)};
        for (int probe = 0; probe < 60; ++probe) {
            Point p{coord(rng), coord(rng)};
            CAPTURE(p.x);
            CAPTURE(p.y);
            CHECK(parcelfuse::contains(poly, p) == oracle::contains(poly, p));
        }
    }
}

TEST_CASE("containment and distance are translation invariant") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> coord(-10.0, 10.0);
    std::uniform_real_distribution<double> shift(-1000.0, 1000.0);
    for (int iter = 0; iter < 100; ++iter) {
        Ring ring = oracle::random_convex_ring(rng, coord(rng), coord(rng), 4.0);
        double dx = std::floor(shift(rng));  // integral shifts stay exact in doubles
        double dy = std::floor(shift(rng));
        std::vector<Point> moved;
        for (const Point& v : ring.vertices()) moved.push_back({v.x + dx, v.y + dy});
        Polygon poly(ring);
        Polygon shifted{Ring(moved)};
        for (int probe = 0; probe < 20; ++probe) {
            Point p{coord(rng), coord(rng)};
            Point q{p.x + dx, p.y + dy};
            CHECK(parcelfuse::contains(poly, p) == parcelfuse::contains(shifted, q));
            CHECK(parcelfuse::distance(poly, p) ==
                  doctest::Approx(parcelfuse::distance(shifted, q)).epsilon(1e-9));
        }
    }
}

TEST_CASE("distance is zero inside and exact near edges and corners") {
    Polygon square = oracle::box_polygon(0, 0, 10, 10);
    CHECK(parcelfuse::distance(square, {5, 5}) == 0.0);
    CHECK(parcelfuse::distance(square, {10, 10}) == 0.0);
    CHECK(parcelfuse::distance(square, {15, 5}) == doctest::Approx(5.0));
    CHECK(parcelfuse::distance(square, {5, -3}) == doctest::Approx(3.0));
    CHECK(parcelfuse::distance(square, {13, 14}) == doctest::Approx(5.0));  // corner, 3-4-5
    CHECK(parcelfuse::distance(square, {-1, -1}) == doctest::Approx(std::sqrt(2.0)));

    // Inside the hole of a donut the nearest boundary is the hole edge.
    CHECK(parcelfuse::distance(donut(), {5, 5}) == doctest::Approx(2.0));
}

TEST_CASE("distance to sampled boundary points never beats the reported distance") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coord(-20.0, 20.0);
    for (int iter = 0; iter < 50; ++iter) {
        Ring ring = oracle::random_convex_ring(rng, coord(rng) / 2, coord(rng) / 2, 4.0);
        Polygon poly(ring);
        const auto& v = ring.vertices();
        for (int probe = 0; probe < 10; ++probe) {
            Point p{coord(rng), coord(rng)};
            double d = parcelfuse::distance(poly, p);
            if (parcelfuse::contains(poly, p)) {
                CHECK(d == 0.0);
                continue;
            }
            // Dense boundary sampling can approach but never undercut d.
            double best = 1e300;
            for (std::size_t i = 0; i < v.size(); ++i) {
                Point a = v[i];
                Point b = v[(i + 1) % v.size()];
                for (int k = 0; k <= 64; ++k) {
                    double t = k / 64.0;
                    double sx = a.x + t * (b.x - a.x) - p.x;
                    double sy = a.y + t * (b.y - a.y) - p.y;
                    best = std::min(best, std::hypot(sx, sy));
                }
            }
            CHECK(d <= best + 1e-9);
            CHECK(best <= d + 0.5);  // 64 samples per edge get close
        }
    }
}

TEST_CASE("interior intersection distinguishes overlap from touch") {
    Polygon a = oracle::box_polygon(0, 0, 1, 1);

    CHECK(parcelfuse::intersects_interior(a, a));
    CHECK(parcelfuse::intersects_interior(a, oracle::box_polygon(0.25, 0.25, 0.75, 0.75)));
    CHECK(parcelfuse::intersects_interior(oracle::box_polygon(0.25, 0.25, 0.75, 0.75), a));
    CHECK(parcelfuse::intersects_interior(a, oracle::box_polygon(0.5, 0.5, 1.5, 1.5)));

    CHECK_FALSE(parcelfuse::intersects_interior(a, oracle::box_polygon(2, 0, 3, 1)));
    // Shared edge only.
    CHECK_FALSE(parcelfuse::intersects_interior(a, oracle::box_polygon(1, 0, 2, 1)));
    // Shared corner only.
    CHECK_FALSE(parcelfuse::intersects_interior(a, oracle::box_polygon(1, 1, 2, 2)));
    // Partial edge overlap, no vertex inside, no proper crossing.
    CHECK(parcelfuse::intersects_interior(oracle::box_polygon(0, 0, 2, 1),
                                          oracle::box_polygon(1, 0, 3, 1)));
    // Cross shape: interiors overlap but no vertex of either is inside the other.
    CHECK(parcelfuse::intersects_interior(oracle::box_polygon(-1, 2, 5, 3),
                                          oracle::box_polygon(1, 0, 2, 5)));
}

TEST_CASE("interior intersection respects holes") {
    Polygon ring = donut();
    // Entirely within the hole: no shared interior.
    CHECK_FALSE(parcelfuse::intersects_interior(ring, oracle::box_polygon(4, 4, 6, 6)));
    // Exactly filling the hole: boundaries coincide, interiors disjoint.
    CHECK_FALSE(parcelfuse::intersects_interior(ring, oracle::box_polygon(3, 3, 7, 7)));
    // Poking out of the hole into the band.
    CHECK(parcelfuse::intersects_interior(ring, oracle::box_polygon(4, 4, 8, 6)));
    // Band overlap away from the hole.
    CHECK(parcelfuse::intersects_interior(ring, oracle::box_polygon(-1, -1, 2, 2)));
}

TEST_CASE("interior intersection matches clipped-area reference on random rectangles") {
    std::mt19937_64 rng(41);
    std::uniform_int_distribution<int> c(0, 18);
    std::uniform_int_distribution<int> w(1, 6);
    for (int iter = 0; iter < 2000; ++iter) {
        double ax = c(rng), ay = c(rng), bx = c(rng), by = c(rng);
        double aw = w(rng), ah = w(rng), bw = w(rng), bh = w(rng);
        Polygon a = oracle::box_polygon(ax, ay, ax + aw, ay + ah);
        Polygon b = oracle::box_polygon(bx, by, bx + bw, by + bh);
        // Integer rectangles overlap in interior iff both axis overlaps are positive.
        double ox = std::min(ax + aw, bx + bw) - std::max(ax, bx);
        double oy = std::min(ay + ah, by + bh) - std::max(ay, by);
        bool expected = ox > 0 && oy > 0;
        CAPTURE(ax);
        CAPTURE(ay);
        CAPTURE(bx);
        CAPTURE(by);
        CHECK(parcelfuse::intersects_interior(a, b) == expected);
        CHECK(parcelfuse::intersects_interior(b, a) == expected);
    }
}

TEST_CASE("interior intersection matches clipped-area reference on random convex pairs") {
    std::mt19937_64 rng(20260814);
    std::uniform_real_distribution<double> coord(-6.0, 6.0);
    int checked = 0;
    for (int iter = 0; iter < 600; ++iter) {
        Ring ra = oracle::random_convex_ring(rng, coord(rng), coord(rng), 3.0);
        Ring rb = oracle::random_convex_ring(rng, coord(rng), coord(rng), 3.0);
        double area = oracle::convex_clip_area(ra, rb);
        // Skip the sliver band where float noise could flip the reference.
        if (area > 1e-12 && area < 1e-6) continue;
        bool expected = area > 1e-6;
        Polygon a(ra);
        Polygon b(rb);
        CAPTURE(iter);
        CHECK(parcelfuse::intersects_interior(a, b) == expected);
        CHECK(parcelfuse::intersects_interior(b, a) == expected);
        ++checked;
    }
    CHECK(checked > 550);
}

TEST_CASE("interior point is strictly inside") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(-50.0, 50.0);
    for (int iter = 0; iter < 200; ++iter) {
        Polygon poly{oracle::random_convex_ring(rng, coord(rng), coord(rng), 4.0)};
        Point p = parcelfuse::interior_point(poly);
        CHECK(oracle::contains(poly, p));
        CHECK_FALSE(oracle::on_boundary(poly, p));
    }

    Polygon ring = donut();
    Point p = parcelfuse::interior_point(ring);
    CHECK(oracle::contains(ring, p));
    CHECK_FALSE(oracle::on_boundary(ring, p));

    // Thin sliver.
    Polygon sliver(Ring({{0, 0}, {100, 0}, {100, 1e-4}, {0, 1e-4}}));
    Point q = parcelfuse::interior_point(sliver);
    CHECK(oracle::contains(sliver, q));
    CHECK_FALSE(oracle::on_boundary(sliver, q));
}

TEST_CASE("bounding box spans the exterior ring") {
    Polygon poly(Ring({{2, 1}, {8, 3}, {5, 9}}));
    BoundingBox b = parcelfuse::bounding_box(poly);
    CHECK(b.min_x == 2.0);
    CHECK(b.min_y == 1.0);
    CHECK(b.max_x == 8.0);
    CHECK(b.max_y == 9.0);
    CHECK(b.area() == doctest::Approx(48.0));

    BoundingBox touch{8, 1, 9, 2};
    CHECK(b.intersects(touch));  // shared edge x=8 counts
    CHECK(touch.intersects(b));
    CHECK_FALSE(b.intersects({8.0001, 1, 9, 2}));
}
