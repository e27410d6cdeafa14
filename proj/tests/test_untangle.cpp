#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include <skein/curve.hpp>
#include <skein/errors.hpp>
#include <skein/rng.hpp>
#include <skein/untangle.hpp>
#include <skein/winding.hpp>

#include "support/oracles.hpp"

using skein::Point2;

namespace {

skein::ClosedPolyCurve curve_of(std::vector<Point2> vs) {
    return skein::build_closed_curve(std::move(vs));
}

// Matches computed loops against expected vertex lists in either order.
void expect_loop_pair(const std::vector<skein::ClosedPolyCurve>& got,
                      const std::vector<Point2>& first,
                      const std::vector<Point2>& second, double tol) {
    REQUIRE(got.size() == 2);
    auto g0 = oracle::simplify_collinear(got[0].vertices, tol);
    auto g1 = oracle::simplify_collinear(got[1].vertices, tol);
    bool direct = oracle::cyclically_equal(g0, first, tol) &&
                  oracle::cyclically_equal(g1, second, tol);
    bool swapped = oracle::cyclically_equal(g0, second, tol) &&
                   oracle::cyclically_equal(g1, first, tol);
    INFO("loop sizes " << g0.size() << " and " << g1.size());
    REQUIRE((direct || swapped));
}

// Fixture with two upward strands crossing at the origin at 53 degrees.
skein::ClosedPolyCurve sharp_cross() {
    return curve_of({{-1, -2}, {1, 2}, {1, -2}, {-1, 2}});
}

// Ten vertex fixture: three transversal crossings, one of them shared by the
// two strands that also bound the inner loop.
std::vector<Point2> ten_vertices() {
    return {{2, 10}, {19, 31}, {40, 19}, {30, 11}, {17, 14},
            {12, 13}, {26, -2}, {41, 9},  {25, 20}, {12, 0}};
}
const Point2 b1{16.981052631578947, 7.663157894736842};
const Point2 b2{33.739495798319325, 13.991596638655462};
const Point2 b3{20.565217391304348, 13.177257525083612};

}  // namespace

TEST_CASE("vertex star orders strands rightmost first across the separating line") {
    auto cut = skein::subdivide_at_intersections(sharp_cross());
    skein::VertexStar star = skein::build_vertex_star(cut, {0, 0});

    REQUIRE(star.incoming.size() == 2);
    REQUIRE(star.outgoing.size() == 2);
    // Incoming strands arrive from below; the separating line is horizontal.
    CHECK(std::abs(star.line_direction.x) == Catch::Approx(1.0).margin(1e-12));
    CHECK(star.line_direction.y == Catch::Approx(0.0).margin(1e-12));
    // Rightmost arrival is the one from the southeast, rightmost departure
    // the one toward the northeast.
    CHECK(skein::dist(star.incoming[0].a, {1, -2}) < 1e-9);
    CHECK(skein::dist(star.incoming[1].a, {-1, -2}) < 1e-9);
    CHECK(skein::dist(star.outgoing[0].b, {1, 2}) < 1e-9);
    CHECK(skein::dist(star.outgoing[1].b, {-1, 2}) < 1e-9);

    CHECK_THROWS_AS(skein::build_vertex_star(cut, {5, 5}), skein::Error);
}

TEST_CASE("a once visited vertex has a trivial star and resolves to the same curve") {
    auto square = curve_of({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    skein::VertexStar star = skein::build_vertex_star(square, {2, 0});
    REQUIRE(star.incoming.size() == 1);
    REQUIRE(star.outgoing.size() == 1);
    auto out = skein::resolve_vertex(square, star);
    REQUIRE(out.size() == 1);
    CHECK(oracle::cyclically_equal(out[0].vertices, square.vertices, 0.0));
}

TEST_CASE("reconnection splits a transversal crossing into two loops") {
    auto cut = skein::subdivide_at_intersections(sharp_cross());
    auto out = skein::resolve_vertex(cut, skein::build_vertex_star(cut, {0, 0}));
    expect_loop_pair(out, {{-1, -2}, {0, 0}, {-1, 2}}, {{0, 0}, {1, 2}, {1, -2}}, 1e-9);

    // Geometry is rewired, never moved: the vertex multiset is preserved.
    std::vector<Point2> all;
    for (const auto& c : out) all.insert(all.end(), c.vertices.begin(), c.vertices.end());
    REQUIRE(all.size() == cut.size());
    for (Point2 v : cut.vertices) {
        auto it = std::find_if(all.begin(), all.end(),
                               [&](Point2 w) { return skein::dist(v, w) < 1e-12; });
        REQUIRE(it != all.end());
        all.erase(it);
    }
}

TEST_CASE("reconnection splits a perpendicular pinch once it is a junction") {
    // As a plain curve this geometry fails the direction constraint, but
    // with the crossing vertex already inserted both meetings are junctions
    // and the star machinery handles it.
    auto pinched = curve_of({{0, 0}, {1, 1}, {2, 2}, {2, 0}, {1, 1}, {0, 2}});
    auto out = skein::resolve_vertex(pinched, skein::build_vertex_star(pinched, {1, 1}));
    expect_loop_pair(out, {{0, 0}, {1, 1}, {0, 2}}, {{1, 1}, {2, 2}, {2, 0}}, 1e-9);
}

TEST_CASE("stars at a pinch between opposite orientations are rejected") {
    // Clockwise outer square, counterclockwise inner triangle, sharing the
    // corner (0,0): no line through the corner has all strands crossing it
    // the same way.
    auto pinched = curve_of({{0, 6}, {6, 6}, {6, 0}, {0, 0}, {2, 1}, {1, 2}, {0, 0}});
    CHECK(skein::validate_angle_hypothesis(pinched).empty());
    CHECK_THROWS_AS(skein::build_vertex_star(pinched, {0, 0}),
                    skein::ConeSeparationFailure);
    CHECK_THROWS_AS(skein::decompose(pinched), skein::ConeSeparationFailure);
}

TEST_CASE("decomposition of a simple curve returns it unchanged") {
    auto square = curve_of({{0, 0}, {2, 0}, {2, 2}, {0, 2}});
    auto report = skein::decompose(square);
    REQUIRE(report.loops.size() == 1);
    CHECK(oracle::cyclically_equal(report.loops[0].curve.vertices, square.vertices, 0.0));
    CHECK(report.loops[0].orientation == 1);
    CHECK(report.kappa == 0);
    CHECK(report.resolved_vertices.empty());
    CHECK(report.detour_groups == 0);
    CHECK(report.nesting_relation.empty());
    CHECK(!report.multiplicity_checks.empty());
    CHECK(!report.index_additivity_samples.empty());
}

TEST_CASE("decomposition budget of zero only matters for curves that need work") {
    skein::DecomposeConfig cfg;
    cfg.budget = 0;
    CHECK_NOTHROW(skein::decompose(curve_of({{0, 0}, {2, 0}, {2, 2}, {0, 2}}), cfg));
    CHECK_THROWS_AS(skein::decompose(sharp_cross(), cfg), skein::NonTermination);
}

TEST_CASE("perpendicular crossings are rejected up front") {
    auto bowtie = curve_of({{0, 0}, {2, 2}, {2, 0}, {0, 2}});
    CHECK_THROWS_AS(skein::decompose(bowtie), skein::AngleHypothesisViolated);
}

TEST_CASE("figure eight decomposes into loops of opposite orientation") {
    auto report = skein::decompose(sharp_cross());
    REQUIRE(report.loops.size() == 2);
    std::vector<skein::ClosedPolyCurve> curves{report.loops[0].curve, report.loops[1].curve};
    expect_loop_pair(curves, {{-1, -2}, {0, 0}, {-1, 2}}, {{0, 0}, {1, 2}, {1, -2}}, 1e-9);

    for (const auto& loop : report.loops) {
        double area = oracle::shoelace(loop.curve.vertices);
        CHECK(loop.orientation == (area > 0 ? 1 : -1));
    }
    int plus = 0, minus = 0;
    for (const auto& loop : report.loops)
        (loop.orientation > 0 ? plus : minus)++;
    CHECK(plus == 1);
    CHECK(minus == 1);

    CHECK(report.nesting_relation.empty());
    CHECK(report.resolved_vertices.size() == 1);
    CHECK(skein::dist(report.resolved_vertices[0], {0, 0}) < 1e-9);
    CHECK((report.kappa == 0 || report.kappa == 1));

    auto checks = skein::verify_decomposition(sharp_cross(), report.loops);
    CHECK(checks.all_pass());
}

TEST_CASE("doubly traversed triangle splits into two coincident simple loops") {
    auto doubled = curve_of({{-1, 0}, {1, 0}, {0, 2}, {-1, 0}, {1, 0}, {0, 2}});
    auto report = skein::decompose(doubled);
    REQUIRE(report.loops.size() == 2);
    std::vector<Point2> triangle{{-1, 0}, {1, 0}, {0, 2}};
    for (const auto& loop : report.loops) {
        CHECK(oracle::cyclically_equal(loop.curve.vertices, triangle, 1e-9));
        CHECK(loop.orientation == 1);
        CHECK(!loop.has_residual_detours());
    }
    CHECK(report.detour_groups == 3);
    CHECK(report.retained_detour_groups == 0);
    CHECK(report.notes.empty());
    CHECK(report.nesting_relation.empty());
    CHECK((report.kappa == 0 || report.kappa == 1));

    // The loop indices add up to the doubled index away from the curve.
    auto inside = skein::winding_number(doubled, {0, 0.5});
    CHECK(inside.value == 2);
    int sum = 0;
    for (const auto& loop : report.loops)
        sum += skein::winding_number(loop.curve, {0, 0.5}).value;
    CHECK(sum == 2);
}

TEST_CASE("nested loops pinched at a corner stay nested after decomposition") {
    auto pinched = curve_of({{6, 0}, {6, 6}, {0, 6}, {0, 0}, {2, 1}, {1, 2}, {0, 0}});
    auto report = skein::decompose(pinched);
    REQUIRE(report.loops.size() == 2);

    std::vector<skein::ClosedPolyCurve> curves{report.loops[0].curve, report.loops[1].curve};
    expect_loop_pair(curves, {{0, 0}, {6, 0}, {6, 6}, {0, 6}}, {{0, 0}, {2, 1}, {1, 2}}, 1e-9);

    int tri = oracle::shoelace(report.loops[0].curve.vertices) <
                      oracle::shoelace(report.loops[1].curve.vertices)
                  ? 0
                  : 1;
    int sq = 1 - tri;
    REQUIRE(report.nesting_relation.size() == 1);
    CHECK(report.nesting_relation[0].first == tri);
    CHECK(report.nesting_relation[0].second == sq);
    CHECK(report.kappa == tri);
    CHECK(report.loops[tri].orientation == 1);
    CHECK(report.loops[sq].orientation == 1);

    CHECK(skein::winding_number(pinched, {1, 1}).value == 2);
    CHECK(skein::winding_number(pinched, {4, 4}).value == 1);
}

TEST_CASE("kappa selection fails when the innermost disk cancels out") {
    // Hand built pair: clockwise outer square, counterclockwise inner
    // triangle. Inside the triangle the indices cancel to zero, and the
    // triangle disk is the only candidate.
    auto host = curve_of({{0, 6}, {6, 6}, {6, 0}, {0, 0}, {2, 1}, {1, 2}, {0, 0}});
    skein::SimpleLoop outer;
    outer.curve = curve_of({{0, 6}, {6, 6}, {6, 0}, {0, 0}});
    outer.orientation = -1;
    skein::SimpleLoop inner;
    inner.curve = curve_of({{0, 0}, {2, 1}, {1, 2}});
    inner.orientation = 1;
    CHECK_THROWS_AS(skein::select_kappa(host, {outer, inner}), skein::NoPositiveLoop);
}

TEST_CASE("three crossing example untangles into the expected pair of loops") {
    auto curve = curve_of(ten_vertices());
    CHECK(skein::validate_angle_hypothesis(curve).empty());

    const auto v = ten_vertices();
    const Point2 a1 = v[0], a2 = v[1], a3 = v[2], a4 = v[3], a5 = v[4];
    const Point2 a6 = v[5], a7 = v[6], a8 = v[7], a9 = v[8], a10 = v[9];

    SECTION("crossing positions and angles") {
        struct Pair {
            Point2 p, q, r, s;  // segments [p,q] and [r,s]
            Point2 expect;
        };
        std::vector<Pair> pairs{
            {a6, a7, a9, a10, b1},
            {a3, a4, a8, a9, b2},
            {a4, a5, a9, a10, b3},
        };
        for (const auto& c : pairs) {
            auto hit = oracle::line_cross(c.p, c.q - c.p, c.r, c.s - c.r);
            REQUIRE(hit);
            CHECK(skein::dist(hit->at, c.expect) < 1e-9);
            CHECK(hit->t > 0.0);
            CHECK(hit->t < 1.0);
            CHECK(hit->s > 0.0);
            CHECK(hit->s < 1.0);

            auto r = skein::segment_intersection({c.p, c.q}, {c.r, c.s});
            REQUIRE(r.kind == skein::IntersectionResult::Kind::point);
            CHECK(skein::dist(r.at, c.expect) < 1e-9);
            // Crossing angles stay clear of the right angle limit.
            CHECK(skein::angle_between({c.p, c.q}, {c.r, c.s}) < skein::pi / 2 - 0.2);
        }
    }

    SECTION("subdivision inserts exactly the three crossings, twice each") {
        auto cut = skein::subdivide_at_intersections(curve);
        REQUIRE(cut.size() == 16);
        for (Point2 b : {b1, b2, b3})
            CHECK(skein::covering_multiplicity(cut, b) == 2);
    }

    SECTION("resolving one junction produces the intermediate state") {
        auto cut = skein::subdivide_at_intersections(curve);
        auto out = skein::resolve_vertex(cut, skein::build_vertex_star(cut, b1));
        expect_loop_pair(out, {a6, b1, a10, a1, a2, a3, a4, a5}, {b1, a7, a8, a9}, 1e-7);
    }

    SECTION("full decomposition matches the expected final loops") {
        auto report = skein::decompose(curve);
        REQUIRE(report.loops.size() == 2);
        std::vector<Point2> expect_a{a6, b1, a10, a1, a2, a3, b2, a9, b3, a5};
        std::vector<Point2> expect_b{b1, a7, a8, b2, a4, b3};
        std::vector<skein::ClosedPolyCurve> curves{report.loops[0].curve,
                                                   report.loops[1].curve};
        expect_loop_pair(curves, expect_a, expect_b, 1e-7);

        int ia = oracle::cyclically_equal(report.loops[0].curve.vertices, expect_a, 1e-7) ? 0 : 1;
        int ib = 1 - ia;
        CHECK(report.loops[ia].orientation == -1);
        CHECK(report.loops[ib].orientation == 1);
        CHECK(report.nesting_relation.empty());
        CHECK((report.kappa == 0 || report.kappa == 1));
        CHECK(report.resolved_vertices.size() == 3);
        CHECK(report.detour_groups == 0);

        // Index bookkeeping at hand picked points: inside the small loop,
        // and inside the large loop only.
        CHECK(skein::winding_number(curve, {28, 8.8}).value == 1);
        CHECK(skein::winding_number(report.loops[ib].curve, {28, 8.8}).value == 1);
        CHECK(skein::winding_number(report.loops[ia].curve, {28, 8.8}).value == 0);
        CHECK(skein::winding_number(curve, {10, 15}).value == -1);
        CHECK(skein::winding_number(report.loops[ia].curve, {10, 15}).value == -1);
        CHECK(skein::winding_number(report.loops[ib].curve, {10, 15}).value == 0);

        auto checks = skein::verify_decomposition(curve, report.loops);
        CHECK(checks.all_pass());
    }

    SECTION("reversing the curve reverses every loop") {
        auto rev = ten_vertices();
        std::reverse(rev.begin(), rev.end());
        auto report = skein::decompose(curve_of(rev));
        REQUIRE(report.loops.size() == 2);
        std::vector<Point2> expect_a{a6, b1, a10, a1, a2, a3, b2, a9, b3, a5};
        std::vector<Point2> expect_b{b1, a7, a8, b2, a4, b3};
        std::reverse(expect_a.begin(), expect_a.end());
        std::reverse(expect_b.begin(), expect_b.end());
        std::vector<skein::ClosedPolyCurve> curves{report.loops[0].curve,
                                                   report.loops[1].curve};
        expect_loop_pair(curves, expect_a, expect_b, 1e-7);
        int flipped = 0;
        for (const auto& loop : report.loops)
            if (loop.orientation == 1) ++flipped;
        CHECK(flipped == 1);  // still one of each sign, swapped roles
        CHECK(skein::winding_number(curve_of(rev), {10, 15}).value == 1);
    }
}

namespace {

// Independent simplicity filter: no two non-adjacent edges may come near
// each other's parameter range. Conservative on purpose; borderline shapes
// are rejected rather than classified.
bool clearly_simple(const std::vector<Point2>& v) {
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (j == i + 1 || (i == 0 && j == n - 1)) continue;
            auto hit = oracle::line_cross(v[i], v[(i + 1) % n] - v[i], v[j],
                                          v[(j + 1) % n] - v[j]);
            if (!hit) return false;  // parallel pairs are borderline; reject
            if (hit->t > -1e-3 && hit->t < 1 + 1e-3 && hit->s > -1e-3 && hit->s < 1 + 1e-3)
                return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("random star polygons decompose to themselves") {
    skein::Rng rng(4242);
    int done = 0;
    while (done < 15) {
        Point2 center{rng.uniform(-1, 1), rng.uniform(-1, 1)};
        int n = 5 + static_cast<int>(rng.below(8));
        std::vector<double> angles;
        for (int i = 0; i < n; ++i) angles.push_back(rng.uniform(0, 2 * skein::pi));
        std::sort(angles.begin(), angles.end());
        bool spaced = true;
        for (int i = 1; i < n; ++i)
            if (angles[i] - angles[i - 1] < 0.05) spaced = false;
        if (!spaced) continue;
        std::vector<Point2> verts;
        for (double a : angles)
            verts.push_back(center + rng.uniform(0.5, 2.0) * Point2{std::cos(a), std::sin(a)});
        if (!clearly_simple(verts)) continue;
        auto curve = curve_of(verts);
        auto report = skein::decompose(curve);
        REQUIRE(report.loops.size() == 1);
        CHECK(oracle::cyclically_equal(report.loops[0].curve.vertices, curve.vertices, 1e-12));
        ++done;
    }
}

TEST_CASE("looping epicycle curves decompose with index additivity intact") {
    skein::Rng rng(90210);
    int usable = 0, attempts = 0;
    while (usable < 6 && attempts < 200) {
        ++attempts;
        double r = rng.uniform(0.25, 0.55);
        double phase = rng.uniform(0, 2 * skein::pi);
        int n = 30 + static_cast<int>(rng.below(20));
        std::vector<Point2> verts;
        for (int i = 0; i < n; ++i) {
            double t = 2 * skein::pi * i / n;
            verts.push_back({std::cos(t) + r * std::cos(3 * t + phase),
                             std::sin(t) + r * std::sin(3 * t + phase)});
        }
        skein::ClosedPolyCurve curve;
        try {
            curve = curve_of(verts);
        } catch (const skein::Error&) {
            continue;
        }
        if (!skein::validate_angle_hypothesis(curve).empty()) continue;

        auto report = skein::decompose(curve);
        CHECK(!report.loops.empty());
        int probed = 0;
        while (probed < 5) {
            Point2 p{rng.uniform(-2, 2), rng.uniform(-2, 2)};
            try {
                int lhs = skein::winding_number(curve, p).value;
                int rhs = 0;
                for (const auto& loop : report.loops)
                    rhs += skein::winding_number(loop.curve, p).value;
                CHECK(lhs == rhs);
                ++probed;
            } catch (const skein::Error&) {
            }
        }
        ++usable;
    }
    INFO("attempts " << attempts);
    CHECK(usable == 6);
}
