#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "skein/errors.hpp"
#include "skein/geom.hpp"

namespace skein {

// Closed oriented polygonal curve: vertices are cyclic, segment i runs from
// vertex i to vertex i+1 (mod n). Consecutive vertices are distinct; the
// curve may self-intersect and may traverse a segment several times.
struct ClosedPolyCurve {
    std::vector<Point2> vertices;
    double tolerance = default_tolerance;

    std::size_t size() const { return vertices.size(); }
    OrientedSegment segment(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }
    Box2 bounds() const {
        Box2 b;
        for (Point2 v : vertices) b.expand(v);
        return b;
    }
    double signed_area() const {
        double s = 0;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            s += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
        return 0.5 * s;
    }
};

inline ClosedPolyCurve build_closed_curve(std::vector<Point2> vs,
                                          double tolerance = default_tolerance) {
    if (vs.size() < 2) throw EmptyInput{};
    for (std::size_t i = 0; i < vs.size(); ++i)
        if (!finite(vs[i])) throw NonFiniteCoordinate{i};
    for (std::size_t i = 0; i < vs.size(); ++i) {
        std::size_t j = (i + 1) % vs.size();
        if (dist(vs[i], vs[j]) <= tolerance) throw ConsecutiveDuplicate{j};
    }
    return {std::move(vs), tolerance};
}

struct AngleViolation {
    std::size_t seg_a;
    std::size_t seg_b;
    double angle;  // between the direction vectors, in [0, pi]
};

// The hypothesis constrains intersections that involve a segment interior:
// crossings and touch points must meet at direction angle < pi/2, and overlap
// intersections must have coinciding orientations. Meetings that are a shared
// endpoint of both segments are junction points, not self-intersections; the
// separability they need is checked when the vertex star is built.
inline std::vector<AngleViolation> validate_angle_hypothesis(const ClosedPolyCurve& curve) {
    std::vector<AngleViolation> out;
    const double tol = curve.tolerance;
    const double half_pi = std::acos(0.0);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        OrientedSegment si = curve.segment(i);
        for (std::size_t j = i + 1; j < curve.size(); ++j) {
            OrientedSegment sj = curve.segment(j);
            IntersectionResult r = segment_intersection(si, sj, tol);
            if (r.kind == IntersectionResult::Kind::none) continue;
            double ang = angle_between(si, sj);
            if (r.kind == IntersectionResult::Kind::overlap) {
                if (!(ang < half_pi)) out.push_back({i, j, ang});
                continue;
            }
            bool endpoint_i = dist(r.at, si.a) <= tol || dist(r.at, si.b) <= tol;
            bool endpoint_j = dist(r.at, sj.a) <= tol || dist(r.at, sj.b) <= tol;
            if (endpoint_i && endpoint_j) continue;
            if (!(ang < half_pi)) out.push_back({i, j, ang});
        }
    }
    return out;
}

namespace detail {

// Working representation shared by subdivision, overlap separation and the
// reconnection sweep: a pool of directed edges with an explicit successor
// permutation. Cycles of `succ` are closed curves.
struct PoolEdge {
    Point2 a, b;
    std::size_t parent = 0;  // composing segment index in the source curve
    int succ = -1;
    int lambda_group = -1;   // detour group id, -1 for ordinary edges
    int lambda_half = 0;     // 1 = base-to-rung half, 2 = rung-to-base half
};

struct EdgePool {
    std::vector<PoolEdge> edges;
    double tolerance = default_tolerance;

    OrientedSegment seg(std::size_t e) const { return {edges[e].a, edges[e].b}; }
};

inline EdgePool pool_from_curve(const ClosedPolyCurve& curve) {
    EdgePool pool;
    pool.tolerance = curve.tolerance;
    std::size_t n = curve.size();
    pool.edges.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        PoolEdge e;
        e.a = curve.vertices[i];
        e.b = curve.vertices[(i + 1) % n];
        e.parent = i;
        e.succ = static_cast<int>((i + 1) % n);
        pool.edges.push_back(e);
    }
    return pool;
}

inline std::vector<std::vector<int>> pool_cycles(const EdgePool& pool) {
    std::vector<std::vector<int>> cycles;
    std::vector<char> seen(pool.edges.size(), 0);
    for (std::size_t s = 0; s < pool.edges.size(); ++s) {
        if (seen[s]) continue;
        std::vector<int> cyc;
        int e = static_cast<int>(s);
        while (!seen[e]) {
            seen[e] = 1;
            cyc.push_back(e);
            e = pool.edges[e].succ;
        }
        cycles.push_back(std::move(cyc));
    }
    return cycles;
}

inline ClosedPolyCurve curve_from_cycle(const EdgePool& pool, const std::vector<int>& cycle) {
    ClosedPolyCurve c;
    c.tolerance = pool.tolerance;
    c.vertices.reserve(cycle.size());
    for (int e : cycle) c.vertices.push_back(pool.edges[e].a);
    return c;
}

// Splits edges at the given interior points, preserving the successor chain
// and edge tags. `cuts[e]` holds (parameter, snapped point) pairs.
inline void apply_splits(EdgePool& pool,
                         std::vector<std::vector<std::pair<double, Point2>>>& cuts) {
    std::size_t old_count = pool.edges.size();
    std::vector<int> head(old_count), tail(old_count);
    std::vector<PoolEdge> fresh;
    fresh.reserve(old_count * 2);
    for (std::size_t e = 0; e < old_count; ++e) {
        auto& list = cuts[e];
        std::sort(list.begin(), list.end(),
                  [](const auto& l, const auto& r) { return l.first < r.first; });
        const PoolEdge& src = pool.edges[e];
        Point2 prev = src.a;
        head[e] = static_cast<int>(fresh.size());
        for (auto& [t, p] : list) {
            (void)t;
            if (dist(prev, p) <= pool.tolerance || dist(p, src.b) <= pool.tolerance) continue;
            PoolEdge part = src;
            part.a = prev;
            part.b = p;
            fresh.push_back(part);
            prev = p;
        }
        PoolEdge last = src;
        last.a = prev;
        fresh.push_back(last);
        tail[e] = static_cast<int>(fresh.size()) - 1;
    }
    // Relink: inside a split run edges chain consecutively; across old edges
    // the tail inherits the old successor's head.
    for (std::size_t e = 0; e < old_count; ++e) {
        for (int k = head[e]; k < tail[e]; ++k) fresh[k].succ = k + 1;
        fresh[tail[e]].succ = head[pool.edges[e].succ];
    }
    pool.edges = std::move(fresh);
}

// Inserts a vertex at every pairwise intersection point and at every overlap
// interval endpoint, so that afterwards two edges either meet at shared
// endpoints only or coincide entirely. Intersection points within tolerance
// of an existing endpoint snap to it. With `allow_overlaps` false an overlap
// pair raises OverlapPresent instead of being aligned.
inline void pool_refine(EdgePool& pool, bool allow_overlaps) {
    const double tol = pool.tolerance;
    std::size_t n = pool.edges.size();
    std::vector<std::vector<std::pair<double, Point2>>> cuts(n);
    bool any = false;
    for (std::size_t i = 0; i < n; ++i) {
        OrientedSegment si = pool.seg(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            OrientedSegment sj = pool.seg(j);
            IntersectionResult r = segment_intersection(si, sj, tol);
            if (r.kind == IntersectionResult::Kind::none) continue;
            if (r.kind == IntersectionResult::Kind::overlap) {
                if (!allow_overlaps)
                    throw OverlapPresent{pool.edges[i].parent, pool.edges[j].parent};
                for (Point2 p : {r.common.a, r.common.b}) {
                    if (dist(p, si.a) > tol && dist(p, si.b) > tol) {
                        cuts[i].push_back({project_param(p, si), p});
                        any = true;
                    }
                    if (dist(p, sj.a) > tol && dist(p, sj.b) > tol) {
                        cuts[j].push_back({project_param(p, sj), p});
                        any = true;
                    }
                }
                continue;
            }
            Point2 p = r.at;
            for (Point2 snap : {si.a, si.b, sj.a, sj.b}) {
                if (dist(p, snap) <= tol) {
                    p = snap;
                    break;
                }
            }
            if (dist(p, si.a) > tol && dist(p, si.b) > tol) {
                cuts[i].push_back({project_param(p, si), p});
                any = true;
            }
            if (dist(p, sj.a) > tol && dist(p, sj.b) > tol) {
                cuts[j].push_back({project_param(p, sj), p});
                any = true;
            }
        }
    }
    if (any) apply_splits(pool, cuts);
}

struct OverlapGroup {
    Point2 a, b;             // shared oriented support
    std::vector<int> edges;  // passes, in edge order
};

inline std::vector<OverlapGroup> pool_overlap_groups(const EdgePool& pool) {
    const double tol = pool.tolerance;
    std::vector<OverlapGroup> groups;
    std::vector<int> group_of(pool.edges.size(), -1);
    for (std::size_t i = 0; i < pool.edges.size(); ++i) {
        if (group_of[i] >= 0) continue;
        OverlapGroup g;
        g.a = pool.edges[i].a;
        g.b = pool.edges[i].b;
        g.edges.push_back(static_cast<int>(i));
        for (std::size_t j = i + 1; j < pool.edges.size(); ++j) {
            if (group_of[j] >= 0) continue;
            if (dist(pool.edges[j].a, g.a) <= tol && dist(pool.edges[j].b, g.b) <= tol) {
                group_of[j] = static_cast<int>(groups.size());
                g.edges.push_back(static_cast<int>(j));
            }
        }
        if (g.edges.size() >= 2) {
            group_of[i] = static_cast<int>(groups.size());
            groups.push_back(std::move(g));
        }
    }
    return groups;
}

// Replaces each pass of a k-fold covered segment [a,b] by the two-segment
// detour through its rung point on the left perpendicular bisector. Pass l
// (in traversal order) takes offset (k+1-l)*separation, so detour l stays to
// the left of detour l+1. The curve is refined first so that overlapping
// edges coincide exactly. Throws SeparationTooLarge if a detour touches the
// rest of the curve away from its base endpoints.
inline void pool_separate_overlaps(EdgePool& pool, double separation, int first_group_id = 0) {
    const double tol = pool.tolerance;
    if (separation <= 4 * tol)
        throw SeparationTooLarge{"separation " + std::to_string(separation) +
                                 " is within tolerance of zero"};
    pool_refine(pool, true);
    std::vector<OverlapGroup> groups = pool_overlap_groups(pool);
    if (groups.empty()) return;

    std::vector<char> is_detour(pool.edges.size(), 0);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
        const OverlapGroup& g = groups[gi];
        std::size_t k = g.edges.size();
        Point2 mid = 0.5 * (g.a + g.b);
        Point2 left = normalize(rot90(g.b - g.a));
        for (std::size_t l = 0; l < k; ++l) {
            int e = g.edges[l];
            Point2 rung = mid + static_cast<double>(k - l) * separation * left;
            PoolEdge first = pool.edges[e];
            PoolEdge second = pool.edges[e];
            first.b = rung;
            second.a = rung;
            first.lambda_group = second.lambda_group = first_group_id + static_cast<int>(gi);
            first.lambda_half = 1;
            second.lambda_half = 2;
            pool.edges[e] = first;
            pool.edges[e].succ = static_cast<int>(pool.edges.size());
            pool.edges.push_back(second);
            is_detour[e] = 1;
            is_detour.push_back(1);
        }
    }

    // A detour may meet the rest of the curve only at its base endpoints (its
    // own rung included for its sibling half).
    for (std::size_t i = 0; i < pool.edges.size(); ++i) {
        if (!is_detour[i]) continue;
        OrientedSegment si = pool.seg(i);
        for (std::size_t j = 0; j < pool.edges.size(); ++j) {
            if (j == i) continue;
            OrientedSegment sj = pool.seg(j);
            IntersectionResult r = segment_intersection(si, sj, tol);
            if (r.kind == IntersectionResult::Kind::none) continue;
            if (r.kind == IntersectionResult::Kind::point) {
                bool at_mine = dist(r.at, si.a) <= tol || dist(r.at, si.b) <= tol;
                bool at_theirs = dist(r.at, sj.a) <= tol || dist(r.at, sj.b) <= tol;
                if (at_mine && at_theirs) continue;
            }
            throw SeparationTooLarge{"detour for segment " +
                                     std::to_string(pool.edges[i].parent) +
                                     " collides with segment " +
                                     std::to_string(pool.edges[j].parent)};
        }
    }
}

}  // namespace detail

// Public subdivision: vertices inserted at every self-intersection point, so
// intersections occur only at shared endpoints. The input must be overlap
// free (OverlapPresent otherwise); the traversal order is preserved.
inline ClosedPolyCurve subdivide_at_intersections(const ClosedPolyCurve& curve) {
    detail::EdgePool pool = detail::pool_from_curve(curve);
    detail::pool_refine(pool, false);
    auto cycles = detail::pool_cycles(pool);
    return detail::curve_from_cycle(pool, cycles.front());
}

// Public overlap separation: every k-fold covered segment becomes 2k detour
// segments through rung points at multiples of `separation` on its left
// perpendicular bisector. A curve without overlaps is returned unchanged.
inline ClosedPolyCurve separate_overlaps(const ClosedPolyCurve& curve, double separation) {
    detail::EdgePool pool = detail::pool_from_curve(curve);
    detail::pool_separate_overlaps(pool, separation);
    auto cycles = detail::pool_cycles(pool);
    return detail::curve_from_cycle(pool, cycles.front());
}

}  // namespace skein
