#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "skein/curve.hpp"
#include "skein/errors.hpp"
#include "skein/rng.hpp"
#include "skein/winding.hpp"

namespace skein {

struct SimpleLoop {
    ClosedPolyCurve curve;
    int orientation = 0;  // +1 counterclockwise, -1 clockwise
    // Index of the source curve segment containing each composing segment.
    std::vector<std::size_t> parent_segment_map;
    // Marks composing segments that are residual detours (kept only when a
    // retraction would have broken simplicity).
    std::vector<char> detour_segment;

    bool has_residual_detours() const {
        for (char c : detour_segment)
            if (c) return true;
        return false;
    }
};

struct MultiplicityCheck {
    Point2 at;
    int on_curve = 0;
    int on_loops = 0;
};

struct IndexAdditivitySample {
    Point2 at;
    int curve_index = 0;
    int loop_index_sum = 0;
};

struct DecompositionReport {
    std::vector<SimpleLoop> loops;
    std::vector<MultiplicityCheck> multiplicity_checks;
    // Proper containment pairs (inner, outer) between loop disks.
    std::vector<std::pair<int, int>> nesting_relation;
    std::vector<IndexAdditivitySample> index_additivity_samples;
    int kappa = -1;
    // Diagnostics: the curve after overlap separation and subdivision, the
    // positions where the successor permutation was rewired, and retraction
    // outcomes.
    ClosedPolyCurve prepared;
    std::vector<Point2> resolved_vertices;
    int detour_groups = 0;
    int retained_detour_groups = 0;
    std::vector<std::string> notes;
};

struct DecomposeConfig {
    double separation = 0;  // 0 picks a value from the curve extent
    int budget = 64;
    int samples = 200;
    int kappa_samples = 50;
    std::uint64_t seed = 0x5eed;
};

struct VertexStar {
    Point2 vertex;
    std::vector<OrientedSegment> incoming;  // end at vertex, rightmost first
    std::vector<OrientedSegment> outgoing;  // start at vertex, rightmost first
    Point2 line_direction;  // separating line through the vertex; its left
                            // normal points to the outgoing side
};

namespace detail {

// Half-plane normal separating the travel directions at a multi-vertex: every
// direction u (incoming and outgoing) must satisfy dot(u, n) > 0. Primary
// candidate is the sum of unit incoming directions; the fallback scans for an
// angular gap wider than pi among all directions.
inline bool separating_normal(const std::vector<Point2>& travel_dirs,
                              std::size_t incoming_count, Point2& n_out) {
    auto separates = [&](Point2 n) {
        double len = norm(n);
        if (len == 0) return false;
        for (Point2 u : travel_dirs)
            if (dot(u, n) / len <= 1e-12) return false;
        return true;
    };
    Point2 sum{0, 0};
    for (std::size_t i = 0; i < incoming_count; ++i) sum = sum + travel_dirs[i];
    if (separates(sum)) {
        n_out = normalize(sum);
        return true;
    }
    std::vector<double> angles;
    angles.reserve(travel_dirs.size());
    for (Point2 u : travel_dirs) angles.push_back(std::atan2(u.y, u.x));
    std::sort(angles.begin(), angles.end());
    double best_gap = 2 * pi - (angles.back() - angles.front());
    double gap_mid = angles.back() + 0.5 * best_gap;
    for (std::size_t i = 0; i + 1 < angles.size(); ++i) {
        double gap = angles[i + 1] - angles[i];
        if (gap > best_gap) {
            best_gap = gap;
            gap_mid = angles[i] + 0.5 * gap;
        }
    }
    if (best_gap <= pi) return false;
    Point2 n{-std::cos(gap_mid), -std::sin(gap_mid)};
    if (!separates(n)) return false;
    n_out = n;
    return true;
}

// Sort keys for the reconnection: both families are ordered rightmost first
// relative to the separating line direction l (left normal n). Incoming
// directions are mirrored across n so that the two orderings sweep the same
// way.
inline double incoming_key(Point2 d, Point2 n, Point2 l) {
    return std::atan2(dot(d, n), -dot(d, l));
}
inline double outgoing_key(Point2 d, Point2 n, Point2 l) {
    return std::atan2(dot(d, n), dot(d, l));
}

struct PoolStar {
    Point2 pos;
    std::vector<int> in_edges;   // sorted rightmost first
    std::vector<int> out_edges;  // sorted rightmost first
    Point2 normal;
};

// Groups pool edges by coincident start position. Each visit of a position
// contributes exactly one departing edge.
inline std::vector<std::pair<Point2, std::vector<int>>> cluster_by_start(const EdgePool& pool) {
    std::vector<std::pair<Point2, std::vector<int>>> clusters;
    for (std::size_t e = 0; e < pool.edges.size(); ++e) {
        Point2 p = pool.edges[e].a;
        bool placed = false;
        for (auto& [pos, members] : clusters) {
            if (dist(pos, p) <= pool.tolerance) {
                members.push_back(static_cast<int>(e));
                placed = true;
                break;
            }
        }
        if (!placed) clusters.push_back({p, {static_cast<int>(e)}});
    }
    std::sort(clusters.begin(), clusters.end(), [](const auto& l, const auto& r) {
        return l.first.x < r.first.x || (l.first.x == r.first.x && l.first.y < r.first.y);
    });
    return clusters;
}

inline PoolStar build_pool_star(const EdgePool& pool, Point2 pos,
                                const std::vector<int>& out_edges) {
    PoolStar star;
    star.pos = pos;
    star.out_edges = out_edges;
    for (std::size_t e = 0; e < pool.edges.size(); ++e)
        if (dist(pool.edges[e].b, pos) <= pool.tolerance)
            star.in_edges.push_back(static_cast<int>(e));
    if (star.in_edges.size() != star.out_edges.size()) throw RankMismatch{};

    std::vector<Point2> dirs;
    dirs.reserve(star.in_edges.size() + star.out_edges.size());
    for (int e : star.in_edges) dirs.push_back(normalize(pool.edges[e].b - pool.edges[e].a));
    for (int e : star.out_edges) dirs.push_back(normalize(pool.edges[e].b - pool.edges[e].a));
    if (!separating_normal(dirs, star.in_edges.size(), star.normal))
        throw ConeSeparationFailure{"at (" + std::to_string(pos.x) + ", " +
                                    std::to_string(pos.y) + ")"};

    Point2 n = star.normal;
    Point2 l{n.y, -n.x};
    auto by_key = [&](std::vector<int>& edges, bool incoming) {
        std::vector<std::pair<double, int>> keyed;
        keyed.reserve(edges.size());
        for (int e : edges) {
            Point2 d = pool.edges[e].b - pool.edges[e].a;
            keyed.push_back({incoming ? incoming_key(d, n, l) : outgoing_key(d, n, l), e});
        }
        std::sort(keyed.begin(), keyed.end());
        for (std::size_t i = 0; i < keyed.size(); ++i) edges[i] = keyed[i].second;
    };
    by_key(star.in_edges, true);
    by_key(star.out_edges, false);
    return star;
}

// Rewires the successor permutation at every position visited more than once:
// the rank-r arrival continues as the rank-r departure. This is the unique
// non-crossing matching, so a position needs at most one rewiring ever.
inline std::vector<Point2> resolve_all_multipoints(EdgePool& pool) {
    std::vector<Point2> resolved;
    for (auto& [pos, members] : cluster_by_start(pool)) {
        if (members.size() < 2) continue;
        PoolStar star = build_pool_star(pool, pos, members);
        for (std::size_t r = 0; r < star.in_edges.size(); ++r)
            pool.edges[star.in_edges[r]].succ = star.out_edges[r];
        resolved.push_back(pos);
    }
    return resolved;
}

inline bool cycle_is_simple(const EdgePool& pool, const std::vector<int>& cyc) {
    std::size_t n = cyc.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            OrientedSegment si = pool.seg(cyc[i]);
            OrientedSegment sj = pool.seg(cyc[j]);
            IntersectionResult r = segment_intersection(si, sj, pool.tolerance);
            if (r.kind == IntersectionResult::Kind::none) continue;
            if (r.kind == IntersectionResult::Kind::overlap) return false;
            bool i_then_j = (i + 1) % n == j;
            bool j_then_i = (j + 1) % n == i;
            if (i_then_j && dist(r.at, si.b) <= pool.tolerance) continue;
            if (j_then_i && dist(r.at, sj.b) <= pool.tolerance) continue;
            return false;
        }
    }
    return true;
}

inline bool all_cycles_simple(const EdgePool& pool) {
    for (const auto& cyc : pool_cycles(pool))
        if (!cycle_is_simple(pool, cyc)) return false;
    return true;
}

// Rebuilds the pool without edges marked dead, remapping successors.
inline void compact_pool(EdgePool& pool, const std::vector<char>& dead) {
    std::vector<int> remap(pool.edges.size(), -1);
    std::vector<PoolEdge> kept;
    kept.reserve(pool.edges.size());
    for (std::size_t e = 0; e < pool.edges.size(); ++e) {
        if (dead[e]) continue;
        remap[e] = static_cast<int>(kept.size());
        kept.push_back(pool.edges[e]);
    }
    for (PoolEdge& e : kept) e.succ = remap[e.succ];
    pool.edges = std::move(kept);
}

struct RetractionOutcome {
    int groups = 0;
    int retained = 0;
    std::vector<std::string> notes;
};

// Snaps detours back onto their base segment, one overlap group at a time. A
// group is retracted only if afterwards every cycle is still simple;
// otherwise all its detours stay (partial retraction would change coverage
// counts). Successful retraction merges each half pair into one edge.
inline RetractionOutcome retract_detours(EdgePool& pool) {
    RetractionOutcome out;
    std::vector<int> gids;
    for (const PoolEdge& e : pool.edges)
        if (e.lambda_group >= 0) gids.push_back(e.lambda_group);
    std::sort(gids.begin(), gids.end());
    gids.erase(std::unique(gids.begin(), gids.end()), gids.end());
    out.groups = static_cast<int>(gids.size());

    for (int gid : gids) {
        EdgePool trial = pool;
        std::vector<char> dead(trial.edges.size(), 0);
        for (std::size_t e = 0; e < trial.edges.size(); ++e) {
            PoolEdge& first = trial.edges[e];
            if (first.lambda_group != gid || first.lambda_half != 1) continue;
            int second = first.succ;
            first.b = trial.edges[second].b;
            first.succ = trial.edges[second].succ;
            first.lambda_group = -1;
            first.lambda_half = 0;
            dead[second] = 1;
        }
        compact_pool(trial, dead);
        if (all_cycles_simple(trial)) {
            pool = std::move(trial);
        } else {
            ++out.retained;
            out.notes.push_back("detour group " + std::to_string(gid) +
                                " kept: retraction would break loop simplicity");
        }
    }
    return out;
}

// Interior representative of a simple loop: polygon centroid when usable,
// otherwise a probe pulled toward the lowest vertex, otherwise seeded
// rejection sampling.
inline bool usable_interior(const ClosedPolyCurve& loop, Point2 p) {
    if (distance_to_curve(loop, p) <= 2 * loop.tolerance) return false;
    try {
        return winding_number(loop, p).value != 0;
    } catch (const Error&) {
        return false;
    }
}

inline Point2 interior_point(const ClosedPolyCurve& loop) {
    double a6 = 6.0 * loop.signed_area();
    if (std::abs(a6) > 0) {
        Point2 c{0, 0};
        for (std::size_t i = 0; i < loop.size(); ++i) {
            Point2 u = loop.vertices[i];
            Point2 v = loop.vertices[(i + 1) % loop.size()];
            double w = cross(u, v);
            c = c + w * (u + v);
        }
        c = (1.0 / a6) * c;
        if (usable_interior(loop, c)) return c;
    }
    std::size_t lowest = 0;
    for (std::size_t i = 1; i < loop.size(); ++i) {
        Point2 v = loop.vertices[i];
        Point2 b = loop.vertices[lowest];
        if (v.y < b.y || (v.y == b.y && v.x < b.x)) lowest = i;
    }
    Point2 b = loop.vertices[lowest];
    Point2 prev = loop.vertices[(lowest + loop.size() - 1) % loop.size()];
    Point2 next = loop.vertices[(lowest + 1) % loop.size()];
    Point2 probe = (1.0 / 3.0) * (prev + b + next);
    for (int step = 0; step < 60; ++step) {
        if (usable_interior(loop, probe)) return probe;
        probe = 0.5 * (probe + b);
    }
    Rng rng(0xC0FFEE);
    Box2 box = loop.bounds();
    for (int tries = 0; tries < 20000; ++tries) {
        Point2 p = rng.in_box(box);
        if (usable_interior(loop, p)) return p;
    }
    throw Error("no interior point found for a decomposition loop");
}

}  // namespace detail

// --- public operations ---

// Star of a preprocessed curve at vertex b: incoming and outgoing segments
// sorted rightmost first relative to the separating line.
inline VertexStar build_vertex_star(const ClosedPolyCurve& curve, Point2 b) {
    detail::EdgePool pool = detail::pool_from_curve(curve);
    std::vector<int> out_edges;
    for (std::size_t e = 0; e < pool.edges.size(); ++e)
        if (dist(pool.edges[e].a, b) <= pool.tolerance) out_edges.push_back(static_cast<int>(e));
    if (out_edges.empty()) throw Error("not a curve vertex");
    detail::PoolStar star = detail::build_pool_star(pool, b, out_edges);
    VertexStar out;
    out.vertex = star.pos;
    out.line_direction = {star.normal.y, -star.normal.x};
    for (int e : star.in_edges) out.incoming.push_back(pool.seg(e));
    for (int e : star.out_edges) out.outgoing.push_back(pool.seg(e));
    return out;
}

// Rank-matched reconnection at the star vertex; the curve may split into
// several closed curves. A once-visited vertex returns the curve unchanged.
inline std::vector<ClosedPolyCurve> resolve_vertex(const ClosedPolyCurve& curve,
                                                   const VertexStar& star) {
    if (star.incoming.size() != star.outgoing.size() || star.incoming.empty())
        throw RankMismatch{};
    detail::EdgePool pool = detail::pool_from_curve(curve);
    if (star.incoming.size() >= 2) {
        auto find_edge = [&](const OrientedSegment& s) {
            for (std::size_t e = 0; e < pool.edges.size(); ++e)
                if (dist(pool.edges[e].a, s.a) <= pool.tolerance &&
                    dist(pool.edges[e].b, s.b) <= pool.tolerance)
                    return static_cast<int>(e);
            throw RankMismatch{};
        };
        for (std::size_t r = 0; r < star.incoming.size(); ++r)
            pool.edges[find_edge(star.incoming[r])].succ = find_edge(star.outgoing[r]);
    }
    std::vector<ClosedPolyCurve> out;
    for (const auto& cyc : detail::pool_cycles(pool))
        out.push_back(detail::curve_from_cycle(pool, cyc));
    return out;
}

inline std::vector<SimpleLoop> loops_from_pool(const detail::EdgePool& pool) {
    std::vector<SimpleLoop> loops;
    for (const auto& cyc : detail::pool_cycles(pool)) {
        SimpleLoop loop;
        loop.curve = detail::curve_from_cycle(pool, cyc);
        loop.orientation = loop.curve.signed_area() > 0 ? 1 : -1;
        for (int e : cyc) {
            loop.parent_segment_map.push_back(pool.edges[e].parent);
            loop.detour_segment.push_back(pool.edges[e].lambda_group >= 0 ? 1 : 0);
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

// Proper containment of loop disk interiors, decided by a representative
// interior point plus absolute areas. Returns: 0 disjoint-or-equal interiors,
// +1 if disk(i) properly inside disk(j), -1 conversely; `equal` reports
// coincident disks.
inline int disk_containment(const SimpleLoop& li, const SimpleLoop& lj, Point2 rep_i,
                            Point2 rep_j, bool& equal) {
    equal = false;
    double ai = std::abs(li.curve.signed_area());
    double aj = std::abs(lj.curve.signed_area());
    auto inside = [](const SimpleLoop& l, Point2 p) {
        // A representative within tolerance of the other boundary belongs to
        // the touching-disks case, where the interiors stay disjoint.
        try {
            return winding_number_oracle(l.curve, p) != 0;
        } catch (const Error&) {
            return false;
        }
    };
    bool i_in_j = inside(lj, rep_i);
    bool j_in_i = inside(li, rep_j);
    double area_eps = 1e-9 * (ai + aj) + 1e-15;
    if (i_in_j && j_in_i && std::abs(ai - aj) <= area_eps) {
        equal = true;
        return 0;
    }
    if (i_in_j && ai <= aj) return 1;
    if (j_in_i && aj <= ai) return -1;
    if (i_in_j || j_in_i)
        throw NestingViolated{"containment contradicts area ordering"};
    return 0;
}

// All maximal chains of the proper-containment order on loop disks, each
// chain listed innermost first.
inline std::vector<std::vector<int>> nested_disk_chains(const std::vector<SimpleLoop>& loops) {
    int m = static_cast<int>(loops.size());
    std::vector<Point2> reps;
    reps.reserve(loops.size());
    for (const SimpleLoop& l : loops) reps.push_back(detail::interior_point(l.curve));

    std::vector<std::vector<char>> lt(m, std::vector<char>(m, 0));  // lt[i][j]: i inside j
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            bool equal = false;
            int c = disk_containment(loops[i], loops[j], reps[i], reps[j], equal);
            if (c == 1) lt[i][j] = 1;
            if (c == -1) lt[j][i] = 1;
        }
    }
    // Transitive reduction: j covers i when nothing sits strictly between.
    std::vector<std::vector<int>> covers(m);  // covers[i] = immediate supersets of i
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (!lt[i][j]) continue;
            bool direct = true;
            for (int k = 0; k < m && direct; ++k)
                if (lt[i][k] && lt[k][j]) direct = false;
            if (direct) covers[i].push_back(j);
        }
    }
    std::vector<std::vector<int>> chains;
    std::vector<int> path;
    auto dfs = [&](auto&& self, int node) -> void {
        path.push_back(node);
        if (covers[node].empty())
            chains.push_back(path);
        else
            for (int up : covers[node]) self(self, up);
        path.pop_back();
    };
    for (int i = 0; i < m; ++i) {
        bool minimal = true;
        for (int j = 0; j < m && minimal; ++j)
            if (lt[j][i]) minimal = false;
        if (minimal) dfs(dfs, i);
    }
    return chains;
}

// Index of a loop whose open disk has everywhere nonzero index with respect
// to the source curve. Scans the innermost disk of each maximal chain; their
// interiors avoid the curve, so sampled indices are representative.
inline int select_kappa(const ClosedPolyCurve& curve, const std::vector<SimpleLoop>& loops,
                        int samples = 50, std::uint64_t seed = 0x5eed) {
    std::vector<std::vector<int>> chains = nested_disk_chains(loops);
    std::vector<int> candidates;
    for (const auto& chain : chains)
        if (std::find(candidates.begin(), candidates.end(), chain.front()) == candidates.end())
            candidates.push_back(chain.front());

    for (int c : candidates) {
        const ClosedPolyCurve& disk = loops[c].curve;
        Box2 box = disk.bounds();
        Rng rng(seed ^ static_cast<std::uint64_t>(c));
        int good = 0;
        bool failed = false;
        int attempts = 0;
        while (good < samples && attempts < 200 * samples && !failed) {
            ++attempts;
            Point2 p = rng.in_box(box);
            try {
                if (winding_number(disk, p).value == 0) continue;
                if (winding_number(curve, p).value == 0) failed = true;
                ++good;
            } catch (const Error&) {
                continue;  // on a boundary or ambiguous; resample
            }
        }
        if (!failed && good == samples) return c;
    }
    throw NoPositiveLoop{};
}

struct PropertyResult {
    bool pass = true;
    std::vector<Point2> counterexamples;
    std::string detail;
};

struct VerificationReport {
    PropertyResult multiplicity;       // (i)
    PropertyResult segment_containment;  // (ii)
    PropertyResult nesting;            // (iii)
    PropertyResult index_additivity;   // (iv)
    bool all_pass() const {
        return multiplicity.pass && segment_containment.pass && nesting.pass &&
               index_additivity.pass;
    }
};

// Segments whose detours survived retraction; probing near them is skipped
// because there the loops intentionally deviate from the source curve.
struct RetainedZone {
    std::vector<std::size_t> parents;
    double margin = 0;

    bool covers(Point2 p, const ClosedPolyCurve& curve) const {
        for (std::size_t s : parents)
            if (point_segment_distance(p, curve.segment(s)) <= margin) return true;
        return false;
    }
    static RetainedZone from_loops(const std::vector<SimpleLoop>& loops, double margin) {
        RetainedZone z;
        z.margin = margin;
        for (const SimpleLoop& l : loops)
            for (std::size_t i = 0; i < l.detour_segment.size(); ++i)
                if (l.detour_segment[i]) z.parents.push_back(l.parent_segment_map[i]);
        std::sort(z.parents.begin(), z.parents.end());
        z.parents.erase(std::unique(z.parents.begin(), z.parents.end()), z.parents.end());
        return z;
    }
};

inline VerificationReport verify_decomposition(const ClosedPolyCurve& curve,
                                               const std::vector<SimpleLoop>& loops,
                                               int samples = 200,
                                               std::uint64_t seed = 0x5eed,
                                               const RetainedZone& skip = {}) {
    VerificationReport rep;
    Rng rng(seed);
    const double tol = curve.tolerance;

    // (i) coverage counts agree at on-curve points: every vertex, plus random
    // segment-interior points kept clear of vertices.
    std::vector<Point2> probes;
    for (Point2 v : curve.vertices)
        if (!skip.covers(v, curve)) probes.push_back(v);
    int guard = 0;
    while (static_cast<int>(probes.size()) < samples && guard < 50 * samples) {
        ++guard;
        std::size_t s = static_cast<std::size_t>(rng.below(curve.size()));
        OrientedSegment seg = curve.segment(s);
        Point2 p = seg.at(rng.uniform(0.05, 0.95));
        bool near_vertex = false;
        for (Point2 v : curve.vertices)
            if (dist(p, v) <= 4 * tol) near_vertex = true;
        if (!near_vertex && !skip.covers(p, curve)) probes.push_back(p);
    }
    for (Point2 p : probes) {
        int on_curve = covering_multiplicity(curve, p);
        int on_loops = 0;
        for (const SimpleLoop& l : loops) on_loops += covering_multiplicity(l.curve, p);
        if (on_curve != on_loops) {
            rep.multiplicity.pass = false;
            rep.multiplicity.counterexamples.push_back(p);
        }
    }
    if (!rep.multiplicity.pass)
        rep.multiplicity.detail = "coverage count mismatch at " +
                                  std::to_string(rep.multiplicity.counterexamples.size()) +
                                  " of " + std::to_string(probes.size()) + " points";

    // (ii) every non-detour loop segment sits inside its parent segment with
    // matching orientation.
    for (const SimpleLoop& l : loops) {
        for (std::size_t i = 0; i < l.curve.size(); ++i) {
            if (!l.detour_segment.empty() && l.detour_segment[i]) continue;
            OrientedSegment seg = l.curve.segment(i);
            OrientedSegment parent = curve.segment(l.parent_segment_map[i]);
            bool inside = point_segment_distance(seg.a, parent) <= 4 * tol &&
                          point_segment_distance(seg.b, parent) <= 4 * tol;
            bool oriented = dot(seg.direction(), parent.direction()) > 0;
            if (!inside || !oriented) {
                rep.segment_containment.pass = false;
                rep.segment_containment.counterexamples.push_back(seg.a);
            }
        }
    }
    if (!rep.segment_containment.pass)
        rep.segment_containment.detail = "loop segments escape their parent segments";

    // (iii) pairwise disk interiors nested or disjoint.
    try {
        std::vector<Point2> reps;
        for (const SimpleLoop& l : loops) reps.push_back(detail::interior_point(l.curve));
        for (std::size_t i = 0; i < loops.size(); ++i) {
            for (std::size_t j = i + 1; j < loops.size(); ++j) {
                bool equal = false;
                disk_containment(loops[i], loops[j], reps[i], reps[j], equal);
            }
        }
    } catch (const Error& e) {
        rep.nesting.pass = false;
        rep.nesting.detail = e.what();
    }

    // (iv) index additivity at off-curve points.
    Box2 box = curve.bounds();
    double margin = 0.25 * (dist(box.lo, box.hi) + 1.0);
    box.expand(box.lo - Point2{margin, margin});
    box.expand(box.hi + Point2{margin, margin});
    int done = 0;
    guard = 0;
    while (done < samples && guard < 200 * samples) {
        ++guard;
        Point2 p = rng.in_box(box);
        if (skip.covers(p, curve)) continue;
        try {
            int lhs = winding_number(curve, p).value;
            int rhs = 0;
            for (const SimpleLoop& l : loops) rhs += winding_number(l.curve, p).value;
            ++done;
            if (lhs != rhs) {
                rep.index_additivity.pass = false;
                rep.index_additivity.counterexamples.push_back(p);
            }
        } catch (const Error&) {
            continue;  // too close to some curve; resample
        }
    }
    if (!rep.index_additivity.pass)
        rep.index_additivity.detail = "index sum deviates from curve index";
    return rep;
}

inline DecompositionReport decompose(const ClosedPolyCurve& curve,
                                     const DecomposeConfig& config = {}) {
    auto violations = validate_angle_hypothesis(curve);
    if (!violations.empty()) throw AngleHypothesisViolated{violations.size()};

    DecompositionReport report;

    double shortest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i)
        shortest = std::min(shortest, curve.segment(i).length());
    Box2 bounds = curve.bounds();
    double separation = config.separation > 0
                            ? config.separation
                            : std::min(0.01 * dist(bounds.lo, bounds.hi), 0.25 * shortest);

    detail::EdgePool pool;
    for (int attempt = 0;; ++attempt) {
        pool = detail::pool_from_curve(curve);
        try {
            detail::pool_separate_overlaps(pool, separation);
            break;
        } catch (const SeparationTooLarge&) {
            if (attempt >= 48 || separation <= 8 * curve.tolerance) throw;
            separation *= 0.5;
        }
    }
    detail::pool_refine(pool, false);
    {
        auto cycles = detail::pool_cycles(pool);
        report.prepared = detail::curve_from_cycle(pool, cycles.front());
    }

    bool simple = detail::all_cycles_simple(pool);
    for (int round = 0; !simple; ++round) {
        if (round >= config.budget) throw NonTermination{config.budget};
        std::vector<Point2> resolved = detail::resolve_all_multipoints(pool);
        if (round == 0) report.resolved_vertices = std::move(resolved);
        simple = detail::all_cycles_simple(pool);
    }

    std::size_t deepest_overlap = 0;
    {
        std::vector<int> per_group;
        for (const detail::PoolEdge& e : pool.edges) {
            if (e.lambda_group < 0 || e.lambda_half != 1) continue;
            if (per_group.size() <= static_cast<std::size_t>(e.lambda_group))
                per_group.resize(e.lambda_group + 1, 0);
            ++per_group[e.lambda_group];
        }
        for (int k : per_group) deepest_overlap = std::max(deepest_overlap, static_cast<std::size_t>(k));
    }

    detail::RetractionOutcome retraction = detail::retract_detours(pool);
    report.detour_groups = retraction.groups;
    report.retained_detour_groups = retraction.retained;
    report.notes = std::move(retraction.notes);

    report.loops = loops_from_pool(pool);

    RetainedZone zone = RetainedZone::from_loops(
        report.loops, static_cast<double>(deepest_overlap + 1) * separation);
    VerificationReport checks =
        verify_decomposition(curve, report.loops, config.samples, config.seed, zone);
    if (!checks.all_pass())
        throw Error("decomposition failed its own property checks: " +
                    checks.multiplicity.detail + checks.segment_containment.detail +
                    checks.nesting.detail + checks.index_additivity.detail);

    Rng rng(config.seed + 1);
    int recorded = 0, tries = 0;
    while (recorded < config.samples && tries < 50 * config.samples) {
        ++tries;
        std::size_t s = static_cast<std::size_t>(rng.below(curve.size()));
        Point2 p = curve.segment(s).at(rng.uniform(0.05, 0.95));
        bool near_vertex = false;
        for (Point2 v : curve.vertices)
            if (dist(p, v) <= 4 * curve.tolerance) near_vertex = true;
        if (near_vertex || zone.covers(p, curve)) continue;
        MultiplicityCheck mc;
        mc.at = p;
        mc.on_curve = covering_multiplicity(curve, p);
        for (const SimpleLoop& l : report.loops)
            mc.on_loops += covering_multiplicity(l.curve, p);
        if (mc.on_curve != mc.on_loops)
            throw Error("coverage mismatch while recording report evidence");
        report.multiplicity_checks.push_back(mc);
        ++recorded;
    }

    std::vector<Point2> reps;
    for (const SimpleLoop& l : report.loops)
        reps.push_back(detail::interior_point(l.curve));
    for (std::size_t i = 0; i < report.loops.size(); ++i) {
        for (std::size_t j = i + 1; j < report.loops.size(); ++j) {
            bool equal = false;
            int c = disk_containment(report.loops[i], report.loops[j], reps[i], reps[j], equal);
            if (c == 1)
                report.nesting_relation.push_back({static_cast<int>(i), static_cast<int>(j)});
            else if (c == -1)
                report.nesting_relation.push_back({static_cast<int>(j), static_cast<int>(i)});
        }
    }

    Box2 box = curve.bounds();
    double margin = 0.25 * (dist(box.lo, box.hi) + 1.0);
    box.expand(box.lo - Point2{margin, margin});
    box.expand(box.hi + Point2{margin, margin});
    int done = 0, guard = 0;
    while (done < config.samples && guard < 200 * config.samples) {
        ++guard;
        Point2 p = rng.in_box(box);
        if (zone.covers(p, curve)) continue;
        try {
            IndexAdditivitySample s;
            s.at = p;
            s.curve_index = winding_number(curve, p).value;
            for (const SimpleLoop& l : report.loops)
                s.loop_index_sum += winding_number(l.curve, p).value;
            ++done;
            if (s.curve_index != s.loop_index_sum)
                throw Error("index additivity violated in report sampling");
            report.index_additivity_samples.push_back(s);
        } catch (const PointOnCurve&) {
            continue;
        } catch (const NumericallyAmbiguous&) {
            continue;
        }
    }

    report.kappa = select_kappa(curve, report.loops, config.kappa_samples, config.seed);
    return report;
}

}  // namespace skein
