#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "skein/curve.hpp"
#include "skein/diffeo.hpp"
#include "skein/errors.hpp"
#include "skein/geom.hpp"
#include "skein/hull.hpp"
#include "skein/rng.hpp"
#include "skein/untangle.hpp"
#include "skein/winding.hpp"

namespace skein {

struct DynamicsConfig {
    Box2 domain{{-10, -10}, {10, 10}};
    double fixed_point_tol = 1e-9;
    double return_tol = 1e-3;
    double residual_tol = 1e-7;
    double commutation_tol = 1e-9;
    int max_iter = 4000;
    int commutation_samples = 64;
    int hull_samples = 2000;
    int capital_attempts = 6;
    std::uint64_t seed = 0x5eed;
};

// Iterates f(p), f^2(p), ..., f^count(p).
inline std::vector<Point2> orbit(const DiffeoMap& f, Point2 p, int count) {
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    Point2 x = p;
    for (int i = 0; i < count; ++i) {
        x = f(x);
        if (!finite(x)) throw NonFiniteIterate(static_cast<std::size_t>(i) + 1);
        out.push_back(x);
    }
    return out;
}

struct OrbitCurve {
    Point2 base_point{0, 0};
    std::string map_label;
    int length = 0;
    ClosedPolyCurve curve;
};

// Closed polygon through the first m iterates of p. The base point itself is
// not a vertex; the closing edge runs from f^m(p) back to f(p).
inline OrbitCurve orbit_curve(const DiffeoMap& f, Point2 p, int m,
                              double tolerance = default_tolerance) {
    if (m < 2) throw Error("orbit curve needs at least two iterates");
    if (dist(f(p), p) <= tolerance) throw FixedSeed{};
    OrbitCurve oc;
    oc.base_point = p;
    oc.map_label = f.label;
    oc.length = m;
    oc.curve = build_closed_curve(orbit(f, p, m), tolerance);
    return oc;
}

// All n <= max_iter with |f^n(p) - p| < tol, ascending. May be empty.
inline std::vector<int> return_times(const DiffeoMap& f, Point2 p, double tol, int max_iter) {
    std::vector<int> out;
    Point2 x = p;
    for (int n = 1; n <= max_iter; ++n) {
        x = f(x);
        if (!finite(x)) throw NonFiniteIterate(static_cast<std::size_t>(n));
        if (dist(x, p) < tol) out.push_back(n);
    }
    return out;
}

struct C1Estimate {
    Box2 domain{{0, 0}, {0, 0}};
    double grid_step = 0;
    double sup_displacement = 0;
    double sup_derivative_deviation = 0;
};

// Grid supremum of |f(x) - x| and of the operator norm of Df - I.
inline C1Estimate estimate_c1_distance(const DiffeoMap& f, const Box2& domain, double grid_step) {
    if (grid_step <= 0) throw Error("grid step must be positive");
    C1Estimate est;
    est.domain = domain;
    est.grid_step = grid_step;
    int nx = static_cast<int>(std::ceil(domain.width() / grid_step));
    int ny = static_cast<int>(std::ceil(domain.height() / grid_step));
    for (int i = 0; i <= nx; ++i) {
        double x = domain.lo.x + std::min(i * grid_step, domain.width());
        for (int j = 0; j <= ny; ++j) {
            double y = domain.lo.y + std::min(j * grid_step, domain.height());
            Point2 at{x, y};
            Point2 img = f(at);
            if (!finite(img)) throw NonFiniteValue("map on the estimation grid");
            est.sup_displacement = std::max(est.sup_displacement, dist(img, at));
            Mat2 J = f.jacobian(at);
            if (!finite(J)) throw NonFiniteValue("Jacobian on the estimation grid");
            est.sup_derivative_deviation =
                std::max(est.sup_derivative_deviation, opnorm(J - mat2_identity()));
        }
    }
    return est;
}

// --- sampled hypothesis checks ---

struct BallCheck {
    bool pass = true;
    double radius = 0;
    double min_displacement = 0;
    Point2 witness{0, 0};
};

// Scans the closed ball of radius 4|f(p) - p| around p for displacement dips.
// Sunflower sampling: deterministic, roughly uniform over the disk.
inline BallCheck check_B1(const DiffeoMap& f, Point2 p, int samples = 512, double tol = 1e-9) {
    double step = dist(f(p), p);
    if (step <= tol) throw FixedSeed{};
    BallCheck out;
    out.radius = 4 * step;
    out.min_displacement = step;
    out.witness = p;
    const double golden = 2.399963229728653;
    for (int k = 0; k < samples; ++k) {
        double r = out.radius * std::sqrt((k + 0.5) / samples);
        double a = golden * k;
        Point2 x = p + Point2{r * std::cos(a), r * std::sin(a)};
        double d = dist(f(x), x);
        if (d < out.min_displacement) {
            out.min_displacement = d;
            out.witness = x;
        }
    }
    out.pass = out.min_displacement > tol;
    return out;
}

struct AngleCheck {
    bool pass = true;
    bool any_intersections = false;
    double worst_angle = 0;
    std::size_t seg_a = 0, seg_b = 0;
};

// Worst direction angle over all intersecting pairs among the first m orbit
// segments [f^i(p), f^{i+1}(p)], shared endpoints included. The segments
// form an open chain, not a closed polygon: a drifting orbit has contacts
// only at consecutive joints, so a straight translation passes with angle
// zero while a sharply turning one fails at its shared vertices.
inline AngleCheck check_B2(const DiffeoMap& f, Point2 p, int m,
                           double tolerance = default_tolerance) {
    if (m < 1) throw Error("need at least one orbit segment");
    std::vector<Point2> pts = orbit(f, p, m + 1);
    std::vector<OrientedSegment> segs;
    segs.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i + 1 <= m; ++i) {
        if (dist(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(i) + 1]) <=
            tolerance)
            throw FixedSeed{};
        segs.push_back({pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(i) + 1]});
    }
    AngleCheck out;
    for (std::size_t i = 0; i < segs.size(); ++i) {
        for (std::size_t j = i + 1; j < segs.size(); ++j) {
            IntersectionResult hit = segment_intersection(segs[i], segs[j], tolerance);
            if (hit.kind == IntersectionResult::Kind::none) continue;
            out.any_intersections = true;
            double ang = angle_between(segs[i], segs[j]);
            if (ang > out.worst_angle) {
                out.worst_angle = ang;
                out.seg_a = i;
                out.seg_b = j;
            }
        }
    }
    out.pass = out.worst_angle < pi / 4;
    return out;
}

struct SegmentEstimateCheck {
    bool pass = true;
    int triples = 0;
    int failures = 0;
    double worst_ratio = 0;
    Point2 p{0, 0}, q{0, 0}, probe{0, 0};
};

// Random (p, q, lambda) triples with lambda on the segment [p, q]: requires
// |f(lambda) - f(p)| <= K |f(q) - f(p)|.
inline SegmentEstimateCheck check_segment_estimate(const DiffeoMap& f, const Box2& domain,
                                                   double K = 3, int triples = 10000,
                                                   std::uint64_t seed = 0x5eed) {
    Rng rng(seed);
    SegmentEstimateCheck out;
    out.triples = triples;
    for (int i = 0; i < triples; ++i) {
        Point2 p = rng.in_box(domain);
        Point2 q = rng.in_box(domain);
        while (dist(p, q) < 1e-6) q = rng.in_box(domain);
        Point2 lam = lerp(p, q, rng.uniform());
        double lhs = dist(f(lam), f(p));
        double rhs = K * dist(f(q), f(p));
        double ratio = lhs / std::max(rhs, 1e-300);
        if (ratio > out.worst_ratio) {
            out.worst_ratio = ratio;
            out.p = p;
            out.q = q;
            out.probe = lam;
        }
        if (lhs > rhs) ++out.failures;
    }
    out.pass = out.failures == 0;
    return out;
}

// --- displacement degree and the fixed point finder ---

namespace detail {

inline Point2 displacement_at(const DiffeoMap& f, Point2 x, double margin) {
    Point2 y = f(x);
    if (!finite(y)) throw NonFiniteValue("displacement field");
    Point2 d = y - x;
    if (norm(d) <= margin) throw BoundaryFixedPoint(norm(d));
    return d;
}

inline double turn_between(Point2 u, Point2 v) { return std::atan2(cross(u, v), dot(u, v)); }

// Accumulated rotation of the displacement between two boundary samples. A
// jump above pi/2 is bisected until resolved, so a full half turn cannot be
// silently dropped.
inline double displacement_turn(const DiffeoMap& f, Point2 a, Point2 b, Point2 da, Point2 db,
                                double margin, int depth) {
    double t = turn_between(da, db);
    if (std::abs(t) <= 0.5 * pi || depth >= 30) return t;
    Point2 m = lerp(a, b, 0.5);
    Point2 dm = displacement_at(f, m, margin);
    return displacement_turn(f, a, m, da, dm, margin, depth + 1) +
           displacement_turn(f, m, b, dm, db, margin, depth + 1);
}

// Degree of x -> f(x) - x along the curve, at least per_segment samples per
// edge plus adaptive refinement.
inline int displacement_degree(const DiffeoMap& f, const ClosedPolyCurve& curve, double margin,
                               int per_segment = 64) {
    std::vector<Point2> at;
    std::vector<Point2> disp;
    at.reserve(curve.size() * per_segment);
    for (std::size_t i = 0; i < curve.size(); ++i) {
        OrientedSegment s = curve.segment(i);
        for (int k = 0; k < per_segment; ++k) {
            Point2 x = s.at(static_cast<double>(k) / per_segment);
            at.push_back(x);
            disp.push_back(displacement_at(f, x, margin));
        }
    }
    double total = 0;
    for (std::size_t i = 0; i < at.size(); ++i) {
        std::size_t j = (i + 1) % at.size();
        total += displacement_turn(f, at[i], at[j], disp[i], disp[j], margin, 0);
    }
    return static_cast<int>(std::lround(total / (2 * pi)));
}

inline ClosedPolyCurve box_loop(const Box2& b) {
    return build_closed_curve({b.lo, {b.hi.x, b.lo.y}, b.hi, {b.lo.x, b.hi.y}}, 1e-15);
}

}  // namespace detail

struct FixedPointResult {
    Point2 point{0, 0};
    int degree = 0;
    double residual = 0;
    int refinements = 0;
};

// Certifies a fixed point inside the disk of a simple loop: nonzero
// displacement degree along the loop, then quadtree descent keeping a cell
// whose boundary degree stays nonzero. Cuts are made slightly off center so
// a fixed point at a symmetric cell midpoint falls strictly inside a child;
// when a cut still grazes a displacement zero another offset is tried.
inline FixedPointResult fixed_point_in_disk(const DiffeoMap& f, const ClosedPolyCurve& loop,
                                            double tol = 1e-9) {
    int deg = detail::displacement_degree(f, loop, tol);
    if (deg == 0) throw ZeroDegree{};

    static constexpr double offsets[4][2] = {
        {0.5137, 0.5094}, {0.4421, 0.5313}, {0.5618, 0.4579}, {0.4280, 0.4466}};

    FixedPointResult out;
    out.degree = deg;
    Box2 cell = loop.bounds();
    while (std::max(cell.width(), cell.height()) >= tol) {
        bool descended = false;
        bool degree_lost = false;
        for (const auto& off : offsets) {
            double sx = cell.lo.x + off[0] * cell.width();
            double sy = cell.lo.y + off[1] * cell.height();
            Box2 children[4] = {
                {{cell.lo.x, cell.lo.y}, {sx, sy}},
                {{sx, cell.lo.y}, {cell.hi.x, sy}},
                {{cell.lo.x, sy}, {sx, cell.hi.y}},
                {{sx, sy}, {cell.hi.x, cell.hi.y}},
            };
            try {
                degree_lost = true;
                // Cell boundaries shrink toward the fixed point, so their
                // displacement scale falls with the cell; only an exact zero
                // disqualifies a cut.
                for (const Box2& child : children) {
                    if (detail::displacement_degree(f, detail::box_loop(child), 0.0) != 0) {
                        cell = child;
                        descended = true;
                        degree_lost = false;
                        break;
                    }
                }
            } catch (const BoundaryFixedPoint&) {
                degree_lost = false;
                continue;
            }
            break;
        }
        if (!descended) {
            Point2 c = cell.center();
            double res = dist(f(c), c);
            if (res <= tol) {
                out.point = c;
                out.residual = res;
                return out;
            }
            throw Error(degree_lost ? "displacement degree lost during refinement"
                                    : "displacement zero shadows every cell cut");
        }
        ++out.refinements;
    }
    out.point = cell.center();
    out.residual = dist(f(out.point), out.point);
    return out;
}

inline FixedPointResult fixed_point_in_disk(const DiffeoMap& f, const SimpleLoop& loop,
                                            double tol = 1e-9) {
    return fixed_point_in_disk(f, loop.curve, tol);
}

// --- capital points and the localization theorem ---

struct CapitalPointCertificate {
    Point2 point{0, 0};
    std::string map_label;
    Point2 base{0, 0};
    std::vector<int> return_times;
    int certified_time = 0;
    std::vector<int> indices;
    double residual = 0;
};

// Finds a point near the orbit of p that f provably fixes: walk the near
// return times, close each candidate orbit into a polygon, untangle it, and
// chase the distinguished disk down to a fixed point. The point must then be
// fixed by every map in fixers as well.
inline CapitalPointCertificate find_capital_point(const DiffeoMap& f,
                                                  const std::vector<DiffeoMap>& fixers, Point2 p,
                                                  const DynamicsConfig& cfg = {}) {
    for (const DiffeoMap& g : fixers) {
        double r = dist(g(p), p);
        if (r > cfg.residual_tol)
            throw Error("capital point base is not fixed by '" + g.label + "'");
    }
    if (dist(f(p), p) <= cfg.fixed_point_tol) throw FixedSeed{};

    // Candidate times are local minima of n -> |f^n(p) - p|: genuine dips
    // toward the base, not points a drifting orbit happens to pass (a
    // monotone escape has no dips at all and stays an honest failure). Dips
    // are tried earliest first: a short candidate polygon is cheap to
    // untangle, and certification never leans on the closing gap being
    // small, so a loose early recurrence beats a tight one thousands of
    // iterates out. The cap keeps far flybys from posing as returns.
    std::vector<double> gap;
    {
        Point2 x = p;
        for (int n = 1; n <= cfg.max_iter; ++n) {
            x = f(x);
            if (!finite(x)) throw NonFiniteIterate(static_cast<std::size_t>(n));
            gap.push_back(dist(x, p));
        }
    }
    std::vector<int> times;
    const double cap = cfg.return_tol * 4096;
    for (std::size_t i = 0; i < gap.size(); ++i) {
        bool down = i == 0 ? gap[i] < cfg.return_tol : gap[i] < gap[i - 1];
        bool up = i + 1 >= gap.size() || gap[i] <= gap[i + 1];
        if (down && up && gap[i] < cap) times.push_back(static_cast<int>(i) + 1);
    }
    if (times.empty()) throw NoReturns{};

    CapitalPointCertificate cert;
    cert.map_label = f.label;
    cert.base = p;
    cert.return_times = times;

    std::optional<CommonFixCheckFailed> fix_failure;
    std::string last_failure = "no candidate return time certified";
    bool any_curve = false;
    int tried = 0;
    for (int nk : times) {
        if (nk < 2) continue;
        if (tried >= cfg.capital_attempts) break;
        ++tried;
        try {
            OrbitCurve oc = orbit_curve(f, p, nk);
            any_curve = true;
            DecompositionReport rep = decompose(oc.curve);
            FixedPointResult fp =
                fixed_point_in_disk(f, rep.loops[rep.kappa].curve, cfg.fixed_point_tol);
            int ind = winding_number(oc.curve, fp.point).value;
            if (ind == 0) {
                last_failure = "orbit curve does not wind around the candidate";
                continue;
            }
            for (const DiffeoMap& g : fixers) {
                double r = dist(g(fp.point), fp.point);
                if (r > cfg.residual_tol) throw CommonFixCheckFailed(g.label, r);
            }
            cert.point = fp.point;
            cert.certified_time = nk;
            cert.indices.push_back(ind);
            cert.residual = fp.residual;
            return cert;
        } catch (const CommonFixCheckFailed& e) {
            fix_failure = e;
        } catch (const Error& e) {
            last_failure = e.what();
        }
    }
    if (fix_failure) throw *fix_failure;
    if (!any_curve) throw DegenerateOrbitCurve(last_failure);
    throw LocalizationFailure(last_failure);
}

struct TheoremCertificate {
    std::vector<std::string> generators;
    Point2 seed{0, 0};
    Point2 fixed_point{0, 0};
    std::vector<double> residuals;
    ConvexPolygon hull;
    HullSide hull_membership = HullSide::inside;
};

namespace detail {

inline void check_commutation(const std::vector<DiffeoMap>& maps, const DynamicsConfig& cfg) {
    Rng rng(cfg.seed ^ 0xC0117u);
    for (std::size_t i = 0; i < maps.size(); ++i) {
        for (std::size_t j = i + 1; j < maps.size(); ++j) {
            double worst = 0;
            for (int s = 0; s < cfg.commutation_samples; ++s) {
                Point2 x = rng.in_box(cfg.domain);
                worst = std::max(worst, dist(maps[i](maps[j](x)), maps[j](maps[i](x))));
            }
            if (worst > cfg.commutation_tol)
                throw CommutationViolation(maps[i].label, maps[j].label, worst);
        }
    }
}

// Collects group orbit points of p in three sweeps: forward words only,
// inverse words only, and an even mix. The one sided sweeps keep systematic
// winding (a signed random walk over directions cancels the net rotation of
// a spiral, leaving an arc whose hull misses the center). A walker that
// leaves the working domain restarts from p; every recorded point is a
// genuine orbit point.
inline std::vector<Point2> sample_group_orbit(const std::vector<DiffeoMap>& gens, Point2 p,
                                              int count, const DynamicsConfig& cfg) {
    Rng rng(cfg.seed ^ 0x0bb17u);
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(count) + 1);
    pts.push_back(p);
    for (int mode = 0; mode < 3; ++mode) {
        Point2 x = p;
        for (int i = 0; i < count / 3; ++i) {
            const DiffeoMap& g = gens[rng.below(gens.size())];
            bool back = mode == 1 || (mode == 2 && rng.uniform() < 0.5);
            if (back && !g.has_inverse()) back = false;
            Point2 y = back ? g.inverse(x) : g(x);
            if (!finite(y) || !cfg.domain.contains(y)) {
                x = p;
                continue;
            }
            x = y;
            pts.push_back(x);
        }
    }
    return pts;
}

// Peels one generator at a time: all[0..done) already fix p. Either the
// orbit of p under the next map dips below the fixed point tolerance (the
// dip point inherits invariance under the peeled maps by commutation), or a
// capital point is extracted from an untangled near-return orbit polygon.
inline Point2 peel_common_fixed_point(const std::vector<DiffeoMap>& all, std::size_t done,
                                      Point2 p, const DynamicsConfig& cfg) {
    if (done == all.size()) return p;
    const DiffeoMap& f = all[done];
    if (dist(f(p), p) <= cfg.fixed_point_tol)
        return peel_common_fixed_point(all, done + 1, p, cfg);

    std::optional<Point2> dip;
    Point2 x = f(p);
    for (int n = 1; n <= cfg.max_iter; ++n) {
        if (!finite(x)) throw NonFiniteIterate(static_cast<std::size_t>(n));
        if (!cfg.domain.contains(x)) throw UnboundedOrbit(static_cast<std::size_t>(n));
        Point2 y = f(x);
        double disp = dist(y, x);
        if (disp <= cfg.fixed_point_tol) {
            // Ride a contraction to its bottom so the later stages start
            // from a point fixed as tightly as the arithmetic allows.
            while (n < cfg.max_iter && finite(y)) {
                double deeper = dist(f(y), y);
                if (!(deeper < disp)) break;
                x = y;
                y = f(x);
                disp = deeper;
                ++n;
            }
            dip = x;
            break;
        }
        x = y;
    }

    Point2 next;
    if (dip) {
        next = *dip;
    } else {
        std::vector<DiffeoMap> fixers(all.begin(), all.begin() + done);
        next = find_capital_point(f, fixers, p, cfg).point;
    }
    return peel_common_fixed_point(all, done + 1, next, cfg);
}

}  // namespace detail

// Localizes a common fixed point of pairwise commuting near identity maps:
// sampled commutation check, then generator peeling, then a certificate tying
// the located point to the convex hull of the sampled group orbit of the seed.
inline TheoremCertificate locate_common_fixed_point(const std::vector<DiffeoMap>& generators,
                                                    Point2 seed, const DynamicsConfig& cfg = {}) {
    if (generators.empty()) throw Error("need at least one generator");
    if (!finite(seed)) throw NonFiniteValue("seed point");
    detail::check_commutation(generators, cfg);

    Point2 q = detail::peel_common_fixed_point(generators, 0, seed, cfg);

    TheoremCertificate cert;
    cert.seed = seed;
    cert.fixed_point = q;
    for (const DiffeoMap& g : generators) {
        cert.generators.push_back(g.label);
        double r = dist(g(q), q);
        if (r > cfg.residual_tol)
            throw LocalizationFailure("final residual " + std::to_string(r) + " under '" +
                                      g.label + "'");
        cert.residuals.push_back(r);
    }
    std::vector<Point2> pts = detail::sample_group_orbit(generators, seed, cfg.hull_samples, cfg);
    cert.hull = convex_hull(pts);
    cert.hull_membership = point_in_hull(q, cert.hull);
    if (cert.hull_membership == HullSide::outside)
        throw LocalizationFailure("located point escapes the sampled orbit hull");
    return cert;
}

// Deterministic scatter of group-orbit points, for hulls and drawings.
inline std::vector<Point2> orbit_cloud(const std::vector<DiffeoMap>& generators, Point2 p,
                                       int count, const DynamicsConfig& cfg = {}) {
    return detail::sample_group_orbit(generators, p, count, cfg);
}

struct OrbitLocalizationReport {
    bool pass = true;
    std::vector<int> exponents;
    std::vector<double> residuals;
    std::vector<HullSide> hull_sides;
    ConvexPolygon hull;
};

// Reports, for each l in [lo, hi], whether h^l(q) is fixed by f and sits in
// the hull of the sampled joint orbit of p under f and h. Diagnostic only.
inline OrbitLocalizationReport verify_orbit_localization(const DiffeoMap& h, const DiffeoMap& f,
                                                         Point2 q, Point2 p, int lo, int hi,
                                                         const DynamicsConfig& cfg = {}) {
    if (lo > hi) throw Error("empty exponent range");
    if (lo < 0 && !h.has_inverse()) throw Error("negative powers need an invertible map");
    OrbitLocalizationReport rep;
    std::vector<DiffeoMap> gens{f, h};
    rep.hull = convex_hull(detail::sample_group_orbit(gens, p, cfg.hull_samples, cfg));
    for (int l = lo; l <= hi; ++l) {
        Point2 x = q;
        for (int i = 0; i < std::abs(l); ++i) x = l > 0 ? h(x) : h.inverse(x);
        double r = dist(f(x), x);
        HullSide side = point_in_hull(x, rep.hull);
        rep.exponents.push_back(l);
        rep.residuals.push_back(r);
        rep.hull_sides.push_back(side);
        if (r > cfg.residual_tol || side == HullSide::outside) rep.pass = false;
    }
    return rep;
}

// --- the counterexample construction ---

struct CounterexampleReport {
    int n = 0;
    Point2 p{0, 0}, q{0, 0};
    double support_radius = 0;
    double max_orbit_deviation = 0;
    bool orbits_match = false;
    int fixed_grid_count = 0;
    Point2 fixed_grid_point{0, 0};
    bool unique_grid_fixed_point = false;
    ConvexPolygon orbit_hull;
    HullSide q_side = HullSide::outside;
    double q_hull_clearance = 0;
    double sup_displacement = 0;
    bool pass = false;
};

struct CounterexampleFamily {
    DiffeoMap base;
    DiffeoMap carrier;
    DiffeoMap conjugated;
    CounterexampleReport report;
};

namespace detail {

inline double hull_clearance(Point2 x, const ConvexPolygon& hull) {
    if (hull.vertices.empty()) return 0;
    if (hull.vertices.size() == 1) return dist(x, hull.vertices[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
        OrientedSegment e{hull.vertices[i], hull.vertices[(i + 1) % hull.vertices.size()]};
        best = std::min(best, point_segment_distance(x, e));
    }
    return best;
}

}  // namespace detail

// Conjugates a compactly supported rotation by a tube flow that carries the
// origin to q. The conjugated map has the same orbit through p (the tube
// avoids it) yet its fixed point q sits outside the orbit's convex hull, so
// no hull of orbit samples can localize it.
inline CounterexampleFamily counterexample_family(int n, Point2 p, Point2 q,
                                                  double support_radius = 0.05) {
    if (n < 2) throw GeometryConstraintViolated("profile order must be at least 2");
    double rp = norm(p), rq = norm(q);
    if (!(rp > 0) || rp >= 1)
        throw GeometryConstraintViolated("seed must lie strictly between origin and unit circle");
    if (std::abs(rp - rq) > 1e-12)
        throw GeometryConstraintViolated("seed and target must share a radius");
    if (support_radius <= 0) throw GeometryConstraintViolated("support radius must be positive");

    std::vector<Point2> base_orbit;
    for (int j = 1; j <= n; ++j) {
        double a = 2 * pi * j / n;
        double c = std::cos(a), s = std::sin(a);
        base_orbit.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
    }
    OrientedSegment axis{{0, 0}, q};
    for (const Point2& o : base_orbit) {
        if (dist(o, q) <= 1e-9) throw GeometryConstraintViolated("target lies on the orbit");
        if (point_segment_distance(o, axis) <= 1.05 * support_radius)
            throw GeometryConstraintViolated("carrier tube passes too close to the orbit");
    }

    CounterexampleFamily fam;
    fam.base = bump_rotation_map(n);
    fam.carrier = tube_translation_map(q, support_radius);
    fam.conjugated = conjugate_map(fam.carrier, fam.base);

    CounterexampleReport rep;
    rep.n = n;
    rep.p = p;
    rep.q = q;
    rep.support_radius = support_radius;

    Point2 xa = p, xb = p;
    for (int j = 0; j < 2 * n; ++j) {
        xa = fam.base(xa);
        xb = fam.conjugated(xb);
        rep.max_orbit_deviation = std::max(rep.max_orbit_deviation, dist(xa, xb));
    }
    rep.orbits_match = rep.max_orbit_deviation <= 1e-9;

    // Displacement scan of the unit disk on a grid anchored at q, so q itself
    // is a grid point. Only q should stay put.
    const double grid = 1e-2;
    int reach = static_cast<int>(std::ceil(2.0 / grid));
    for (int i = -reach; i <= reach; ++i) {
        for (int j = -reach; j <= reach; ++j) {
            Point2 x = q + Point2{i * grid, j * grid};
            if (norm(x) > 1) continue;
            if (dist(fam.conjugated(x), x) < 1e-9) {
                ++rep.fixed_grid_count;
                rep.fixed_grid_point = x;
            }
        }
    }
    rep.unique_grid_fixed_point =
        rep.fixed_grid_count == 1 && dist(rep.fixed_grid_point, q) < 1e-12;

    std::vector<Point2> conj_orbit;
    Point2 x = p;
    for (int j = 0; j < n; ++j) {
        x = fam.conjugated(x);
        conj_orbit.push_back(x);
    }
    rep.orbit_hull = convex_hull(conj_orbit);
    rep.q_side = point_in_hull(q, rep.orbit_hull);
    rep.q_hull_clearance = detail::hull_clearance(q, rep.orbit_hull);

    rep.sup_displacement =
        estimate_c1_distance(fam.base, Box2{{-2, -2}, {2, 2}}, 0.02).sup_displacement;

    rep.pass = rep.orbits_match && rep.unique_grid_fixed_point &&
               rep.q_side == HullSide::outside && rep.q_hull_clearance > 0;
    fam.report = rep;
    return fam;
}

}  // namespace skein
