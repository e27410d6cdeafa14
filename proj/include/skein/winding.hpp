#pragma once

#include <cmath>
#include <cstdlib>

#include "skein/curve.hpp"
#include "skein/errors.hpp"
#include "skein/geom.hpp"

namespace skein {

struct IndexValue {
    int value = 0;
    double residual = 0;  // distance of the turn sum from the nearest integer
};

inline double distance_to_curve(const ClosedPolyCurve& curve, Point2 p) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < curve.size(); ++i)
        best = std::min(best, point_segment_distance(p, curve.segment(i)));
    return best;
}

// Index of p with respect to the curve, as the accumulated signed angle of
// the vertex directions divided by one full turn. Off-integer drift beyond a
// quarter turn is reported instead of silently rounded.
inline IndexValue winding_number(const ClosedPolyCurve& curve, Point2 p) {
    double d = distance_to_curve(curve, p);
    if (d <= curve.tolerance) throw PointOnCurve{d};
    double total = 0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        Point2 u = curve.vertices[i] - p;
        Point2 v = curve.vertices[(i + 1) % curve.size()] - p;
        total += std::atan2(cross(u, v), dot(u, v));
    }
    double turns = total / (2.0 * pi);
    double rounded = std::nearbyint(turns);
    IndexValue out;
    out.value = static_cast<int>(rounded);
    out.residual = std::abs(turns - rounded);
    if (out.residual >= 0.25) throw NumericallyAmbiguous{out.residual};
    return out;
}

// Independent index computation by counting signed crossings of a ray from
// p. Rays that graze a vertex or run along a segment are rejected and the
// probe direction is rotated; persistent degeneracy raises DegenerateProbe.
inline int winding_number_oracle(const ClosedPolyCurve& curve, Point2 p) {
    double dmin = distance_to_curve(curve, p);
    if (dmin <= curve.tolerance) throw PointOnCurve{dmin};
    double angle = 0.3711;
    for (int attempt = 0; attempt < 32; ++attempt, angle += 0.7528364) {
        Point2 d{std::cos(angle), std::sin(angle)};
        int total = 0;
        bool clean = true;
        for (std::size_t i = 0; i < curve.size() && clean; ++i) {
            OrientedSegment seg = curve.segment(i);
            Point2 e = seg.direction();
            double denom = cross(d, e);
            double len = norm(e);
            if (std::abs(denom) <= 1e-12 * len) {
                // Parallel: degenerate only if the segment lies on the ray.
                Point2 w = seg.a - p;
                if (std::abs(cross(d, w)) <= curve.tolerance &&
                    (dot(w, d) > 0 || dot(seg.b - p, d) > 0))
                    clean = false;
                continue;
            }
            double t = cross(seg.a - p, d) / denom;
            double s = cross(seg.a - p, e) / denom;
            double eps = curve.tolerance / len + 1e-12;
            if (s > 0 && (std::abs(t) <= eps || std::abs(1.0 - t) <= eps)) {
                clean = false;
                continue;
            }
            if (s > 0 && t > 0 && t < 1) total += denom > 0 ? 1 : -1;
        }
        if (clean) return total;
    }
    throw DegenerateProbe{};
}

// Number of curve passes through an on-curve point: coincident vertices plus
// containments in a segment interior. Returns 0 for points off the curve.
inline int covering_multiplicity(const ClosedPolyCurve& curve, Point2 p) {
    const double tol = curve.tolerance;
    int count = 0;
    for (std::size_t i = 0; i < curve.size(); ++i)
        if (dist(curve.vertices[i], p) <= tol) ++count;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        OrientedSegment seg = curve.segment(i);
        if (point_segment_distance(p, seg) <= tol && dist(p, seg.a) > tol &&
            dist(p, seg.b) > tol)
            ++count;
    }
    return count;
}

}  // namespace skein
