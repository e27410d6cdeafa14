#pragma once

#include <algorithm>
#include <cmath>
#include <limits>

namespace skein {

// Single absolute tolerance, in coordinate units. Every predicate that has to
// decide "same point / on line / at endpoint" goes through this value.
inline constexpr double default_tolerance = 1e-9;

inline constexpr double pi = 3.141592653589793238462643383279502884;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
    friend Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
    friend bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double dist(Point2 a, Point2 b) { return norm(a - b); }
inline Point2 lerp(Point2 a, Point2 b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
// 90 degree counterclockwise turn; the left normal of a direction vector.
inline Point2 rot90(Point2 a) { return {-a.y, a.x}; }

inline Point2 normalize(Point2 a) {
    double n = norm(a);
    return n > 0 ? Point2{a.x / n, a.y / n} : Point2{0, 0};
}

inline bool finite(Point2 a) { return std::isfinite(a.x) && std::isfinite(a.y); }

inline bool almost_equal(Point2 a, Point2 b, double tol = default_tolerance) {
    return dist(a, b) <= tol;
}

struct OrientedSegment {
    Point2 a;
    Point2 b;

    Point2 direction() const { return b - a; }
    double length() const { return dist(a, b); }
    Point2 at(double t) const { return lerp(a, b, t); }
};

// Clamped parameter of the closest point on [s.a, s.b].
inline double project_param(Point2 p, const OrientedSegment& s) {
    Point2 d = s.direction();
    double L2 = dot(d, d);
    if (L2 == 0) return 0.0;
    return std::clamp(dot(p - s.a, d) / L2, 0.0, 1.0);
}

inline double point_segment_distance(Point2 p, const OrientedSegment& s) {
    return dist(p, s.at(project_param(p, s)));
}

// Angle between the direction vectors, in [0, pi].
inline double angle_between(const OrientedSegment& s1, const OrientedSegment& s2) {
    Point2 u = s1.direction(), v = s2.direction();
    return std::atan2(std::fabs(cross(u, v)), dot(u, v));
}

struct IntersectionResult {
    enum class Kind { none, point, overlap };
    Kind kind = Kind::none;

    // kind == point
    Point2 at{};
    double t1 = 0.0;  // parameter of `at` on the first segment
    double t2 = 0.0;  // parameter on the second

    // kind == overlap: shared subsegment, oriented along the first segment,
    // with its parameter ranges on both inputs.
    OrientedSegment common{};
    double o1_begin = 0.0, o1_end = 0.0;
    double o2_begin = 0.0, o2_end = 0.0;
};

// Tolerance applies as an absolute distance: endpoints within `tol` of the
// other segment count as touching, collinear slivers shorter than `tol`
// collapse to a point intersection.
inline IntersectionResult segment_intersection(const OrientedSegment& s1,
                                               const OrientedSegment& s2,
                                               double tol = default_tolerance) {
    IntersectionResult res;
    Point2 d1 = s1.direction(), d2 = s2.direction();
    double len1 = norm(d1), len2 = norm(d2);

    if (len1 <= tol || len2 <= tol) {
        // Degenerate input; treat the short segment as a point.
        Point2 p = len1 <= tol ? s1.a : s2.a;
        const OrientedSegment& other = len1 <= tol ? s2 : s1;
        if (point_segment_distance(p, other) <= tol) {
            res.kind = IntersectionResult::Kind::point;
            res.at = p;
            double u = project_param(p, other);
            res.t1 = len1 <= tol ? 0.0 : u;
            res.t2 = len1 <= tol ? u : 0.0;
        }
        return res;
    }

    double da = std::fabs(cross(d1, s2.a - s1.a)) / len1;
    double db = std::fabs(cross(d1, s2.b - s1.a)) / len1;
    if (da <= tol && db <= tol) {
        // Collinear: compare parameter intervals along s1.
        double u0 = dot(s2.a - s1.a, d1) / (len1 * len1);
        double u1 = dot(s2.b - s1.a, d1) / (len1 * len1);
        double lo = std::max(0.0, std::min(u0, u1));
        double hi = std::min(1.0, std::max(u0, u1));
        double span = (hi - lo) * len1;
        if (span > tol) {
            res.kind = IntersectionResult::Kind::overlap;
            res.common = {s1.at(lo), s1.at(hi)};
            res.o1_begin = lo;
            res.o1_end = hi;
            OrientedSegment s2seg{s2.a, s2.b};
            res.o2_begin = project_param(res.common.a, s2seg);
            res.o2_end = project_param(res.common.b, s2seg);
            return res;
        }
        if (span >= -tol) {
            double mid = 0.5 * (lo + hi);
            res.kind = IntersectionResult::Kind::point;
            res.at = s1.at(std::clamp(mid, 0.0, 1.0));
            res.t1 = std::clamp(mid, 0.0, 1.0);
            res.t2 = project_param(res.at, s2);
        }
        return res;
    }

    double denom = cross(d1, d2);
    if (denom == 0.0) return res;  // parallel, not collinear
    Point2 r = s2.a - s1.a;
    double t1 = cross(r, d2) / denom;
    double t2 = cross(r, d1) / denom;
    double tol1 = tol / len1, tol2 = tol / len2;
    if (t1 < -tol1 || t1 > 1 + tol1 || t2 < -tol2 || t2 > 1 + tol2) return res;
    res.kind = IntersectionResult::Kind::point;
    res.t1 = std::clamp(t1, 0.0, 1.0);
    res.t2 = std::clamp(t2, 0.0, 1.0);
    res.at = s1.at(res.t1);
    return res;
}

struct Box2 {
    Point2 lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
    Point2 hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};

    void expand(Point2 p) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    Point2 center() const { return {0.5 * (lo.x + hi.x), 0.5 * (lo.y + hi.y)}; }
    double width() const { return hi.x - lo.x; }
    double height() const { return hi.y - lo.y; }
    bool contains(Point2 p) const {
        return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
    }
};

}  // namespace skein
