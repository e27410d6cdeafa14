#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "skein/errors.hpp"
#include "skein/geom.hpp"
#include "skein/rng.hpp"

namespace skein {

struct Mat2 {
    // Row major: [[a, b], [c, d]].
    double a = 1, b = 0, c = 0, d = 1;

    Point2 apply(Point2 p) const { return {a * p.x + b * p.y, c * p.x + d * p.y}; }
    double det() const { return a * d - b * c; }

    friend Mat2 operator*(const Mat2& l, const Mat2& r) {
        return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
                l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
    }
    friend Mat2 operator-(const Mat2& l, const Mat2& r) {
        return {l.a - r.a, l.b - r.b, l.c - r.c, l.d - r.d};
    }
    friend Mat2 operator+(const Mat2& l, const Mat2& r) {
        return {l.a + r.a, l.b + r.b, l.c + r.c, l.d + r.d};
    }
    friend Mat2 operator*(double s, const Mat2& m) {
        return {s * m.a, s * m.b, s * m.c, s * m.d};
    }
};

inline Mat2 mat2_identity() { return {1, 0, 0, 1}; }

inline Mat2 mat2_inverse(const Mat2& m) {
    double det = m.det();
    if (std::abs(det) < 1e-300) throw Error("matrix not invertible");
    return {m.d / det, -m.b / det, -m.c / det, m.a / det};
}

// Largest singular value, closed form for 2x2.
inline double opnorm(const Mat2& m) {
    double p = m.a * m.a + m.b * m.b + m.c * m.c + m.d * m.d;
    double q = m.det();
    double disc = std::sqrt(std::max(0.0, p * p - 4 * q * q));
    return std::sqrt(0.5 * (p + disc));
}

inline bool finite(const Mat2& m) {
    return std::isfinite(m.a) && std::isfinite(m.b) && std::isfinite(m.c) && std::isfinite(m.d);
}

// A planar diffeomorphism as callable data. The Jacobian is always callable:
// factories install a central difference fallback when no analytic form is
// given. The inverse may be empty.
struct DiffeoMap {
    std::string label;
    std::function<Point2(Point2)> eval;
    std::function<Mat2(Point2)> jacobian;
    std::function<Point2(Point2)> inverse;

    Point2 operator()(Point2 p) const { return eval(p); }
    bool has_inverse() const { return static_cast<bool>(inverse); }
};

inline constexpr double jacobian_fd_step = 1e-6;

inline DiffeoMap make_diffeo(std::string label, std::function<Point2(Point2)> eval,
                             std::function<Mat2(Point2)> jacobian = nullptr,
                             std::function<Point2(Point2)> inverse = nullptr) {
    DiffeoMap m;
    m.label = std::move(label);
    m.eval = std::move(eval);
    if (jacobian) {
        m.jacobian = std::move(jacobian);
    } else {
        auto f = m.eval;
        m.jacobian = [f](Point2 p) {
            const double h = jacobian_fd_step;
            Point2 xp = f({p.x + h, p.y}), xm = f({p.x - h, p.y});
            Point2 yp = f({p.x, p.y + h}), ym = f({p.x, p.y - h});
            return Mat2{(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
                        (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)};
        };
    }
    m.inverse = std::move(inverse);
    return m;
}

// Worst relative deviation between the stored Jacobian and a fresh central
// difference estimate over sampled points.
inline double jacobian_consistency(const DiffeoMap& f, const Box2& box, int samples,
                                   std::uint64_t seed = 17) {
    Rng rng(seed);
    double worst = 0;
    for (int i = 0; i < samples; ++i) {
        Point2 p = rng.in_box(box);
        Mat2 ja = f.jacobian(p);
        const double h = jacobian_fd_step;
        Point2 xp = f.eval({p.x + h, p.y}), xm = f.eval({p.x - h, p.y});
        Point2 yp = f.eval({p.x, p.y + h}), ym = f.eval({p.x, p.y - h});
        Mat2 jf{(xp.x - xm.x) / (2 * h), (yp.x - ym.x) / (2 * h),
                (xp.y - xm.y) / (2 * h), (yp.y - ym.y) / (2 * h)};
        worst = std::max(worst, opnorm(ja - jf) / std::max(1.0, opnorm(ja)));
    }
    return worst;
}

// --- basic families ---

inline DiffeoMap identity_map() {
    return make_diffeo(
        "identity", [](Point2 p) { return p; }, [](Point2) { return mat2_identity(); },
        [](Point2 p) { return p; });
}

inline DiffeoMap translation_map(Point2 v) {
    return make_diffeo(
        "translation(" + std::to_string(v.x) + "," + std::to_string(v.y) + ")",
        [v](Point2 p) { return p + v; }, [](Point2) { return mat2_identity(); },
        [v](Point2 p) { return p - v; });
}

inline DiffeoMap rotation_map(Point2 center, double theta) {
    double c = std::cos(theta), s = std::sin(theta);
    Mat2 rot{c, -s, s, c};
    Mat2 inv{c, s, -s, c};
    return make_diffeo(
        "rotation(" + std::to_string(theta) + " about " + std::to_string(center.x) + "," +
            std::to_string(center.y) + ")",
        [center, rot](Point2 p) { return center + rot.apply(p - center); },
        [rot](Point2) { return rot; },
        [center, inv](Point2 p) { return center + inv.apply(p - center); });
}

inline DiffeoMap affine_map(const Mat2& A, Point2 b, const std::string& label = "affine") {
    DiffeoMap out;
    if (std::abs(A.det()) > 1e-12) {
        Mat2 Ai = mat2_inverse(A);
        out = make_diffeo(
            label, [A, b](Point2 p) { return A.apply(p) + b; }, [A](Point2) { return A; },
            [Ai, b](Point2 p) { return Ai.apply(p - b); });
    } else {
        out = make_diffeo(
            label, [A, b](Point2 p) { return A.apply(p) + b; }, [A](Point2) { return A; });
    }
    return out;
}

// exp(tA) by Cayley-Hamilton: with m = tr(A)/2 and B = A - mI, B^2 = -det(B) I,
// so the series splits into a scalar exponential times a rotation, a
// hyperbolic rotation or a shear depending on the sign of det(B).
inline Mat2 mat2_exp(const Mat2& A, double t) {
    double mu = 0.5 * (A.a + A.d);
    Mat2 B{A.a - mu, A.b, A.c, A.d - mu};
    double detB = B.det();
    double cpart, spart;
    if (detB > 1e-300) {
        double w = std::sqrt(detB);
        cpart = std::cos(w * t);
        spart = std::sin(w * t) / w;
    } else if (detB < -1e-300) {
        double w = std::sqrt(-detB);
        cpart = std::cosh(w * t);
        spart = std::sinh(w * t) / w;
    } else {
        cpart = 1;
        spart = t;
    }
    double scale = std::exp(mu * t);
    return scale * Mat2{cpart + spart * B.a, spart * B.b, spart * B.c, cpart + spart * B.d};
}

// Time t flow of x' = A (x - center): exact exponential, so flows of the
// same field at different times commute to rounding error.
inline DiffeoMap linear_flow_map(Point2 center, const Mat2& A, double t,
                                 const std::string& label = "") {
    Mat2 M = mat2_exp(A, t);
    Mat2 Mi = mat2_exp(A, -t);
    std::string name = label.empty() ? "flow(t=" + std::to_string(t) + ")" : label;
    return make_diffeo(
        name, [center, M](Point2 p) { return center + M.apply(p - center); },
        [M](Point2) { return M; },
        [center, Mi](Point2 p) { return center + Mi.apply(p - center); });
}

// --- smooth bumps and the two construction maps ---

// C-infinity monotone step: 0 for u <= 0, 1 for u >= 1.
inline double smooth_step(double u) {
    if (u <= 0) return 0;
    if (u >= 1) return 1;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// Radial rotation profile: full angle on [0, 1], smooth decay on [1, 2],
// exactly zero from 2 on.
inline double bump_rotation_profile(double r, double full_angle) {
    if (r <= 1) return full_angle;
    if (r >= 2) return 0;
    return full_angle * (1.0 - smooth_step(r - 1));
}

// Rotates the circle of radius r about the origin by 2*pi/n inside the unit
// disk, fading to the identity at radius 2. The radius is invariant, so the
// inverse simply rotates backwards.
inline DiffeoMap bump_rotation_map(int n) {
    double full = 2 * pi / n;
    auto fwd = [full](Point2 p) {
        double r = norm(p);
        double phi = bump_rotation_profile(r, full);
        double c = std::cos(phi), s = std::sin(phi);
        return Point2{c * p.x - s * p.y, s * p.x + c * p.y};
    };
    auto bwd = [full](Point2 p) {
        double r = norm(p);
        double phi = bump_rotation_profile(r, full);
        double c = std::cos(phi), s = std::sin(phi);
        return Point2{c * p.x + s * p.y, -s * p.x + c * p.y};
    };
    return make_diffeo("bump_rotation(n=" + std::to_string(n) + ")", fwd, nullptr, bwd);
}

namespace detail {

// Classic fourth order step for x' = field(x).
inline Point2 rk4_flow(const std::function<Point2(Point2)>& field, Point2 x, int steps) {
    double h = 1.0 / steps;
    for (int i = 0; i < steps; ++i) {
        Point2 k1 = field(x);
        Point2 k2 = field(x + 0.5 * h * k1);
        Point2 k3 = field(x + 0.5 * h * k2);
        Point2 k4 = field(x + h * k3);
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return x;
}

}  // namespace detail

// Compactly supported map carrying the origin to q: the time one flow of a
// constant field q faded out at distance support_radius from the segment
// [0, q]. Identity outside the tube; on the segment itself the field is
// exactly q, so 0 reaches q up to rounding only.
inline DiffeoMap tube_translation_map(Point2 q, double support_radius, int steps = 64) {
    if (support_radius <= 0) throw Error("tube support radius must be positive");
    OrientedSegment axis{{0, 0}, q};
    auto field = [axis, q, support_radius](Point2 x) {
        double d = point_segment_distance(x, axis);
        double w = 1.0 - smooth_step(d / support_radius);
        return w * q;
    };
    auto back_field = [field](Point2 x) { return Point2{0, 0} - field(x); };
    return make_diffeo(
        "tube_translation(" + std::to_string(q.x) + "," + std::to_string(q.y) + ")",
        [field, steps](Point2 x) { return detail::rk4_flow(field, x, steps); }, nullptr,
        [back_field, steps](Point2 x) { return detail::rk4_flow(back_field, x, steps); });
}

// --- combinators ---

inline DiffeoMap compose_map(const DiffeoMap& f, const DiffeoMap& g) {
    auto fe = f.eval, ge = g.eval;
    auto fj = f.jacobian, gj = g.jacobian;
    DiffeoMap out;
    out.label = f.label + " o " + g.label;
    out.eval = [fe, ge](Point2 p) { return fe(ge(p)); };
    out.jacobian = [fj, gj, ge](Point2 p) { return fj(ge(p)) * gj(p); };
    if (f.has_inverse() && g.has_inverse()) {
        auto fi = f.inverse, gi = g.inverse;
        out.inverse = [fi, gi](Point2 p) { return gi(fi(p)); };
    }
    return out;
}

inline DiffeoMap conjugate_map(const DiffeoMap& h, const DiffeoMap& f) {
    if (!h.has_inverse()) throw Error("conjugation needs an invertible outer map");
    DiffeoMap inner = compose_map(f, make_diffeo("inv(" + h.label + ")", h.inverse));
    DiffeoMap out = compose_map(h, inner);
    out.label = "conj(" + h.label + ", " + f.label + ")";
    if (f.has_inverse()) {
        auto he = h.eval, hi = h.inverse, fi = f.inverse;
        out.inverse = [he, hi, fi](Point2 p) { return he(fi(hi(p))); };
    }
    return out;
}

inline DiffeoMap power_map(const DiffeoMap& f, int k) {
    if (k < 1) throw Error("map power needs a positive exponent");
    auto fe = f.eval;
    auto fj = f.jacobian;
    DiffeoMap out;
    out.label = f.label + "^" + std::to_string(k);
    out.eval = [fe, k](Point2 p) {
        for (int i = 0; i < k; ++i) p = fe(p);
        return p;
    };
    out.jacobian = [fe, fj, k](Point2 p) {
        Mat2 J = mat2_identity();
        for (int i = 0; i < k; ++i) {
            J = fj(p) * J;
            p = fe(p);
        }
        return J;
    };
    if (f.has_inverse()) {
        auto fi = f.inverse;
        out.inverse = [fi, k](Point2 p) {
            for (int i = 0; i < k; ++i) p = fi(p);
            return p;
        };
    }
    return out;
}

}  // namespace skein
