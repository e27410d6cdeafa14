#pragma once

#include <algorithm>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "curve.hpp"
#include "dynamics.hpp"
#include "geom.hpp"
#include "hull.hpp"
#include "untangle.hpp"

namespace skein {

// Drawings use mathematical coordinates: the root group declares a y-flip,
// so everything inside is emitted with y growing upward.

namespace detail {

inline std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.8g", v);
    return buf;
}

inline const char* svg_palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#17becf", "#8c564b", "#e377c2"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

class SvgCanvas {
public:
    explicit SvgCanvas(Box2 extent, double pad_fraction = 0.08) {
        double pad = pad_fraction * std::max({extent.width(), extent.height(), 1e-9});
        view_.expand({extent.lo.x - pad, extent.lo.y - pad});
        view_.expand({extent.hi.x + pad, extent.hi.y + pad});
        unit_ = std::max(view_.width(), view_.height());
    }

    // Stroke widths and marker sizes are given as fractions of the view
    // extent so drawings look alike at every scale.
    double scaled(double fraction) const { return fraction * unit_; }

    void polyline(const std::vector<Point2>& pts, bool closed, const std::string& stroke,
                  double width_fraction, const std::string& extra = "") {
        body_ << "<path d=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            body_ << (i == 0 ? "M " : "L ") << svg_num(pts[i].x) << ' ' << svg_num(pts[i].y)
                  << ' ';
        if (closed) body_ << 'Z';
        body_ << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\""
              << svg_num(scaled(width_fraction)) << "\"" << (extra.empty() ? "" : " ") << extra
              << "/>\n";
    }

    void polygon_filled(const std::vector<Point2>& pts, const std::string& fill,
                        const std::string& stroke, double width_fraction) {
        body_ << "<path d=\"";
        for (std::size_t i = 0; i < pts.size(); ++i)
            body_ << (i == 0 ? "M " : "L ") << svg_num(pts[i].x) << ' ' << svg_num(pts[i].y)
                  << ' ';
        body_ << "Z\" fill=\"" << fill << "\" fill-opacity=\"0.15\" stroke=\"" << stroke
              << "\" stroke-width=\"" << svg_num(scaled(width_fraction)) << "\"/>\n";
    }

    void dot(Point2 p, double radius_fraction, const std::string& fill) {
        body_ << "<circle cx=\"" << svg_num(p.x) << "\" cy=\"" << svg_num(p.y) << "\" r=\""
              << svg_num(scaled(radius_fraction)) << "\" fill=\"" << fill << "\"/>\n";
    }

    void cross(Point2 p, double radius_fraction, const std::string& stroke) {
        double r = scaled(radius_fraction);
        double w = scaled(radius_fraction * 0.25);
        auto seg = [&](Point2 a, Point2 b) {
            body_ << "<line x1=\"" << svg_num(a.x) << "\" y1=\"" << svg_num(a.y) << "\" x2=\""
                  << svg_num(b.x) << "\" y2=\"" << svg_num(b.y) << "\" stroke=\"" << stroke
                  << "\" stroke-width=\"" << svg_num(w) << "\"/>\n";
        };
        seg({p.x - r, p.y - r}, {p.x + r, p.y + r});
        seg({p.x - r, p.y + r}, {p.x + r, p.y - r});
    }

    // Arrowhead at the midpoint of [a, b], pointing from a to b.
    void arrow(Point2 a, Point2 b, const std::string& fill) {
        double len = dist(a, b);
        if (len <= 0) return;
        Point2 d{(b.x - a.x) / len, (b.y - a.y) / len};
        Point2 n{-d.y, d.x};
        Point2 m{0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
        double s = std::min(scaled(0.018), 0.45 * len);
        Point2 tip{m.x + s * d.x, m.y + s * d.y};
        Point2 left{m.x - s * d.x + 0.6 * s * n.x, m.y - s * d.y + 0.6 * s * n.y};
        Point2 right{m.x - s * d.x - 0.6 * s * n.x, m.y - s * d.y - 0.6 * s * n.y};
        body_ << "<path d=\"M " << svg_num(tip.x) << ' ' << svg_num(tip.y) << " L "
              << svg_num(left.x) << ' ' << svg_num(left.y) << " L " << svg_num(right.x) << ' '
              << svg_num(right.y) << " Z\" fill=\"" << fill << "\"/>\n";
    }

    // Arrows on a sparse subset of segments keep dense curves readable.
    void oriented_curve(const ClosedPolyCurve& c, const std::string& stroke,
                        double width_fraction) {
        polyline(c.vertices, true, stroke, width_fraction);
        std::size_t stride = std::max<std::size_t>(1, c.size() / 12);
        for (std::size_t i = 0; i < c.size(); i += stride) {
            OrientedSegment s = c.segment(i);
            arrow(s.a, s.b, stroke);
        }
    }

    std::string finish() const {
        std::ostringstream out;
        double w = view_.width(), h = view_.height();
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << svg_num(view_.lo.x)
            << ' ' << svg_num(-view_.hi.y) << ' ' << svg_num(w) << ' ' << svg_num(h)
            << "\" width=\"720\" height=\"" << svg_num(720 * h / w) << "\">\n"
            << "<g transform=\"scale(1 -1)\">\n"
            << body_.str() << "</g>\n</svg>\n";
        return out.str();
    }

private:
    Box2 view_;
    double unit_ = 1;
    std::ostringstream body_;
};

}  // namespace detail

inline std::string svg_curve(const ClosedPolyCurve& c) {
    detail::SvgCanvas canvas(c.bounds());
    canvas.oriented_curve(c, detail::svg_palette(0), 0.004);
    return canvas.finish();
}

inline std::string svg_decomposition(const ClosedPolyCurve& input, const DecompositionReport& r) {
    Box2 extent;
    for (Point2 v : input.vertices) extent.expand(v);
    for (const SimpleLoop& l : r.loops)
        for (Point2 v : l.curve.vertices) extent.expand(v);
    detail::SvgCanvas canvas(extent);
    if (!input.vertices.empty()) canvas.polyline(input.vertices, true, "#9aa0a6", 0.009);
    for (std::size_t i = 0; i < r.loops.size(); ++i) {
        bool kappa = static_cast<int>(i) == r.kappa;
        canvas.oriented_curve(r.loops[i].curve, detail::svg_palette(i + 1),
                              kappa ? 0.007 : 0.0035);
    }
    return canvas.finish();
}

inline std::string svg_theorem(const TheoremCertificate& c, const std::vector<Point2>& samples) {
    Box2 extent;
    for (Point2 v : c.hull.vertices) extent.expand(v);
    for (Point2 v : samples) extent.expand(v);
    extent.expand(c.fixed_point);
    extent.expand(c.seed);
    detail::SvgCanvas canvas(extent);
    if (!c.hull.vertices.empty())
        canvas.polygon_filled(c.hull.vertices, detail::svg_palette(0), detail::svg_palette(0),
                              0.003);
    for (Point2 s : samples) canvas.dot(s, 0.0025, "#5f6368");
    canvas.dot(c.seed, 0.008, detail::svg_palette(2));
    canvas.cross(c.fixed_point, 0.02, detail::svg_palette(1));
    return canvas.finish();
}

inline std::string svg_counterexample(const CounterexampleFamily& fam) {
    const CounterexampleReport& r = fam.report;
    std::vector<Point2> orbit_pts = orbit(fam.conjugated, r.p, r.n);
    Box2 extent;
    for (Point2 v : orbit_pts) extent.expand(v);
    for (Point2 v : r.orbit_hull.vertices) extent.expand(v);
    extent.expand(r.q);
    extent.expand({-1, -1});
    extent.expand({1, 1});
    detail::SvgCanvas canvas(extent);
    if (!r.orbit_hull.vertices.empty())
        canvas.polygon_filled(r.orbit_hull.vertices, detail::svg_palette(0),
                              detail::svg_palette(0), 0.003);
    for (Point2 s : orbit_pts) canvas.dot(s, 0.006, detail::svg_palette(3));
    canvas.dot(r.p, 0.009, detail::svg_palette(2));
    canvas.cross(r.q, 0.018, detail::svg_palette(1));
    return canvas.finish();
}

}  // namespace skein
