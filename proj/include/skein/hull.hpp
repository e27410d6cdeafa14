#pragma once

#include <algorithm>
#include <vector>

#include "skein/geom.hpp"

namespace skein {

// Convex hull vertices in counterclockwise order, collinear points dropped.
// `degenerate` marks hulls with fewer than 3 extreme points (all input
// points on one segment).
struct ConvexPolygon {
    std::vector<Point2> vertices;
    bool degenerate = false;
};

inline ConvexPolygon convex_hull(std::vector<Point2> pts, double tolerance = default_tolerance) {
    ConvexPolygon out;
    std::sort(pts.begin(), pts.end(), [](Point2 l, Point2 r) {
        return l.x < r.x || (l.x == r.x && l.y < r.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [&](Point2 l, Point2 r) { return dist(l, r) <= tolerance; }),
              pts.end());
    if (pts.size() <= 2) {
        out.vertices = pts;
        out.degenerate = true;
        return out;
    }
    auto build = [&](auto begin, auto end, std::vector<Point2>& chain) {
        for (auto it = begin; it != end; ++it) {
            while (chain.size() >= 2 &&
                   cross(chain[chain.size() - 1] - chain[chain.size() - 2],
                         *it - chain[chain.size() - 2]) <= tolerance)
                chain.pop_back();
            chain.push_back(*it);
        }
    };
    std::vector<Point2> lower, upper;
    build(pts.begin(), pts.end(), lower);
    build(pts.rbegin(), pts.rend(), upper);
    lower.pop_back();
    upper.pop_back();
    lower.insert(lower.end(), upper.begin(), upper.end());
    out.vertices = std::move(lower);
    out.degenerate = out.vertices.size() < 3;
    return out;
}

enum class HullSide { inside, boundary, outside };

inline HullSide point_in_hull(Point2 p, const ConvexPolygon& hull,
                              double tolerance = default_tolerance) {
    const auto& v = hull.vertices;
    if (v.empty()) return HullSide::outside;
    if (v.size() == 1)
        return dist(p, v[0]) <= tolerance ? HullSide::boundary : HullSide::outside;
    if (hull.degenerate) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i)
            if (point_segment_distance(p, {v[i], v[i + 1]}) <= tolerance)
                return HullSide::boundary;
        return HullSide::outside;
    }
    bool on_edge = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Point2 a = v[i], b = v[(i + 1) % v.size()];
        if (point_segment_distance(p, {a, b}) <= tolerance) {
            on_edge = true;
            continue;
        }
        if (cross(b - a, p - a) < 0) return HullSide::outside;
    }
    return on_edge ? HullSide::boundary : HullSide::inside;
}

}  // namespace skein
