#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "dynamics.hpp"
#include "errors.hpp"
#include "geom.hpp"
#include "hull.hpp"
#include "untangle.hpp"

namespace skein {

using nlohmann::json;

// All emitters go through nlohmann's default (key-sorted) object type and
// shortest-round-trip doubles, so identical values give identical bytes.

inline json point_to_json(Point2 p) { return json::array({p.x, p.y}); }

inline Point2 point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error("expected a point as [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

inline json box_to_json(const Box2& b) {
    return json{{"lo", point_to_json(b.lo)}, {"hi", point_to_json(b.hi)}};
}

inline json curve_to_json(const ClosedPolyCurve& c) {
    json verts = json::array();
    for (Point2 v : c.vertices) verts.push_back(point_to_json(v));
    return json{{"tolerance", c.tolerance}, {"vertices", std::move(verts)}};
}

inline ClosedPolyCurve curve_from_json(const json& j, double fallback_tolerance = default_tolerance) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        throw Error("curve JSON needs a \"vertices\" array");
    std::vector<Point2> vs;
    vs.reserve(j["vertices"].size());
    for (const json& v : j["vertices"]) vs.push_back(point_from_json(v));
    double tol = j.value("tolerance", fallback_tolerance);
    return build_closed_curve(std::move(vs), tol);
}

inline const char* hull_side_name(HullSide s) {
    switch (s) {
        case HullSide::inside: return "inside";
        case HullSide::boundary: return "boundary";
        default: return "outside";
    }
}

inline HullSide hull_side_from_name(const std::string& name) {
    if (name == "inside") return HullSide::inside;
    if (name == "boundary") return HullSide::boundary;
    if (name == "outside") return HullSide::outside;
    throw Error("unknown hull side '" + name + "'");
}

inline json hull_to_json(const ConvexPolygon& h) {
    json verts = json::array();
    for (Point2 v : h.vertices) verts.push_back(point_to_json(v));
    return json{{"degenerate", h.degenerate}, {"vertices", std::move(verts)}};
}

inline ConvexPolygon hull_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices"))
        throw Error("hull JSON needs a \"vertices\" array");
    ConvexPolygon h;
    for (const json& v : j["vertices"]) h.vertices.push_back(point_from_json(v));
    h.degenerate = j.value("degenerate", false);
    return h;
}

inline json loop_to_json(const SimpleLoop& l) {
    json verts = json::array();
    for (Point2 v : l.curve.vertices) verts.push_back(point_to_json(v));
    json parents = json::array();
    for (std::size_t s : l.parent_segment_map) parents.push_back(s);
    json detours = json::array();
    for (char d : l.detour_segment) detours.push_back(d != 0);
    return json{{"orientation", l.orientation},
                {"parent_segments", std::move(parents)},
                {"residual_detours", std::move(detours)},
                {"vertices", std::move(verts)}};
}

inline SimpleLoop loop_from_json(const json& j, double tolerance = default_tolerance) {
    if (!j.is_object() || !j.contains("vertices"))
        throw Error("loop JSON needs a \"vertices\" array");
    std::vector<Point2> vs;
    for (const json& v : j["vertices"]) vs.push_back(point_from_json(v));
    SimpleLoop l;
    l.curve = build_closed_curve(std::move(vs), tolerance);
    l.orientation = j.value("orientation", 0);
    return l;
}

inline json decomposition_to_json(const DecompositionReport& r,
                                  const ClosedPolyCurve* input = nullptr) {
    json loops = json::array();
    for (const SimpleLoop& l : r.loops) loops.push_back(loop_to_json(l));
    json mult = json::array();
    for (const MultiplicityCheck& m : r.multiplicity_checks)
        mult.push_back(json{{"at", point_to_json(m.at)},
                            {"curve", m.on_curve},
                            {"loops", m.on_loops}});
    json nesting = json::array();
    for (auto [inner, outer] : r.nesting_relation)
        nesting.push_back(json::array({inner, outer}));
    json additivity = json::array();
    for (const IndexAdditivitySample& s : r.index_additivity_samples)
        additivity.push_back(json{{"at", point_to_json(s.at)},
                                  {"curve_index", s.curve_index},
                                  {"loop_sum", s.loop_index_sum}});
    json out{{"index_additivity", std::move(additivity)},
             {"kappa", r.kappa},
             {"loop_count", r.loops.size()},
             {"loops", std::move(loops)},
             {"multiplicity", std::move(mult)},
             {"nesting", std::move(nesting)},
             {"notes", r.notes},
             {"retained_detour_groups", r.retained_detour_groups}};
    if (input) out["input"] = curve_to_json(*input);
    return out;
}

inline json verification_to_json(const VerificationReport& v) {
    auto prop = [](const PropertyResult& p) {
        json bad = json::array();
        for (Point2 x : p.counterexamples) bad.push_back(point_to_json(x));
        return json{{"counterexamples", std::move(bad)}, {"detail", p.detail}, {"pass", p.pass}};
    };
    return json{{"all_pass", v.all_pass()},
                {"index_additivity", prop(v.index_additivity)},
                {"multiplicity", prop(v.multiplicity)},
                {"nesting", prop(v.nesting)},
                {"segment_containment", prop(v.segment_containment)}};
}

inline json c1_estimate_to_json(const C1Estimate& e) {
    return json{{"domain", box_to_json(e.domain)},
                {"grid_step", e.grid_step},
                {"sup_derivative_deviation", e.sup_derivative_deviation},
                {"sup_displacement", e.sup_displacement}};
}

inline json capital_to_json(const CapitalPointCertificate& c) {
    return json{{"base", point_to_json(c.base)},
                {"certified_time", c.certified_time},
                {"indices", c.indices},
                {"map", c.map_label},
                {"point", point_to_json(c.point)},
                {"residual", c.residual},
                {"return_times", c.return_times}};
}

inline json theorem_to_json(const TheoremCertificate& c) {
    return json{{"fixed_point", point_to_json(c.fixed_point)},
                {"generators", c.generators},
                {"hull", hull_to_json(c.hull)},
                {"hull_membership", hull_side_name(c.hull_membership)},
                {"residuals", c.residuals},
                {"seed_point", point_to_json(c.seed)}};
}

inline TheoremCertificate theorem_from_json(const json& j) {
    TheoremCertificate c;
    c.seed = point_from_json(j.at("seed_point"));
    c.fixed_point = point_from_json(j.at("fixed_point"));
    for (const json& g : j.at("generators")) c.generators.push_back(g.get<std::string>());
    for (const json& r : j.at("residuals")) c.residuals.push_back(r.get<double>());
    c.hull = hull_from_json(j.at("hull"));
    c.hull_membership = hull_side_from_name(j.at("hull_membership").get<std::string>());
    return c;
}

inline json counterexample_to_json(const CounterexampleReport& r) {
    return json{{"fixed_grid_count", r.fixed_grid_count},
                {"fixed_grid_point", point_to_json(r.fixed_grid_point)},
                {"max_orbit_deviation", r.max_orbit_deviation},
                {"n", r.n},
                {"orbit_hull", hull_to_json(r.orbit_hull)},
                {"orbits_match", r.orbits_match},
                {"p", point_to_json(r.p)},
                {"pass", r.pass},
                {"q", point_to_json(r.q)},
                {"q_hull_clearance", r.q_hull_clearance},
                {"q_side", hull_side_name(r.q_side)},
                {"sup_displacement", r.sup_displacement},
                {"support_radius", r.support_radius},
                {"unique_grid_fixed_point", r.unique_grid_fixed_point}};
}

inline json orbit_curve_to_json(const OrbitCurve& oc) {
    return json{{"base_point", point_to_json(oc.base_point)},
                {"length", oc.length},
                {"map", oc.map_label},
                {"tolerance", oc.curve.tolerance},
                {"vertices", curve_to_json(oc.curve)["vertices"]}};
}

inline std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw Error("read failed on '" + path + "'");
    return buf.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
    if (!out) throw Error("write failed on '" + path + "'");
}

inline json parse_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw Error("malformed JSON");
    return j;
}

inline ClosedPolyCurve load_curve(const std::string& path,
                                  double fallback_tolerance = default_tolerance) {
    return curve_from_json(parse_json_text(read_text_file(path)), fallback_tolerance);
}

}  // namespace skein
