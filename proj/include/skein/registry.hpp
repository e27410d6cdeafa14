#pragma once

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "diffeo.hpp"
#include "dynamics.hpp"
#include "errors.hpp"

namespace skein {

// Map descriptors: "name" or "name:key=val,key=val". A '|' chains stages
// into a pipeline applied left to right, so "a|b" sends x to b(a(x)).
//
//   identity
//   rotation:theta=0.05[,cx=0.3,cy=0.2]
//   translation:dx=1[,dy=0]
//   bump_rotation:n=8
//   tube_translation:qx=0.4,qy=0.3[,r=0.05]
//   linear_flow:a=0,b=-1,c=1,d=0,t=0.1[,cx=0,cy=0]
//   counterexample:n=8,px=0.5,py=0,qx=0.47,qy=0.17[,r=0.05]

namespace detail {

inline double param_number(const std::string& name, const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw Error("bad number '" + text + "' for parameter '" + name + "'");
    }
    if (used != text.size())
        throw Error("bad number '" + text + "' for parameter '" + name + "'");
    return v;
}

struct ParamSet {
    std::string family;
    std::map<std::string, std::string> values;

    double need(const std::string& key) const {
        auto it = values.find(key);
        if (it == values.end())
            throw Error("map '" + family + "' needs parameter '" + key + "'");
        return param_number(key, it->second);
    }
    double get(const std::string& key, double fallback) const {
        auto it = values.find(key);
        return it == values.end() ? fallback : param_number(key, it->second);
    }
};

inline ParamSet parse_params(const std::string& stage) {
    ParamSet ps;
    std::size_t colon = stage.find(':');
    ps.family = stage.substr(0, colon);
    if (ps.family.empty()) throw Error("empty map descriptor");
    if (colon == std::string::npos) return ps;
    std::istringstream rest(stage.substr(colon + 1));
    std::string item;
    while (std::getline(rest, item, ',')) {
        std::size_t eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw Error("expected key=value in '" + item + "'");
        ps.values[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return ps;
}

inline DiffeoMap make_stage(const ParamSet& ps) {
    if (ps.family == "identity") return identity_map();
    if (ps.family == "rotation")
        return rotation_map({ps.get("cx", 0), ps.get("cy", 0)}, ps.need("theta"));
    if (ps.family == "translation")
        return translation_map({ps.get("dx", 0), ps.get("dy", 0)});
    if (ps.family == "bump_rotation")
        return bump_rotation_map(static_cast<int>(ps.need("n")));
    if (ps.family == "tube_translation")
        return tube_translation_map({ps.need("qx"), ps.need("qy")}, ps.get("r", 0.05));
    if (ps.family == "linear_flow") {
        Mat2 a{ps.need("a"), ps.need("b"), ps.need("c"), ps.need("d")};
        return linear_flow_map({ps.get("cx", 0), ps.get("cy", 0)}, a, ps.need("t"));
    }
    if (ps.family == "counterexample") {
        auto fam = counterexample_family(static_cast<int>(ps.need("n")),
                                         {ps.need("px"), ps.need("py")},
                                         {ps.need("qx"), ps.need("qy")}, ps.get("r", 0.05));
        return fam.conjugated;
    }
    throw Error("unknown map family '" + ps.family +
                "' (known: identity, rotation, translation, bump_rotation, "
                "tube_translation, linear_flow, counterexample)");
}

}  // namespace detail

inline DiffeoMap resolve_map(const std::string& descriptor) {
    std::vector<DiffeoMap> stages;
    std::istringstream in(descriptor);
    std::string stage;
    while (std::getline(in, stage, '|'))
        stages.push_back(detail::make_stage(detail::parse_params(stage)));
    if (stages.empty()) throw Error("empty map descriptor");
    DiffeoMap out = stages.front();
    for (std::size_t i = 1; i < stages.size(); ++i) out = compose_map(stages[i], out);
    return out;
}

inline std::vector<DiffeoMap> resolve_maps(const std::vector<std::string>& descriptors) {
    std::vector<DiffeoMap> out;
    out.reserve(descriptors.size());
    for (const std::string& d : descriptors) out.push_back(resolve_map(d));
    return out;
}

}  // namespace skein
