// Front end for the curve and dynamics toolkit. Exit codes: 0 success,
// 1 I/O, 2 validation, 3 winding query on the curve, 4 commutation
// failure, 5 localization failure.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "skein/json_io.hpp"
#include "skein/registry.hpp"
#include "skein/svg.hpp"
#include "skein/untangle.hpp"
#include "skein/winding.hpp"

namespace {

using namespace skein;

// Separates filesystem trouble from domain validation in the exit code.
struct IoFailure {
    std::string what;
};

std::string slurp(const std::string& path) {
    try {
        return read_text_file(path);
    } catch (const Error& e) {
        throw IoFailure{e.what()};
    }
}

void spit(const std::string& path, const std::string& text) {
    try {
        write_text_file(path, text);
    } catch (const Error& e) {
        throw IoFailure{e.what()};
    }
}

json parse_file(const std::string& path) {
    try {
        return parse_json_text(slurp(path));
    } catch (const Error& e) {
        throw IoFailure{std::string(e.what()) + " in '" + path + "'"};
    }
}

Point2 parse_point(const std::string& text) {
    std::size_t comma = text.find(',');
    if (comma == std::string::npos)
        throw Error("expected a point as x,y, got '" + text + "'");
    return {detail::param_number("x", text.substr(0, comma)),
            detail::param_number("y", text.substr(comma + 1))};
}

Box2 parse_domain(const std::string& text) {
    std::vector<double> parts;
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) parts.push_back(detail::param_number("domain", item));
    if (parts.size() != 4) throw Error("expected a domain as x0,y0,x1,y1");
    Box2 box{{parts[0], parts[1]}, {parts[2], parts[3]}};
    if (!(box.lo.x < box.hi.x) || !(box.lo.y < box.hi.y))
        throw Error("domain must have positive extent");
    return box;
}

void emit(const json& report, const std::string& out_path) {
    std::string text = dump_report(report);
    if (out_path.empty())
        std::cout << text;
    else
        spit(out_path, text);
}

struct CommonFlags {
    double tolerance = default_tolerance;
    double separation = 0;
    std::uint64_t seed = 0x5eed;
    int budget = 0;  // 0 keeps each command's default
    std::string domain;
    std::string svg_path;
    std::string out_path;
};

void add_output_flags(CLI::App* cmd, CommonFlags& fl) {
    cmd->add_option("-o,--out", fl.out_path, "Write the JSON report here instead of stdout");
    cmd->add_option("--svg", fl.svg_path, "Also render an SVG to this path");
}

int run_decompose(const std::string& input, const CommonFlags& fl, bool tol_given) {
    json j = parse_file(input);
    ClosedPolyCurve curve = curve_from_json(j, fl.tolerance);
    if (tol_given) curve.tolerance = fl.tolerance;
    DecomposeConfig cfg;
    cfg.separation = fl.separation;
    cfg.seed = fl.seed;
    if (fl.budget > 0) cfg.budget = fl.budget;
    DecompositionReport rep = decompose(curve, cfg);
    emit(decomposition_to_json(rep, &curve), fl.out_path);
    if (!fl.svg_path.empty()) spit(fl.svg_path, svg_decomposition(curve, rep));
    return 0;
}

int run_winding(const std::string& input, const std::string& point, const CommonFlags& fl,
                bool tol_given) {
    ClosedPolyCurve curve = curve_from_json(parse_file(input), fl.tolerance);
    if (tol_given) curve.tolerance = fl.tolerance;
    std::cout << winding_number(curve, parse_point(point)).value << "\n";
    return 0;
}

int run_orbit_curve(const std::string& map_desc, const std::string& start, int length,
                    const CommonFlags& fl) {
    DiffeoMap f = resolve_map(map_desc);
    OrbitCurve oc = orbit_curve(f, parse_point(start), length, fl.tolerance);
    emit(orbit_curve_to_json(oc), fl.out_path);
    if (!fl.svg_path.empty()) spit(fl.svg_path, svg_curve(oc.curve));
    return 0;
}

DynamicsConfig dynamics_config(const CommonFlags& fl) {
    DynamicsConfig cfg;
    cfg.seed = fl.seed;
    if (fl.budget > 0) cfg.max_iter = fl.budget;
    if (!fl.domain.empty()) cfg.domain = parse_domain(fl.domain);
    return cfg;
}

int run_theorem(const std::string& family_file, const std::string& start,
                const CommonFlags& fl) {
    json j = parse_file(family_file);
    if (!j.is_object() || !j.contains("generators") || !j["generators"].is_array())
        throw Error("family JSON needs a \"generators\" array of map descriptors");
    std::vector<std::string> descs;
    for (const json& g : j["generators"]) {
        if (!g.is_string()) throw Error("map descriptors must be strings");
        descs.push_back(g.get<std::string>());
    }
    std::vector<DiffeoMap> gens = resolve_maps(descs);
    DynamicsConfig cfg = dynamics_config(fl);
    Point2 p = parse_point(start);
    TheoremCertificate cert = locate_common_fixed_point(gens, p, cfg);
    emit(theorem_to_json(cert), fl.out_path);
    if (!fl.svg_path.empty())
        spit(fl.svg_path, svg_theorem(cert, orbit_cloud(gens, p, cfg.hull_samples, cfg)));
    return 0;
}

int run_counterexample(int n, const std::string& p, const std::string& q, double support_radius,
                       const CommonFlags& fl) {
    CounterexampleFamily fam =
        counterexample_family(n, parse_point(p), parse_point(q), support_radius);
    emit(counterexample_to_json(fam.report), fl.out_path);
    if (!fl.svg_path.empty()) spit(fl.svg_path, svg_counterexample(fam));
    return 0;
}

int run_render(const std::string& input, const CommonFlags& fl) {
    if (fl.svg_path.empty()) throw Error("render needs --svg <path>");
    json j = parse_file(input);
    std::string svg;
    try {
        if (j.contains("loops")) {
            DecompositionReport rep;
            for (const json& l : j["loops"]) rep.loops.push_back(loop_from_json(l));
            rep.kappa = j.value("kappa", -1);
            ClosedPolyCurve outline;
            if (j.contains("input")) outline = curve_from_json(j["input"]);
            svg = svg_decomposition(outline, rep);
        } else if (j.contains("fixed_point") && j.contains("hull")) {
            TheoremCertificate cert = theorem_from_json(j);
            svg = svg_theorem(cert, cert.hull.vertices);
        } else if (j.contains("q_side")) {
            CounterexampleFamily fam = counterexample_family(
                j.at("n").get<int>(), point_from_json(j.at("p")), point_from_json(j.at("q")),
                j.at("support_radius").get<double>());
            svg = svg_counterexample(fam);
        } else if (j.contains("vertices")) {
            svg = svg_curve(curve_from_json(j, fl.tolerance));
        } else {
            throw Error("unrecognized input: expected a curve, report, or certificate");
        }
    } catch (const json::exception& e) {
        throw Error(std::string("malformed report: ") + e.what());
    }
    spit(fl.svg_path, svg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-curve decomposition and commuting-map fixed point toolkit"};
    app.require_subcommand(1);

    CommonFlags fl;
    std::string input, point, map_desc, start, p_text, q_text;
    int length = 12, order = 8;
    double support_radius = 0.05;

    CLI::App* dec = app.add_subcommand("decompose", "Split a closed curve into simple loops");
    dec->add_option("input", input, "Curve JSON file")->required();
    auto* dec_tol = dec->add_option("--tolerance", fl.tolerance, "Contact tolerance");
    dec->add_option("--separation", fl.separation, "Overlap separation distance (0 = auto)");
    dec->add_option("--seed", fl.seed, "Sampling seed");
    dec->add_option("--budget", fl.budget, "Pass budget for the untangler");
    add_output_flags(dec, fl);

    CLI::App* win = app.add_subcommand("winding", "Winding number of a point off the curve");
    win->add_option("input", input, "Curve JSON file")->required();
    win->add_option("--point", point, "Query point as x,y")->required();
    auto* win_tol = win->add_option("--tolerance", fl.tolerance, "Contact tolerance");

    CLI::App* orb = app.add_subcommand("orbit-curve", "Close an orbit into a polygonal curve");
    orb->add_option("--map", map_desc, "Map descriptor, e.g. rotation:theta=0.9")->required();
    orb->add_option("--start", start, "Base point as x,y")->required();
    orb->add_option("--length", length, "Number of iterates")->required();
    orb->add_option("--tolerance", fl.tolerance, "Distinctness tolerance");
    add_output_flags(orb, fl);

    CLI::App* thm = app.add_subcommand("theorem",
                                       "Locate a common fixed point of commuting maps");
    thm->add_option("family", input, "Family JSON file with a \"generators\" array")
        ->required();
    thm->add_option("--start", start, "Seed point as x,y")->required();
    thm->add_option("--seed", fl.seed, "Sampling seed");
    thm->add_option("--budget", fl.budget, "Iteration budget");
    thm->add_option("--domain", fl.domain, "Working box as x0,y0,x1,y1");
    add_output_flags(thm, fl);

    CLI::App* cex = app.add_subcommand("counterexample",
                                       "Conjugated bump rotation whose fixed point leaves "
                                       "the orbit hull");
    cex->add_option("-n,--order", order, "Profile order (rotation by 2*pi/n inside the disk)")
        ->required();
    cex->add_option("--p", p_text, "Orbit base point as x,y")->required();
    cex->add_option("--q", q_text, "Carried fixed point as x,y")->required();
    cex->add_option("--support-radius", support_radius, "Carrier tube radius");
    add_output_flags(cex, fl);

    CLI::App* ren = app.add_subcommand("render", "Draw a curve, report, or certificate");
    ren->add_option("input", input, "JSON file to draw")->required();
    ren->add_option("--svg", fl.svg_path, "Output SVG path")->required();
    ren->add_option("--tolerance", fl.tolerance, "Distinctness tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(dec)) return run_decompose(input, fl, dec_tol->count() > 0);
        if (app.got_subcommand(win))
            return run_winding(input, point, fl, win_tol->count() > 0);
        if (app.got_subcommand(orb)) return run_orbit_curve(map_desc, start, length, fl);
        if (app.got_subcommand(thm)) return run_theorem(input, start, fl);
        if (app.got_subcommand(cex))
            return run_counterexample(order, p_text, q_text, support_radius, fl);
        if (app.got_subcommand(ren)) return run_render(input, fl);
    } catch (const IoFailure& e) {
        std::cerr << "error: " << e.what << "\n";
        return 1;
    } catch (const PointOnCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericallyAmbiguous& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CommutationViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const LocalizationFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const UnboundedOrbit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const NoReturns& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const DegenerateOrbitCurve& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const CommonFixCheckFailed& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 5;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
