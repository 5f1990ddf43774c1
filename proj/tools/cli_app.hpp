#pragma once

// Command-line front end.  run() takes the arguments after the program name
// and writes results to `out`, diagnostics to `err`.  Exit codes: 0 success,
// 2 invalid input or usage, 3 failed computation.

#include <hyperdirac/hyperdirac.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace hyperdirac::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_failed = 3;

namespace detail {

inline CircleSpinKind parse_spin(const std::string& s) {
    if (s == "trivial") return CircleSpinKind::Trivial;
    if (s == "nontrivial") return CircleSpinKind::Nontrivial;
    throw Error(ErrorCode::InvalidArgument, "spin must be 'trivial' or 'nontrivial'");
}

inline SpinDelta parse_delta(const std::vector<int>& v) {
    require(v.size() == 2, ErrorCode::InvalidArgument, "delta takes two bits, e.g. --delta 1,0");
    SpinDelta d{v[0], v[1]};
    d.validate();
    return d;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorCode::InvalidArgument, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline nlohmann::json certificate_json(const Tube3DCertificate& c) {
    return {{"ell", c.ell},
            {"alpha", c.alpha},
            {"delta", {c.delta.d1, c.delta.d2}},
            {"x", c.x},
            {"c0", c.c0},
            {"R", c.R},
            {"mu0", c.mu0},
            {"c1", c.c1},
            {"r_section", c.section.r},
            {"mu_at_section", c.mu_at_section},
            {"bound", c.bound},
            {"comparison_count", c.comparison_count},
            {"certified", c.certified}};
}

inline nlohmann::json track_json(const TrackFit& t) {
    return {{"slope", t.slope}, {"intercept", t.intercept}, {"deviation", t.deviation}, {"spread", t.spread}};
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Dirac spectra on hyperbolic cusps and tubes", "hyperdirac"};
    app.require_subcommand(1);

    // torus-spectrum
    auto* torus = app.add_subcommand("torus-spectrum", "Dirac spectrum of a tube section torus (CSV)");
    double t_ell = 0.0, t_alpha = 0.0, t_r = 0.0, t_cutoff = 0.0;
    std::vector<int> t_delta{0, 0};
    std::string t_operator = "d2";
    torus->add_option("--ell", t_ell, "geodesic length")->required();
    torus->add_option("--alpha", t_alpha, "holonomy angle in [-pi, pi]")->capture_default_str();
    torus->add_option("--r", t_r, "tube radius")->required();
    torus->add_option("--delta", t_delta, "spin structure bits d1,d2")->delimiter(',')->expected(2);
    torus->add_option("--cutoff", t_cutoff, "largest eigenvalue reported")->required();
    torus->add_option("--operator", t_operator, "d2 (squared operator) or d")
        ->check(CLI::IsMember({"d2", "d"}))
        ->capture_default_str();

    // circle-spectrum
    auto* circle = app.add_subcommand("circle-spectrum", "Cross-section spectrum of a circle (CSV)");
    std::string c_spin = "nontrivial";
    double c_len = 2.0 * std::numbers::pi, c_cutoff = 0.0;
    circle->add_option("--spin", c_spin, "trivial or nontrivial")->capture_default_str();
    circle->add_option("--circumference", c_len, "circle length")->capture_default_str();
    circle->add_option("--cutoff", c_cutoff, "largest |mu| reported")->required();

    // cusp-probe
    auto* probe = app.add_subcommand("cusp-probe", "Count growth over truncations of a cusp (JSON)");
    std::string p_spin = "trivial", p_file, p_geometry = "cusp";
    double p_len = 2.0 * std::numbers::pi, p_x = 1.0, p_cutoff = 0.0, p_tol = 0.2, p_a = 1.0;
    std::vector<double> p_T{20, 40, 60, 80};
    probe->add_option("--spin", p_spin, "circle spin structure of the cross-section")->capture_default_str();
    probe->add_option("--circumference", p_len, "cross-section circle length")->capture_default_str();
    probe->add_option("--cross-section", p_file, "CSV file 'mu,multiplicity' instead of a circle");
    probe->add_option("--cutoff", p_cutoff, "cross-section cutoff (default: just enough for the window)");
    probe->add_option("--x", p_x, "window half-width")->capture_default_str();
    probe->add_option("--T", p_T, "truncation lengths")->delimiter(',');
    probe->add_option("--geometry", p_geometry, "cusp or radial-h2")
        ->check(CLI::IsMember({"cusp", "radial-h2"}))
        ->capture_default_str();
    probe->add_option("--a", p_a, "left end for radial-h2")->capture_default_str();
    probe->add_option("--slope-tol", p_tol, "relative slope tolerance")->capture_default_str();

    // degenerate-2d
    auto* degen = app.add_subcommand("degenerate-2d", "Clustering sweep over ell for a 2D tube (JSON, CSV)");
    double d_x = 1.0, d_from = 1e-2, d_to = 1e-6, d_c0 = 0.0;
    int d_steps = 5;
    std::string d_spin = "trivial", d_csv;
    degen->add_option("--x", d_x, "window half-width")->capture_default_str();
    degen->add_option("--ell-from", d_from, "largest ell")->capture_default_str();
    degen->add_option("--ell-to", d_to, "smallest ell")->capture_default_str();
    degen->add_option("--steps", d_steps, "number of log-spaced ells")->capture_default_str();
    degen->add_option("--spin", d_spin, "trivial or nontrivial")->capture_default_str();
    degen->add_option("--c0", d_c0, "offset in R = log(1/ell) + c0")->capture_default_str();
    degen->add_option("--csv", d_csv, "write ell,R,count_dirichlet,count_neumann here");

    // tube3d-cert
    auto* cert = app.add_subcommand("tube3d-cert", "No-clustering certificate for a 3D tube (JSON)");
    double k_ell = 1e-6, k_alpha = 0.0, k_x = 1.0, k_c0 = 0.0;
    std::vector<int> k_delta{1, 1};
    bool k_threshold = false;
    cert->add_option("--ell", k_ell, "geodesic length")->capture_default_str();
    cert->add_option("--alpha", k_alpha, "holonomy angle")->capture_default_str();
    cert->add_option("--delta", k_delta, "spin structure bits d1,d2")->delimiter(',')->expected(2);
    cert->add_option("--x", k_x, "window half-width")->capture_default_str();
    cert->add_option("--c0", k_c0, "offset in R = log(1/ell)/2 + c0")->capture_default_str();
    cert->add_flag("--find-threshold", k_threshold, "also search the largest certified ell");

    // classify-link
    auto* link = app.add_subcommand("classify-link", "Spectrum type of a link complement (JSON)");
    std::string l_input;
    link->add_option("--input", l_input, "link diagram JSON")->required();

    // spin-census
    auto* census = app.add_subcommand("spin-census", "Spin structures on a punctured surface (JSON)");
    int s_genus = 0, s_cusps = 0;
    census->add_option("--genus", s_genus, "genus")->required();
    census->add_option("--cusps", s_cusps, "number of cusps")->required();

    // scalar-identity
    auto* scalar = app.add_subcommand("scalar-identity", "Tube potential identity residual (JSON)");
    double i_from = 0.05, i_to = 20.0;
    int i_samples = 100;
    scalar->add_option("--r-from", i_from, "smallest radius")->capture_default_str();
    scalar->add_option("--r-to", i_to, "largest radius")->capture_default_str();
    scalar->add_option("--samples", i_samples, "number of radii")->capture_default_str();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return exit_invalid;
    }

    try {
        if (torus->parsed()) {
            const TubeSection sec{t_ell, t_alpha, t_r, detail::parse_delta(t_delta)};
            sec.validate();
            const auto spec = t_operator == "d" ? torus_d_spectrum(sec.lattice(), sec.delta, t_cutoff)
                                                : torus_d2_spectrum(sec.lattice(), sec.delta, t_cutoff);
            io::write_spectrum_csv(out, spec);
        } else if (circle->parsed()) {
            io::write_cross_section_csv(out, circle_dn_spectrum({detail::parse_spin(c_spin), c_len}, c_cutoff));
        } else if (probe->parsed()) {
            require(p_x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
            const double needed = cusp_required_cutoff(p_x * p_x);
            EigenvalueMultiset section;
            if (!p_file.empty()) {
                std::istringstream in(detail::read_file(p_file));
                section = p_cutoff > 0.0 ? io::read_cross_section_csv(in, p_cutoff) : io::read_cross_section_csv(in);
            } else {
                const double cutoff = p_cutoff > 0.0 ? p_cutoff : needed;
                section = circle_dn_spectrum({detail::parse_spin(p_spin), p_len}, cutoff);
            }
            WarpedGeometry geom = p_geometry == "cusp" ? WarpedGeometry{CuspGeometry{section, p_T.front()}}
                                                       : WarpedGeometry{RadialH2Geometry{section, p_a, p_T.back()}};
            const auto r = essential_spectrum_probe(geom, p_x, p_T, {p_tol, Boundary::Dirichlet});
            nlohmann::json j{{"verdict", to_string(r.verdict)}, {"x", r.x},
                             {"slope", r.slope},                {"free_density", r.free_density},
                             {"T", r.T_list},                   {"counts", r.counts},
                             {"geometry", p_geometry}};
            out << j.dump(2) << '\n';
        } else if (degen->parsed()) {
            DegenerationSweep2D sweep{d_x, log_spaced(d_from, d_to, d_steps), detail::parse_spin(d_spin), d_c0};
            const auto fit = clustering_fit(sweep);
            if (!d_csv.empty()) {
                std::ofstream csv(d_csv);
                require(static_cast<bool>(csv), ErrorCode::InvalidArgument, "cannot write " + d_csv);
                io::write_sweep_csv(csv, fit.points);
            }
            nlohmann::json points = nlohmann::json::array();
            for (const auto& p : fit.points)
                points.push_back({{"ell", p.ell},
                                  {"R", p.R},
                                  {"count_dirichlet", p.count_dirichlet},
                                  {"count_neumann", p.count_neumann}});
            nlohmann::json j{{"x", fit.x},
                             {"spin", d_spin},
                             {"target", fit.target},
                             {"dirichlet", detail::track_json(fit.dirichlet)},
                             {"neumann", detail::track_json(fit.neumann)},
                             {"points", points}};
            out << j.dump(2) << '\n';
        } else if (cert->parsed()) {
            const SpinDelta delta = detail::parse_delta(k_delta);
            auto j = detail::certificate_json(tube3d_certificate(k_ell, k_alpha, delta, k_x, k_c0));
            if (k_threshold) {
                const auto th = find_certification_threshold(k_alpha, delta, k_x, k_c0);
                j["threshold"] = {{"found", th.found}, {"ell_star", th.ell_star}};
            }
            out << j.dump(2) << '\n';
        } else if (link->parsed()) {
            const auto diagram = parse_diagram(detail::read_file(l_input));
            const auto m = linking_matrix(diagram);
            out << verdict_json(diagram, m, classify_complement(m)).dump(2) << '\n';
        } else if (census->parsed()) {
            const auto c = surface_spin_census(s_genus, s_cusps);
            nlohmann::json subsets = nlohmann::json::array();
            for (const auto& a : c.even_subsets) subsets.push_back(a.flags);
            nlohmann::json j{{"genus", s_genus},
                             {"cusps", s_cusps},
                             {"total", c.total},
                             {"closed_surface", c.closed_surface},
                             {"even_subsets", subsets}};
            out << j.dump(2) << '\n';
        } else if (scalar->parsed()) {
            require(0.0 < i_from && i_from < i_to && i_samples >= 2, ErrorCode::InvalidArgument,
                    "need 0 < r-from < r-to and at least 2 samples");
            std::vector<double> rs, rs_norm;
            for (int i = 0; i < i_samples; ++i) {
                const double r = i_from + (i_to - i_from) * i / (i_samples - 1);
                rs.push_back(r);
                if (r >= 1.0) rs_norm.push_back(r);
            }
            nlohmann::json j{{"samples", i_samples},
                             {"max_residual", tube_scalar_identity_check(rs)},
                             {"norm_bound_max", rs_norm.empty() ? nlohmann::json(nullptr)
                                                                : nlohmann::json(tube_norm_bound_max(rs_norm))}};
            out << j.dump(2) << '\n';
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return is_validation_error(e.code()) ? exit_invalid : exit_failed;
    }
    return exit_ok;
}

} // namespace hyperdirac::cli
