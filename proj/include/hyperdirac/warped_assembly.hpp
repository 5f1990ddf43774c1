#pragma once

// Separation of variables on warped products dt^2 + rho(t)^2 g_N: the square
// of the Dirac operator splits into 1D operators L_mu = -d^2/dt^2 + V_mu,
// one per cross-section eigenvalue mu, and counting functions add up.

#include <hyperdirac/error.hpp>
#include <hyperdirac/lattice_spectra.hpp>
#include <hyperdirac/parallel.hpp>
#include <hyperdirac/schrodinger1d.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace hyperdirac {

/// Cusp end N x [0, T] with metric e^{-2t} g_N + dt^2, Dirichlet at T.
struct CuspGeometry {
    EigenvalueMultiset cross_section; ///< spectrum of D^N, symmetric
    double T = 20.0;
};

/// Tube around a closed geodesic of length ell in a hyperbolic surface,
/// metric ell^2 cosh^2 t dtheta^2 + dt^2 on [-R, R] with theta in R/Z and
/// R = log(1/ell) + c0.
struct Tube2DGeometry {
    double ell = 1e-3;
    CircleSpinKind spin = CircleSpinKind::Trivial;
    double c0 = 0.0;
    /// Nonzero modes with |mu| <= solve_window are solved numerically even
    /// when the pointwise bound eliminates them.
    double solve_window = 0.0;

    double R() const { return std::log(1.0 / ell) + c0; }
};

/// Hyperbolic plane in polar coordinates, metric sinh^2 t dtheta^2 + dt^2 on
/// [a, T].  Only the modes of cross_section are assembled, so counts are
/// lower bounds for the full operator.
struct RadialH2Geometry {
    EigenvalueMultiset cross_section;
    double a = 1.0;
    double T = 20.0;
};

using WarpedGeometry = std::variant<CuspGeometry, Tube2DGeometry, RadialH2Geometry>;

/// Spectrum of D^N on the tube circle theta in R/Z, |mu| <= cutoff.
inline EigenvalueMultiset tube_circle_spectrum(CircleSpinKind spin, double cutoff) {
    return circle_dn_spectrum({spin, 1.0}, cutoff);
}

struct Mode {
    double mu = 0.0;
    int multiplicity = 0;
    SchrodingerProblem problem;
};

struct OmittedMode {
    double mu = 0.0;
    int multiplicity = 0;
    double lower_bound = 0.0; ///< pointwise lower bound of V_mu on the interval
};

struct ModeFamily {
    double threshold = 0.0;
    std::vector<Mode> modes;          ///< sorted by mu
    std::vector<OmittedMode> omitted; ///< listed omitted modes (a finite sample)
    std::string certificate;          ///< why no omitted mode can reach the threshold
};

/// Smallest |mu| beyond which mu^2 - |mu| > threshold.
inline double cusp_required_cutoff(double threshold) {
    return 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * threshold));
}

inline void validate(const WarpedGeometry& geom) {
    std::visit(
        [](const auto& g) {
            using G = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<G, CuspGeometry>) {
                require(std::isfinite(g.T) && g.T > 0.0, ErrorCode::InvalidArgument, "cusp truncation T must be positive");
                require(g.cross_section.is_symmetric(), ErrorCode::MalformedInput,
                        "cross-section spectrum must be symmetric");
            } else if constexpr (std::is_same_v<G, Tube2DGeometry>) {
                require(std::isfinite(g.ell) && g.ell > 0.0 && g.ell < 1.0, ErrorCode::InvalidArgument,
                        "tube requires 0 < ell < 1");
                require(std::isfinite(g.c0) && g.R() > 0.0, ErrorCode::InvalidArgument,
                        "tube half-length R = log(1/ell) + c0 must be positive");
            } else {
                require(g.a >= radial_min_left && g.a < g.T, ErrorCode::InvalidArgument,
                        "radial interval needs 0.1 <= a < T");
                require(g.cross_section.is_symmetric(), ErrorCode::MalformedInput,
                        "cross-section spectrum must be symmetric");
            }
        },
        geom);
}

/// 1D problem of mode mu.  `bc` applies to the end facing the compact part;
/// truncated ends carry Dirichlet conditions, tube ends carry `bc` on both.
inline SchrodingerProblem mode_problem(const WarpedGeometry& geom, double mu, double threshold, Boundary bc) {
    return std::visit(
        [&](const auto& g) -> SchrodingerProblem {
            using G = std::decay_t<decltype(g)>;
            SchrodingerProblem p;
            if constexpr (std::is_same_v<G, CuspGeometry>) {
                p = {potentials::Cusp{mu}, 0.0, g.T, bc, Boundary::Dirichlet, 0};
            } else if constexpr (std::is_same_v<G, Tube2DGeometry>) {
                p = {potentials::Tube2D{mu, g.ell}, -g.R(), g.R(), bc, bc, 0};
            } else {
                p = {potentials::RadialHn{mu}, g.a, g.T, bc, Boundary::Dirichlet, 0};
            }
            p.grid_points = recommended_grid_points(p.a, p.b, threshold);
            return p;
        },
        geom);
}

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

inline ModeFamily cusp_modes(const WarpedGeometry& geom, const CuspGeometry& g, double threshold, Boundary bc) {
    const double needed = cusp_required_cutoff(threshold);
    require(g.cross_section.cutoff() >= needed, ErrorCode::IncompleteSpectrum,
            "cross-section cutoff " + format_double(g.cross_section.cutoff()) + " is below the required " +
                format_double(needed));
    ModeFamily f;
    f.threshold = threshold;
    for (const auto& e : g.cross_section.entries()) {
        const double lower = e.value * e.value - std::abs(e.value);
        const bool exceptional = e.value > -0.5 && e.value < 0.0;
        if (lower <= threshold || exceptional)
            f.modes.push_back({e.value, e.multiplicity, mode_problem(geom, e.value, threshold, bc)});
        else
            f.omitted.push_back({e.value, e.multiplicity, lower});
    }
    f.certificate = "V_mu >= mu^2 - |mu| for |mu| >= 1/2; omitted modes have mu^2 - |mu| > " +
                    format_double(threshold) + "; cross-section complete up to |mu| = " +
                    format_double(g.cross_section.cutoff()) + " >= " + format_double(needed);
    return f;
}

inline ModeFamily tube_modes(const WarpedGeometry& geom, const Tube2DGeometry& g, double threshold, Boundary bc) {
    // |mu| / (ell cosh t) >= y on [-R, R] with y = |mu| / (ell cosh R), and
    // V_mu = q (tanh t + q) >= q^2 - |q| >= y (y - 1) whenever y >= 1/2.
    const double scale = g.ell * std::cosh(g.R());
    const double y_needed = std::max(0.5, cusp_required_cutoff(threshold));
    const double needed = std::max(y_needed * scale, g.solve_window);
    // list a few omitted levels beyond the retained range
    const double listed = needed + 3.0 * 2.0 * std::numbers::pi;
    const auto spectrum = tube_circle_spectrum(g.spin, listed);
    ModeFamily f;
    f.threshold = threshold;
    for (const auto& e : spectrum.entries()) {
        const double y = std::abs(e.value) / scale;
        const double lower = y >= 0.5 ? y * (y - 1.0) : -0.25;
        const bool forced = e.value != 0.0 && std::abs(e.value) <= g.solve_window;
        if (lower <= threshold || forced)
            f.modes.push_back({e.value, e.multiplicity, mode_problem(geom, e.value, threshold, bc)});
        else
            f.omitted.push_back({e.value, e.multiplicity, lower});
    }
    f.certificate = "V_mu >= y (y - 1) with y = |mu| / (ell cosh R) >= 1/2; omitted modes have y (y - 1) > " +
                    format_double(threshold) + "; circle spectrum generated up to |mu| = " + format_double(listed);
    return f;
}

inline ModeFamily radial_modes(const WarpedGeometry& geom, const RadialH2Geometry& g, double threshold, Boundary bc) {
    ModeFamily f;
    f.threshold = threshold;
    for (const auto& e : g.cross_section.entries())
        f.modes.push_back({e.value, e.multiplicity, mode_problem(geom, e.value, threshold, bc)});
    f.certificate = "mode window |mu| <= " + format_double(g.cross_section.cutoff()) +
                    "; V_mu -> 0 for every mu, so omitted modes can contribute and counts are lower bounds";
    return f;
}

} // namespace detail

/// Modes that can carry eigenvalues below `threshold`, plus a certificate
/// for everything omitted.
inline ModeFamily build_modes(const WarpedGeometry& geom, double threshold, Boundary bc) {
    require(std::isfinite(threshold) && threshold > 0.0, ErrorCode::InvalidArgument, "threshold must be positive");
    validate(geom);
    if (const auto* c = std::get_if<CuspGeometry>(&geom)) return detail::cusp_modes(geom, *c, threshold, bc);
    if (const auto* t = std::get_if<Tube2DGeometry>(&geom)) return detail::tube_modes(geom, *t, threshold, bc);
    return detail::radial_modes(geom, std::get<RadialH2Geometry>(geom), threshold, bc);
}

struct ModeCount {
    double mu = 0.0;
    int multiplicity = 0;
    std::size_t count = 0; ///< eigenvalues of L_mu in the window, without multiplicity
};

struct AssembledCount {
    CountingResult total; ///< eigenvalues listed with multiplicity
    std::vector<ModeCount> per_mode;
    ModeFamily family;
};

/// Counts of all modes of `family` in [lo, hi), summed in mu order.
inline AssembledCount assemble(ModeFamily family, double lo, double hi) {
    require(lo < hi, ErrorCode::InvalidArgument, "counting window needs lo < hi");
    const auto results = parallel_map<CountingResult>(
        family.modes.size(), [&](std::size_t i) { return count_interval(family.modes[i].problem, lo, hi); });
    AssembledCount out;
    out.total.lo = lo;
    out.total.hi = hi;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto m = static_cast<std::size_t>(family.modes[i].multiplicity);
        const auto& r = results[i];
        out.total.count += m * r.count;
        out.total.count_hi_minus += m * r.count_hi_minus;
        out.total.count_hi_plus += m * r.count_hi_plus;
        if (std::abs(r.shift) > std::abs(out.total.shift)) out.total.shift = r.shift;
        for (double ev : r.eigenvalues) out.total.eigenvalues.insert(out.total.eigenvalues.end(), m, ev);
        out.per_mode.push_back({family.modes[i].mu, family.modes[i].multiplicity, r.count});
    }
    std::sort(out.total.eigenvalues.begin(), out.total.eigenvalues.end());
    out.family = std::move(family);
    return out;
}

/// Counting function of the squared Dirac operator on the geometry over
/// [lo, hi), assembled from the retained modes.
inline AssembledCount assembled_count(const WarpedGeometry& geom, double lo, double hi, Boundary bc) {
    require(lo < hi, ErrorCode::InvalidArgument, "counting window needs lo < hi");
    return assemble(build_modes(geom, hi, bc), lo, hi);
}

enum class GrowthVerdict { DiscreteLike, EssentialLike };

inline const char* to_string(GrowthVerdict v) {
    return v == GrowthVerdict::DiscreteLike ? "DiscreteLike" : "EssentialLike";
}

struct ProbeOptions {
    double slope_tolerance = 0.2; ///< relative, against the free-mode density
    Boundary bc = Boundary::Dirichlet;
};

struct ProbeResult {
    GrowthVerdict verdict = GrowthVerdict::DiscreteLike;
    double x = 0.0;
    double slope = 0.0;         ///< least-squares slope of count vs T
    double free_density = 0.0;  ///< (multiplicity of free modes) x / pi
    std::vector<double> T_list;
    std::vector<std::size_t> counts;
};

/// Least-squares line through (xs, ys); returns {slope, intercept}.
inline std::pair<double, double> least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
    return {slope, my - slope * mx};
}

/// Counts [0, x^2) over a sweep of truncations T and decides between
/// linear growth at the free-mode density and stabilization.
inline ProbeResult essential_spectrum_probe(const WarpedGeometry& base, double x, const std::vector<double>& T_list,
                                            const ProbeOptions& opt = {}) {
    require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
    require(T_list.size() >= 4, ErrorCode::InvalidArgument, "probe needs at least 4 truncations");
    require(std::adjacent_find(T_list.begin(), T_list.end(), std::greater_equal<>()) == T_list.end(),
            ErrorCode::InvalidArgument, "truncations must be strictly increasing");
    require(!std::holds_alternative<Tube2DGeometry>(base), ErrorCode::InvalidArgument,
            "the probe applies to cusp and radial geometries");

    int free_mult = 0;
    if (const auto* c = std::get_if<CuspGeometry>(&base))
        free_mult = kernel_multiplicity(c->cross_section);
    else
        free_mult = std::get<RadialH2Geometry>(base).cross_section.total_multiplicity();

    ProbeResult res;
    res.x = x;
    res.T_list = T_list;
    res.free_density = free_mult * x / std::numbers::pi;
    std::vector<double> ys;
    for (double T : T_list) {
        WarpedGeometry g = base;
        std::visit(
            [T](auto& geom) {
                if constexpr (!std::is_same_v<std::decay_t<decltype(geom)>, Tube2DGeometry>) geom.T = T;
            },
            g);
        const std::size_t c = assembled_count(g, 0.0, x * x, opt.bc).total.count;
        res.counts.push_back(c);
        ys.push_back(static_cast<double>(c));
    }
    res.slope = least_squares(T_list, ys).first;

    if (res.free_density > 0.0 && std::abs(res.slope - res.free_density) <= opt.slope_tolerance * res.free_density) {
        res.verdict = GrowthVerdict::EssentialLike;
        return res;
    }
    const std::size_t n = res.counts.size();
    if (free_mult == 0 && res.counts[n - 1] == res.counts[n - 2]) {
        res.verdict = GrowthVerdict::DiscreteLike;
        return res;
    }
    std::string seq;
    for (auto c : res.counts) seq += (seq.empty() ? "" : ",") + std::to_string(c);
    throw Error(ErrorCode::AmbiguousGrowth, "counts [" + seq + "] slope " + detail::format_double(res.slope) +
                                                " vs free density " + detail::format_double(res.free_density));
}

} // namespace hyperdirac
