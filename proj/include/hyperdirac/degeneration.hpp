#pragma once

// Degenerating tubes.  In 2D the free mode of the trivial spin structure
// produces (4x/pi) log(1/ell) eigenvalues in (-x, x); in 3D the potential
// bound on the middle part of a tube with nontrivial spin structure rules
// out any eigenvalue there.

#include <hyperdirac/error.hpp>
#include <hyperdirac/lattice_spectra.hpp>
#include <hyperdirac/parallel.hpp>
#include <hyperdirac/schrodinger1d.hpp>
#include <hyperdirac/warped_assembly.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <tuple>
#include <utility>
#include <vector>

namespace hyperdirac {

/// Lower end of the 2D counting window: D^2 = nabla*nabla - 1/2 on a
/// hyperbolic surface, so [-1/2, x^2) captures every eigenvalue of D^2
/// below x^2 with room to spare around 0.
inline constexpr double tube2d_window_floor = -0.5;

/// Count of D^2 eigenvalues in [-1/2, x^2) on the 2D tube [-R, R].
inline AssembledCount tube2d_count(double ell, double x, CircleSpinKind spin, double c0, Boundary bc,
                                   double solve_window = 0.0) {
    require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
    Tube2DGeometry g{ell, spin, c0, solve_window};
    return assembled_count(WarpedGeometry{g}, tube2d_window_floor, x * x, bc);
}

struct DegenerationSweep2D {
    double x = 1.0;
    std::vector<double> ells; ///< decreasing, all in (0, 1)
    CircleSpinKind spin = CircleSpinKind::Trivial;
    double c0 = 0.0;

    void validate() const {
        require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
        for (std::size_t i = 0; i < ells.size(); ++i) {
            require(std::isfinite(ells[i]) && ells[i] > 0.0 && ells[i] < 1.0, ErrorCode::InvalidArgument,
                    "every ell must lie in (0, 1)");
            require(i == 0 || ells[i] < ells[i - 1], ErrorCode::InvalidArgument, "ells must be decreasing");
        }
        require(ells.size() >= 4, ErrorCode::InsufficientSweep, "sweep needs at least 4 values of ell");
        require(std::log10(ells.front() / ells.back()) >= 3.0 - 1e-9, ErrorCode::InsufficientSweep,
                "sweep must span at least 3 decades of ell");
    }
};

/// Log-spaced ells from `from` down to `to`, both included.
inline std::vector<double> log_spaced(double from, double to, int steps) {
    require(from > 0.0 && to > 0.0 && steps >= 2, ErrorCode::InvalidArgument,
            "log spacing needs positive endpoints and at least 2 steps");
    std::vector<double> out;
    const double a = std::log10(from);
    const double b = std::log10(to);
    for (int i = 0; i < steps; ++i) out.push_back(std::pow(10.0, a + (b - a) * i / (steps - 1)));
    return out;
}

struct SweepPoint {
    double ell = 0.0;
    double R = 0.0;
    std::size_t count_dirichlet = 0;
    std::size_t count_neumann = 0;
    std::size_t retained_modes = 0;
};

struct TrackFit {
    double slope = 0.0; ///< per unit log(1/ell)
    double intercept = 0.0;
    double deviation = 0.0; ///< slope / target - 1 (trivial spin only)
    std::size_t spread = 0; ///< max - min count
};

struct ClusterFit {
    double x = 0.0;
    CircleSpinKind spin = CircleSpinKind::Trivial;
    std::vector<SweepPoint> points;
    double target = 0.0; ///< 4x/pi for trivial spin, 0 otherwise
    TrackFit dirichlet;
    TrackFit neumann;
};

inline TrackFit fit_track(const std::vector<double>& logs, const std::vector<double>& counts, double target) {
    TrackFit t;
    std::tie(t.slope, t.intercept) = least_squares(logs, counts);
    t.deviation = target > 0.0 ? t.slope / target - 1.0 : 0.0;
    const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
    t.spread = static_cast<std::size_t>(*hi - *lo);
    return t;
}

/// Tube counts with both boundary conditions over the sweep and
/// least-squares slopes against log(1/ell).
inline ClusterFit clustering_fit(const DegenerationSweep2D& sweep) {
    sweep.validate();
    ClusterFit fit;
    fit.x = sweep.x;
    fit.spin = sweep.spin;
    fit.target = sweep.spin == CircleSpinKind::Trivial ? 4.0 * sweep.x / std::numbers::pi : 0.0;
    fit.points = parallel_map<SweepPoint>(sweep.ells.size(), [&](std::size_t i) {
        const double ell = sweep.ells[i];
        const auto d = tube2d_count(ell, sweep.x, sweep.spin, sweep.c0, Boundary::Dirichlet);
        const auto n = tube2d_count(ell, sweep.x, sweep.spin, sweep.c0, Boundary::Neumann);
        return SweepPoint{ell, std::log(1.0 / ell) + sweep.c0, d.total.count, n.total.count,
                          d.family.modes.size()};
    });
    std::vector<double> logs, cd, cn;
    for (const auto& p : fit.points) {
        logs.push_back(std::log(1.0 / p.ell));
        cd.push_back(static_cast<double>(p.count_dirichlet));
        cn.push_back(static_cast<double>(p.count_neumann));
    }
    fit.dirichlet = fit_track(logs, cd, fit.target);
    fit.neumann = fit_track(logs, cn, fit.target);
    return fit;
}

/// Minimal c1 >= 0 with e^{c1} mu0 (e^{c1} mu0 - 4) - 1 >= x^2: the larger
/// root y* = 2 + sqrt(5 + x^2) of y (y - 4) - 1 = x^2, divided by mu0.
inline double minimal_c1(double mu0, double x) {
    require(mu0 > 0.0 && x > 0.0, ErrorCode::InvalidArgument, "mu0 and x must be positive");
    const double y_star = 2.0 + std::sqrt(5.0 + x * x);
    return std::max(0.0, std::log(y_star / mu0));
}

/// tanh^2 r + coth^2 r - 2 = 4 / sinh^2(2r), the curvature part of the
/// tube potential.
inline double tube_curvature_term(double r) {
    const double s = std::sinh(2.0 * r);
    return 4.0 / (s * s);
}

/// Shortest middle part [1, R - c1] accepted.  On shorter intervals the
/// stiffness 1/h^2 of the comparison grid swamps the potential in rounding.
inline constexpr double tube3d_min_middle_length = 1e-3;

struct Tube3DCertificate {
    double ell = 0.0;
    double alpha = 0.0;
    SpinDelta delta;
    double x = 0.0;
    double c0 = 0.0;
    double R = 0.0;
    double mu0 = 0.0; ///< smallest positive D eigenvalue of the section torus at r = R
    double c1 = 0.0;
    TubeSection section; ///< section torus at r = R - c1
    double mu_at_section = 0.0;
    double bound = 0.0; ///< min over [1, R - c1] of tanh^2 + coth^2 - 2 + mu (mu - 4)
    std::size_t comparison_count = 0; ///< Neumann count of -d^2/dr^2 + bound below x^2
    bool certified = false;
};

/// Certifies that the middle part T[1, R - c1] of a 3D tube contributes no
/// eigenvalue of D^2 below x^2.  The section eigenvalue branches decrease in
/// r, so the bound is evaluated at the endpoint r = R - c1.
inline Tube3DCertificate tube3d_certificate(double ell, double alpha, SpinDelta delta, double x, double c0 = 0.0) {
    delta.validate();
    require(!delta.is_trivial(), ErrorCode::DeltaTrivial,
            "the trivial spin structure does not extend over a solid tube");
    require(std::isfinite(x) && x > 0.0, ErrorCode::InvalidArgument, "x must be positive");
    require(std::isfinite(ell) && ell > 0.0 && ell < 1.0, ErrorCode::InvalidArgument, "ell must lie in (0, 1)");
    require(std::isfinite(alpha) && std::abs(alpha) <= std::numbers::pi, ErrorCode::InvalidArgument,
            "alpha must lie in [-pi, pi]");
    require(std::isfinite(c0), ErrorCode::InvalidArgument, "c0 must be finite");

    Tube3DCertificate c;
    c.ell = ell;
    c.alpha = alpha;
    c.delta = delta;
    c.x = x;
    c.c0 = c0;
    c.R = 0.5 * std::log(1.0 / ell) + c0;
    require(c.R > 1.0, ErrorCode::EllTooLarge, "R = 1/2 log(1/ell) + c0 must exceed 1");

    const TubeSection outer{ell, alpha, c.R, delta};
    c.mu0 = torus_smallest_positive_dirac(outer.lattice(), delta);
    c.c1 = minimal_c1(c.mu0, x);
    const double r_end = c.R - c.c1;
    require(r_end > 1.0 + tube3d_min_middle_length, ErrorCode::EllTooLarge,
            "R - c1 = " + detail::format_double(r_end) + " leaves no middle part [1, R - c1]");

    c.section = {ell, alpha, r_end, delta};
    c.mu_at_section = torus_smallest_positive_dirac(c.section.lattice(), delta);
    const double mu = c.mu_at_section;
    c.bound = tube_curvature_term(r_end) + mu * (mu - 4.0);
    c.certified = std::exp(c.c1) * c.mu0 > 4.0 && mu >= 4.0 && c.bound > x * x;

    SchrodingerProblem comparison{potentials::Tabulated{{1.0}, {c.bound}}, 1.0, r_end, Boundary::Neumann,
                                  Boundary::Neumann, 0};
    comparison.grid_points = std::max(16, recommended_grid_points(1.0, r_end, x * x));
    c.comparison_count = count_interval(comparison, -1.5, x * x).count;
    return c;
}

struct CertificationThreshold {
    bool found = false;
    double ell_star = 0.0; ///< certified for every checked ell <= ell_star
    std::vector<std::pair<double, bool>> checked; ///< (ell, certified), decreasing ell
};

inline bool certifies(double ell, double alpha, SpinDelta delta, double x, double c0) {
    try {
        const auto c = tube3d_certificate(ell, alpha, delta, x, c0);
        return c.certified && c.comparison_count == 0;
    } catch (const Error& e) {
        if (e.code() == ErrorCode::DeltaTrivial) throw;
        return false;
    }
}

/// Largest ell* such that the certificate holds on a log grid of ell from
/// ell_min up to ell*, refined by bisection in log ell against the first
/// failing grid point above it.
inline CertificationThreshold find_certification_threshold(double alpha, SpinDelta delta, double x, double c0 = 0.0,
                                                           double ell_min = 1e-10, double ell_max = 0.5,
                                                           int per_decade = 8) {
    require(!delta.is_trivial(), ErrorCode::DeltaTrivial,
            "the trivial spin structure does not extend over a solid tube");
    require(0.0 < ell_min && ell_min < ell_max && ell_max < 1.0 && per_decade >= 1, ErrorCode::InvalidArgument,
            "need 0 < ell_min < ell_max < 1");
    const int steps = std::max(2, static_cast<int>(std::ceil(std::log10(ell_max / ell_min) * per_decade)) + 1);
    const auto grid = log_spaced(ell_max, ell_min, steps);
    const auto verdicts = parallel_map<char>(grid.size(), [&](std::size_t i) {
        return static_cast<char>(certifies(grid[i], alpha, delta, x, c0));
    });

    CertificationThreshold out;
    for (std::size_t i = 0; i < grid.size(); ++i) out.checked.emplace_back(grid[i], verdicts[i] != 0);
    // walk up from the smallest ell while certification holds
    std::size_t good = grid.size();
    while (good > 0 && verdicts[good - 1]) --good;
    if (good == grid.size()) return out;
    out.found = true;
    if (good == 0) {
        out.ell_star = grid.front();
        return out;
    }
    double lo = std::log(grid[good]);     // certified
    double hi = std::log(grid[good - 1]); // not certified
    for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (certifies(std::exp(mid), alpha, delta, x, c0))
            lo = mid;
        else
            hi = mid;
    }
    // At the boundary bound == x^2 up to rounding, so back off by a small
    // verified margin; 1e-6 in ell moves the bound by far more than rounding.
    double margin = 1e-6;
    double ell_star = std::exp(lo) * (1.0 - margin);
    while (!certifies(ell_star, alpha, delta, x, c0) && margin < 1e-2) {
        margin *= 4.0;
        ell_star = std::exp(lo) * (1.0 - margin);
    }
    out.ell_star = ell_star;
    return out;
}

/// Max |(-dH/dr + |B|^2/2 - 1) - (tanh^2 r + coth^2 r - 2)| for the tube
/// foliation, H = (tanh r + coth r)/2, |B|^2 = tanh^2 r + coth^2 r, and the
/// Ricci term -1 of curvature -1 in dimension 3.
inline double tube_scalar_identity_check(const std::vector<double>& r_samples) {
    double worst = 0.0;
    for (double r : r_samples) {
        require(std::isfinite(r) && r > 0.0, ErrorCode::InvalidArgument, "sample radii must be positive");
        const double th = std::tanh(r);
        const double cth = 1.0 / th;
        const double sech = 1.0 / std::cosh(r);
        const double csch = 1.0 / std::sinh(r);
        const double dH = 0.5 * (sech * sech - csch * csch);
        const double B2 = th * th + cth * cth;
        const double ricci = -1.0;
        const double foliation = -dH + 0.5 * B2 + ricci;
        const double tube = th * th + cth * cth - 2.0;
        worst = std::max(worst, std::abs(foliation - tube));
    }
    return worst;
}

/// Max over the samples of 4 (tanh^2 r + coth^2 r), the constant in the
/// estimate of the leafwise operator; stays <= 16 for r >= 1.
inline double tube_norm_bound_max(const std::vector<double>& r_samples) {
    double worst = 0.0;
    for (double r : r_samples) {
        require(std::isfinite(r) && r >= 1.0, ErrorCode::InvalidArgument, "norm bound is stated for r >= 1");
        const double th = std::tanh(r);
        worst = std::max(worst, 4.0 * (th * th + 1.0 / (th * th)));
    }
    return worst;
}

} // namespace hyperdirac
