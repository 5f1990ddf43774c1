#pragma once

// Eigenvalue counting for L = -d^2/dt^2 + V(t) on a finite interval with
// Dirichlet or Neumann endpoints.  The operator is discretized by central
// differences on a uniform vertex grid; Neumann endpoints use a reflected
// ghost node, symmetrized through the half-weight boundary mass, so the
// resulting matrix is symmetric tridiagonal and Sturm counts are exact for
// the discrete problem.

#include <hyperdirac/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace hyperdirac {

namespace potentials {

struct Zero {};

/// mu e^t + mu^2 e^{2t}: the mode potential of a cusp with warping e^{-t}.
struct Cusp {
    double mu = 0.0;
};

/// mu (ell sinh t + mu) / (ell^2 cosh^2 t): mode potential of a 2D tube.
struct Tube2D {
    double mu = 0.0;
    double ell = 1.0;
};

/// (mu cosh t + mu^2) / sinh^2 t: mode potential of hyperbolic space in
/// polar coordinates.  Singular at t = 0.
struct RadialHn {
    double mu = 0.0;
};

/// Piecewise-linear through (t[i], v[i]), constant beyond the ends.
struct Tabulated {
    std::vector<double> t;
    std::vector<double> v;
};

} // namespace potentials

using Potential = std::variant<potentials::Zero, potentials::Cusp, potentials::Tube2D,
                               potentials::RadialHn, potentials::Tabulated>;

inline double evaluate(const Potential& potential, double t) {
    return std::visit(
        [t](const auto& p) -> double {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, potentials::Zero>) {
                return 0.0;
            } else if constexpr (std::is_same_v<P, potentials::Cusp>) {
                if (p.mu == 0.0) return 0.0;
                const double e = std::exp(t);
                return p.mu * e + p.mu * p.mu * e * e;
            } else if constexpr (std::is_same_v<P, potentials::Tube2D>) {
                const double q = p.mu / (p.ell * std::cosh(t));
                return q * (std::tanh(t) + q);
            } else if constexpr (std::is_same_v<P, potentials::RadialHn>) {
                const double s = std::sinh(t);
                return (p.mu * std::cosh(t) + p.mu * p.mu) / (s * s);
            } else {
                const auto& ts = p.t;
                if (t <= ts.front()) return p.v.front();
                if (t >= ts.back()) return p.v.back();
                const auto it = std::upper_bound(ts.begin(), ts.end(), t);
                const auto j = static_cast<std::size_t>(it - ts.begin());
                const double w = (t - ts[j - 1]) / (ts[j] - ts[j - 1]);
                return (1.0 - w) * p.v[j - 1] + w * p.v[j];
            }
        },
        potential);
}

enum class Boundary { Dirichlet, Neumann };

inline const char* to_string(Boundary bc) { return bc == Boundary::Dirichlet ? "dirichlet" : "neumann"; }

/// Smallest left endpoint accepted for the singular RadialHn potential.
/// Behaviour on [0, a] is not modeled.
inline constexpr double radial_min_left = 0.1;

struct SchrodingerProblem {
    Potential potential;
    double a = 0.0;
    double b = 1.0;
    Boundary left = Boundary::Dirichlet;
    Boundary right = Boundary::Dirichlet;
    int grid_points = 64; ///< number of grid intervals

    void validate() const {
        require(std::isfinite(a) && std::isfinite(b) && a < b, ErrorCode::InvalidArgument,
                "interval must satisfy a < b");
        require(grid_points >= 16, ErrorCode::InvalidArgument, "grid_points must be >= 16");
        if (std::holds_alternative<potentials::RadialHn>(potential))
            require(a >= radial_min_left, ErrorCode::InvalidArgument,
                    "RadialHn requires a >= 0.1 (singular at t = 0)");
        if (const auto* tab = std::get_if<potentials::Tabulated>(&potential)) {
            require(!tab->t.empty() && tab->t.size() == tab->v.size(), ErrorCode::InvalidArgument,
                    "tabulated potential needs matching, nonempty samples");
            require(std::is_sorted(tab->t.begin(), tab->t.end()) &&
                        std::adjacent_find(tab->t.begin(), tab->t.end()) == tab->t.end(),
                    ErrorCode::InvalidArgument, "tabulated sample points must be strictly increasing");
        }
    }
};

/// Grid sizing rule: at least ~20 points per shortest wavelength below the
/// threshold.
inline int recommended_grid_points(double a, double b, double threshold) {
    const double n = 64.0 * (b - a) * std::sqrt(std::max(threshold, 1.0));
    return std::max(64, static_cast<int>(std::ceil(n)));
}

struct SymTridiag {
    std::vector<double> diag;
    std::vector<double> off; ///< off[i] couples unknowns i and i+1

    std::size_t size() const { return diag.size(); }
};

/// Generalized form (K + M V) u = lambda M u on the retained nodes.
struct Discretization {
    double h = 0.0;
    std::vector<double> nodes;          ///< t-values of the unknowns
    std::vector<double> stiffness_diag; ///< K
    std::vector<double> stiffness_off;
    std::vector<double> mass;      ///< lumped mass weights (1/2 on Neumann endpoints)
    std::vector<double> potential; ///< V at the nodes

    /// Standard symmetric form M^{-1/2} (K + M V) M^{-1/2}.
    SymTridiag symmetric() const {
        SymTridiag out;
        const std::size_t n = nodes.size();
        out.diag.resize(n);
        out.off.resize(n > 0 ? n - 1 : 0);
        for (std::size_t i = 0; i < n; ++i) out.diag[i] = stiffness_diag[i] / mass[i] + potential[i];
        for (std::size_t i = 0; i + 1 < n; ++i)
            out.off[i] = stiffness_off[i] / std::sqrt(mass[i] * mass[i + 1]);
        return out;
    }
};

/// Discretization on `intervals` uniform cells without the problem-level
/// grid-size invariant.
inline Discretization discretize_grid(const Potential& potential, double a, double b, Boundary left,
                                      Boundary right, int intervals) {
    require(a < b && intervals >= 2, ErrorCode::InvalidArgument, "need a < b and at least 2 intervals");
    Discretization d;
    d.h = (b - a) / intervals;
    const double inv_h2 = 1.0 / (d.h * d.h);
    const int first = left == Boundary::Dirichlet ? 1 : 0;
    const int last = right == Boundary::Dirichlet ? intervals - 1 : intervals;
    constexpr double potential_ceiling = 1e250;
    for (int i = first; i <= last; ++i) {
        const double t = i == intervals ? b : a + i * d.h;
        const bool endpoint = i == 0 || i == intervals;
        d.nodes.push_back(t);
        d.stiffness_diag.push_back(endpoint ? inv_h2 : 2.0 * inv_h2);
        d.mass.push_back(endpoint ? 0.5 : 1.0);
        const double v = evaluate(potential, t);
        d.potential.push_back(std::isnan(v) ? potential_ceiling : std::min(v, potential_ceiling));
    }
    d.stiffness_off.assign(d.nodes.empty() ? 0 : d.nodes.size() - 1, -inv_h2);
    return d;
}

inline Discretization discretize(const SchrodingerProblem& p) {
    p.validate();
    return discretize_grid(p.potential, p.a, p.b, p.left, p.right, p.grid_points);
}

struct SturmCount {
    std::size_t count = 0;
    double shift = 0.0; ///< threshold perturbation applied after a pivot breakdown
};

/// Number of eigenvalues < threshold: negative pivots of LDL^T of T - x I.
inline SturmCount sturm_count(const SymTridiag& m, double threshold) {
    double x = threshold;
    // first retry moves by 1e-12 |threshold|; when that is below the
    // resolution of the matrix entries, the step scales with the largest
    // diagonal entry and doubles per retry
    double scale = 0.0;
    for (double d : m.diag) scale = std::max(scale, std::abs(d));
    double step = 1e-12 * std::abs(threshold);
    for (int attempt = 0; attempt < 64; ++attempt) {
        std::size_t count = 0;
        bool breakdown = false;
        double d = 1.0;
        for (std::size_t i = 0; i < m.size(); ++i) {
            d = m.diag[i] - x - (i == 0 ? 0.0 : m.off[i - 1] * m.off[i - 1] / d);
            if (d == 0.0) {
                breakdown = true;
                break;
            }
            if (d < 0.0) ++count;
        }
        if (!breakdown) return {count, x - threshold};
        if (x + step == x) step = std::max(step, 1e-12 * std::max(scale, 1.0));
        x += step;
        step *= 2.0;
    }
    throw Error(ErrorCode::ResolutionExceeded, "repeated pivot breakdown in Sturm count");
}

/// Gershgorin enclosure of the spectrum.
inline std::pair<double, double> gershgorin(const SymTridiag& m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const double r = (i > 0 ? std::abs(m.off[i - 1]) : 0.0) + (i + 1 < m.size() ? std::abs(m.off[i]) : 0.0);
        lo = std::min(lo, m.diag[i] - r);
        hi = std::max(hi, m.diag[i] + r);
    }
    return {lo, hi};
}

/// k-th (0-based) eigenvalue by bisection inside [lo, hi], which must
/// satisfy count(lo) <= k < count(hi).
inline double bisect_eigenvalue(const SymTridiag& m, std::size_t k, double lo, double hi, double rel_tol) {
    // Sturm counts on graded matrices stay accurate near the local scale, so the
    // floor follows the current bracket rather than the Gershgorin bound.
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double abs_floor = eps * eps * std::max({1.0, std::abs(lo), std::abs(hi)});
    for (int it = 0; it < 400; ++it) {
        const double width = hi - lo;
        const double scale = std::max(std::abs(lo), std::abs(hi));
        if (width <= rel_tol * scale || width <= 4.0 * eps * scale || width <= abs_floor) break;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(m, mid).count > k)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

inline double kth_eigenvalue(const SymTridiag& m, std::size_t k, double rel_tol) {
    require(k < m.size(), ErrorCode::ResolutionExceeded, "eigenvalue index beyond matrix size");
    auto [lo, hi] = gershgorin(m);
    const double pad = 1e-12 * std::max({1.0, std::abs(lo), std::abs(hi)});
    return bisect_eigenvalue(m, k, lo - pad, hi + pad, rel_tol);
}

inline std::size_t count_below(const SchrodingerProblem& p, double threshold) {
    return sturm_count(discretize(p).symmetric(), threshold).count;
}

inline SchrodingerProblem refined(SchrodingerProblem p, int factor) {
    p.grid_points *= factor;
    return p;
}

/// Eigenvalues below threshold, each bracketed by bisection on grids n and
/// 2n and Richardson-extrapolated, (4 lambda_2n - lambda_n) / 3.
inline std::vector<double> eigenvalues_below(const SchrodingerProblem& p, double threshold,
                                             double rel_tol = 1e-10) {
    require(rel_tol >= 1e-12, ErrorCode::InvalidArgument, "rel_tol must be >= 1e-12");
    const SymTridiag coarse = discretize(p).symmetric();
    const SymTridiag fine = discretize(refined(p, 2)).symmetric();
    const std::size_t m = std::max(sturm_count(coarse, threshold).count, sturm_count(fine, threshold).count);
    require(m <= static_cast<std::size_t>(p.grid_points) / 4, ErrorCode::ResolutionExceeded,
            std::to_string(m) + " eigenvalues requested on a grid of " + std::to_string(p.grid_points) +
                " points");
    std::vector<double> out;
    const double tol = 0.25 * rel_tol;
    for (std::size_t k = 0; k < m; ++k) {
        const double ln = kth_eigenvalue(coarse, k, tol);
        const double l2n = kth_eigenvalue(fine, k, tol);
        const double extrapolated = (4.0 * l2n - ln) / 3.0;
        if (extrapolated < threshold) out.push_back(extrapolated);
    }
    return out;
}

/// Lowest Richardson-extrapolated eigenvalue.
inline double lowest_eigenvalue(const SchrodingerProblem& p, double rel_tol = 1e-10) {
    const double ln = kth_eigenvalue(discretize(p).symmetric(), 0, 0.25 * rel_tol);
    const double l2n = kth_eigenvalue(discretize(refined(p, 2)).symmetric(), 0, 0.25 * rel_tol);
    return (4.0 * l2n - ln) / 3.0;
}

/// Eigenvalue count on a half-open window [lo, hi).
struct CountingResult {
    std::size_t count = 0;
    std::vector<double> eigenvalues; ///< discrete eigenvalues in [lo, hi)
    double lo = 0.0;
    double hi = 0.0;
    std::size_t count_hi_minus = 0; ///< count on [lo, hi (1 - 1e-6))
    std::size_t count_hi_plus = 0;  ///< count on [lo, hi (1 + 1e-6))
    double shift = 0.0;

    bool stable_at_hi() const { return count_hi_minus == count && count_hi_plus == count; }
};

inline constexpr double sensitivity_epsilon = 1e-6;

inline CountingResult count_interval(const SymTridiag& m, double lo, double hi) {
    require(lo < hi, ErrorCode::InvalidArgument, "counting window needs lo < hi");
    const auto below_lo = sturm_count(m, lo);
    const auto below_hi = sturm_count(m, hi);
    CountingResult r;
    r.lo = lo;
    r.hi = hi;
    r.count = below_hi.count - below_lo.count;
    r.shift = std::abs(below_hi.shift) > std::abs(below_lo.shift) ? below_hi.shift : below_lo.shift;
    r.eigenvalues.reserve(r.count);
    for (std::size_t k = below_lo.count; k < below_hi.count; ++k)
        r.eigenvalues.push_back(bisect_eigenvalue(m, k, lo, hi, 1e-12));
    const double dh = hi == 0.0 ? sensitivity_epsilon : sensitivity_epsilon * std::abs(hi);
    r.count_hi_minus = sturm_count(m, hi - dh).count - below_lo.count;
    r.count_hi_plus = sturm_count(m, hi + dh).count - below_lo.count;
    return r;
}

inline CountingResult count_interval(const SchrodingerProblem& p, double lo, double hi) {
    return count_interval(discretize(p).symmetric(), lo, hi);
}

} // namespace hyperdirac
