#pragma once

// Dirac spectra of flat circles and 2-tori for every spin structure, including
// the radius-dependent section tori of a tube around a short closed geodesic.

#include <hyperdirac/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace hyperdirac {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

constexpr Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
constexpr Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
constexpr Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
constexpr double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Basis (w1, w2) of a rank-2 lattice in the plane.
struct Lattice2 {
    Vec2 w1;
    Vec2 w2;

    double determinant() const { return cross(w1, w2); }

    /// Throws DegenerateLattice when |det| < 1e-12 |w1| |w2|.
    void validate() const {
        const double scale = norm(w1) * norm(w2);
        require(std::isfinite(scale) && scale > 0.0 &&
                    std::abs(determinant()) >= 1e-12 * scale,
                ErrorCode::DegenerateLattice, "basis vectors are (nearly) linearly dependent");
    }
};

/// Spin structure on a 2-torus: the spinor picks up (-1)^{d_j} along w_j.
/// (0,0) is the trivial spin structure, the only one with harmonic spinors.
struct SpinDelta {
    int d1 = 0;
    int d2 = 0;

    bool is_trivial() const { return d1 == 0 && d2 == 0; }

    void validate() const {
        require((d1 == 0 || d1 == 1) && (d2 == 0 || d2 == 1), ErrorCode::InvalidArgument,
                "spin structure components must be 0 or 1");
    }
};

enum class CircleSpinKind { Trivial, Nontrivial };

struct CircleSpin {
    CircleSpinKind kind = CircleSpinKind::Nontrivial;
    double circumference = 1.0;

    void validate() const {
        require(std::isfinite(circumference) && circumference > 0.0, ErrorCode::InvalidArgument,
                "circle circumference must be positive");
    }
};

/// Section torus at distance r from a closed geodesic of length ell with
/// holonomy angle alpha.  Its lattice is spanned by (2 pi sinh r, 0) and
/// (alpha sinh r, ell cosh r).
struct TubeSection {
    double ell = 0.0;
    double alpha = 0.0;
    double r = 0.0;
    SpinDelta delta;

    void validate() const {
        require(std::isfinite(ell) && ell > 0.0, ErrorCode::InvalidArgument, "ell must be positive");
        require(std::isfinite(alpha) && std::abs(alpha) <= std::numbers::pi, ErrorCode::InvalidArgument,
                "alpha must lie in [-pi, pi]");
        require(std::isfinite(r) && r > 0.0, ErrorCode::InvalidArgument, "r must be positive");
        delta.validate();
    }

    Lattice2 lattice() const {
        return {{2.0 * std::numbers::pi * std::sinh(r), 0.0},
                {alpha * std::sinh(r), ell * std::cosh(r)}};
    }
};

struct SpectralEntry {
    double value = 0.0;
    int multiplicity = 0;

    friend bool operator==(const SpectralEntry&, const SpectralEntry&) = default;
};

/// Sorted eigenvalues with multiplicities.  Every eigenvalue with
/// |value| <= cutoff is listed; nothing is known beyond the cutoff.
class EigenvalueMultiset {
public:
    static constexpr double coalesce_tolerance = 1e-9;

    EigenvalueMultiset() = default;

    /// Validating constructor for already-coalesced data.
    EigenvalueMultiset(std::vector<SpectralEntry> entries, double cutoff)
        : entries_(std::move(entries)), cutoff_(cutoff) {
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            require(std::isfinite(entries_[i].value), ErrorCode::MalformedInput, "non-finite eigenvalue");
            require(entries_[i].multiplicity >= 1, ErrorCode::MalformedInput,
                    "multiplicities must be >= 1");
            require(i == 0 || entries_[i - 1].value < entries_[i].value, ErrorCode::MalformedInput,
                    "eigenvalues must be strictly increasing");
        }
    }

    /// Sorts raw values and merges those within coalesce_tolerance
    /// (relative) of each other, summing multiplicities.  The representative
    /// of a cluster is its member of smallest modulus, which keeps symmetric
    /// input symmetric.
    static EigenvalueMultiset coalesce(std::vector<double> values, int multiplicity_each, double cutoff) {
        std::sort(values.begin(), values.end());
        std::vector<SpectralEntry> out;
        std::size_t i = 0;
        while (i < values.size()) {
            const double first = values[i];
            double rep = first;
            int mult = 0;
            std::size_t j = i;
            while (j < values.size() &&
                   std::abs(values[j] - first) <=
                       coalesce_tolerance * std::max(std::abs(values[j]), std::abs(first))) {
                if (std::abs(values[j]) < std::abs(rep)) rep = values[j];
                mult += multiplicity_each;
                ++j;
            }
            out.push_back({rep, mult});
            i = j;
        }
        return EigenvalueMultiset(std::move(out), cutoff);
    }

    const std::vector<SpectralEntry>& entries() const { return entries_; }
    double cutoff() const { return cutoff_; }
    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }

    int total_multiplicity() const {
        int total = 0;
        for (const auto& e : entries_) total += e.multiplicity;
        return total;
    }

    /// Invariance under value -> -value with equal multiplicities.
    bool is_symmetric() const {
        const std::size_t n = entries_.size();
        for (std::size_t i = 0; i < n; ++i) {
            const auto& lo = entries_[i];
            const auto& hi = entries_[n - 1 - i];
            if (lo.multiplicity != hi.multiplicity) return false;
            if (std::abs(lo.value + hi.value) >
                coalesce_tolerance * std::max(std::abs(lo.value), std::abs(hi.value)))
                return false;
        }
        return true;
    }

    friend bool operator==(const EigenvalueMultiset&, const EigenvalueMultiset&) = default;

private:
    std::vector<SpectralEntry> entries_;
    double cutoff_ = 0.0;
};

/// Dual basis (v1, v2) with <w_i, v_j> = delta_ij.
inline Lattice2 dual_basis(const Lattice2& lat) {
    lat.validate();
    const double det = lat.determinant();
    // rows of the inverse of [w1 w2] are the dual vectors
    return {{lat.w2.y / det, -lat.w2.x / det}, {-lat.w1.y / det, lat.w1.x / det}};
}

namespace detail {

/// The coset Gamma* - (d1 v1 + d2 v2)/2 written over a Lagrange-reduced basis
/// (b1, b2) of Gamma*: points are (m1 - c1) b1 + (m2 - c2) b2, m in Z^2,
/// with c_i in {0, 1/2}.
struct ReducedCoset {
    Vec2 b1;
    Vec2 b2;
    double c1 = 0.0;
    double c2 = 0.0;
};

inline ReducedCoset reduce_coset(const Lattice2& lat, SpinDelta delta) {
    delta.validate();
    const Lattice2 dual = dual_basis(lat);
    Vec2 b1 = dual.w1;
    Vec2 b2 = dual.w2;
    // Lagrange-Gauss reduction; terminates because |b1| strictly decreases.
    for (int guard = 0; guard < 10000; ++guard) {
        if (dot(b1, b1) > dot(b2, b2)) std::swap(b1, b2);
        const double m = std::round(dot(b1, b2) / dot(b1, b1));
        if (m == 0.0) break;
        b2 = b2 - m * b1;
        if (dot(b2, b2) >= dot(b1, b1)) break;
    }
    const Vec2 shift = 0.5 * (static_cast<double>(delta.d1) * dual.w1) +
                       0.5 * (static_cast<double>(delta.d2) * dual.w2);
    const double det = cross(b1, b2);
    // coordinates of the shift are half-integers; snap and reduce mod 1
    auto snap = [](double c) {
        const double twice = std::round(2.0 * c);
        const double mod = std::fmod(std::abs(twice), 2.0);
        return 0.5 * mod;
    };
    return {b1, b2, snap(cross(shift, b2) / det), snap(cross(b1, shift) / det)};
}

/// Calls fn(point) for every coset point p with |p| <= radius.  Complete:
/// |m2 - c2| is bounded by radius over the Gram-Schmidt length of b2, and
/// each row of m1 is the exact solution interval of a quadratic.
template <class Fn>
void for_each_coset_point(const ReducedCoset& coset, double radius, Fn&& fn) {
    const double n1 = dot(coset.b1, coset.b1);
    const double b12 = dot(coset.b1, coset.b2);
    const double det = std::abs(cross(coset.b1, coset.b2));
    const double gs2 = det / std::sqrt(n1);
    const double r2 = radius * radius;
    const auto m2_span = static_cast<std::int64_t>(std::ceil(radius / gs2)) + 1;
    for (std::int64_t m2 = -m2_span; m2 <= m2_span + 1; ++m2) {
        const double y = static_cast<double>(m2) - coset.c2;
        const double disc = n1 * r2 - y * y * det * det;
        if (disc < 0.0) continue;
        const double root = std::sqrt(disc);
        const double u_lo = (-y * b12 - root) / n1;
        const double u_hi = (-y * b12 + root) / n1;
        const auto m1_lo = static_cast<std::int64_t>(std::floor(u_lo + coset.c1)) - 1;
        const auto m1_hi = static_cast<std::int64_t>(std::ceil(u_hi + coset.c1)) + 1;
        for (std::int64_t m1 = m1_lo; m1 <= m1_hi; ++m1) {
            const double u = static_cast<double>(m1) - coset.c1;
            const Vec2 p = u * coset.b1 + y * coset.b2;
            if (dot(p, p) <= r2) fn(p);
        }
    }
}

inline constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

} // namespace detail

/// Spectrum of D^2 on the flat torus R^2/lat with spin structure delta, all
/// eigenvalues 4 pi^2 |v - (d1 v1 + d2 v2)/2|^2 <= cutoff.  Each dual
/// vector contributes multiplicity 2 (rank-2 spinor bundle).
inline EigenvalueMultiset torus_d2_spectrum(const Lattice2& lat, SpinDelta delta, double cutoff) {
    require(std::isfinite(cutoff) && cutoff > 0.0, ErrorCode::InvalidCutoff, "cutoff must be positive");
    const auto coset = detail::reduce_coset(lat, delta);
    std::vector<double> values;
    detail::for_each_coset_point(coset, std::sqrt(cutoff / detail::four_pi_sq), [&](Vec2 p) {
        const double v = detail::four_pi_sq * dot(p, p);
        if (v <= cutoff) values.push_back(v);
    });
    return EigenvalueMultiset::coalesce(std::move(values), 2, cutoff);
}

/// Splits a D^2 spectrum into the D spectrum: lambda > 0 of multiplicity m
/// becomes +-sqrt(lambda), each with m/2; the kernel keeps its multiplicity.
inline EigenvalueMultiset dirac_from_squared(const EigenvalueMultiset& squared) {
    std::vector<SpectralEntry> pos;
    int kernel = 0;
    for (const auto& e : squared.entries()) {
        if (e.value == 0.0) {
            kernel += e.multiplicity;
        } else {
            require(e.value > 0.0 && e.multiplicity % 2 == 0, ErrorCode::MalformedInput,
                    "squared spectrum must be nonnegative with even multiplicities");
            pos.push_back({std::sqrt(e.value), e.multiplicity / 2});
        }
    }
    std::vector<SpectralEntry> out;
    out.reserve(2 * pos.size() + 1);
    for (auto it = pos.rbegin(); it != pos.rend(); ++it) out.push_back({-it->value, it->multiplicity});
    if (kernel > 0) out.push_back({0.0, kernel});
    out.insert(out.end(), pos.begin(), pos.end());
    return EigenvalueMultiset(std::move(out), std::sqrt(squared.cutoff()));
}

/// D spectrum of the torus, |mu| <= cutoff.
inline EigenvalueMultiset torus_d_spectrum(const Lattice2& lat, SpinDelta delta, double cutoff) {
    require(std::isfinite(cutoff) && cutoff > 0.0, ErrorCode::InvalidCutoff, "cutoff must be positive");
    return dirac_from_squared(torus_d2_spectrum(lat, delta, cutoff * cutoff));
}

/// Closed-form D^2 branch of the tube section torus for mode (k1, k2).
inline double tube_torus_eigenvalue(const TubeSection& sec, std::int64_t k1, std::int64_t k2) {
    sec.validate();
    const double a1 = static_cast<double>(k1) - 0.5 * sec.delta.d1;
    const double a2 = static_cast<double>(k2) - 0.5 * sec.delta.d2;
    const double s = std::sinh(sec.r);
    const double c = sec.ell * std::cosh(sec.r);
    const double twist = 2.0 * std::numbers::pi * a2 - sec.alpha * a1;
    return a1 * a1 / (s * s) + twist * twist / (c * c);
}

/// Cross-section operator on the restricted spinor bundle over a circle of
/// the given circumference: D + (-D) acting on two copies of the spinor
/// line.  Trivial: 2 pi k / L; nontrivial: 2 pi (k + 1/2) / L; each value
/// with multiplicity 2, truncated to |mu| <= cutoff.
inline EigenvalueMultiset circle_dn_spectrum(const CircleSpin& spin, double cutoff) {
    spin.validate();
    require(std::isfinite(cutoff) && cutoff > 0.0, ErrorCode::InvalidCutoff, "cutoff must be positive");
    const double step = 2.0 * std::numbers::pi / spin.circumference;
    const double offset = spin.kind == CircleSpinKind::Trivial ? 0.0 : 0.5;
    const auto kmax = static_cast<std::int64_t>(std::floor(cutoff / step + 1.0));
    std::vector<SpectralEntry> out;
    for (std::int64_t k = -kmax - 1; k <= kmax; ++k) {
        const double mu = step * (static_cast<double>(k) + offset);
        if (std::abs(mu) <= cutoff) out.push_back({mu, 2});
    }
    return EigenvalueMultiset(std::move(out), cutoff);
}

inline int kernel_multiplicity(const EigenvalueMultiset& spec) {
    for (const auto& e : spec.entries())
        if (e.value == 0.0) return e.multiplicity;
    return 0;
}

/// Smallest positive entry; throws when none lies below the cutoff.
inline double smallest_positive(const EigenvalueMultiset& spec) {
    for (const auto& e : spec.entries())
        if (e.value > 0.0) return e.value;
    throw Error(ErrorCode::NoPositiveEigenvalueBelowCutoff,
                "no positive eigenvalue up to cutoff " + std::to_string(spec.cutoff()));
}

/// Smallest positive Dirac eigenvalue of the torus, without a caller cutoff.
/// The shortest nonzero point among small reduced coefficients bounds the
/// search radius; enumeration inside it is exact.
inline double torus_smallest_positive_dirac(const Lattice2& lat, SpinDelta delta) {
    const auto coset = detail::reduce_coset(lat, delta);
    double radius = std::numeric_limits<double>::infinity();
    for (int m1 = -2; m1 <= 2; ++m1)
        for (int m2 = -2; m2 <= 2; ++m2) {
            const Vec2 p = (m1 - coset.c1) * coset.b1 + (m2 - coset.c2) * coset.b2;
            const double n = norm(p);
            if (n > 0.0) radius = std::min(radius, n);
        }
    radius *= 1.0 + 1e-9;
    double best = std::numeric_limits<double>::infinity();
    detail::for_each_coset_point(coset, radius, [&](Vec2 p) {
        const double v = dot(p, p);
        if (v > 0.0 && v < best) best = v;
    });
    require(std::isfinite(best), ErrorCode::NoPositiveEigenvalueBelowCutoff,
            "no nonzero coset point found");
    return 2.0 * std::numbers::pi * std::sqrt(best);
}

} // namespace hyperdirac
