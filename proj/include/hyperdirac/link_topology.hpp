#pragma once

// Linking numbers from signed crossing lists, and the spectrum type of the
// complement they imply: an odd linking number between two components lets
// a spin structure be trivial along both cusps, which puts all of R into
// the spectrum; otherwise every spin structure gives discrete spectrum.

#include <hyperdirac/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hyperdirac {

struct Crossing {
    int over = 0;
    int under = 0;
    int sign = 1;
};

struct LinkDiagram {
    std::string name;
    int components = 0;
    std::vector<Crossing> crossings;

    /// Index/sign checks, integrality of every pairwise linking number, and
    /// agreement of the i-over-j and j-over-i signed sums (both equal Lk in
    /// any actual diagram).
    void validate() const {
        require(components >= 1, ErrorCode::MalformedInput, "a link needs at least one component");
        const auto k = static_cast<std::size_t>(components);
        std::vector<long> over_sum(k * k, 0);
        for (const auto& c : crossings) {
            require(c.over >= 0 && c.over < components && c.under >= 0 && c.under < components,
                    ErrorCode::MalformedInput, "crossing component index out of range");
            require(c.sign == 1 || c.sign == -1, ErrorCode::MalformedInput, "crossing sign must be +1 or -1");
            over_sum[static_cast<std::size_t>(c.over) * k + static_cast<std::size_t>(c.under)] += c.sign;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j) {
                const long ij = over_sum[i * k + j];
                const long ji = over_sum[j * k + i];
                const std::string pair = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
                require((ij + ji) % 2 == 0, ErrorCode::NonIntegralLinking,
                        "odd signed crossing sum between components " + pair);
                require(ij == ji, ErrorCode::InconsistentDiagram,
                        "over and under signed sums differ between components " + pair);
            }
    }
};

/// Reads {"components": k, "crossings": [{"over": i, "under": j, "sign": s}, ...]}
/// with 0-based indices; an optional "name" is kept.
inline LinkDiagram parse_diagram(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedInput, std::string("invalid JSON: ") + e.what());
    }
    auto int_field = [](const nlohmann::json& obj, const char* key) {
        require(obj.is_object() && obj.contains(key) && obj.at(key).is_number_integer(), ErrorCode::MalformedInput,
                std::string("missing or non-integer field '") + key + "'");
        return obj.at(key).get<int>();
    };
    LinkDiagram d;
    d.components = int_field(j, "components");
    if (j.contains("name")) {
        require(j.at("name").is_string(), ErrorCode::MalformedInput, "'name' must be a string");
        d.name = j.at("name").get<std::string>();
    }
    require(j.contains("crossings") && j.at("crossings").is_array(), ErrorCode::MalformedInput,
            "'crossings' must be an array");
    for (const auto& c : j.at("crossings"))
        d.crossings.push_back({int_field(c, "over"), int_field(c, "under"), int_field(c, "sign")});
    d.validate();
    return d;
}

inline nlohmann::json to_json(const LinkDiagram& d) {
    nlohmann::json crossings = nlohmann::json::array();
    for (const auto& c : d.crossings) crossings.push_back({{"over", c.over}, {"under", c.under}, {"sign", c.sign}});
    nlohmann::json j{{"components", d.components}, {"crossings", crossings}};
    if (!d.name.empty()) j["name"] = d.name;
    return j;
}

/// Symmetric integer matrix of pairwise linking numbers, zero diagonal.
class LinkingMatrix {
public:
    explicit LinkingMatrix(std::vector<std::vector<int>> rows) : rows_(std::move(rows)) {
        const std::size_t k = rows_.size();
        for (std::size_t i = 0; i < k; ++i) {
            require(rows_[i].size() == k, ErrorCode::MalformedInput, "linking matrix must be square");
            rows_[i][i] = 0;
        }
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < i; ++j)
                require(rows_[i][j] == rows_[j][i], ErrorCode::MalformedInput, "linking matrix must be symmetric");
    }

    std::size_t size() const { return rows_.size(); }
    int operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }

    /// Conjugation by a relabeling: entry (i, j) of the result is entry
    /// (perm[i], perm[j]) of this matrix.
    LinkingMatrix permuted(const std::vector<std::size_t>& perm) const {
        std::vector<std::vector<int>> out(size(), std::vector<int>(size(), 0));
        for (std::size_t i = 0; i < size(); ++i)
            for (std::size_t j = 0; j < size(); ++j) out[i][j] = rows_[perm[i]][perm[j]];
        return LinkingMatrix(std::move(out));
    }

    friend bool operator==(const LinkingMatrix&, const LinkingMatrix&) = default;

private:
    std::vector<std::vector<int>> rows_;
};

struct LinkingData {
    LinkingMatrix matrix{{}};
    /// parity of the number of crossings of component i over component j
    std::vector<std::vector<int>> overcrossing_parity;
};

/// Lk(i, j) = half the signed count of crossings between i and j.  Also
/// checks that mod 2 it equals the parity of i-over-j crossings.
inline LinkingData linking_data(const LinkDiagram& d) {
    d.validate();
    const auto k = static_cast<std::size_t>(d.components);
    std::vector<std::vector<int>> sum(k, std::vector<int>(k, 0));
    std::vector<std::vector<int>> over(k, std::vector<int>(k, 0));
    for (const auto& c : d.crossings) {
        if (c.over == c.under) continue;
        const auto i = static_cast<std::size_t>(c.over);
        const auto j = static_cast<std::size_t>(c.under);
        sum[i][j] += c.sign;
        sum[j][i] += c.sign;
        over[i][j] ^= 1;
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            sum[i][j] /= 2;
            if (i != j)
                require((sum[i][j] & 1) == over[i][j], ErrorCode::InconsistentDiagram,
                        "overcrossing parity disagrees with the linking number");
        }
    return {LinkingMatrix(std::move(sum)), std::move(over)};
}

inline LinkingMatrix linking_matrix(const LinkDiagram& d) { return linking_data(d).matrix; }

enum class SpectrumType { DiscreteForAllSpinStructures, ExistsSpinStructureWithRealLine };

inline const char* to_string(SpectrumType t) {
    return t == SpectrumType::DiscreteForAllSpinStructures ? "discrete" : "real_line_for_some_spin_structure";
}

struct SpectrumVerdict {
    SpectrumType type = SpectrumType::DiscreteForAllSpinStructures;
    std::optional<std::pair<std::size_t, std::size_t>> witness; ///< first pair with odd Lk
};

/// Premise the classification rests on; it is not verified.
inline constexpr const char* hyperbolicity_premise =
    "the link complement is assumed to be hyperbolic of finite volume; this is not checked";

inline SpectrumVerdict classify_complement(const LinkingMatrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (m(i, j) % 2 != 0) return {SpectrumType::ExistsSpinStructureWithRealLine, std::pair{i, j}};
    return {};
}

/// Entry i: some spin structure on the complement is trivial along cusp i,
/// which happens exactly when row i has an odd entry.
inline std::vector<bool> cusp_trivializable(const LinkingMatrix& m) {
    std::vector<bool> out(m.size(), false);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (i != j && m(i, j) % 2 != 0) out[i] = true;
    return out;
}

inline nlohmann::json verdict_json(const LinkDiagram& d, const LinkingMatrix& m, const SpectrumVerdict& v) {
    nlohmann::json j;
    if (!d.name.empty()) j["name"] = d.name;
    j["components"] = d.components;
    j["verdict"] = to_string(v.type);
    j["linking_matrix"] = m.rows();
    j["cusp_trivializable"] = cusp_trivializable(m);
    j["witness"] = v.witness ? nlohmann::json::array({v.witness->first, v.witness->second}) : nlohmann::json(nullptr);
    j["premise"] = hyperbolicity_premise;
    return j;
}

/// Bit i set = the spin structure is trivial along cusp i.
struct CuspSpinAssignment {
    std::vector<int> flags;

    int popcount() const {
        int n = 0;
        for (int f : flags) n += f != 0;
        return n;
    }
};

struct SpinCensus {
    std::uint64_t total = 0;
    std::uint64_t closed_surface = 0; ///< 2^{2g}
    std::vector<CuspSpinAssignment> even_subsets;
};

/// Spin structures on a genus-g surface with k cusps: those of the closed
/// surface times the choices of an even set of cusps to be trivial along.
inline SpinCensus surface_spin_census(int genus, int cusps) {
    require(genus >= 0 && cusps >= 0, ErrorCode::InvalidArgument, "genus and cusp count must be nonnegative");
    require(2 * genus + std::max(cusps - 1, 0) <= 62 && cusps <= 24, ErrorCode::InvalidArgument,
            "census too large to enumerate");
    SpinCensus c;
    c.closed_surface = std::uint64_t{1} << (2 * genus);
    c.total = c.closed_surface << std::max(cusps - 1, 0);
    if (cusps == 0) return c;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << cusps); ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        CuspSpinAssignment a;
        for (int i = 0; i < cusps; ++i) a.flags.push_back(static_cast<int>((mask >> i) & 1u));
        c.even_subsets.push_back(std::move(a));
    }
    return c;
}

enum class CuspSpectrum { Discrete, RealLine };

inline const char* to_string(CuspSpectrum s) { return s == CuspSpectrum::Discrete ? "discrete" : "real_line"; }

/// Trivial along some cusp: spec(D) = R.  Nontrivial along every cusp:
/// discrete.  An odd number of trivial cusps cannot occur.
inline CuspSpectrum dichotomy_verdict(const CuspSpinAssignment& a) {
    for (int f : a.flags)
        require(f == 0 || f == 1, ErrorCode::InvalidArgument, "cusp flags must be 0 or 1");
    require(a.popcount() % 2 == 0, ErrorCode::ParityViolation,
            "a spin structure is trivial along an even number of cusps");
    return a.popcount() > 0 ? CuspSpectrum::RealLine : CuspSpectrum::Discrete;
}

} // namespace hyperdirac
