#include <catch_amalgamated.hpp>

#include <hyperdirac/link_topology.hpp>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

using namespace hyperdirac;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LinkDiagram fixture(const std::string& stem) {
    return parse_diagram(slurp(std::string(HYPERDIRAC_SOURCE_DIR) + "/fixtures/" + stem + ".json"));
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("parsing diagrams", "[link]") {
    const auto hopf = parse_diagram(
        R"({"components":2,"crossings":[{"over":0,"under":1,"sign":1},{"over":1,"under":0,"sign":1}]})");
    CHECK(hopf.components == 2);
    CHECK(hopf.crossings.size() == 2);

    const auto unlink = parse_diagram(R"({"components":2,"crossings":[]})");
    CHECK(unlink.crossings.empty());

    CHECK(code_of([] { parse_diagram(R"({"components":2,"crossings":[{"over":0,"under":1,"sign":1}]})"); }) ==
          ErrorCode::NonIntegralLinking);
    CHECK(code_of([] { parse_diagram("{"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { parse_diagram(R"({"crossings":[]})"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { parse_diagram(R"({"components":2,"crossings":[{"over":0,"under":2,"sign":1}]})"); }) ==
          ErrorCode::MalformedInput);
    CHECK(code_of([] { parse_diagram(R"({"components":2,"crossings":[{"over":0,"under":1,"sign":2}]})"); }) ==
          ErrorCode::MalformedInput);
    CHECK(code_of([] { parse_diagram(R"({"components":2,"crossings":[{"over":0,"under":1,"sign":"+"}]})"); }) ==
          ErrorCode::MalformedInput);
    // two crossings of 0 over 1 and none of 1 over 0 cannot come from a diagram
    CHECK(code_of([] {
              parse_diagram(
                  R"({"components":2,"crossings":[{"over":0,"under":1,"sign":1},{"over":0,"under":1,"sign":1}]})");
          }) == ErrorCode::InconsistentDiagram);
}

TEST_CASE("JSON round trip", "[link]") {
    for (const char* stem : {"hopf", "whitehead", "borromean", "link_7_2_2"}) {
        const auto d = fixture(stem);
        const auto again = parse_diagram(to_json(d).dump());
        CHECK(again.name == d.name);
        CHECK(again.components == d.components);
        CHECK(linking_matrix(again) == linking_matrix(d));
    }
}

TEST_CASE("linking numbers", "[link]") {
    CHECK(linking_matrix(fixture("hopf"))(0, 1) == 1);
    const auto wh = linking_data(fixture("whitehead"));
    CHECK(wh.matrix(0, 1) == 0);
    CHECK(linking_matrix(fixture("unlink3")) == LinkingMatrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
    CHECK(linking_matrix(fixture("link_6_2_2"))(0, 1) == 3);
    CHECK(linking_matrix(fixture("link_6_2_3"))(0, 1) == 2);
    CHECK(linking_matrix(fixture("link_7_2_1"))(0, 1) == 1);
    CHECK(linking_matrix(fixture("link_7_2_2"))(0, 1) == 1);
    CHECK(linking_matrix(fixture("link_7_2_4"))(0, 1) == 0);
    const auto l631 = linking_matrix(fixture("link_6_3_1"));
    CHECK(std::abs(l631(0, 1)) == 1);
    CHECK(std::abs(l631(0, 2)) == 1);
    CHECK(std::abs(l631(1, 2)) == 1);
    CHECK(linking_matrix(fixture("borromean")) == LinkingMatrix({{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}));
}

TEST_CASE("fixture verdicts", "[link]") {
    const std::pair<const char*, SpectrumType> expected[] = {
        {"whitehead", SpectrumType::DiscreteForAllSpinStructures},
        {"link_6_2_3", SpectrumType::DiscreteForAllSpinStructures},
        {"link_7_2_4", SpectrumType::DiscreteForAllSpinStructures},
        {"borromean", SpectrumType::DiscreteForAllSpinStructures},
        {"link_6_2_2", SpectrumType::ExistsSpinStructureWithRealLine},
        {"link_7_2_1", SpectrumType::ExistsSpinStructureWithRealLine},
        {"link_7_2_2", SpectrumType::ExistsSpinStructureWithRealLine},
        {"link_6_3_1", SpectrumType::ExistsSpinStructureWithRealLine},
    };
    for (const auto& [stem, type] : expected) {
        INFO(stem);
        const auto v = classify_complement(linking_matrix(fixture(stem)));
        CHECK(v.type == type);
        CHECK(v.witness.has_value() == (type == SpectrumType::ExistsSpinStructureWithRealLine));
    }
    const auto hopf = classify_complement(linking_matrix(fixture("hopf")));
    REQUIRE(hopf.witness);
    CHECK(*hopf.witness == std::pair<std::size_t, std::size_t>{0, 1});
}

TEST_CASE("verdict JSON", "[link]") {
    const auto d = fixture("whitehead");
    const auto m = linking_matrix(d);
    const auto j = verdict_json(d, m, classify_complement(m));
    CHECK(j.at("verdict") == "discrete");
    CHECK(j.at("witness").is_null());
    CHECK(j.at("premise").get<std::string>().find("not checked") != std::string::npos);
    const auto h = fixture("hopf");
    const auto hm = linking_matrix(h);
    CHECK(verdict_json(h, hm, classify_complement(hm)).at("verdict") == "real_line_for_some_spin_structure");
}

TEST_CASE("which cusps can be trivial", "[link]") {
    CHECK(cusp_trivializable(linking_matrix(fixture("hopf"))) == std::vector<bool>{true, true});
    CHECK(cusp_trivializable(linking_matrix(fixture("whitehead"))) == std::vector<bool>{false, false});
    CHECK(cusp_trivializable(LinkingMatrix({{0, 2, 1}, {2, 0, 0}, {1, 0, 0}})) ==
          std::vector<bool>{true, false, true});
    CHECK(code_of([] { LinkingMatrix({{0, 1}, {2, 0}}); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { LinkingMatrix({{0, 1}, {1}}); }) == ErrorCode::MalformedInput);
}

TEST_CASE("spin structures on punctured surfaces", "[link]") {
    CHECK(surface_spin_census(1, 0).total == 4);
    const auto c = surface_spin_census(0, 3);
    CHECK(c.total == 4);
    REQUIRE(c.even_subsets.size() == 4);
    std::vector<std::vector<int>> subsets;
    for (const auto& a : c.even_subsets) subsets.push_back(a.flags);
    std::sort(subsets.begin(), subsets.end());
    CHECK(subsets == std::vector<std::vector<int>>{{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
    CHECK(surface_spin_census(2, 2).total == 32);
    for (int g = 0; g <= 4; ++g)
        for (int k = 0; k <= 8; ++k) {
            const auto s = surface_spin_census(g, k);
            CHECK(s.total == s.closed_surface * std::max<std::uint64_t>(1, s.even_subsets.size()));
            if (k >= 1) CHECK(s.total == std::uint64_t{1} << (2 * g + k - 1));
        }
    CHECK(code_of([] { surface_spin_census(-1, 0); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("cusp dichotomy", "[link]") {
    CHECK(dichotomy_verdict({{0, 0, 0}}) == CuspSpectrum::Discrete);
    CHECK(dichotomy_verdict({{1, 1}}) == CuspSpectrum::RealLine);
    CHECK(dichotomy_verdict({{0}}) == CuspSpectrum::Discrete);
    CHECK(code_of([] { dichotomy_verdict({{1, 0}}); }) == ErrorCode::ParityViolation);
    CHECK(code_of([] { dichotomy_verdict({{1}}); }) == ErrorCode::ParityViolation);
    CHECK(std::string(to_string(CuspSpectrum::RealLine)) == "real_line");
}

namespace {

// random diagram in which i-over-j and j-over-i crossings carry equal signed sums
LinkDiagram random_diagram(std::mt19937_64& rng) {
    LinkDiagram d;
    d.components = 2 + static_cast<int>(rng() % 4);
    for (int i = 0; i < d.components; ++i)
        for (int j = i + 1; j < d.components; ++j) {
            const int pairs = static_cast<int>(rng() % 4);
            for (int p = 0; p < pairs; ++p) {
                const int s = rng() % 2 ? 1 : -1;
                d.crossings.push_back({i, j, s});
                d.crossings.push_back({j, i, s});
            }
            // cancelling pairs of the same over-strand
            if (rng() % 2) {
                d.crossings.push_back({i, j, 1});
                d.crossings.push_back({i, j, -1});
            }
        }
    for (int c = 0; c < 3; ++c) {
        const int i = static_cast<int>(rng() % static_cast<unsigned>(d.components));
        d.crossings.push_back({i, i, rng() % 2 ? 1 : -1});
    }
    std::shuffle(d.crossings.begin(), d.crossings.end(), rng);
    return d;
}

} // namespace

TEST_CASE("overcrossing parity matches the linking number", "[link][property]") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto d = random_diagram(rng);
        const auto data = linking_data(d);
        for (std::size_t i = 0; i < data.matrix.size(); ++i)
            for (std::size_t j = 0; j < data.matrix.size(); ++j)
                if (i != j) CHECK((data.matrix(i, j) & 1) == data.overcrossing_parity[i][j]);
    }
}

TEST_CASE("classification is the mod-2 matrix", "[link][property]") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 200; ++trial) {
        const auto m = linking_matrix(random_diagram(rng));
        const auto triv = cusp_trivializable(m);
        const bool none = std::none_of(triv.begin(), triv.end(), [](bool b) { return b; });
        CHECK((classify_complement(m).type == SpectrumType::DiscreteForAllSpinStructures) == none);
    }
}

TEST_CASE("relabeling components", "[link][property]") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 100; ++trial) {
        const auto d = random_diagram(rng);
        std::vector<std::size_t> perm(static_cast<std::size_t>(d.components));
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        // component perm[i] of d becomes component i
        std::vector<int> inverse(perm.size());
        for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<int>(i);
        LinkDiagram relabeled = d;
        for (auto& c : relabeled.crossings) {
            c.over = inverse[static_cast<std::size_t>(c.over)];
            c.under = inverse[static_cast<std::size_t>(c.under)];
        }
        const auto m = linking_matrix(d);
        CHECK(linking_matrix(relabeled) == m.permuted(perm));
        CHECK(classify_complement(linking_matrix(relabeled)).type == classify_complement(m).type);
    }
}
