#include <catch_amalgamated.hpp>

#include <hyperdirac/io.hpp>

#include "cli_app.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace hyperdirac;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string fixture_path(const std::string& stem) {
    return std::string(HYPERDIRAC_SOURCE_DIR) + "/fixtures/" + stem + ".json";
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

TEST_CASE("numbers round trip bit for bit", "[io]") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(-50.0, 50.0);
    for (int i = 0; i < 1000; ++i) {
        const double v = std::exp(u(rng)) * (i % 2 ? 1 : -1);
        CHECK(io::parse_number(io::format_number(v)) == v);
    }
    CHECK(io::parse_number(" 2.5\r") == 2.5);
    CHECK(code_of([] { io::parse_number("2.5x"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { io::parse_number("inf"); }) == ErrorCode::MalformedInput);
    CHECK(code_of([] { io::parse_integer("2.0"); }) == ErrorCode::MalformedInput);
}

TEST_CASE("spectrum CSV round trip", "[io]") {
    const TubeSection s{0.1, 0.3, 2.0, {1, 1}};
    const auto spec = torus_d2_spectrum(s.lattice(), s.delta, 200.0);
    std::ostringstream first;
    io::write_spectrum_csv(first, spec);
    std::istringstream in(first.str());
    const auto back = io::read_spectrum_csv(in, spec.cutoff());
    CHECK(back == spec);
    std::ostringstream second;
    io::write_spectrum_csv(second, back);
    CHECK(second.str() == first.str());
}

TEST_CASE("cross-section files", "[io]") {
    std::istringstream good("mu,multiplicity\n-0.5,2\n0.5,2\n");
    const auto cs = io::read_cross_section_csv(good);
    CHECK(cs.size() == 2);
    CHECK(cs.cutoff() == 0.5);

    std::istringstream lopsided("mu,multiplicity\n-0.5,2\n0.5,1\n");
    CHECK(code_of([&] { io::read_cross_section_csv(lopsided); }) == ErrorCode::MalformedInput);
    std::istringstream shifted("mu,multiplicity\n-0.5,2\n0.6,2\n");
    CHECK(code_of([&] { io::read_cross_section_csv(shifted); }) == ErrorCode::MalformedInput);
    std::istringstream header("value,multiplicity\n0,2\n");
    CHECK(code_of([&] { io::read_cross_section_csv(header); }) == ErrorCode::MalformedInput);
    std::istringstream columns("mu,multiplicity\n0,2,3\n");
    CHECK(code_of([&] { io::read_cross_section_csv(columns); }) == ErrorCode::MalformedInput);
    std::istringstream unsorted("mu,multiplicity\n0.5,2\n-0.5,2\n");
    CHECK(code_of([&] { io::read_cross_section_csv(unsorted); }) == ErrorCode::MalformedInput);
}

TEST_CASE("sweep CSV layout", "[io]") {
    std::ostringstream out;
    io::write_sweep_csv(out, {{0.01, std::log(100.0), 4, 6, 1}});
    std::istringstream in(out.str());
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "ell,R,count_dirichlet,count_neumann");
    CHECK(row.substr(0, 5) == "0.01,");
    CHECK(row.substr(row.size() - 4) == ",4,6");
}

TEST_CASE("cli: spin census", "[cli]") {
    const auto r = run_cli({"spin-census", "--genus", "1", "--cusps", "0"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("total") == 4);
    const auto three = nlohmann::json::parse(run_cli({"spin-census", "--genus", "0", "--cusps", "3"}).out);
    CHECK(three.at("even_subsets").size() == 4);
}

TEST_CASE("cli: link classification", "[cli]") {
    const auto r = run_cli({"classify-link", "--input", fixture_path("whitehead")});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("verdict") == "discrete");
    CHECK(j.contains("premise"));
    CHECK(nlohmann::json::parse(run_cli({"classify-link", "--input", fixture_path("link_6_2_2")}).out).at("verdict") ==
          "real_line_for_some_spin_structure");
    CHECK(run_cli({"classify-link", "--input", "/nonexistent/diagram.json"}).code == 2);
}

TEST_CASE("cli: 2D degeneration sweep", "[cli]") {
    const auto csv = (std::filesystem::temp_directory_path() / "hyperdirac_sweep_test.csv").string();
    const auto r = run_cli({"degenerate-2d", "--x", "1", "--ell-from", "1e-2", "--ell-to", "1e-6", "--steps", "5",
                        "--spin", "trivial", "--csv", csv});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_THAT(j.at("target").get<double>(), WithinAbs(1.27324, 5e-6));
    CHECK(j.at("points").size() == 5);
    std::ifstream in(csv);
    std::string header;
    std::getline(in, header);
    CHECK(header == "ell,R,count_dirichlet,count_neumann");
    std::remove(csv.c_str());
    CHECK(run_cli({"degenerate-2d", "--steps", "3"}).code == 2);
}

TEST_CASE("cli: 3D certificate", "[cli]") {
    const auto r = run_cli({"tube3d-cert", "--ell", "1e-8", "--alpha", "0.3", "--delta", "1,1", "--x", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("certified") == true);
    CHECK(j.at("comparison_count") == 0);
    const auto bad = run_cli({"tube3d-cert", "--delta", "0,0"});
    CHECK(bad.code == 2);
    CHECK(bad.err.find("trivial spin structure") != std::string::npos);
    CHECK(run_cli({"tube3d-cert", "--ell", "0.5"}).code == 2);
}

TEST_CASE("cli: spectra", "[cli]") {
    const auto r = run_cli({"torus-spectrum", "--ell", "0.1", "--alpha", "0.3", "--r", "2", "--delta", "1,0",
                        "--cutoff", "100"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    const TubeSection s{0.1, 0.3, 2.0, {1, 0}};
    const auto got = io::read_spectrum_csv(in, 100.0);
    const auto want = torus_d2_spectrum(s.lattice(), s.delta, 100.0);
    REQUIRE(got.size() == want.size());
    // compile-time folding of sinh may move the last bit
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK_THAT(got.entries()[i].value, WithinRel(want.entries()[i].value, 1e-14));
        CHECK(got.entries()[i].multiplicity == want.entries()[i].multiplicity);
    }

    const auto c = run_cli({"circle-spectrum", "--spin", "nontrivial", "--circumference", "6.283185307179586",
                        "--cutoff", "2"});
    REQUIRE(c.code == 0);
    std::istringstream cin(c.out);
    const auto cs = io::read_cross_section_csv(cin);
    REQUIRE(cs.size() == 4);
    CHECK_THAT(cs.entries()[2].value, WithinRel(0.5, 1e-12));

    CHECK(run_cli({"torus-spectrum", "--ell", "0.1", "--r", "2", "--cutoff", "-1"}).code == 2);
}

TEST_CASE("cli: cusp probe", "[cli]") {
    const auto r = run_cli({"cusp-probe", "--spin", "trivial", "--x", "1", "--T", "20,40,60,80"});
    REQUIRE(r.code == 0);
    CHECK(nlohmann::json::parse(r.out).at("verdict") == "EssentialLike");
    const auto n = run_cli({"cusp-probe", "--spin", "nontrivial", "--x", "0.4", "--T", "10,20,30,40"});
    REQUIRE(n.code == 0);
    CHECK(nlohmann::json::parse(n.out).at("verdict") == "DiscreteLike");
    // a growth that matches neither rule is a failed computation
    CHECK(run_cli({"cusp-probe", "--spin", "trivial", "--slope-tol", "1e-6"}).code == 3);

    const auto file = (std::filesystem::temp_directory_path() / "hyperdirac_cross_section.csv").string();
    {
        std::ofstream f(file);
        f << "mu,multiplicity\n-1.5,2\n-0.5,2\n0.5,2\n1.5,2\n";
    }
    const auto h = run_cli({"cusp-probe", "--cross-section", file, "--geometry", "radial-h2", "--x", "1"});
    REQUIRE(h.code == 0);
    CHECK(nlohmann::json::parse(h.out).at("verdict") == "EssentialLike");
    std::remove(file.c_str());
}

TEST_CASE("cli: scalar identity", "[cli]") {
    const auto r = run_cli({"scalar-identity"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("max_residual").get<double>() <= 1e-9);
    CHECK(j.at("norm_bound_max").get<double>() <= 16.0);
    CHECK(run_cli({"scalar-identity", "--r-from", "0"}).code == 2);
}

TEST_CASE("cli: usage", "[cli]") {
    const auto unknown = run_cli({"frobnicate"});
    CHECK(unknown.code == 2);
    CHECK(unknown.err.find("Usage") != std::string::npos);
    CHECK(run_cli({}).code == 2);
    CHECK(run_cli({"--help"}).code == 0);
    CHECK(run_cli({"spin-census", "--genus", "1"}).code == 2);
    CHECK(run_cli({"spin-census", "--genus", "x", "--cusps", "0"}).code == 2);
}

TEST_CASE("cli: output is reproducible", "[cli]") {
    const std::vector<std::string> args{"degenerate-2d", "--x", "0.7", "--ell-from", "1e-1", "--ell-to", "1e-4",
                                        "--steps", "4", "--spin", "nontrivial"};
    CHECK(run_cli(args).out == run_cli(args).out);
}
