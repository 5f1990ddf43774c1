// A cusp over a circle: with the trivial spin structure the zero mode is a
// free particle and counts grow linearly in the truncation length; with the
// nontrivial one every mode is confined and the counts freeze.

#include <hyperdirac/hyperdirac.hpp>

#include <iostream>
#include <numbers>

int main() {
    using namespace hyperdirac;
    const double x = 1.0;
    const std::vector<double> T{10, 20, 40, 80};
    for (auto kind : {CircleSpinKind::Trivial, CircleSpinKind::Nontrivial}) {
        const auto section = circle_dn_spectrum({kind, 2.0 * std::numbers::pi}, cusp_required_cutoff(x * x));
        const WarpedGeometry g = CuspGeometry{section, T.front()};
        try {
            const auto r = essential_spectrum_probe(g, x, T);
            std::cout << (kind == CircleSpinKind::Trivial ? "trivial   " : "nontrivial") << "  counts";
            for (auto c : r.counts) std::cout << ' ' << c;
            std::cout << "  slope " << r.slope << " (free density " << r.free_density << ")  "
                      << to_string(r.verdict) << '\n';
        } catch (const Error& e) {
            std::cerr << e.what() << '\n';
            return 1;
        }
    }
}
