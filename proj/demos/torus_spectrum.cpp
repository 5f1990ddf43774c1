// Spectrum of the Dirac operator on a section torus of a tube, for each of
// the four spin structures.
//
//   demo_torus_spectrum [ell] [alpha] [r] [cutoff]

#include <hyperdirac/hyperdirac.hpp>

#include <cstdlib>
#include <iomanip>
#include <iostream>

int main(int argc, char** argv) {
    using namespace hyperdirac;
    const double ell = argc > 1 ? std::atof(argv[1]) : 0.1;
    const double alpha = argc > 2 ? std::atof(argv[2]) : 0.3;
    const double r = argc > 3 ? std::atof(argv[3]) : 2.0;
    const double cutoff = argc > 4 ? std::atof(argv[4]) : 3.0;

    try {
        for (int d1 = 0; d1 < 2; ++d1)
            for (int d2 = 0; d2 < 2; ++d2) {
                const TubeSection sec{ell, alpha, r, {d1, d2}};
                sec.validate();
                const auto spec = torus_d_spectrum(sec.lattice(), sec.delta, cutoff);
                std::cout << "delta = (" << d1 << "," << d2 << "), kernel " << kernel_multiplicity(spec)
                          << ", smallest positive "
                          << torus_smallest_positive_dirac(sec.lattice(), sec.delta) << '\n';
                for (const auto& e : spec.entries())
                    std::cout << "  " << std::setw(12) << e.value << "  x" << e.multiplicity << '\n';
            }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
