// Eigenvalues of D^2 below x^2 on a collapsing 2D tube.  Prints the sweep
// table and the fitted slope against log(1/ell) next to 4x/pi.

#include <hyperdirac/hyperdirac.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
    using namespace hyperdirac;
    const double x = argc > 1 ? std::atof(argv[1]) : 1.0;
    try {
        for (auto spin : {CircleSpinKind::Trivial, CircleSpinKind::Nontrivial}) {
            const auto fit = clustering_fit({x, log_spaced(1e-2, 1e-8, 7), spin, 0.0});
            std::cout << (spin == CircleSpinKind::Trivial ? "trivial spin" : "nontrivial spin") << '\n';
            io::write_sweep_csv(std::cout, fit.points);
            std::cout << "slope D " << fit.dirichlet.slope << ", N " << fit.neumann.slope << ", target "
                      << fit.target << "\n\n";
        }
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        return 1;
    }
}
