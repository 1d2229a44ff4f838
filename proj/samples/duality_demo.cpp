// The integral matrix of a (1, 2) configuration computed as two-dimensional
// integrals and as one-dimensional integrals on the swapped side.
#include <iostream>

#include "hyperdual/hyperint.hpp"
#include "hyperdual/suite.hpp"

int main() {
    using namespace hyperdual;
    const WeightData wd = validate_weight_data({2.3, 0.0}, 1, {1.3, 0.0}, 2, 2.5);
    const cplx z{1.0, 2.0};
    const IntegralSetup setup = acceptance_setup();

    const auto direct = matrix_Ihat(z, wd, setup);
    const auto dual = matrix_Ihat(z, wd.swapped(), setup);
    std::cout.precision(12);
    for (int a = 0; a < direct.size(); ++a)
        for (int b = 0; b < direct.size(); ++b)
            std::cout << "I[" << a << "," << b << "]  direct " << format_complex(direct.entries(a, b)) << "  dual "
                      << format_complex(dual.entries(a, b)) << "  gap "
                      << relative_gap(direct.entries(a, b), dual.entries(a, b)) << "\n";

    // the same matrix solves the ODE kappa I' + (B/z + A) I = 0; print the connection matrix too
    std::cout << "connection matrix (should be the identity):\n" << connection_matrix(z, wd, setup) << "\n";
}
