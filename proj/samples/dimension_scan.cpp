// Growing l2 with m2 = 1: the dual side stays one-dimensional, so large
// dimensions are cheap.  Writes the scan as CSV to stdout.
#include <iostream>

#include "hyperdual/asympt.hpp"
#include "hyperdual/suite.hpp"

int main(int argc, char** argv) {
    using namespace hyperdual;
    DimensionScanConfig cfg;
    if (argc > 1) {
        cfg.l2_values.clear();
        for (int i = 1; i < argc; ++i) cfg.l2_values.push_back(std::stoi(argv[i]));
    }
    try {
        write_dimension_csv(std::cout, dimension_scan(cfg, acceptance_setup()));
    } catch (const Error& e) {
        // e.g. l2 >= 37 at kappa = 3.7 hits sin(pi * 37 / kappa) = 0
        std::cerr << e.what() << "\n";
        return 2;
    }
}
