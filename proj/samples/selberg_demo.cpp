// Numeric Selberg integrals on nested loops next to the closed product formula.
#include <cstdio>

#include "hyperdual/selberg.hpp"

int main() {
    using namespace hyperdual;
    QuadratureConfig q;
    q.levels = 1;
    q.strict = false;
    std::printf("%2s %5s %9s %26s %26s %10s\n", "l", "kappa", "m", "numeric", "closed", "rel err");
    for (int l = 1; l <= 3; ++l)
        for (double kappa : {2.5, 3.7}) {
            const SelbergParams p{l, {1.4, 0.3}, kappa};
            const cplx num = selberg_numeric(p, q).value;
            const cplx ref = selberg_closed(p);
            std::printf("%2d %5.1f %4.1f%+4.1fi %12.6e%+12.6ei %12.6e%+12.6ei %10.2e\n", l, kappa, p.m.real(), p.m.imag(),
                        num.real(), num.imag(), ref.real(), ref.imag(), std::abs(num / ref - 1.0));
        }
}
