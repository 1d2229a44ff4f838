#pragma once

#include <cmath>

#include "contour.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "special.hpp"
#include "types.hpp"

namespace hyperdual {

/// Parameters of J_l(m): the integral over delta_l of
/// exp(-sum s_u/kappa) prod (-s_u)^{-1-m/kappa} prod_{u<v} (s_u - s_v)^{2/kappa}.
struct SelbergParams {
    int l = 0;
    cplx m{};
    double kappa = 1.0;

    void validate() const {
        if (l < 0) throw NegativeDimension("Selberg dimension must be nonnegative");
        if (!(kappa > 0.0)) throw NonGenericKappa("kappa must be positive");
        for (int j = 0; j < l; ++j) {
            if (is_gamma_pole(1.0 + (m - double(j)) / kappa)) throw GammaPole("Gamma(1+(m-j)/kappa) at a pole");
            if (is_gamma_pole(cplx(1.0 - (j + 1) / kappa))) throw GammaPole("Gamma(1-(j+1)/kappa) at a pole");
        }
    }
};

/// log J_l(m) from the closed product formula.
inline cplx log_selberg_closed(const SelbergParams& p) {
    p.validate();
    const double k = p.kappa;
    cplx acc = double(p.l) * (double(p.l) - 1.0 - p.m) / k * std::log(k);
    if (p.l == 0) return acc;
    const cplx lg_num = std::log(cplx(0.0, -2.0 * pi)) + log_gamma(cplx(1.0 - 1.0 / k));
    for (int j = 0; j < p.l; ++j)
        acc += lg_num - log_gamma(1.0 + (p.m - double(j)) / k) - log_gamma(cplx(1.0 - (j + 1) / k));
    return acc;
}

inline cplx selberg_closed(const SelbergParams& p) { return std::exp(log_selberg_closed(p)); }

/// The Selberg integrand as a product-form integrand on delta_l.
inline ProductIntegrand selberg_integrand(const SelbergParams& p) {
    ProductIntegrand f;
    f.linear = -1.0 / p.kappa;
    f.single_exp[0] = -1.0 - p.m / p.kappa;
    f.pair_exp = 2.0 / p.kappa;
    f.weights = ProductIntegrand::unit_weight();
    return f;
}

inline QuadratureResult selberg_numeric(const SelbergParams& p, const QuadratureConfig& cfg = {},
                                        const GeometryConfig& g = {}) {
    p.validate();
    if (p.l > kMaxDim) throw IndexOutOfRange("Selberg dimension above the desk-scale cap");
    if (p.l == 0) return {1.0, 0.0, 1, 0.0};
    TruncationRule rule;
    rule.decay = 1.0 / p.kappa;
    rule.power = std::abs((-1.0 - p.m / p.kappa).real()) + 2.0 * (p.l - 1) / p.kappa;
    const auto c = assign_base_args(build_delta(p.l, g, rule));
    return integrate_product(c, cfg, selberg_integrand(p)).component(0);
}

}  // namespace hyperdual
