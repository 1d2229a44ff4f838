#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "contour.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "quadrature.hpp"
#include "selberg.hpp"
#include "special.hpp"
#include "types.hpp"

namespace hyperdual {

/// Matrix of I_{a,b} (or K_{a,b}) over the admissible square with per-entry
/// absolute error estimates.
struct IntegralMatrix {
    cplx z{};
    WeightData wd{};
    Eigen::MatrixXcd entries;
    Eigen::MatrixXd errors;

    [[nodiscard]] int size() const { return int(entries.rows()); }
};

/// Index convention for the kind of constant attached to the integrals.
enum class Normalization { WithCb, Bare };

inline cplx log_constant_Cb(int b, const WeightData& wd) {
    const int l2 = wd.l2;
    if (b < 0 || b > l2) throw IndexOutOfRange("b out of range for C_b");
    const double k = wd.kappa;
    auto log_inv_sin = [&](int j) {
        const double s = std::sin(pi * (j + 1) / k);
        if (std::abs(s) <= kGenericityTol) throw SinZero("sin(pi*" + std::to_string(j + 1) + "/kappa) vanishes");
        return -std::log(cplx(s));
    };
    cplx acc = (wd.l1 + 1.0) * double(l2) / k * std::log(k) - I_unit * pi * double(b * l2) / k;
    acc -= double(l2) * std::log(2.0 * I_unit * gamma(cplx(-1.0 / k)));
    for (int j = 0; j < b; ++j) acc += log_inv_sin(j);
    for (int j = 0; j < l2 - b; ++j) acc += log_inv_sin(j);
    for (int j = 0; j < l2; ++j) acc += log_gamma(1.0 + (wd.m1 - double(j)) / k) - log_gamma(cplx(1.0 + (j + 1) / k));
    return acc;
}

inline cplx constant_Cb(int b, const WeightData& wd) { return std::exp(log_constant_Cb(b, wd)); }

/// Loop realization knobs shared by all integrals of this module.
struct IntegralSetup {
    QuadratureConfig quad{};
    GeometryConfig geometry{};
};

/// Phi_l^{1/kappa} w_{l-a,a} for a = 0..amax as a product-form integrand.
inline ProductIntegrand hyper_integrand(const WeightData& wd, int amax) {
    ProductIntegrand f;
    const double ik = 1.0 / wd.kappa;
    f.linear = -ik;
    f.single_exp[0] = -wd.m1 * ik;
    f.single_exp[1] = -double(wd.m2) * ik;
    f.pair_exp = 2.0 * ik;
    f.weights = ProductIntegrand::symmetrized(wd.l2, amax);
    return f;
}

inline TruncationRule hyper_truncation_rule(const WeightData& wd) {
    TruncationRule rule;
    rule.decay = 1.0 / wd.kappa;
    rule.power = (std::abs(wd.m1.real()) + std::abs(double(wd.m2)) + 2.0 * std::max(0, wd.l2 - 1)) / wd.kappa;
    return rule;
}

/// The chain gamma_{l2,b}(z) with base arguments assigned.
inline MultiLoopContour hyper_contour(int b, cplx z, const WeightData& wd, const GeometryConfig& g = {}) {
    return assign_base_args(build_multi_loop(z, wd.l2, b, g, hyper_truncation_rule(wd)));
}

/// K_{a,b} for every admissible a at fixed b (one quadrature pass).
inline MultiQuadratureResult integral_K_column(int b, cplx z, const WeightData& wd, const IntegralSetup& s = {}) {
    const int d = wd.dim();
    if (b < 0 || b > d) throw IndexOutOfRange("b not admissible");
    if (!(z.imag() > 0.0)) throw GeometryError("the integrals are evaluated for Im z > 0 only");
    const auto c = hyper_contour(b, z, wd, s.geometry);
    return integrate_product(c, s.quad, hyper_integrand(wd, d));
}

inline QuadratureResult integral_K(int a, int b, cplx z, const WeightData& wd, const IntegralSetup& s = {}) {
    AdmissibleIndex::make(a, wd.m2, wd.l2);
    return integral_K_column(b, z, wd, s).component(std::size_t(a));
}

inline QuadratureResult integral_I(int a, int b, cplx z, const WeightData& wd, const IntegralSetup& s = {}) {
    QuadratureResult r = integral_K(a, b, z, wd, s);
    r.value *= constant_Cb(b, wd);
    return r;
}

inline IntegralMatrix integral_matrix(cplx z, const WeightData& wd, Normalization norm, const IntegralSetup& s = {}) {
    const int n = wd.dim() + 1;
    IntegralMatrix m{z, wd, Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
    for (int b = 0; b < n; ++b) {
        const auto col = integral_K_column(b, z, wd, s);
        const cplx cb = norm == Normalization::WithCb ? constant_Cb(b, wd) : cplx(1.0);
        for (int a = 0; a < n; ++a) {
            m.entries(a, b) = cb * col.values[a];
            m.errors(a, b) = std::abs(cb) * (col.abs_errors.empty() ? 0.0 : col.abs_errors[a]);
        }
    }
    return m;
}

/// The matrix (I_{a,b}(z; m1, m2, l1, l2)).
inline IntegralMatrix matrix_Ihat(cplx z, const WeightData& wd, const IntegralSetup& s = {}) {
    return integral_matrix(z, wd, Normalization::WithCb, s);
}

inline cplx log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

/// The duality factor between K_{a,b}(z; m1, m2, l1, l2) and K_{a,b}(z; l1, l2, m1, m2).
/// `unscaled_phase` selects exp(pi i b (l2 - m2)) instead of exp(pi i b (l2 - m2)/kappa).
inline cplx corollary_ratio(int b, const WeightData& wd, bool unscaled_phase = false) {
    AdmissibleIndex::make(b, wd.m2, wd.l2);
    const double k = wd.kappa;
    const double phase = pi * b * double(wd.l2 - wd.m2) / (unscaled_phase ? 1.0 : k);
    cplx lg = log_factorial(wd.l2 - b) + log_selberg_closed({wd.l2 - b, wd.m1, k}) +
              log_selberg_closed({b, cplx(double(wd.m2)), k});
    lg -= log_factorial(wd.m2 - b) + log_selberg_closed({wd.m2 - b, wd.l1, k}) +
          log_selberg_closed({b, cplx(double(wd.l2)), k});
    return std::exp(lg) * std::polar(1.0, phase);
}

inline double relative_gap(cplx x, cplx y) { return std::abs(x - y) / std::max({std::abs(x), std::abs(y), 1e-300}); }

/// Duality gap between matrix_Ihat on the two sides.
inline CheckReport duality_gap(cplx z, const WeightData& wd, const IntegralSetup& s = {}, double tolerance = -1.0) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "duality";
    rep.params = {{"weight", to_json(wd)}, {"z", format_complex(z)}};
    rep.tolerance = tolerance > 0 ? tolerance : (std::max(wd.m2, wd.l2) >= 3 ? 1e-4 : 1e-5);
    const auto lhs = matrix_Ihat(z, wd, s);
    const auto rhs = wd.m2 == wd.l2 && wd.m1 == wd.l1 ? lhs : matrix_Ihat(z, wd.swapped(), s);
    for (int a = 0; a < lhs.size(); ++a)
        for (int b = 0; b < lhs.size(); ++b) {
            const std::string tag = std::to_string(a) + "," + std::to_string(b);
            rep.add("I[" + tag + "]", lhs.entries(a, b), lhs.errors(a, b));
            rep.add("I_dual[" + tag + "]", rhs.entries(a, b), rhs.errors(a, b));
            rep.update(relative_gap(lhs.entries(a, b), rhs.entries(a, b)));
        }
    rep.finalize();
    rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

/// X with Ihat(z; m, l) = Ihat(z; l, m) X.
inline Eigen::MatrixXcd connection_matrix(cplx z, const WeightData& wd, const IntegralSetup& s = {}) {
    const auto lhs = matrix_Ihat(z, wd, s);
    const auto rhs = matrix_Ihat(z, wd.swapped(), s);
    return rhs.entries.partialPivLu().solve(lhs.entries);
}

}  // namespace hyperdual
