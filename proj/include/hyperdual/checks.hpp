#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "asympt.hpp"
#include "glrep.hpp"
#include "hyperint.hpp"
#include "model.hpp"
#include "ode.hpp"
#include "selberg.hpp"

namespace hyperdual {

/// Accepted range for the ratio of errors at two scales.
struct RateBracket {
    double lo = 1.5;
    double hi = 3.0;

    /// Distance of r outside [lo, hi] (0 inside).
    [[nodiscard]] double violation(double r) const {
        if (!std::isfinite(r)) return std::numeric_limits<double>::infinity();
        return std::max({0.0, lo - r, r - hi});
    }
};

namespace detail {

inline void stamp(CheckReport& rep, std::chrono::steady_clock::time_point t0) {
    rep.finalize();
    rep.runtime_ms = elapsed_ms(t0);
}

inline nlohmann::json quad_json(const QuadratureConfig& q) {
    return {{"nodes", q.nodes}, {"levels", q.levels}, {"growth", q.growth}};
}

}  // namespace detail

inline CheckReport selberg_check(const SelbergParams& p, const QuadratureConfig& q = {}, double tolerance = -1.0) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "selberg";
    rep.params = {{"l", p.l}, {"m", format_complex(p.m)}, {"kappa", p.kappa}, {"quadrature", detail::quad_json(q)}};
    rep.tolerance = tolerance > 0 ? tolerance : (p.l <= 2 ? 1e-6 : 1e-4);
    const cplx closed = selberg_closed(p);
    const auto num = selberg_numeric(p, q);
    rep.add("closed", closed);
    rep.add("numeric", num.value, num.error);
    rep.update(relative_gap(num.value, closed));
    detail::stamp(rep, t0);
    return rep;
}

/// Residual of the matrix ODE at z with the h^4 rate required between the
/// first two steps; later steps may flatten once the residual is below `floor`.
inline CheckReport ode_check(cplx z, const WeightData& wd, const std::vector<double>& steps, const IntegralSetup& s = {},
                             double tolerance = 1e-5, double floor = 1e-9) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep = ode_residual(z, wd, steps, s, tolerance);
    rep.params["floor"] = floor;
    std::vector<double> res;
    for (const auto& v : rep.values) res.push_back(v.value.real());
    bool rate_ok = true;
    for (std::size_t k = 0; k + 1 < res.size(); ++k) {
        const double order = std::log(res[k] / res[k + 1]) / std::log(steps[k] / steps[k + 1]);
        rep.add("order " + std::to_string(steps[k]) + "->" + std::to_string(steps[k + 1]), order);
        const bool in_range = order >= 3.0 && order <= 5.0;
        if (k == 0 ? !in_range : !(in_range || res[k + 1] <= floor)) rate_ok = false;
    }
    if (!rate_ok) rep.update(std::numeric_limits<double>::infinity());
    detail::stamp(rep, t0);
    return rep;
}

/// I_{a,b}/leading_b - delta_{a,b} at each z; the deviations must shrink at the
/// O(1/z) rate between consecutive z.
inline CheckReport asympt_check(const WeightData& wd, const std::vector<cplx>& zs, const IntegralSetup& s = {},
                                RateBracket bracket = {1.5, 3.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "asympt";
    std::vector<std::string> zlabels;
    for (auto z : zs) zlabels.push_back(format_complex(z));
    rep.params = {{"weight", to_json(wd)}, {"z", zlabels}, {"bracket", {bracket.lo, bracket.hi}}};
    rep.tolerance = 0.0;
    const int n = wd.dim() + 1;
    std::vector<Matrix> dev;
    for (auto z : zs) {
        const auto I = matrix_Ihat(z, wd, s);
        Matrix d(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                d(a, b) = I.entries(a, b) / asympt_leading(b, b, z, wd) - (a == b ? 1.0 : 0.0);
                rep.add("dev[" + std::to_string(a) + "," + std::to_string(b) + "] z=" + format_complex(z), std::abs(d(a, b)));
            }
        dev.push_back(d);
    }
    for (std::size_t k = 0; k + 1 < dev.size(); ++k)
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double r = std::abs(dev[k](a, b)) / std::abs(dev[k + 1](a, b));
                rep.add("rate[" + std::to_string(a) + "," + std::to_string(b) + "]", r);
                rep.update(bracket.violation(r));
            }
    detail::stamp(rep, t0);
    return rep;
}

inline CheckReport glrep_check(const WeightData& wd, int points, std::uint64_t seed, double tolerance = 1e-10) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "glrep";
    rep.params = {{"weight", to_json(wd)}, {"points", points}, {"seed", seed}};
    rep.tolerance = tolerance;
    double worst_c = 0.0, worst_i = 0.0;
    for (const auto& p : random_points(points, seed)) {
        worst_c = std::max(worst_c, compatibility_check(p, wd, tolerance).max_rel_err);
        worst_i = std::max(worst_i, duality_intertwine_check(p, wd, tolerance).max_rel_err);
    }
    rep.add("compatibility", worst_c);
    rep.add("intertwine", worst_i);
    rep.update(worst_c);
    rep.update(worst_i);
    detail::stamp(rep, t0);
    return rep;
}

/// Both solution routes for every admissible b: U_b from the integrals and
/// U from Psi transported by the ODE (seeded with the integral column at x0).
inline CheckReport solution_check(const WeightData& wd, const Point& p, double h, const IntegralSetup& s = {},
                                  double tolerance = 1e-5, cplx x0 = {2.0, 3.0}) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = "solution";
    rep.params = {{"weight", to_json(wd)}, {"point", detail::point_json(p)}, {"h", h}, {"x0", format_complex(x0)}};
    rep.tolerance = tolerance;
    if (!(scalar_argument(p).imag() > 0.0)) throw ConfigError("-(lambda1-lambda2)(z1-z2) must have Im > 0");
    for (int b = 0; b <= wd.dim(); ++b) {
        const auto r1 = solution_residual_check(make_U_b(b, wd, s), p, h, wd, tolerance);
        for (const auto& v : r1.values) rep.add("U_" + std::to_string(b) + ": " + v.label, v.value, v.err);
        rep.update(r1.max_rel_err);
        const auto r2 = solution_residual_check(make_U_from_ode(x0, ibar(b, x0, wd, s), wd), p, h, wd, tolerance);
        for (const auto& v : r2.values) rep.add("U_psi_" + std::to_string(b) + ": " + v.label, v.value, v.err);
        rep.update(r2.max_rel_err);
    }
    detail::stamp(rep, t0);
    return rep;
}

/// K_{a,b}(z; m) / K_{a,b}(z; dual) against corollary_ratio.
inline CheckReport corollary_check(cplx z, const WeightData& wd, const IntegralSetup& s = {}, double tolerance = 1e-5,
                                   bool unscaled_phase = false) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = unscaled_phase ? "corollary-unscaled-phase" : "corollary";
    rep.params = {{"weight", to_json(wd)}, {"z", format_complex(z)}, {"unscaled_phase", unscaled_phase}};
    rep.tolerance = tolerance;
    for (int b = 0; b <= wd.dim(); ++b) {
        const auto lhs = integral_K_column(b, z, wd, s);
        const auto rhs = integral_K_column(b, z, wd.swapped(), s);
        const cplx predicted = corollary_ratio(b, wd, unscaled_phase);
        rep.add("ratio formula b=" + std::to_string(b), predicted);
        for (int a = 0; a <= wd.dim(); ++a) {
            const cplx numeric = lhs.values[a] / rhs.values[a];
            rep.add("K ratio a=" + std::to_string(a) + " b=" + std::to_string(b), numeric);
            rep.update(relative_gap(numeric, predicted));
        }
    }
    detail::stamp(rep, t0);
    return rep;
}

/// |numeric/leading - 1| at each M; the deviation must shrink like M^{-1/2}.
inline CheckReport saddle_check(cplx z, cplx a, SteepestKind kind, const std::vector<double>& Ms,
                                const QuadratureConfig& q = {}, RateBracket bracket = {1.6, 2.6},
                                bool positive_sign = false) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckReport rep;
    rep.check = std::string("saddle-") + (kind == SteepestKind::CPrime ? "Cprime" : "Cdoubleprime") +
                (positive_sign ? "-positive-sign" : "");
    rep.params = {{"z", format_complex(z)}, {"a", format_complex(a)}, {"M", Ms}, {"bracket", {bracket.lo, bracket.hi}}};
    rep.tolerance = 0.0;
    std::vector<double> dev;
    for (const double M : Ms) {
        const SaddleParams p{z, M, a, kind};
        p.validate();
        const auto num = steepest_numeric(p, q);
        const cplx lead = steepest_asympt(p, positive_sign);
        rep.add("numeric M=" + std::to_string(int(M)), num.value, num.error);
        rep.add("leading M=" + std::to_string(int(M)), lead);
        dev.push_back(std::abs(num.value / lead - 1.0));
        rep.add("deviation M=" + std::to_string(int(M)), dev.back());
    }
    for (std::size_t k = 0; k + 1 < dev.size(); ++k) {
        const double r = dev[k] / dev[k + 1];
        rep.add("rate", r);
        rep.update(bracket.violation(r));
    }
    detail::stamp(rep, t0);
    return rep;
}

/// Cross-check rows of the dimension scan: direct against dual where both
/// exist, and the one-dimensional dual against its steepest-loop form.
inline CheckReport dimension_check(const std::vector<DimensionRow>& rows, const DimensionScanConfig& cfg,
                                   double tolerance = 1e-5) {
    CheckReport rep;
    rep.check = "dim-scan";
    rep.params = {{"m1", format_complex(cfg.m1)}, {"m2", cfg.m2}, {"kappa", cfg.kappa}, {"z", format_complex(cfg.z)},
                  {"l2", cfg.l2_values}};
    rep.tolerance = tolerance;
    for (const auto& r : rows) {
        const std::string tag = "l2=" + std::to_string(r.l2) + " a=" + std::to_string(r.a) + " b=" + std::to_string(r.b);
        rep.add(tag + " dual", r.dual, r.err);
        if (r.direct) rep.update(r.err);
        if (r.saddle_numeric) {
            rep.add(tag + " saddle numeric", *r.saddle_numeric);
            rep.update(relative_gap(*r.saddle_numeric, r.dual));
        }
        if (r.saddle_leading) rep.add(tag + " saddle leading", *r.saddle_leading);
    }
    rep.finalize();
    return rep;
}

}  // namespace hyperdual
