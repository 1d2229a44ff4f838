#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "checks.hpp"

namespace hyperdual {

/// One acceptance criterion: the reports it consists of and its verdict.
struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<CheckReport> reports;
    double runtime_ms = 0.0;
    double runtime_limit_ms = 0.0;  ///< 0 = no limit
    bool pass = false;
    /// Extra reports shown for reference; they do not affect the verdict.
    std::vector<CheckReport> informational;
};

namespace detail {

inline CriterionResult start(int id, std::string title) {
    CriterionResult c;
    c.id = id;
    c.title = std::move(title);
    return c;
}

inline CriterionResult finish(CriterionResult c, std::chrono::steady_clock::time_point t0) {
    c.runtime_ms = elapsed_ms(t0);
    c.pass = !c.reports.empty();
    for (const auto& r : c.reports) c.pass = c.pass && r.pass;
    if (c.runtime_limit_ms > 0 && c.runtime_ms > c.runtime_limit_ms) c.pass = false;
    return c;
}

inline WeightData balanced(cplx l1, int m2, int l2, double kappa) {
    return validate_weight_data(l1 + double(l2 - m2), m2, l1, l2, kappa);
}

}  // namespace detail

/// Point used by the solution checks; -(lambda1-lambda2)(z1-z2) = 1+2i.
inline Point default_solution_point() { return {cplx(0.7, 0.1), cplx(-0.3, 0.1), cplx(-0.4, -1.1), cplx(0.6, 0.9)}; }

/// Quadrature settings used by the acceptance criteria.
inline IntegralSetup acceptance_setup(int nodes = 8) {
    IntegralSetup s;
    s.quad.nodes = nodes;
    s.quad.levels = 1;
    s.quad.strict = false;
    return s;
}

inline CriterionResult criterion_selberg(bool quick) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(1, "Selberg calibration");
    c.runtime_limit_ms = 120e3;
    const auto q = acceptance_setup().quad;
    const std::vector<int> ls = quick ? std::vector<int>{1, 2} : std::vector<int>{1, 2, 3};
    for (int l : ls)
        for (double k : {2.5, 3.7})
            for (cplx m : {cplx(0.7), cplx(1.4, 0.3)}) c.reports.push_back(selberg_check({l, m, k}, q));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_duality(bool quick) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(2, "Duality of I_{a,b}");
    c.runtime_limit_ms = 600e3;
    const auto s = acceptance_setup();
    std::vector<std::pair<int, int>> dims = {{1, 2}, {1, 3}, {2, 3}};
    if (quick) dims.resize(1);
    for (auto [m2, l2] : dims)
        for (cplx l1 : {cplx(1.3), cplx(0.8, 0.5)})
            for (cplx z : {cplx(1, 2), cplx(0, 3)}) c.reports.push_back(duality_gap(z, detail::balanced(l1, m2, l2, 2.5), s));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_ode(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(3, "Matrix ODE residual");
    c.reports.push_back(
        ode_check({1, 2}, detail::balanced(1.3, 1, 2, 2.5), {1e-2, 5e-3, 2.5e-3}, acceptance_setup(12)));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_asympt(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(4, "Large-z asymptotics");
    c.reports.push_back(asympt_check(detail::balanced(1.3, 1, 2, 2.5), {cplx(0, 40), cplx(0, 80)}, acceptance_setup()));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_operators(bool quick) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(5, "KZ/dynamical compatibility and duality");
    c.runtime_limit_ms = 60e3;
    const int points = quick ? 5 : 20;
    std::uint64_t seed = 11;
    for (auto [m2, l2] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {2, 3}})
        c.reports.push_back(glrep_check(detail::balanced(cplx(1.3, 0.2), m2, l2, 2.5), points, seed++));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_solution(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(6, "Hypergeometric solutions");
    c.reports.push_back(solution_check(detail::balanced(1.3, 1, 2, 2.5), default_solution_point(), 1e-2,
                                       acceptance_setup(12)));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_corollary(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(7, "Corollary ratio");
    const auto wd = detail::balanced(1.3, 1, 2, 2.5);
    c.reports.push_back(corollary_check({1, 2}, wd, acceptance_setup()));
    c.informational.push_back(corollary_check({1, 2}, wd, acceptance_setup(), 1e-5, true));
    return detail::finish(c, t0);
}

inline CriterionResult criterion_saddle(bool) {
    const auto t0 = std::chrono::steady_clock::now();
    auto c = detail::start(8, "Steepest descent");
    QuadratureConfig q = acceptance_setup().quad;
    const std::vector<double> Ms = {100, 400};
    c.reports.push_back(saddle_check({1, 2}, 0.0, SteepestKind::CPrime, Ms, q));
    c.reports.push_back(saddle_check({1, 2}, 0.25, SteepestKind::CDoublePrime, Ms, q));
    c.informational.push_back(saddle_check({1, 2}, 0.0, SteepestKind::CPrime, Ms, q, {1.6, 2.6}, true));
    return detail::finish(c, t0);
}

inline std::vector<CriterionResult> numeric_criteria(bool quick) {
    return {criterion_selberg(quick),   criterion_duality(quick), criterion_ode(quick),
            criterion_asympt(quick),    criterion_operators(quick), criterion_solution(quick),
            criterion_corollary(quick), criterion_saddle(quick)};
}

}  // namespace hyperdual
