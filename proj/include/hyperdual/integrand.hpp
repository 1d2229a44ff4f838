#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "contour.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hyperdual {

inline constexpr double kVanishTol = 1e-14;
inline constexpr double kStepGuard = pi / 2;

/// Continuously tracked logarithms of the linear factors of an integrand at
/// one point: single[k][u] = log(c_k - t_u), pair[u][v] = log(t_u - t_v) for
/// u < v.  Imaginary parts are the tracked arguments.
struct BranchState {
    int dim = 0;
    int ncenters = 0;
    std::array<cplx, kMaxCenters> centers{};
    std::array<cplx, kMaxDim> t{};
    std::array<std::array<cplx, kMaxDim>, kMaxCenters> single{};
    std::array<std::array<cplx, kMaxDim>, kMaxDim> pair{};
};

namespace detail {

inline cplx check_factor(cplx f) {
    if (std::abs(f) <= kVanishTol) throw FactorVanishes("linear factor vanishes on the contour");
    return f;
}

/// Argument of f continued from prev_arg; flags jumps beyond the step guard.
inline double continued_arg(cplx f, double prev_arg, bool& too_large) {
    const double p = std::arg(f);
    const double a = p + 2 * pi * std::round((prev_arg - p) / (2 * pi));
    if (std::abs(a - prev_arg) >= kStepGuard) too_large = true;
    return a;
}

inline cplx continued_log(cplx f, double prev_arg, bool& too_large) {
    return {std::log(std::abs(f)), continued_arg(f, prev_arg, too_large)};
}

}  // namespace detail

/// Builds a state at t with prescribed arguments (each must agree with the
/// principal argument modulo 2*pi).
inline BranchState make_branch_state(std::span<const cplx> centers, std::span<const cplx> t, const BaseArgs& args) {
    BranchState bs;
    bs.dim = int(t.size());
    bs.ncenters = int(centers.size());
    if (bs.dim > kMaxDim || bs.ncenters > kMaxCenters) throw IndexOutOfRange("branch state too large");
    std::copy(centers.begin(), centers.end(), bs.centers.begin());
    std::copy(t.begin(), t.end(), bs.t.begin());
    auto fix = [](cplx f, double a) {
        detail::check_factor(f);
        const double p = std::arg(f);
        const double k = std::round((a - p) / (2 * pi));
        if (std::abs(a - p - 2 * pi * k) > 1e-6) throw StepTooLarge("assigned argument inconsistent with factor");
        return cplx(std::log(std::abs(f)), p + 2 * pi * k);
    };
    for (int k = 0; k < bs.ncenters; ++k)
        for (int u = 0; u < bs.dim; ++u) bs.single[k][u] = fix(bs.centers[k] - t[u], args.single[k][u]);
    for (int u = 0; u < bs.dim; ++u)
        for (int v = u + 1; v < bs.dim; ++v) bs.pair[u][v] = fix(t[u] - t[v], args.pair[u][v]);
    return bs;
}

/// State using principal arguments everywhere.
inline BranchState principal_branch_state(std::span<const cplx> centers, std::span<const cplx> t) {
    BaseArgs args;
    for (std::size_t k = 0; k < centers.size(); ++k)
        for (std::size_t u = 0; u < t.size(); ++u) args.single[k][u] = std::arg(centers[k] - t[u]);
    for (std::size_t u = 0; u < t.size(); ++u)
        for (std::size_t v = u + 1; v < t.size(); ++v) args.pair[u][v] = std::arg(t[u] - t[v]);
    return make_branch_state(centers, t, args);
}

/// The state at the base point of a chain.
inline BranchState base_branch_state(const MultiLoopContour& c) {
    if (!c.base.assigned) throw GeometryError("base args not assigned");
    std::array<cplx, kMaxDim> t{};
    for (int u = 0; u < c.l; ++u) t[u] = c.coordinate(u, c.base_params[u]);
    return make_branch_state(c.centers, std::span<const cplx>(t.data(), c.l), c.base);
}

/// Moves every tracked argument continuously to the new point.  Throws
/// StepTooLarge if any argument would change by pi/2 or more.
inline BranchState branch_track_step(const BranchState& bs, std::span<const cplx> t_new) {
    if (int(t_new.size()) != bs.dim) throw IndexOutOfRange("dimension mismatch in branch_track_step");
    BranchState out = bs;
    bool too_large = false;
    for (int u = 0; u < bs.dim; ++u) out.t[u] = t_new[u];
    for (int k = 0; k < bs.ncenters; ++k)
        for (int u = 0; u < bs.dim; ++u) {
            const cplx f = detail::check_factor(bs.centers[k] - t_new[u]);
            out.single[k][u] = detail::continued_log(f, bs.single[k][u].imag(), too_large);
        }
    for (int u = 0; u < bs.dim; ++u)
        for (int v = u + 1; v < bs.dim; ++v) {
            const cplx f = detail::check_factor(t_new[u] - t_new[v]);
            out.pair[u][v] = detail::continued_log(f, bs.pair[u][v].imag(), too_large);
        }
    if (too_large) throw StepTooLarge("argument jump exceeds pi/2; refine the path");
    return out;
}

/// Tracks along a straight path in the parameter cube from `from` to `to`,
/// bisecting whenever a step is too large.
inline BranchState transport(const MultiLoopContour& c, BranchState bs, std::span<const double> from,
                             std::span<const double> to, int depth = 0) {
    std::array<cplx, kMaxDim> t{};
    for (int u = 0; u < c.l; ++u) t[u] = c.coordinate(u, to[u]);
    try {
        return branch_track_step(bs, std::span<const cplx>(t.data(), c.l));
    } catch (const StepTooLarge&) {
        if (depth > 50) throw;
    }
    std::array<double, kMaxDim> mid{};
    for (int u = 0; u < c.l; ++u) mid[u] = 0.5 * (from[u] + to[u]);
    std::span<const double> m(mid.data(), c.l);
    bs = transport(c, bs, from, m, depth + 1);
    return transport(c, bs, m, to, depth + 1);
}

/// Arguments at the parametrization origin (all coordinates at tau = 0).
inline BranchState origin_branch_state(const MultiLoopContour& c) {
    std::vector<double> zero(c.l, 0.0);
    BranchState bs = base_branch_state(c);
    // leave the base point one coordinate at a time
    std::vector<double> cur = c.base_params;
    for (int u = 0; u < c.l; ++u) {
        std::vector<double> next = cur;
        next[u] = 0.0;
        bs = transport(c, bs, cur, next);
        cur = next;
    }
    return bs;
}

/// exp(log_mag + i*phase).
struct LogIntegrandValue {
    double log_mag = 0.0;
    double phase = 0.0;

    static LogIntegrandValue from_log(cplx lg) { return {lg.real(), lg.imag()}; }
    [[nodiscard]] cplx log() const { return {log_mag, phase}; }
    [[nodiscard]] cplx value() const { return std::polar(std::exp(log_mag), phase); }
};

namespace detail {

inline void require_nonvanishing(std::span<const cplx> t, std::span<const cplx> centers) {
    for (std::size_t u = 0; u < t.size(); ++u) {
        for (auto c : centers) check_factor(c - t[u]);
        for (std::size_t v = u + 1; v < t.size(); ++v) check_factor(t[u] - t[v]);
    }
}

}  // namespace detail

/// log of Phi_l(t, z; m1, m2)^{1/kappa} from the tracked factor logs.
/// Expects centers {0, z}; the l = dim of the state.
inline cplx log_master_phi_l(const BranchState& bs, const WeightData& wd) {
    const double inv_k = 1.0 / wd.kappa;
    cplx acc{};
    for (int u = 0; u < bs.dim; ++u) acc += -bs.t[u] - wd.m1 * bs.single[0][u] - double(wd.m2) * bs.single[1][u];
    for (int u = 0; u < bs.dim; ++u)
        for (int v = u + 1; v < bs.dim; ++v) acc += 2.0 * bs.pair[u][v];
    return inv_k * acc;
}

/// Phi_l(t, z; m1, m2)^{1/kappa} with the branch carried by `branch`.
inline LogIntegrandValue master_phi_l(std::span<const cplx> t, cplx z, const WeightData& wd, const BranchState& branch) {
    if (int(t.size()) != branch.dim) throw IndexOutOfRange("branch state dimension mismatch");
    const std::array<cplx, 2> centers{cplx{}, z};
    detail::require_nonvanishing(t, centers);
    if (t.empty()) return {};
    if (branch.ncenters != 2 || branch.centers[1] != z) throw IndexOutOfRange("branch state must track (-t) and (z-t)");
    return LogIntegrandValue::from_log(log_master_phi_l(branch, wd));
}

/// Assignment patterns of a full symmetrization over S_l: pattern[u] is true
/// when coordinate u receives the second kind of factor, i.e. when the
/// permutation sends one of the last `a` slots to u.  One entry per
/// permutation (l! entries, with repetitions).
inline std::vector<std::array<bool, kMaxDim>> symmetrization_patterns(int l, int a) {
    std::vector<int> sigma(l);
    std::iota(sigma.begin(), sigma.end(), 0);
    std::vector<std::array<bool, kMaxDim>> out;
    do {
        std::array<bool, kMaxDim> pat{};
        for (int slot = l - a; slot < l; ++slot) pat[sigma[slot]] = true;
        out.push_back(pat);
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return out;
}

namespace detail {

inline cplx symmetrize(std::span<const cplx> first, std::span<const cplx> second, int a) {
    const int l = int(first.size());
    if (a < 0 || a > l) throw IndexOutOfRange("weight index out of range");
    std::vector<int> sigma(l);
    std::iota(sigma.begin(), sigma.end(), 0);
    cplx sum{};
    do {
        cplx term{1.0, 0.0};
        for (int slot = 0; slot < l; ++slot) term *= slot < l - a ? first[sigma[slot]] : second[sigma[slot]];
        sum += term;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return sum;
}

}  // namespace detail

/// w_{l-a,a}(t, z) = Sym[ prod_{u<=l-a} 1/(-t_u) prod_{u>l-a} 1/(z-t_u) ].
inline cplx weight_w(std::span<const cplx> t, cplx z, int a) {
    std::vector<cplx> first, second;
    for (auto x : t) {
        first.push_back(1.0 / detail::check_factor(-x));
        second.push_back(1.0 / detail::check_factor(z - x));
    }
    return detail::symmetrize(first, second, a);
}

/// Two-point master function with the (z1, z2, lambda1, lambda2) prefactors.
/// The state must track (z1 - s_u), (z2 - s_u), (s_u - s_v).  Constant
/// powers (lambda1-lambda2)^{-l2/kappa}, (z1-z2)^{m1 m2/kappa} use principal logs.
inline LogIntegrandValue master_phi4(std::span<const cplx> s, cplx z1, cplx z2, cplx lambda1, cplx lambda2,
                                     const WeightData& wd, const BranchState& branch) {
    if (std::abs(lambda1 - lambda2) <= kVanishTol || std::abs(z1 - z2) <= kVanishTol)
        throw DegenerateParameters("lambda1 = lambda2 or z1 = z2");
    if (int(s.size()) != branch.dim) throw IndexOutOfRange("branch state dimension mismatch");
    const std::array<cplx, 2> centers{z1, z2};
    detail::require_nonvanishing(s, centers);
    const cplx lam = lambda1 - lambda2;
    const double l2 = double(s.size());
    cplx acc = lambda1 * (wd.m1 * z1 + double(wd.m2) * z2) - l2 * std::log(lam) + wd.m1 * double(wd.m2) * std::log(z1 - z2);
    for (int u = 0; u < branch.dim; ++u)
        acc += -lam * s[u] - wd.m1 * branch.single[0][u] - double(wd.m2) * branch.single[1][u];
    for (int u = 0; u < branch.dim; ++u)
        for (int v = u + 1; v < branch.dim; ++v) acc += 2.0 * branch.pair[u][v];
    return LogIntegrandValue::from_log(acc / wd.kappa);
}

/// w_{l2-a,a}(s, z1, z2) = Sym[ prod 1/(z1-s_u) prod 1/(z2-s_u) ].
inline cplx weight_w4(std::span<const cplx> s, cplx z1, cplx z2, int a) {
    std::vector<cplx> first, second;
    for (auto x : s) {
        first.push_back(1.0 / detail::check_factor(z1 - x));
        second.push_back(1.0 / detail::check_factor(z2 - x));
    }
    return detail::symmetrize(first, second, a);
}

}  // namespace hyperdual
