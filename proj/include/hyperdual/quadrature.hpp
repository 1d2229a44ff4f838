#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "contour.hpp"
#include "errors.hpp"
#include "integrand.hpp"
#include "parallel.hpp"
#include "types.hpp"

namespace hyperdual {

struct QuadratureConfig {
    int nodes = 8;  ///< Gauss-Legendre nodes per panel at the first level
    int levels = 2;  ///< refinements after the first evaluation
    double target_rel_err = 1e-10;
    std::optional<double> truncation;
    double growth = 1.5;  ///< node-count factor between levels
    bool strict = true;  ///< throw NoConvergence when the target is missed

    void validate() const {
        if (nodes < 4) throw ConfigError("nodes per panel must be >= 4");
        if (levels < 1) throw ConfigError("at least one refinement level is required");
        if (!(target_rel_err >= 1e-12)) throw ConfigError("target relative error must be >= 1e-12");
        if (!(growth > 1.0)) throw ConfigError("node growth factor must exceed 1");
        if (truncation && !(*truncation > 0)) throw ConfigError("truncation must be positive");
    }

    [[nodiscard]] int nodes_at(int level) const { return int(std::lround(nodes * std::pow(growth, level))); }
};

struct QuadratureResult {
    cplx value{};
    double error = 0.0;  ///< relative difference between the last two levels
    long nodes_used = 0;
    double truncation = 0.0;
};

/// Vector-valued result; error is the max component change over the max
/// component magnitude.
struct MultiQuadratureResult {
    std::vector<cplx> values;
    std::vector<double> abs_errors;
    double error = 0.0;
    long nodes_used = 0;
    double truncation = 0.0;
    int levels_used = 0;

    [[nodiscard]] QuadratureResult component(std::size_t i) const {
        const double mag = std::abs(values.at(i));
        return {values[i], mag > 0 ? abs_errors[i] / mag : abs_errors[i], nodes_used, truncation};
    }
};

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x, w;

    explicit GaussLegendre(int n) : x(n), w(n) {
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int iter = 0; iter < 100; ++iter) {
                double p0 = 1.0, p1 = 0.0;
                for (int j = 1; j <= n; ++j) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            x[i] = -z;
            x[n - 1 - i] = z;
            w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
        }
    }
};

/// Nodes of one coordinate: parameters, coordinate values and quadrature
/// weights times ds/dtau.
struct LoopGrid {
    std::vector<double> tau;
    std::vector<cplx> s;
    std::vector<cplx> dw;
};

inline LoopGrid build_loop_grid(const MultiLoopContour& c, int u, int n) {
    const GaussLegendre gl(n);
    const auto breaks = c.loops[u].panel_breaks();
    LoopGrid g;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double a = breaks[p], b = breaks[p + 1];
        const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (int i = 0; i < n; ++i) {
            const double tau = mid + half * gl.x[i];
            g.tau.push_back(tau);
            g.s.push_back(c.coordinate(u, tau));
            g.dw.push_back(half * gl.w[i] * c.coordinate_derivative(u, tau));
        }
    }
    return g;
}

namespace detail {

/// Argument of g(tau_b) continued from (tau_a, arg_a), bisecting large steps.
template <class G>
double track_arg(const G& g, double tau_a, cplx f_a, double arg_a, double tau_b, cplx f_b, int depth = 0) {
    const double delta = std::arg(f_b / f_a);
    if (std::abs(delta) < kStepGuard) return arg_a + delta;
    if (depth > 60) throw StepTooLarge("branch tracking failed to resolve a step");
    const double tm = 0.5 * (tau_a + tau_b);
    const cplx fm = check_factor(g(tm));
    const double am = track_arg(g, tau_a, f_a, arg_a, tm, fm, depth + 1);
    return track_arg(g, tm, fm, am, tau_b, f_b, depth + 1);
}

/// Tracked arguments of g at the sorted parameters `taus`, starting from
/// (tau0, arg0) and walking outward in both directions.
template <class G>
std::vector<double> track_along(const G& g, double tau0, double arg0, std::span<const double> taus,
                                std::span<const cplx> values) {
    std::vector<double> out(taus.size());
    const cplx f0 = check_factor(g(tau0));
    const auto first = std::size_t(std::lower_bound(taus.begin(), taus.end(), tau0) - taus.begin());
    double prev_tau = tau0, prev_arg = arg0;
    cplx prev_f = f0;
    for (std::size_t i = first; i < taus.size(); ++i) {
        const cplx f = check_factor(values[i]);
        prev_arg = track_arg(g, prev_tau, prev_f, prev_arg, taus[i], f);
        prev_tau = taus[i], prev_f = f;
        out[i] = prev_arg;
    }
    prev_tau = tau0, prev_arg = arg0, prev_f = f0;
    for (std::size_t i = first; i-- > 0;) {
        const cplx f = check_factor(values[i]);
        prev_arg = track_arg(g, prev_tau, prev_f, prev_arg, taus[i], f);
        prev_tau = taus[i], prev_f = f;
        out[i] = prev_arg;
    }
    return out;
}

}  // namespace detail

/// Tracked logarithms of every linear factor on the tensor grid.
/// single[k][u][i] = log(c_k - s_u(tau_i)); pair[u][v][i*n_v + j] = log(s_u - s_v).
struct BranchTables {
    std::vector<LoopGrid> grids;
    std::array<std::array<std::vector<cplx>, kMaxDim>, kMaxCenters> single;
    std::array<std::array<std::vector<cplx>, kMaxDim>, kMaxDim> pair;
};

/// Transports the base arguments to every grid node.  Pair factors go first
/// along the v-coordinate at the base value of u, then along u.
/// `u_first` reverses that order (used to test path independence).
inline BranchTables build_branch_tables(const MultiLoopContour& c, int n, bool u_first = false) {
    if (!c.base.assigned) throw GeometryError("base args not assigned");
    BranchTables tb;
    for (int u = 0; u < c.l; ++u) tb.grids.push_back(build_loop_grid(c, u, n));
    for (std::size_t k = 0; k < c.centers.size(); ++k) {
        for (int u = 0; u < c.l; ++u) {
            const auto& g = tb.grids[u];
            const cplx ck = c.centers[k];
            auto f = [&](double tau) { return ck - c.coordinate(u, tau); };
            std::vector<cplx> vals(g.s.size());
            for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = ck - g.s[i];
            const auto args = detail::track_along(f, c.base_params[u], c.base.single[k][u], g.tau, vals);
            auto& out = tb.single[k][u];
            out.resize(vals.size());
            for (std::size_t i = 0; i < vals.size(); ++i) out[i] = {std::log(std::abs(vals[i])), args[i]};
        }
    }
    for (int u = 0; u < c.l; ++u) {
        for (int v = u + 1; v < c.l; ++v) {
            const auto& gu = tb.grids[u];
            const auto& gv = tb.grids[v];
            const std::size_t nu = gu.tau.size(), nv = gv.tau.size();
            auto& out = tb.pair[u][v];
            out.assign(nu * nv, cplx{});
            const double tu0 = c.base_params[u], tv0 = c.base_params[v];
            if (!u_first) {
                const cplx su0 = c.coordinate(u, tu0);
                std::vector<cplx> col(nv);
                for (std::size_t j = 0; j < nv; ++j) col[j] = su0 - gv.s[j];
                auto fv = [&](double tv) { return su0 - c.coordinate(v, tv); };
                const auto col_args = detail::track_along(fv, tv0, c.base.pair[u][v], gv.tau, col);
                std::vector<cplx> row(nu);
                for (std::size_t j = 0; j < nv; ++j) {
                    const cplx sv = gv.s[j];
                    for (std::size_t i = 0; i < nu; ++i) row[i] = gu.s[i] - sv;
                    auto fu = [&](double tu) { return c.coordinate(u, tu) - sv; };
                    const auto args = detail::track_along(fu, tu0, col_args[j], gu.tau, row);
                    for (std::size_t i = 0; i < nu; ++i) out[i * nv + j] = {std::log(std::abs(row[i])), args[i]};
                }
            } else {
                const cplx sv0 = c.coordinate(v, tv0);
                std::vector<cplx> row(nu);
                for (std::size_t i = 0; i < nu; ++i) row[i] = gu.s[i] - sv0;
                auto fu = [&](double tu) { return c.coordinate(u, tu) - sv0; };
                const auto row_args = detail::track_along(fu, tu0, c.base.pair[u][v], gu.tau, row);
                std::vector<cplx> col(nv);
                for (std::size_t i = 0; i < nu; ++i) {
                    const cplx su = gu.s[i];
                    for (std::size_t j = 0; j < nv; ++j) col[j] = su - gv.s[j];
                    auto fv = [&](double tv) { return su - c.coordinate(v, tv); };
                    const auto args = detail::track_along(fv, tv0, row_args[i], gv.tau, col);
                    for (std::size_t j = 0; j < nv; ++j) out[i * nv + j] = {std::log(std::abs(col[j])), args[j]};
                }
            }
        }
    }
    return tb;
}

namespace detail {

inline constexpr int kChunk = 4;

/// Runs one refinement ladder of `evaluate(n)` and fills error fields.
template <class Eval>
MultiQuadratureResult refine(const QuadratureConfig& cfg, Eval&& evaluate) {
    cfg.validate();
    MultiQuadratureResult res;
    std::vector<cplx> prev;
    for (int level = 0; level <= cfg.levels; ++level) {
        long used = 0;
        std::vector<cplx> cur = evaluate(cfg.nodes_at(level), used);
        res.nodes_used = used;
        res.levels_used = level + 1;
        if (!prev.empty()) {
            double dmax = 0.0, vmax = 0.0;
            res.abs_errors.assign(cur.size(), 0.0);
            for (std::size_t i = 0; i < cur.size(); ++i) {
                res.abs_errors[i] = std::abs(cur[i] - prev[i]);
                dmax = std::max(dmax, res.abs_errors[i]);
                vmax = std::max(vmax, std::abs(cur[i]));
            }
            res.error = vmax > 0 ? dmax / vmax : dmax;
            res.values = cur;
            if (res.error <= cfg.target_rel_err) return res;
        }
        prev = std::move(cur);
    }
    if (!std::isfinite(res.error) || res.error > cfg.target_rel_err) {
        if (cfg.strict)
            throw NoConvergence("quadrature error estimate " + std::to_string(res.error) + " exceeds target " +
                                std::to_string(cfg.target_rel_err));
    }
    return res;
}

inline MultiLoopContour apply_truncation(const MultiLoopContour& c, const QuadratureConfig& cfg) {
    return cfg.truncation ? c.with_truncation(*cfg.truncation) : c;
}

}  // namespace detail

/// Grid point handed to a generic integrand.
struct GridPoint {
    std::span<const cplx> s;
    const BranchState& branch;
};

/// Tensor-product Gauss-Legendre over the chain with branch-tracked factors.
/// f(const GridPoint&, std::span<cplx> out) writes `ncomp` values; the result
/// is the integral against ds_1 ^ ... ^ ds_l in coordinate order.
template <class F>
MultiQuadratureResult integrate_multiloop(const MultiLoopContour& contour, const QuadratureConfig& cfg, int ncomp,
                                          F&& f) {
    const MultiLoopContour c = detail::apply_truncation(contour, cfg);
    auto evaluate = [&](int n, long& used) {
        const BranchTables tb = build_branch_tables(c, n);
        const int l = c.l;
        std::vector<std::size_t> sizes(l);
        std::size_t total = 1;
        for (int u = 0; u < l; ++u) total *= (sizes[u] = tb.grids[u].s.size());
        used = long(total);
        const std::size_t outer = l == 0 ? 1 : sizes[0];
        const std::size_t inner = l == 0 ? 1 : total / outer;
        const int nchunks = int((outer + detail::kChunk - 1) / detail::kChunk);
        std::vector<std::vector<cplx>> partial(nchunks, std::vector<cplx>(ncomp));
        for_each_chunk(nchunks, [&](int chunk) {
            BranchState bs;
            bs.dim = l;
            bs.ncenters = int(c.centers.size());
            std::copy(c.centers.begin(), c.centers.end(), bs.centers.begin());
            std::vector<cplx> out(ncomp), acc(ncomp);
            std::array<std::size_t, kMaxDim> idx{};
            std::array<cplx, kMaxDim> s{};
            const std::size_t lo = std::size_t(chunk) * detail::kChunk;
            const std::size_t hi = std::min(outer, lo + detail::kChunk);
            for (std::size_t o = lo; o < hi; ++o) {
                for (std::size_t r = 0; r < inner; ++r) {
                    std::size_t rem = r;
                    for (int u = l - 1; u >= 1; --u) {
                        idx[u] = rem % sizes[u];
                        rem /= sizes[u];
                    }
                    if (l > 0) idx[0] = o;
                    cplx w{1.0, 0.0};
                    for (int u = 0; u < l; ++u) {
                        s[u] = tb.grids[u].s[idx[u]];
                        bs.t[u] = s[u];
                        w *= tb.grids[u].dw[idx[u]];
                        for (int k = 0; k < bs.ncenters; ++k) bs.single[k][u] = tb.single[k][u][idx[u]];
                    }
                    for (int u = 0; u < l; ++u)
                        for (int v = u + 1; v < l; ++v) bs.pair[u][v] = tb.pair[u][v][idx[u] * sizes[v] + idx[v]];
                    f(GridPoint{std::span<const cplx>(s.data(), l), bs}, std::span<cplx>(out));
                    for (int i = 0; i < ncomp; ++i) acc[i] += w * out[i];
                }
            }
            partial[chunk] = acc;
        });
        std::vector<cplx> result(ncomp);
        for (int i = 0; i < ncomp; ++i) {
            std::vector<cplx> col(nchunks);
            for (int ch = 0; ch < nchunks; ++ch) col[ch] = partial[ch][i];
            result[i] = pairwise_sum(col);
        }
        return result;
    };
    MultiQuadratureResult res = detail::refine(cfg, evaluate);
    res.truncation = c.loops.empty() ? 0.0 : c.loops.front().truncation;
    return res;
}

/// Scalar convenience wrapper: f(const GridPoint&) -> cplx.
template <class F>
QuadratureResult integrate_multiloop_scalar(const MultiLoopContour& contour, const QuadratureConfig& cfg, F&& f) {
    auto res = integrate_multiloop(contour, cfg, 1, [&](const GridPoint& p, std::span<cplx> out) { out[0] = f(p); });
    return res.component(0);
}

/// Integrands of the form
///   exp(log_const + linear * sum s_u + sum_k e_k sum_u log(c_k - s_u) + e_pair sum_{u<v} log(s_u - s_v))
///   * weight_j(s)
/// where each weight is a symmetrization of reciprocal factors 1/(c_k - s_u).
struct ProductIntegrand {
    cplx log_const{};
    cplx linear{};
    std::array<cplx, kMaxCenters> single_exp{};
    cplx pair_exp{};
    /// Per output component: assignment patterns (center index per coordinate,
    /// -1 for no factor) with multiplicities.
    struct Pattern {
        std::array<int, kMaxDim> center{};
        double multiplicity = 1.0;
    };
    std::vector<std::vector<Pattern>> weights;

    /// One component with weight 1.
    static std::vector<std::vector<Pattern>> unit_weight() {
        Pattern p;
        p.center.fill(-1);
        return {{p}};
    }

    /// Components a = 0..amax of Sym[prod_{u<=l-a} 1/(c_first - s) prod_{u>l-a} 1/(c_second - s)],
    /// the l! permutation terms grouped by their (repeating) assignment.
    static std::vector<std::vector<Pattern>> symmetrized(int l, int amax, int first = 0, int second = 1) {
        std::vector<std::vector<Pattern>> out;
        for (int a = 0; a <= amax; ++a) {
            std::vector<Pattern> pats;
            for (const auto& pat : symmetrization_patterns(l, a)) {
                Pattern p;
                p.center.fill(-1);
                for (int u = 0; u < l; ++u) p.center[u] = pat[u] ? second : first;
                auto it = std::find_if(pats.begin(), pats.end(), [&](const Pattern& q) { return q.center == p.center; });
                if (it == pats.end())
                    pats.push_back(p);
                else
                    it->multiplicity += 1.0;
            }
            out.push_back(std::move(pats));
        }
        return out;
    }
};

/// Fast path for ProductIntegrand: factor tables are exponentiated once per
/// node (with per-table scaling) and the tensor sum multiplies table entries.
inline MultiQuadratureResult integrate_product(const MultiLoopContour& contour, const QuadratureConfig& cfg,
                                               const ProductIntegrand& pi_) {
    const MultiLoopContour c = detail::apply_truncation(contour, cfg);
    const int l = c.l;
    const int ncomp = int(pi_.weights.size());
    const int ncent = int(c.centers.size());
    auto evaluate = [&](int n, long& used) {
        const BranchTables tb = build_branch_tables(c, n);
        std::vector<std::size_t> sizes(l);
        std::size_t total = 1;
        for (int u = 0; u < l; ++u) total *= (sizes[u] = tb.grids[u].s.size());
        used = long(total);

        double log_scale = pi_.log_const.real();
        const double phase0 = pi_.log_const.imag();
        // single tables: exp(linear*s + sum_k e_k log(c_k - s)) * dw
        std::array<std::vector<cplx>, kMaxDim> E;
        std::array<std::array<std::vector<cplx>, kMaxDim>, kMaxCenters> R;
        for (int u = 0; u < l; ++u) {
            const auto& g = tb.grids[u];
            std::vector<cplx> lg(g.s.size());
            double mx = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < lg.size(); ++i) {
                cplx v = pi_.linear * g.s[i] + std::log(g.dw[i]);
                for (int k = 0; k < ncent; ++k) v += pi_.single_exp[k] * tb.single[k][u][i];
                lg[i] = v;
                mx = std::max(mx, v.real());
            }
            E[u].resize(lg.size());
            for (std::size_t i = 0; i < lg.size(); ++i) E[u][i] = std::exp(lg[i] - mx);
            log_scale += mx;
            for (int k = 0; k < ncent; ++k) {
                R[k][u].resize(g.s.size());
                for (std::size_t i = 0; i < g.s.size(); ++i) R[k][u][i] = 1.0 / (c.centers[k] - g.s[i]);
            }
        }
        std::array<std::array<std::vector<cplx>, kMaxDim>, kMaxDim> Q;
        for (int u = 0; u < l; ++u)
            for (int v = u + 1; v < l; ++v) {
                const auto& src = tb.pair[u][v];
                double mx = -std::numeric_limits<double>::infinity();
                for (const auto& x : src) mx = std::max(mx, (pi_.pair_exp * x).real());
                if (!std::isfinite(mx)) mx = 0.0;
                Q[u][v].resize(src.size());
                for (std::size_t i = 0; i < src.size(); ++i) Q[u][v][i] = std::exp(pi_.pair_exp * src[i] - mx);
                log_scale += mx;
            }

        if (l == 0) {
            std::vector<cplx> r(ncomp);
            for (int j = 0; j < ncomp; ++j) {
                cplx s{};
                for (const auto& p : pi_.weights[j]) s += p.multiplicity;
                r[j] = std::polar(std::exp(log_scale), phase0) * s;
            }
            return r;
        }

        const std::size_t outer = sizes[0];
        const int nchunks = int((outer + detail::kChunk - 1) / detail::kChunk);
        std::vector<std::vector<cplx>> partial(nchunks, std::vector<cplx>(ncomp));
        for_each_chunk(nchunks, [&](int chunk) {
            std::vector<cplx> acc(ncomp);
            std::array<std::size_t, kMaxDim> idx{};
            std::array<cplx, kMaxDim + 1> prod{};
            const std::size_t lo = std::size_t(chunk) * detail::kChunk;
            const std::size_t hi = std::min(outer, lo + detail::kChunk);
            // depth-first traversal with running products
            auto leaf = [&](cplx value) {
                for (int j = 0; j < ncomp; ++j) {
                    cplx wsum{};
                    for (const auto& p : pi_.weights[j]) {
                        cplx term{p.multiplicity, 0.0};
                        for (int u = 0; u < l; ++u)
                            if (p.center[u] >= 0) term *= R[p.center[u]][u][idx[u]];
                        wsum += term;
                    }
                    acc[j] += value * wsum;
                }
            };
            std::function<void(int)> descend = [&](int d) {
                for (std::size_t i = (d == 0 ? lo : 0); i < (d == 0 ? hi : sizes[d]); ++i) {
                    idx[d] = i;
                    cplx p = prod[d] * E[d][i];
                    for (int u = 0; u < d; ++u) p *= Q[u][d][idx[u] * sizes[d] + i];
                    if (d + 1 == l)
                        leaf(p);
                    else {
                        prod[d + 1] = p;
                        descend(d + 1);
                    }
                }
            };
            prod[0] = 1.0;
            descend(0);
            partial[chunk] = acc;
        });
        std::vector<cplx> result(ncomp);
        const cplx scale = std::polar(std::exp(log_scale), phase0);
        for (int j = 0; j < ncomp; ++j) {
            std::vector<cplx> col(nchunks);
            for (int ch = 0; ch < nchunks; ++ch) col[ch] = partial[ch][j];
            result[j] = scale * pairwise_sum(col);
        }
        return result;
    };
    MultiQuadratureResult res = detail::refine(cfg, evaluate);
    res.truncation = c.loops.empty() ? 0.0 : c.loops.front().truncation;
    return res;
}

}  // namespace hyperdual
