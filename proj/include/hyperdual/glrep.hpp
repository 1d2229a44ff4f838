#pragma once

#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "errors.hpp"
#include "model.hpp"
#include "types.hpp"

namespace hyperdual {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Highest weight (m, 0).  Verma modules are truncated to d <= truncation.
struct ModuleSpec {
    cplx m{};
    bool irreducible = false;
    int truncation = 0;

    static ModuleSpec verma(cplx m, int truncation) { return {m, false, truncation}; }
    static ModuleSpec irrep(int m, int truncation) {
        if (m < 0) throw NegativeDimension("irreducible module needs a nonnegative integer weight");
        return {cplx(double(m)), true, truncation};
    }

    /// Largest basis label d kept in the realization.
    [[nodiscard]] int top() const { return irreducible ? std::min(int(std::lround(m.real())), truncation) : truncation; }
    [[nodiscard]] int size() const { return top() + 1; }
};

/// c * E_{2,1}^d v_m; c == 0 means the zero vector.
struct BasisTerm {
    int d = 0;
    cplx c{};
};

/// E_{i,j} applied to E_{2,1}^d v_m.
inline BasisTerm act_E(int i, int j, const ModuleSpec& spec, int d) {
    if (d < 0 || d > spec.top()) throw IndexOutOfRange("basis label outside the module");
    if (i < 1 || i > 2 || j < 1 || j > 2) throw IndexOutOfRange("gl2 generator index must be 1 or 2");
    const double dd = d;
    if (i == 1 && j == 1) return {d, spec.m - dd};
    if (i == 2 && j == 2) return {d, dd};
    if (i == 2 && j == 1) {
        if (spec.irreducible && d + 1 > int(std::lround(spec.m.real()))) return {d + 1, 0.0};
        return {d + 1, 1.0};
    }
    if (d == 0) return {0, 0.0};
    return {d - 1, dd * (spec.m - dd + 1.0)};
}

/// Matrix of E_{i,j} on the realized basis; images beyond the truncation are dropped.
inline Matrix generator_matrix(int i, int j, const ModuleSpec& spec) {
    const int n = spec.size();
    Matrix M = Matrix::Zero(n, n);
    for (int d = 0; d < n; ++d) {
        const BasisTerm t = act_E(i, j, spec, d);
        if (t.c != cplx{} && t.d < n) M(t.d, d) += t.c;
    }
    return M;
}

/// Operators on (M_{m1} x L_{m2})[l1, l2] written in the basis F^a.
class WeightSpace {
public:
    explicit WeightSpace(const WeightData& wd)
        : wd_(wd), v1_(ModuleSpec::verma(wd.m1, wd.l2)), v2_(ModuleSpec::irrep(wd.m2, wd.l2)), dim_(wd.dim() + 1) {
        for (int i = 1; i <= 2; ++i)
            for (int j = 1; j <= 2; ++j) {
                e1_[i - 1][j - 1] = generator_matrix(i, j, v1_);
                e2_[i - 1][j - 1] = generator_matrix(i, j, v2_);
            }
        const int n2 = v2_.size();
        embed_ = Matrix::Zero(v1_.size() * n2, dim_);
        for (int a = 0; a < dim_; ++a) {
            // F^a = e_{l2-a} x e_a / ((l2-a)! a!)
            const double norm = std::exp(-std::lgamma(wd.l2 - a + 1.0) - std::lgamma(a + 1.0));
            embed_((wd.l2 - a) * n2 + a, a) = norm;
        }
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const WeightData& weight() const { return wd_; }

    /// E_{i,j} acting on tensor slot 1 or 2.
    [[nodiscard]] Matrix slot_full(int slot, int i, int j) const {
        const auto& a = slot == 1 ? e1_[i - 1][j - 1] : e2_[i - 1][j - 1];
        const Matrix id1 = Matrix::Identity(v1_.size(), v1_.size());
        const Matrix id2 = Matrix::Identity(v2_.size(), v2_.size());
        return slot == 1 ? kron(a, id2) : kron(id1, a);
    }

    /// Coproduct action of E_{i,j} on the tensor product.
    [[nodiscard]] Matrix total_full(int i, int j) const { return slot_full(1, i, j) + slot_full(2, i, j); }

    [[nodiscard]] Matrix casimir_full() const {
        return kron(e1_[0][0], e2_[0][0]) + kron(e1_[1][1], e2_[1][1]) + kron(e1_[0][1], e2_[1][0]) +
               kron(e1_[1][0], e2_[0][1]);
    }

    /// Restriction of a weight-preserving operator to the F basis.
    [[nodiscard]] Matrix restrict(const Matrix& full) const {
        const Matrix image = full * embed_;
        Matrix out = Matrix::Zero(dim_, dim_);
        const int n2 = v2_.size();
        for (int b = 0; b < dim_; ++b) {
            for (int k = 0; k < image.rows(); ++k) {
                if (image(k, b) == cplx{}) continue;
                const int d1 = k / n2, d2 = k % n2;
                if (d1 + d2 != wd_.l2 || d2 >= dim_)
                    throw IndexOutOfRange("operator leaves the weight subspace");
                const int a = d2;
                out(a, b) += image(k, b) / embed_((wd_.l2 - a) * n2 + a, a);
            }
        }
        return out;
    }

    [[nodiscard]] Matrix casimir() const { return restrict(casimir_full()); }
    [[nodiscard]] Matrix slot(int s, int i, int j) const { return restrict(slot_full(s, i, j)); }
    /// E_{2,1} E_{1,2} - E_{2,2} with the coproduct action.
    [[nodiscard]] Matrix dynamical_term() const {
        return restrict(total_full(2, 1) * total_full(1, 2) - total_full(2, 2));
    }

private:
    static Matrix kron(const Matrix& a, const Matrix& b) {
        Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        return out;
    }

    WeightData wd_;
    ModuleSpec v1_, v2_;
    int dim_;
    std::array<std::array<Matrix, 2>, 2> e1_, e2_;
    Matrix embed_;
};

inline Matrix casimir_matrix(const WeightData& wd) { return WeightSpace(wd).casimir(); }

/// Variables of the operators, in the order (z1, z2, lambda1, lambda2).
enum class Var { z1 = 0, z2 = 1, lambda1 = 2, lambda2 = 3 };
using Point = std::array<cplx, 4>;

inline const char* var_name(Var v) {
    static const char* names[] = {"z1", "z2", "lambda1", "lambda2"};
    return names[int(v)];
}

/// kappa * d/d(slot) - sum_k f_k(point) * M_k with f_k one of 1, x_i, 1/(x_i - x_j).
struct OperatorMatrix {
    enum class Kind { Constant, Linear, InverseDifference };
    struct Term {
        Kind kind = Kind::Constant;
        int i = 0, j = 0;
        Matrix M;
    };

    Var slot = Var::z1;
    double kappa = 1.0;
    std::vector<Term> terms;
    std::string name;

    static cplx scalar(const Term& t, const Point& p) {
        switch (t.kind) {
            case Kind::Constant: return 1.0;
            case Kind::Linear: return p[t.i];
            default: {
                const cplx d = p[t.i] - p[t.j];
                if (std::abs(d) <= 1e-14) throw DegenerateParameters("coincident variables in an operator coefficient");
                return 1.0 / d;
            }
        }
    }

    static cplx scalar_derivative(const Term& t, const Point& p, int var) {
        switch (t.kind) {
            case Kind::Constant: return 0.0;
            case Kind::Linear: return t.i == var ? 1.0 : 0.0;
            default: {
                const cplx d = p[t.i] - p[t.j];
                if (std::abs(d) <= 1e-14) throw DegenerateParameters("coincident variables in an operator coefficient");
                if (var == t.i) return -1.0 / (d * d);
                if (var == t.j) return 1.0 / (d * d);
                return 0.0;
            }
        }
    }

    /// The coefficient P in kappa*d - P.
    [[nodiscard]] Matrix coefficient(const Point& p) const {
        Matrix P = Matrix::Zero(terms.front().M.rows(), terms.front().M.cols());
        for (const auto& t : terms) P += scalar(t, p) * t.M;
        return P;
    }

    [[nodiscard]] Matrix coefficient_derivative(const Point& p, Var v) const {
        Matrix P = Matrix::Zero(terms.front().M.rows(), terms.front().M.cols());
        for (const auto& t : terms) P += scalar_derivative(t, p, int(v)) * t.M;
        return P;
    }

    /// Variables renamed by perm: term variable k becomes perm[k].
    [[nodiscard]] OperatorMatrix relabeled(const std::array<int, 4>& perm) const {
        OperatorMatrix out = *this;
        out.slot = Var(perm[int(slot)]);
        for (auto& t : out.terms) {
            t.i = perm[t.i];
            t.j = perm[t.j];
        }
        return out;
    }
};

namespace detail {

inline OperatorMatrix::Term term(OperatorMatrix::Kind k, int i, int j, Matrix M) { return {k, i, j, std::move(M)}; }

}  // namespace detail

/// KZ operator nabla_a, a = 1, 2 (two tensor factors).
inline OperatorMatrix kz_operator(int a, const WeightData& wd) {
    if (a != 1 && a != 2) throw IndexOutOfRange("KZ index must be 1 or 2");
    const WeightSpace ws(wd);
    using K = OperatorMatrix::Kind;
    OperatorMatrix op;
    op.slot = a == 1 ? Var::z1 : Var::z2;
    op.kappa = wd.kappa;
    op.name = "nabla_" + std::to_string(a);
    const int za = a - 1, zb = 2 - a;
    op.terms.push_back(detail::term(K::InverseDifference, za, zb, ws.casimir()));
    op.terms.push_back(detail::term(K::Linear, int(Var::lambda1), 0, ws.slot(a, 1, 1)));
    op.terms.push_back(detail::term(K::Linear, int(Var::lambda2), 0, ws.slot(a, 2, 2)));
    return op;
}

/// Dynamical operator D_i, i = 1, 2.
inline OperatorMatrix dyn_operator(int i, const WeightData& wd) {
    if (i != 1 && i != 2) throw IndexOutOfRange("dynamical index must be 1 or 2");
    const WeightSpace ws(wd);
    using K = OperatorMatrix::Kind;
    OperatorMatrix op;
    op.slot = i == 1 ? Var::lambda1 : Var::lambda2;
    op.kappa = wd.kappa;
    op.name = "D_" + std::to_string(i);
    const int li = 1 + i, lj = i == 1 ? 3 : 2;
    op.terms.push_back(detail::term(K::InverseDifference, li, lj, ws.dynamical_term()));
    op.terms.push_back(detail::term(K::Linear, int(Var::z1), 0, ws.slot(1, i, i)));
    op.terms.push_back(detail::term(K::Linear, int(Var::z2), 0, ws.slot(2, i, i)));
    return op;
}

/// Max-entry norm.
inline double max_abs(const Matrix& M) { return M.size() == 0 ? 0.0 : M.cwiseAbs().maxCoeff(); }

/// [X, Y] for X = kappa d_p - P, Y = kappa d_q - Q:
/// kappa (d_q P - d_p Q) + [P, Q].  Also returns the scale of the summands.
inline Matrix operator_commutator(const OperatorMatrix& X, const OperatorMatrix& Y, const Point& p, double& scale) {
    const Matrix P = X.coefficient(p), Q = Y.coefficient(p);
    const Matrix dqP = X.kappa * X.coefficient_derivative(p, Y.slot);
    const Matrix dpQ = Y.kappa * Y.coefficient_derivative(p, X.slot);
    const Matrix PQ = P * Q, QP = Q * P;
    scale = std::max({1.0, max_abs(dqP), max_abs(dpQ), max_abs(PQ), max_abs(QP)});
    return dqP - dpQ + PQ - QP;
}

inline void require_nondegenerate(const Point& p) {
    if (std::abs(p[0] - p[1]) <= 1e-14 || std::abs(p[2] - p[3]) <= 1e-14)
        throw DegenerateParameters("z1 = z2 or lambda1 = lambda2");
}

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline nlohmann::json point_json(const Point& p) {
    return {{"z1", format_complex(p[0])},
            {"z2", format_complex(p[1])},
            {"lambda1", format_complex(p[2])},
            {"lambda2", format_complex(p[3])}};
}

}  // namespace detail

/// Every pairwise commutator among nabla_1, nabla_2, D_1, D_2 at one point.
/// Errors are reported relative to the scale of the summands.
inline CheckReport compatibility_check(const Point& p, const WeightData& wd, double tolerance = 1e-10) {
    const auto t0 = std::chrono::steady_clock::now();
    require_nondegenerate(p);
    CheckReport rep;
    rep.check = "compatibility";
    rep.params = {{"weight", to_json(wd)}, {"point", detail::point_json(p)}};
    rep.tolerance = tolerance;
    const std::array<OperatorMatrix, 4> ops = {kz_operator(1, wd), kz_operator(2, wd), dyn_operator(1, wd),
                                               dyn_operator(2, wd)};
    for (std::size_t x = 0; x < ops.size(); ++x)
        for (std::size_t y = x + 1; y < ops.size(); ++y) {
            double scale = 1.0;
            const double norm = max_abs(operator_commutator(ops[x], ops[y], p, scale));
            rep.add("[" + ops[x].name + "," + ops[y].name + "]", norm, scale);
            rep.update(norm / scale);
        }
    rep.finalize();
    rep.runtime_ms = detail::elapsed_ms(t0);
    return rep;
}

/// nabla_a(z, lambda) on the (m1, m2) side against D_a(lambda, z) on the
/// swapped side, and D_a(z, lambda) against nabla_a(lambda, z).  The basis
/// map F^a -> F^a is the identity on coordinates.
inline CheckReport duality_intertwine_check(const Point& p, const WeightData& wd, double tolerance = 1e-10) {
    const auto t0 = std::chrono::steady_clock::now();
    require_nondegenerate(p);
    CheckReport rep;
    rep.check = "intertwine";
    rep.params = {{"weight", to_json(wd)}, {"point", detail::point_json(p)}};
    rep.tolerance = tolerance;
    const WeightData dual = wd.swapped();
    // operators on the dual side evaluated at (lambda1, lambda2, z1, z2)
    const std::array<int, 4> swap_vars = {2, 3, 0, 1};
    for (int a = 1; a <= 2; ++a) {
        const std::array<std::pair<OperatorMatrix, OperatorMatrix>, 2> pairs = {
            std::pair{kz_operator(a, wd), dyn_operator(a, dual).relabeled(swap_vars)},
            std::pair{dyn_operator(a, wd), kz_operator(a, dual).relabeled(swap_vars)}};
        for (const auto& [lhs, rhs] : pairs) {
            const Matrix P = lhs.coefficient(p), Q = rhs.coefficient(p);
            const double scale = std::max({1.0, max_abs(P), max_abs(Q)});
            double gap = max_abs(P - Q) / scale;
            if (lhs.slot != rhs.slot || lhs.kappa != rhs.kappa) gap = std::numeric_limits<double>::infinity();
            rep.add(lhs.name + " vs dual " + rhs.name, max_abs(P - Q), scale);
            rep.update(gap);
        }
    }
    rep.finalize();
    rep.runtime_ms = detail::elapsed_ms(t0);
    return rep;
}

/// Random points with |z1 - z2|, |lambda1 - lambda2| bounded away from 0.
inline std::vector<Point> random_points(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    std::vector<Point> pts;
    while (int(pts.size()) < count) {
        Point p;
        for (auto& x : p) x = {U(rng), U(rng)};
        if (std::abs(p[0] - p[1]) > 0.2 && std::abs(p[2] - p[3]) > 0.2) pts.push_back(p);
    }
    return pts;
}

/// U(point) as a vector in the F basis.
using VectorField = std::function<Vector(const Point&)>;

/// Five-point central derivative of U in variable v.
inline Vector central_derivative(const VectorField& U, Point p, Var v, double h) {
    auto at = [&](double s) {
        Point q = p;
        q[int(v)] += s;
        return U(q);
    };
    return (at(-2 * h) - 8.0 * at(-h) + 8.0 * at(h) - at(2 * h)) / (12.0 * h);
}

/// Residuals of nabla_1, nabla_2, D_1, D_2 applied to U, each relative to
/// the larger of |kappa dU| and |P U|.
inline CheckReport solution_residual_check(const VectorField& U, const Point& p, double h, const WeightData& wd,
                                           double tolerance = 1e-5, const std::string& name = "solution") {
    const auto t0 = std::chrono::steady_clock::now();
    require_nondegenerate(p);
    CheckReport rep;
    rep.check = name;
    rep.params = {{"weight", to_json(wd)}, {"point", detail::point_json(p)}, {"h", h}};
    rep.tolerance = tolerance;
    const std::array<OperatorMatrix, 4> ops = {kz_operator(1, wd), kz_operator(2, wd), dyn_operator(1, wd),
                                               dyn_operator(2, wd)};
    const Vector u0 = U(p);
    for (const auto& op : ops) {
        const Vector du = op.kappa * central_derivative(U, p, op.slot, h);
        const Vector pu = op.coefficient(p) * u0;
        const double scale = std::max({du.cwiseAbs().maxCoeff(), pu.cwiseAbs().maxCoeff(), 1e-300});
        const double res = (du - pu).cwiseAbs().maxCoeff();
        rep.add(op.name + " U", res, scale);
        rep.update(u0.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : res / scale);
    }
    rep.finalize();
    rep.runtime_ms = detail::elapsed_ms(t0);
    return rep;
}

}  // namespace hyperdual
