#pragma once

#include <chrono>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "errors.hpp"
#include "glrep.hpp"
#include "hyperint.hpp"
#include "model.hpp"
#include "special.hpp"
#include "types.hpp"

namespace hyperdual {

struct CoefficientMatrices {
    Matrix A;
    Matrix B;
};

inline CoefficientMatrices coefficient_matrices(const WeightData& wd) {
    const int n = wd.dim() + 1;
    CoefficientMatrices cm{Matrix::Zero(n, n), Matrix::Zero(n, n)};
    const cplx m1 = wd.m1;
    const double m2 = wd.m2, l2 = wd.l2;
    for (int a = 0; a < n; ++a) {
        const double x = a;
        cm.A(a, a) = x;
        cm.B(a, a) = 2 * x * x - x * (2 * l2 + m2 - m1) + m2 * l2;
        if (a >= 1) cm.B(a, a - 1) = x * (l2 - m1 - x);
        if (a + 1 < n) cm.B(a, a + 1) = -(m2 - x) * (l2 - x);
    }
    return cm;
}

/// kappa dI/dz + (B/z + A) I with dI/dz from a five-point stencil, relative
/// to max |I|.  Runs the stencil over each h in `steps`; the reported error
/// is the residual at the first step.
inline CheckReport ode_residual(cplx z, const WeightData& wd, const std::vector<double>& steps,
                                const IntegralSetup& s = {}, double tolerance = 1e-5) {
    const auto t0 = std::chrono::steady_clock::now();
    if (steps.empty()) throw ConfigError("at least one stencil step is required");
    CheckReport rep;
    rep.check = "ode";
    rep.params = {{"weight", to_json(wd)}, {"z", format_complex(z)}, {"h", steps}};
    rep.tolerance = tolerance;
    const auto cm = coefficient_matrices(wd);
    const Matrix I0 = matrix_Ihat(z, wd, s).entries;
    const double norm = std::max(max_abs(I0), 1e-300);
    bool first = true;
    for (const double h : steps) {
        if (!(h > 0) || z.imag() <= 2 * h) throw ConfigError("stencil must stay in the upper half plane");
        auto at = [&](double k) { return matrix_Ihat(z + k * h, wd, s).entries; };
        const Matrix dI = (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
        const Matrix R = wd.kappa * dI + (cm.B / z + cm.A) * I0;
        const double res = max_abs(R) / norm;
        rep.add("residual h=" + std::to_string(h), res, 0.0);
        if (first) rep.update(res);
        first = false;
    }
    rep.finalize();
    rep.runtime_ms = detail::elapsed_ms(t0);
    return rep;
}

/// Leading term of I_{a,b}(z) as z -> infinity inside the upper sector.
inline cplx asympt_leading(int a, int b, cplx z, const WeightData& wd) {
    AdmissibleIndex::make(a, wd.m2, wd.l2);
    AdmissibleIndex::make(b, wd.m2, wd.l2);
    if (a != b) return 0.0;
    const double k = wd.kappa;
    const double bb = b, l2 = wd.l2, m2 = wd.m2;
    const cplx expo = (2 * bb * bb - bb * (2 * l2 + m2 - wd.m1) + m2 * l2) / k;
    cplx lg = -bb * z / k + expo * (std::log(k) - std::log(z)) + I_unit * pi * bb * (wd.m1 - l2) / k;
    for (int j = 0; j < b; ++j) {
        lg += log_gamma(cplx(1.0 + (j + 1) / k)) + log_gamma(1.0 + (wd.m1 - l2 + double(j + 1)) / k);
        lg -= log_gamma(cplx(1.0 + (m2 - j) / k)) + log_gamma(cplx(1.0 + (l2 - j) / k));
    }
    return std::exp(lg);
}

/// The matrices of kappa Psi' = ((Omega - m1 m2)/x - E22^(2)) Psi.
struct PsiSystem {
    Matrix omega_shifted;  ///< Omega - m1 m2
    Matrix e22_second;     ///< E_{2,2} on the second factor
    double kappa = 1.0;

    explicit PsiSystem(const WeightData& wd) : kappa(wd.kappa) {
        const WeightSpace ws(wd);
        omega_shifted = ws.casimir() - wd.m1 * double(wd.m2) * Matrix::Identity(ws.dim(), ws.dim());
        e22_second = ws.slot(2, 2, 2);
    }

    [[nodiscard]] Matrix rhs_matrix(cplx x) const { return (omega_shifted / x - e22_second) / kappa; }
};

struct OdeTolerance {
    double abs = 1e-13;
    double rel = 1e-12;
};

/// Transports Psi(x_path[0]) = psi0 along the polygon x_path.
inline Vector solve_psi(const std::vector<cplx>& x_path, const Vector& psi0, const WeightData& wd,
                        const OdeTolerance& tol = {}) {
    if (x_path.empty()) throw ConfigError("empty path");
    const PsiSystem sys(wd);
    if (psi0.size() != sys.omega_shifted.rows()) throw IndexOutOfRange("initial vector has the wrong dimension");
    for (std::size_t k = 0; k < x_path.size(); ++k) {
        if (std::abs(x_path[k]) <= 1e-12) throw SingularPath("path meets x = 0");
        if (k + 1 < x_path.size()) {
            const cplx a = x_path[k], d = x_path[k + 1] - a;
            if (std::abs(d) == 0.0) continue;
            const double s = std::clamp(-(std::conj(d) * a).real() / std::norm(d), 0.0, 1.0);
            if (std::abs(a + s * d) <= 1e-12) throw SingularPath("path segment passes through x = 0");
        }
    }
    using State = std::vector<cplx>;
    State y(psi0.data(), psi0.data() + psi0.size());
    namespace odeint = boost::numeric::odeint;
    for (std::size_t k = 0; k + 1 < x_path.size(); ++k) {
        const cplx a = x_path[k], d = x_path[k + 1] - a;
        if (std::abs(d) == 0.0) continue;
        auto rhs = [&](const State& psi, State& dpsi, double s) {
            const Eigen::Map<const Vector> v(psi.data(), Eigen::Index(psi.size()));
            const Vector out = d * (sys.rhs_matrix(a + s * d) * v);
            dpsi.assign(out.data(), out.data() + out.size());
        };
        auto stepper = odeint::make_controlled(tol.abs, tol.rel, odeint::runge_kutta_dopri5<State>());
        odeint::integrate_adaptive(stepper, rhs, y, 0.0, 1.0, 1e-3);
    }
    return Eigen::Map<Vector>(y.data(), Eigen::Index(y.size()));
}

/// log of exp((z1 l1' + ...)/kappa) (z1-z2)^{m1 m2/kappa} (lambda1-lambda2)^{l1 l2/kappa}
/// with principal logarithms.
inline cplx log_solution_prefactor(const Point& p, const WeightData& wd) {
    require_nondegenerate(p);
    const cplx z1 = p[0], z2 = p[1], la1 = p[2], la2 = p[3];
    const double m2 = wd.m2, l2 = wd.l2;
    const cplx ex = z1 * la1 * (wd.m1 - l2) + z1 * la2 * l2 + z2 * la1 * m2;
    return (ex + wd.m1 * m2 * std::log(z1 - z2) + wd.l1 * l2 * std::log(la1 - la2)) / wd.kappa;
}

/// x = -(lambda1 - lambda2)(z1 - z2).
inline cplx scalar_argument(const Point& p) { return -(p[2] - p[3]) * (p[0] - p[1]); }

/// U = prefactor * Psi(x) for any Psi handle.
inline Vector build_U_from_psi(const Point& p, const std::function<Vector(cplx)>& psi, const WeightData& wd) {
    return std::exp(log_solution_prefactor(p, wd)) * psi(scalar_argument(p));
}

/// Column b of the integral matrix as a vector in the F basis.
inline Vector ibar(int b, cplx x, const WeightData& wd, const IntegralSetup& s = {}) {
    const auto col = integral_K_column(b, x, wd, s);
    const cplx cb = constant_Cb(b, wd);
    Vector v(wd.dim() + 1);
    for (int a = 0; a <= wd.dim(); ++a) v(a) = cb * col.values[a];
    return v;
}

/// U_b(z1, z2, lambda1, lambda2) built from the integrals.
inline VectorField make_U_b(int b, const WeightData& wd, const IntegralSetup& s = {}) {
    return [=](const Point& p) { return build_U_from_psi(p, [&](cplx x) { return ibar(b, x, wd, s); }, wd); };
}

/// U from Psi transported by the ODE from x0 (straight segment to each x).
inline VectorField make_U_from_ode(cplx x0, const Vector& psi0, const WeightData& wd, const OdeTolerance& tol = {}) {
    return [=](const Point& p) {
        return build_U_from_psi(p, [&](cplx x) { return solve_psi({x0, x}, psi0, wd, tol); }, wd);
    };
}

}  // namespace hyperdual
