#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <ostream>
#include <vector>

#include "contour.hpp"
#include "errors.hpp"
#include "hyperint.hpp"
#include "quadrature.hpp"
#include "types.hpp"

namespace hyperdual {

/// I_C = int_C exp(-t) (-t)^{M+a} (z-t)^{-M} dt over C' or C''.
struct SaddleParams {
    cplx z{};
    double M = 1.0;
    cplx a{};
    SteepestKind kind = SteepestKind::CPrime;

    void validate(bool allow_small_M = false) const {
        if (!(z.imag() > 0.0)) throw ConfigError("saddle integrals need Im z > 0");
        if (!allow_small_M && !(M >= 1.0)) throw ConfigError("M must be at least 1");
        if (!(M >= 0.0)) throw ConfigError("M must be nonnegative");
    }
};

/// sqrt(-z M) with arg(-z) in (-pi, 0).
inline cplx saddle_root(cplx z, double M) { return std::sqrt(M) * std::polar(std::sqrt(std::abs(z)), 0.5 * std::arg(-z)); }

/// Leading term of the steepest-descent formulas.  For C' the counterclockwise
/// loop gives -i pi^{1/2} (...); `positive_sign` returns +i pi^{1/2} (...) instead.
inline cplx steepest_asympt(const SaddleParams& p, bool positive_sign = false) {
    p.validate(true);
    const cplx r = saddle_root(p.z, p.M);  // (-zM)^{1/2}
    const cplx log_mz = std::log(std::abs(p.z) * p.M) + I_unit * std::arg(-p.z);
    const cplx pow_part = std::exp((2.0 * p.a + 1.0) / 4.0 * log_mz);
    const double sqrt_pi = std::sqrt(pi);
    if (p.kind == SteepestKind::CPrime) return (positive_sign ? 1.0 : -1.0) * I_unit * sqrt_pi * pow_part * std::exp(2.0 * r - p.z / 2.0);
    const cplx phase = std::exp(2.0 * pi * I_unit * (p.M + p.a)) - 1.0;
    return sqrt_pi * phase * pow_part * std::exp(-2.0 * r - p.z / 2.0 - pi * I_unit * p.a);
}

/// Loop geometry through the relevant saddle: C'' has radius |z|/4 and its
/// rays run through the saddle sqrt(-zM); C' passes the other saddle on its arc.
inline SteepestLoop steepest_geometry(const SaddleParams& p, double T) {
    GeometryConfig g;
    g.arc_panel_angle = 0.1;
    g.ray_ratio = 1.3;
    const double az = std::abs(p.z);
    const double radius = p.kind == SteepestKind::CPrime ? std::max(2.0 * az, std::sqrt(p.M * az)) : 0.25 * az;
    return build_steepest_loop(p.kind, p.z, T, radius, g);
}

/// Truncation from the decay exp(-Re t) along the rays, relative to the size
/// of the leading term.
inline double steepest_truncation(const SaddleParams& p) {
    const double az = std::abs(p.z);
    const double psi = 0.5 * (std::arg(p.z) - pi);
    const double cos_min = std::cos(std::abs(psi) + 0.15 * std::arg(p.z));
    TruncationRule rule;
    rule.power = std::abs(p.a.real());
    double scale = 0.0;
    try {
        const cplx lead = steepest_asympt(p);
        if (std::abs(lead) > 0.0 && std::isfinite(std::abs(lead))) scale = std::log(std::abs(lead));
    } catch (const Error&) {
    }
    rule.log_threshold += std::max(0.0, -scale);
    const double radius = p.kind == SteepestKind::CPrime ? std::max(2.0 * az, std::sqrt(p.M * az)) : 0.25 * az;
    // the (t/(z-t))^M factor is not small before |t| exceeds a few saddle radii
    return truncation_radius(rule, cos_min, 4.0 * std::max({radius, std::sqrt(p.M * az), az}));
}

inline QuadratureResult steepest_numeric(const SaddleParams& p, const QuadratureConfig& cfg = {}) {
    p.validate(true);
    const double T = cfg.truncation ? *cfg.truncation : steepest_truncation(p);
    const auto loop = steepest_geometry(p, T);
    ProductIntegrand f;
    f.linear = -1.0;
    f.single_exp[0] = p.M + p.a;
    f.single_exp[1] = -p.M;
    f.weights = ProductIntegrand::unit_weight();
    QuadratureConfig c = cfg;
    c.truncation.reset();
    return integrate_product(steepest_chain(loop), c, f).component(0);
}

/// One row of the dimension scan.
struct DimensionRow {
    int l2 = 0;
    cplx l1{};
    int a = 0, b = 0;
    std::optional<cplx> direct;  ///< K_{a,b}(z; m1, m2, l1, l2), computed while l2 <= direct_max
    cplx dual{};                 ///< ratio * K_{a,b}(z; l1, l2, m1, m2)
    cplx ratio{};
    double err = 0.0;            ///< |direct - dual|/|dual| if direct, else the dual quadrature estimate
    /// For m2 = 1, a = b = 0 the dual side is kappa^{-(m1+m2)/kappa} I_{C''}(z/kappa, l2/kappa, -(m1+m2)/kappa - 1):
    std::optional<cplx> saddle_numeric;  ///< that expression with I_{C''} by quadrature on the steepest loop
    std::optional<cplx> saddle_leading;  ///< that expression with the leading steepest-descent term
};

struct DimensionScanConfig {
    cplx m1{1.3, 0.4};
    int m2 = 1;
    double kappa = 3.7;
    cplx z{1.0, 2.0};
    std::vector<int> l2_values{1, 2, 3, 5, 10, 20};
    int direct_max = 3;
};

/// Growing-dimension K_{a,b} computed through the fixed-dimension dual side.
inline std::vector<DimensionRow> dimension_scan(const DimensionScanConfig& cfg, const IntegralSetup& s = {}) {
    std::vector<DimensionRow> rows;
    for (const int l2 : cfg.l2_values) {
        const cplx l1 = cfg.m1 + double(cfg.m2 - l2);
        const WeightData wd = validate_weight_data(cfg.m1, cfg.m2, l1, l2, cfg.kappa);
        const WeightData dual = wd.swapped();
        const int d = wd.dim();
        for (int b = 0; b <= d; ++b) {
            const auto dual_col = integral_K_column(b, cfg.z, dual, s);
            std::optional<MultiQuadratureResult> direct_col;
            if (l2 <= cfg.direct_max) direct_col = integral_K_column(b, cfg.z, wd, s);
            const cplx ratio = corollary_ratio(b, wd);
            for (int a = 0; a <= d; ++a) {
                DimensionRow row;
                row.l2 = l2;
                row.l1 = l1;
                row.a = a;
                row.b = b;
                row.ratio = ratio;
                row.dual = ratio * dual_col.values[a];
                if (direct_col) {
                    row.direct = direct_col->values[a];
                    row.err = relative_gap(*row.direct, row.dual);
                } else {
                    row.err = dual_col.component(a).error;
                }
                if (cfg.m2 == 1 && a == 0 && b == 0) {
                    // t = kappa*tau turns the dual integral into kappa^{-(m1+m2)/kappa} I_{C''}
                    const double k = cfg.kappa;
                    SaddleParams sp{cfg.z / k, double(l2) / k, -(cfg.m1 + double(cfg.m2)) / k - 1.0,
                                    SteepestKind::CDoublePrime};
                    const cplx pre = ratio * std::pow(k, -(cfg.m1 + double(cfg.m2)) / k);
                    row.saddle_numeric = pre * steepest_numeric(sp, s.quad).value;
                    row.saddle_leading = pre * steepest_asympt(sp);
                }
                rows.push_back(row);
            }
        }
    }
    return rows;
}

inline void write_dimension_csv(std::ostream& os, const std::vector<DimensionRow>& rows) {
    os << "l2,l1,a,b,direct_re,direct_im,dual_re,dual_im,ratio_re,ratio_im,err,saddle_num_re,saddle_num_im,saddle_lead_re,saddle_lead_im\n";
    os.precision(15);
    auto opt = [&](const std::optional<cplx>& v) {
        if (v)
            os << v->real() << ',' << v->imag();
        else
            os << ',';
    };
    for (const auto& r : rows) {
        os << r.l2 << ',' << format_complex(r.l1) << ',' << r.a << ',' << r.b << ',';
        opt(r.direct);
        os << ',' << r.dual.real() << ',' << r.dual.imag() << ',' << r.ratio.real() << ',' << r.ratio.imag() << ','
           << r.err << ',';
        opt(r.saddle_numeric);
        os << ',';
        opt(r.saddle_leading);
        os << '\n';
    }
}

}  // namespace hyperdual
