#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <vector>

#include "errors.hpp"
#include "types.hpp"

namespace hyperdual {

/// Geometry knobs for loop realizations.  Non-positive radius_base selects
/// the default 0.1 * min(1, |z|).
struct GeometryConfig {
    double radius_base = -1.0;
    double radius_ratio = 1.8;
    std::optional<double> truncation;
    /// Ray directions of a loop group are kept inside (sector_lo, sector_hi)
    /// (z-group) or its mirror image (0-group).
    double sector_lo = 0.1;
    double sector_hi = 1.35;
    /// Panel grading on rays (geometric ratio) and maximal panel angle on arcs.
    double ray_ratio = 2.0;
    double arc_panel_angle = pi / 4;
};

/// Decay model used to pick the truncation radius: the integrand on a ray
/// is bounded by exp(-decay * Re t) * |t|^power.
struct TruncationRule {
    double decay = 1.0;
    double power = 0.0;
    double log_threshold = 36.841361487904734;  // -ln(1e-16)
};

/// Smallest T >= t_min with decay*cos_min*T - power*ln(T) >= log_threshold.
inline double truncation_radius(const TruncationRule& rule, double cos_min, double t_min) {
    const double rate = rule.decay * cos_min;
    if (!(rate > 0.0)) throw GeometryError("rays do not lie in the decay sector");
    auto margin = [&](double T) { return rate * T - rule.power * std::log(T) - rule.log_threshold; };
    double T = std::max(t_min, 1.0);
    while (margin(T) < 0.0) T *= 1.25;
    return T;
}

/// A loop from "infinity" (radius T) around a center and back, counterclockwise.
///
/// Five segments share the parameter interval [0,1] equally:
///   0: arc at radius T from the anchor direction to the incoming ray,
///   1: incoming ray from T down to the inner radius (log-radius parameter),
///   2: inner arc from beta_in to beta_out,
///   3: outgoing ray from the inner radius out to T,
///   4: arc at radius T from beta_out back to anchor + 2*pi.
/// The far arcs carry a negligible share of the integral and make the path
/// a closed curve with path(0) == path(1).
struct LoopPath {
    cplx center{};
    double radius = 0.1;
    double beta_in = 0.1;
    double beta_out = 2 * pi - 0.1;
    double anchor = 0.0;
    double truncation = 50.0;
    double ray_ratio = 2.0;
    double arc_panel_angle = pi / 4;

    static constexpr int kSegments = 5;

    struct Local {
        int segment;
        double s;
    };

    [[nodiscard]] static Local locate(double tau) {
        double x = std::clamp(tau, 0.0, 1.0) * kSegments;
        int seg = std::min(int(x), kSegments - 1);
        return {seg, x - seg};
    }

    /// Polar coordinates (rho, continuous angle) of point(tau) - center and
    /// their derivatives with respect to tau.
    void polar(double tau, double& rho, double& phi, double& drho, double& dphi) const {
        const auto [seg, s] = locate(tau);
        const double T = truncation, r = radius;
        const double k = kSegments;
        switch (seg) {
            case 0:
                rho = T, drho = 0;
                phi = anchor + s * (beta_in - anchor), dphi = k * (beta_in - anchor);
                break;
            case 1:
                rho = T * std::pow(r / T, s), drho = k * rho * std::log(r / T);
                phi = beta_in, dphi = 0;
                break;
            case 2:
                rho = r, drho = 0;
                phi = beta_in + s * (beta_out - beta_in), dphi = k * (beta_out - beta_in);
                break;
            case 3:
                rho = r * std::pow(T / r, s), drho = k * rho * std::log(T / r);
                phi = beta_out, dphi = 0;
                break;
            default:
                rho = T, drho = 0;
                phi = beta_out + s * (anchor + 2 * pi - beta_out), dphi = k * (anchor + 2 * pi - beta_out);
                break;
        }
    }

    [[nodiscard]] cplx point(double tau) const {
        double rho, phi, drho, dphi;
        polar(tau, rho, phi, drho, dphi);
        return center + std::polar(rho, phi);
    }

    [[nodiscard]] cplx derivative(double tau) const {
        double rho, phi, drho, dphi;
        polar(tau, rho, phi, drho, dphi);
        return std::polar(1.0, phi) * cplx(drho, rho * dphi);
    }

    /// Continuous argument of point(tau) - center along the loop.
    [[nodiscard]] double angle(double tau) const {
        double rho, phi, drho, dphi;
        polar(tau, rho, phi, drho, dphi);
        return phi;
    }

    /// Parameter where the inner arc crosses the direction pi (the point
    /// center - radius).
    [[nodiscard]] double base_param() const { return (2.0 + (pi - beta_in) / (beta_out - beta_in)) / kSegments; }

    /// Panel boundaries in tau; rays are graded geometrically, arcs uniformly.
    [[nodiscard]] std::vector<double> panel_breaks() const {
        auto arc_panels = [&](double span) { return std::max(1, int(std::ceil(span / arc_panel_angle - 1e-9))); };
        const int ray = std::max(1, int(std::ceil(std::log(truncation / radius) / std::log(ray_ratio) - 1e-9)));
        const std::array<int, kSegments> count = {arc_panels(beta_in - anchor), ray, arc_panels(beta_out - beta_in), ray,
                                                  arc_panels(anchor + 2 * pi - beta_out)};
        std::vector<double> breaks{0.0};
        for (int seg = 0; seg < kSegments; ++seg)
            for (int i = 1; i <= count[seg]; ++i) breaks.push_back((seg + double(i) / count[seg]) / kSegments);
        breaks.back() = 1.0;
        return breaks;
    }

    /// Largest |direction| over the rays and far arcs (for the decay bound).
    [[nodiscard]] double max_abs_direction() const {
        auto wrap = [](double a) { return std::remainder(a, 2 * pi); };
        return std::max({std::abs(wrap(beta_in)), std::abs(wrap(beta_out)), std::abs(wrap(anchor))});
    }

    [[nodiscard]] LoopPath with_truncation(double T) const {
        LoopPath p = *this;
        p.truncation = T;
        return p;
    }
};

/// Arguments assigned at the base point of a chain: single[k][u] is arg(c_k - t_u),
/// pair[u][v] (u < v) is arg(t_u - t_v).
struct BaseArgs {
    std::array<std::array<double, kMaxDim>, kMaxCenters> single{};
    std::array<std::array<double, kMaxDim>, kMaxDim> pair{};
    bool assigned = false;
};

/// Product of loops, one per coordinate, plus the linear factors whose
/// branches are tracked: (c_k - s_u) for each center c_k and (s_u - s_v).
/// Coordinates are s = scale * t + shift with t on the loops.
struct MultiLoopContour {
    cplx z{};
    bool uses_z = true;
    int l = 0;
    int b = 0;
    std::vector<LoopPath> loops;
    std::vector<cplx> centers;
    cplx scale{1.0, 0.0};
    cplx shift{};
    std::vector<double> base_params;
    BaseArgs base;

    [[nodiscard]] cplx coordinate(int u, double tau) const { return scale * loops[u].point(tau) + shift; }
    [[nodiscard]] cplx coordinate_derivative(int u, double tau) const { return scale * loops[u].derivative(tau); }

    [[nodiscard]] MultiLoopContour with_truncation(double T) const {
        MultiLoopContour c = *this;
        for (std::size_t u = 0; u < c.loops.size(); ++u) c.loops[u] = c.loops[u].with_truncation(T * (1.0 + 0.1 * rank(int(u))));
        return c;
    }

    /// Nesting rank of loop u inside its center group (0 = innermost).
    [[nodiscard]] int rank(int u) const { return u < b ? u : u - b; }
};

namespace detail {

inline LoopPath group_loop(cplx center, double radius, double mid_direction, double half_width, double T,
                           const GeometryConfig& g) {
    LoopPath p;
    p.center = center;
    p.radius = radius;
    p.beta_in = mid_direction + half_width;
    p.beta_out = mid_direction - half_width + 2 * pi;
    p.anchor = mid_direction;
    p.truncation = T;
    p.ray_ratio = g.ray_ratio;
    p.arc_panel_angle = g.arc_panel_angle;
    return p;
}

inline double principal_arg(cplx v) { return std::arg(v); }

}  // namespace detail

/// Nested loops: loops 0..b-1 around z (0 innermost), loops b..l-1 around 0.
/// With uses_z == false the contour is the all-zero-group chain used for the
/// Selberg integrals and z is ignored.
inline MultiLoopContour build_multi_loop(cplx z, int l, int b, const GeometryConfig& g = {},
                                         const TruncationRule& rule = {}, bool uses_z = true) {
    if (l < 0 || l > kMaxDim) throw GeometryError("dimension out of desk-scale range");
    if (b < 0 || b > l) throw GeometryError("b must satisfy 0 <= b <= l");
    if (!uses_z && b != 0) throw GeometryError("z-loops need z");
    if (uses_z && !(z.imag() > 0.0)) throw GeometryError("requires Im z > 0");
    if (!(g.radius_ratio > 1.0)) throw GeometryError("radius ratio must exceed 1");
    if (!(0.0 < g.sector_lo && g.sector_lo < g.sector_hi && g.sector_hi < pi / 2))
        throw GeometryError("sector must lie in (0, pi/2)");

    const double r0 = g.radius_base > 0 ? g.radius_base : 0.1 * (uses_z ? std::min(1.0, std::abs(z)) : 1.0);
    const int nz = b, n0 = l - b;
    const double rmax_z = nz > 0 ? r0 * std::pow(g.radius_ratio, nz - 1) : 0.0;
    const double rmax_0 = n0 > 0 ? r0 * std::pow(g.radius_ratio, n0 - 1) : 0.0;
    if (uses_z && rmax_z + rmax_0 >= z.imag())
        throw GeometryError("loop radii collide with the other center (shrink radius_base)");

    const double mid = 0.5 * (g.sector_lo + g.sector_hi);
    const double width = 0.5 * (g.sector_hi - g.sector_lo);
    const double cos_min = std::cos(g.sector_hi);
    double T = g.truncation ? *g.truncation : truncation_radius(rule, cos_min, 0.0);
    T = std::max(T, 4.0 * std::max(rmax_0, rmax_z) + (uses_z ? std::abs(z) : 0.0));

    MultiLoopContour c;
    c.z = z;
    c.uses_z = uses_z;
    c.l = l;
    c.b = b;
    c.centers = uses_z ? std::vector<cplx>{cplx{}, z} : std::vector<cplx>{cplx{}};
    for (int u = 0; u < l; ++u) {
        const bool around_z = u < b;
        const int k = around_z ? u : u - b;
        const int n = around_z ? nz : n0;
        const double half = width * (k + 1) / n;
        c.loops.push_back(detail::group_loop(around_z ? z : cplx{}, r0 * std::pow(g.radius_ratio, k),
                                             around_z ? mid : -mid, half, T * (1.0 + 0.1 * k), g));
        c.base_params.push_back(c.loops.back().base_param());
    }
    return c;
}

/// The Selberg chain: l nested loops around 0.
inline MultiLoopContour build_delta(int l, const GeometryConfig& g = {}, const TruncationRule& rule = {}) {
    return build_multi_loop(cplx{}, l, 0, g, rule, false);
}

/// Principal arguments at the base point (every coordinate at the inner-arc
/// point center - radius).  This realizes the prescribed conventions:
/// arg(-t_u) = 0 on 0-loops and in (-pi,0) on z-loops, arg(z - t_u) = 0 on
/// z-loops and in (0,pi) on 0-loops, arg(t_u - t_v) = 0 inside a group and in
/// (0,pi) for a z-loop against a 0-loop.
inline MultiLoopContour assign_base_args(MultiLoopContour c) {
    std::vector<cplx> s;
    for (int u = 0; u < c.l; ++u) s.push_back(c.coordinate(u, c.base_params[u]));
    for (std::size_t k = 0; k < c.centers.size(); ++k)
        for (int u = 0; u < c.l; ++u) c.base.single[k][u] = detail::principal_arg(c.centers[k] - s[u]);
    for (int u = 0; u < c.l; ++u)
        for (int v = u + 1; v < c.l; ++v) c.base.pair[u][v] = detail::principal_arg(s[u] - s[v]);
    c.base.assigned = true;
    return c;
}

/// Transports a t-chain through s = scale * t + shift.  Branches of the new
/// factors follow from the old ones: (c'_k - s) = -scale * (t - (c'_k - shift)/scale)
/// is identified with scale * (old factor) when old center k matches.
inline MultiLoopContour change_variables(const MultiLoopContour& c, cplx scale, cplx shift,
                                         std::vector<cplx> new_centers) {
    if (!c.base.assigned) throw GeometryError("base args must be assigned before a change of variables");
    if (new_centers.size() != c.centers.size()) throw GeometryError("center count mismatch");
    MultiLoopContour out = c;
    out.scale = scale * c.scale;
    out.shift = scale * c.shift + shift;
    out.centers = std::move(new_centers);
    const double arg_scale = std::arg(scale);
    for (std::size_t k = 0; k < out.centers.size(); ++k) {
        // the new center must be the image of the old one
        const cplx image = scale * c.centers[k] + shift;
        if (std::abs(image - out.centers[k]) > 1e-12 * (1.0 + std::abs(image)))
            throw GeometryError("new centers must be images of the old centers");
        for (int u = 0; u < c.l; ++u) out.base.single[k][u] = c.base.single[k][u] + arg_scale;
    }
    for (int u = 0; u < c.l; ++u)
        for (int v = u + 1; v < c.l; ++v) out.base.pair[u][v] = c.base.pair[u][v] + arg_scale;
    return out;
}

enum class SteepestKind { CPrime, CDoublePrime };

/// C'' encircles 0 only; C' encircles 0 and z.  Both leave and return along
/// rays in the sector where exp(-t) and |t/(z-t)| both decay.
struct SteepestLoop {
    SteepestKind kind = SteepestKind::CPrime;
    cplx z{};
    LoopPath path;
};

/// radius <= 0 selects the default: 2|z| for C', |z|/4 for C''.
inline SteepestLoop build_steepest_loop(SteepestKind kind, cplx z, double T, double radius = -1.0,
                                        const GeometryConfig& g = {}) {
    if (!(z.imag() > 0.0)) throw GeometryError("requires Im z > 0");
    const double az = std::abs(z);
    if (radius <= 0) radius = kind == SteepestKind::CPrime ? 2.0 * az : 0.25 * az;
    if (kind == SteepestKind::CPrime && radius <= az) throw GeometryError("C' must enclose z");
    if (kind == SteepestKind::CDoublePrime && radius >= 0.5 * az)
        throw GeometryError("C'' must stay closer to 0 than to z");
    if (!(T > 1.5 * radius)) throw GeometryError("truncation too small to enclose the required points");
    // rays around the direction of the saddle (arg z - pi)/2, inside (-pi/2, arg z - pi/2)
    const double psi = 0.5 * (std::arg(z) - pi);
    const double delta = 0.15 * std::arg(z);
    SteepestLoop s;
    s.kind = kind;
    s.z = z;
    s.path = detail::group_loop(cplx{}, radius, psi, delta, T, g);
    return s;
}

/// The steepest loop as a one-dimensional chain with centers {0, z}.
inline MultiLoopContour steepest_chain(const SteepestLoop& s) {
    MultiLoopContour c;
    c.z = s.z;
    c.l = 1;
    c.b = 0;
    c.loops = {s.path};
    c.centers = {cplx{}, s.z};
    c.base_params = {s.path.base_param()};
    return assign_base_args(c);
}

/// Discrete winding number of loop(tau) - center.
inline int winding_number(const LoopPath& p, int samples = 4000) {
    double total = 0.0;
    cplx prev = p.point(0.0) - p.center;
    for (int i = 1; i <= samples; ++i) {
        const cplx cur = p.point(double(i) / samples) - p.center;
        total += std::arg(cur / prev);
        prev = cur;
    }
    return int(std::lround(total / (2 * pi)));
}

/// Minimum distance between two loops over a parameter grid.
inline double min_loop_distance(const LoopPath& a, const LoopPath& b, int samples = 1500) {
    std::vector<cplx> pa(samples + 1), pb(samples + 1);
    for (int i = 0; i <= samples; ++i) {
        pa[i] = a.point(double(i) / samples);
        pb[i] = b.point(double(i) / samples);
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& x : pa)
        for (const auto& y : pb) best = std::min(best, std::abs(x - y));
    return best;
}

}  // namespace hyperdual
