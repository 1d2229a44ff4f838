#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "errors.hpp"
#include "types.hpp"

namespace hyperdual {

namespace detail {

// Lanczos approximation, g = 7, n = 9.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeff = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline cplx lgamma_right(cplx z) {
    z -= 1.0;
    cplx x = kLanczosCoeff[0];
    for (std::size_t i = 1; i < kLanczosCoeff.size(); ++i) x += kLanczosCoeff[i] / (z + double(i));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

}  // namespace detail

/// Distance of z from the nearest nonpositive integer (infinity when Re z > 0.5).
inline double distance_to_gamma_pole(cplx z) {
    if (z.real() > 0.5) return std::numeric_limits<double>::infinity();
    const double n = std::round(z.real());
    return std::abs(z - cplx(std::min(n, 0.0), 0.0));
}

inline bool is_gamma_pole(cplx z, double tol = 1e-8) { return distance_to_gamma_pole(z) <= tol; }

/// A logarithm of Gamma(z): exp() of it is Gamma(z). Not necessarily the principal
/// branch of log Gamma in the left half plane.
inline cplx log_gamma(cplx z) {
    if (is_gamma_pole(z, 1e-14)) throw GammaPole("Gamma argument at a pole");
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(pi) - std::log(std::sin(pi * z)) - detail::lgamma_right(1.0 - z);
    }
    return detail::lgamma_right(z);
}

inline cplx gamma(cplx z) { return std::exp(log_gamma(z)); }

}  // namespace hyperdual
