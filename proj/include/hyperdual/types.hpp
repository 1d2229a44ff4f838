#pragma once

#include <complex>
#include <numbers>

namespace hyperdual {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr cplx I_unit{0.0, 1.0};

/// Desk-scale caps: integration dimension and number of single-factor centers.
inline constexpr int kMaxDim = 4;
inline constexpr int kMaxCenters = 2;

}  // namespace hyperdual
