#pragma once

#include <complex>
#include <numbers>

namespace iho {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double sqrt2 = std::numbers::sqrt2;
inline constexpr cplx I{0.0, 1.0};

}  // namespace iho
