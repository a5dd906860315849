#pragma once

// Adaptive quadrature used by the main pipeline (Gauss-Kronrod from
// Boost.Math). The oracle module uses a different rule on purpose.

#include <functional>

#include "iho/common.hpp"

namespace iho::quad {

double integrate(std::function<double(double)> const& f, double a, double b,
                 double rel_tol = 1e-13);

cplx integrate_complex(std::function<cplx(double)> const& f, double a, double b,
                      double rel_tol = 1e-13);

}  // namespace iho::quad
