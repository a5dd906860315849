#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "iho/common.hpp"
#include "iho/grid.hpp"

namespace iho {

inline constexpr int interp_stencil = 10;

// Normalized barycentric Lagrange weights of the 10 grid nodes around x;
// f(x) ~ sum_i w[i] f[start + i]. inside is false when x is off the grid.
struct Stencil
{
    std::size_t start;
    std::array<double, interp_stencil> w;
    bool inside;
};

Stencil lagrange_stencil(Grid1D const& g, double x);

// Local barycentric Lagrange interpolation on a uniform grid. Outside the
// grid the samples are continued by zero, which is only allowed when the
// edge samples are negligible (below edge_floor times the reference peak);
// otherwise evaluation there throws DomainError.
class LocalInterpolator
{
  public:
    // peak <= 0 means: use the sup of the samples as the reference.
    LocalInterpolator(std::span<cplx const> values, Grid1D grid, double edge_floor = 1e-10,
                      double peak = 0.0);

    cplx operator()(double x) const;

  private:
    std::span<cplx const> values_;
    Grid1D grid_;
    bool zero_outside_;
};

}  // namespace iho
