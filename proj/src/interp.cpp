#include "iho/interp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "iho/errors.hpp"

namespace iho {

namespace {
// Barycentric weights for equispaced nodes: (-1)^i C(9, i).
constexpr std::array<double, interp_stencil> bary
    = {1.0, -9.0, 36.0, -84.0, 126.0, -126.0, 84.0, -36.0, 9.0, -1.0};
}  // namespace

Stencil lagrange_stencil(Grid1D const& g, double x)
{
    Stencil st{0, {}, true};
    double const s = (x - g.x0) / g.dx;
    double const last = static_cast<double>(g.n - 1);
    if (s < -1e-9 || s > last + 1e-9)
    {
        st.inside = false;
        return st;
    }
    auto const n = static_cast<std::ptrdiff_t>(g.n);
    auto start = static_cast<std::ptrdiff_t>(std::floor(s)) - interp_stencil / 2 + 1;
    start = std::clamp<std::ptrdiff_t>(start, 0, n - interp_stencil);
    st.start = static_cast<std::size_t>(start);
    double den = 0.0;
    for (int i = 0; i < interp_stencil; ++i)
    {
        double const d = s - static_cast<double>(start + i);
        if (d == 0.0)
        {
            st.w.fill(0.0);
            st.w[i] = 1.0;
            return st;
        }
        st.w[i] = bary[i] / d;
        den += st.w[i];
    }
    for (auto& w : st.w)
        w /= den;
    return st;
}

LocalInterpolator::LocalInterpolator(std::span<cplx const> values, Grid1D grid,
                                     double edge_floor, double peak)
    : values_(values), grid_(grid)
{
    if (values.size() != grid.n)
    {
        throw GridMismatchError("LocalInterpolator: sample count does not match grid");
    }
    if (grid.n < static_cast<std::size_t>(interp_stencil))
    {
        throw ValidationError("grid.n", "interpolation needs at least 10 points");
    }
    if (peak <= 0.0)
    {
        for (auto const& z : values)
            peak = std::max(peak, std::abs(z));
    }
    double const edge = std::max(std::abs(values.front()), std::abs(values.back()));
    zero_outside_ = edge <= edge_floor * peak;
}

cplx LocalInterpolator::operator()(double x) const
{
    auto const st = lagrange_stencil(grid_, x);
    if (!st.inside)
    {
        if (zero_outside_)
            return 0.0;
        throw DomainError("interpolation point " + std::to_string(x)
                          + " lies outside a grid whose edge samples are not negligible");
    }
    cplx acc = 0.0;
    for (int i = 0; i < interp_stencil; ++i)
        acc += st.w[i] * values_[st.start + i];
    return acc;
}

}  // namespace iho
