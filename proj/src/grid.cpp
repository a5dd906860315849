#include "iho/grid.hpp"

#include <algorithm>
#include <cmath>

#include "iho/errors.hpp"

namespace iho {

char const* to_string(Representation r)
{
    switch (r)
    {
        case Representation::Q:
            return "Q";
        case Representation::V:
            return "V";
        case Representation::U:
            return "U";
    }
    return "?";
}

Representation representation_from_string(std::string const& s)
{
    if (s == "Q" || s == "q")
        return Representation::Q;
    if (s == "V" || s == "v")
        return Representation::V;
    if (s == "U" || s == "u")
        return Representation::U;
    throw ValidationError("rep", "unknown representation '" + s + "' (expected Q, V or U)");
}

Grid1D::Grid1D(double x0_, double dx_, std::size_t n_) : x0(x0_), dx(dx_), n(n_)
{
    if (!std::isfinite(x0) || !std::isfinite(dx) || !(dx > 0))
    {
        throw ValidationError("grid.dx", "spacing must be positive and finite");
    }
    if (n < 2)
    {
        throw ValidationError("grid.n", "need at least 2 points");
    }
}

Grid1D Grid1D::symmetric(double half_width, std::size_t n)
{
    if (!(half_width > 0))
    {
        throw ValidationError("grid.half_width", "must be positive");
    }
    double const dx = 2.0 * half_width / static_cast<double>(n);
    return {-half_width, dx, n};
}

Grid1D Grid1D::self_dual(std::size_t n, double alpha)
{
    double const dx = std::sqrt(2.0 * pi / (alpha * static_cast<double>(n)));
    return {-0.5 * dx * static_cast<double>(n), dx, n};
}

double Grid1D::max_abs() const noexcept { return std::max(std::abs(x0), std::abs(back())); }

GridFunction1D::GridFunction1D(Representation rep, Grid1D grid, std::vector<cplx> values)
    : rep_(rep), grid_(grid), values_(std::move(values))
{
    if (values_.size() != grid_.n)
    {
        throw GridMismatchError("GridFunction1D: " + std::to_string(values_.size())
                                + " samples for a grid of " + std::to_string(grid_.n));
    }
}

double trapezoid_weight(Grid1D const& g, std::size_t j) noexcept
{
    return (j == 0 || j + 1 == g.n) ? 0.5 * g.dx : g.dx;
}

double GridFunction1D::norm_squared() const
{
    double acc = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j)
    {
        acc += trapezoid_weight(grid_, j) * std::norm(values_[j]);
    }
    return acc;
}

double GridFunction1D::norm() const { return std::sqrt(norm_squared()); }

double GridFunction1D::sup_abs() const
{
    double m = 0.0;
    for (auto const& z : values_)
        m = std::max(m, std::abs(z));
    return m;
}

GridFunction1D GridFunction1D::scaled(cplx factor) const
{
    auto v = values_;
    for (auto& z : v)
        z *= factor;
    return {rep_, grid_, std::move(v)};
}

GridFunction1D GridFunction1D::conjugated() const
{
    auto v = values_;
    for (auto& z : v)
        z = std::conj(z);
    return {rep_, grid_, std::move(v)};
}

double sup_distance(GridFunction1D const& f, GridFunction1D const& g)
{
    if (!(f.grid() == g.grid()))
    {
        throw GridMismatchError("sup_distance: grids differ");
    }
    double m = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
    {
        m = std::max(m, std::abs(f[j] - g[j]));
    }
    return m;
}

}  // namespace iho
