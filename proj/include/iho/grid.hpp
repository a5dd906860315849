#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "iho/common.hpp"

namespace iho {

enum class Representation
{
    Q,
    V,
    U
};

char const* to_string(Representation r);
Representation representation_from_string(std::string const& s);

// Uniform grid x_j = x0 + j dx, j = 0..n-1.
struct Grid1D
{
    double x0;
    double dx;
    std::size_t n;

    Grid1D(double x0_, double dx_, std::size_t n_);

    // n points on [-half_width, half_width), spacing 2 half_width / n.
    static Grid1D symmetric(double half_width, std::size_t n);
    // Symmetric grid whose conjugate under e^{i alpha x y} is itself with a
    // plain FFT: alpha dx^2 = 2 pi / n.
    static Grid1D self_dual(std::size_t n, double alpha = 1.0);

    double x(std::size_t j) const noexcept { return x0 + static_cast<double>(j) * dx; }
    double back() const noexcept { return x(n - 1); }
    double max_abs() const noexcept;
    bool contains(double a, double b) const noexcept { return x0 <= a && b <= back(); }

    bool operator==(Grid1D const&) const = default;
};

// Complex samples of a wavefunction in one representation.
class GridFunction1D
{
  public:
    GridFunction1D(Representation rep, Grid1D grid, std::vector<cplx> values);

    Representation rep() const noexcept { return rep_; }
    Grid1D const& grid() const noexcept { return grid_; }
    std::span<cplx const> values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    cplx operator[](std::size_t j) const noexcept { return values_[j]; }

    // Trapezoid rule.
    double norm_squared() const;
    double norm() const;
    double sup_abs() const;

    GridFunction1D scaled(cplx factor) const;
    GridFunction1D conjugated() const;

  private:
    Representation rep_;
    Grid1D grid_;
    std::vector<cplx> values_;
};

// sup_j |f_j - g_j| over identical grids; throws GridMismatchError otherwise.
double sup_distance(GridFunction1D const& f, GridFunction1D const& g);

// Trapezoid weights times dx.
double trapezoid_weight(Grid1D const& g, std::size_t j) noexcept;

}  // namespace iho
