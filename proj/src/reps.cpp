#include "iho/reps.hpp"

#include <algorithm>
#include <cmath>

#include "iho/errors.hpp"
#include "quadrature.hpp"

namespace iho::reps {

namespace {

double const qv_norm = std::pow(2.0 * pi * pi, -0.25);
cplx const eighth_turn = std::polar(1.0, pi / 4.0);  // e^(i pi/4)

struct Leg
{
    double alpha;      // exp(sign i alpha x y)
    int sign;
    double pre_chirp;  // multiplies the input by exp(i pre_chirp x^2/2)
    double post_chirp; // multiplies the output by exp(i post_chirp y^2/2)
    cplx factor;
};

Leg leg(Representation from, Representation to)
{
    using R = Representation;
    double const s = 1.0 / std::sqrt(2.0 * pi);
    if (from == R::Q && to == R::V)
        return {sqrt2, -1, +1.0, +1.0, qv_norm};
    if (from == R::Q && to == R::U)
        return {sqrt2, -1, -1.0, -1.0, qv_norm * eighth_turn};
    if (from == R::V && to == R::Q)
        return {sqrt2, +1, -1.0, -1.0, qv_norm};
    if (from == R::U && to == R::Q)
        return {sqrt2, +1, +1.0, +1.0, qv_norm * std::conj(eighth_turn)};
    if (from == R::V && to == R::U)
        return {1.0, -1, 0.0, 0.0, s};
    return {1.0, +1, 0.0, 0.0, s};  // U -> V
}

}  // namespace

cplx kernel_qv(double q, double v)
{
    return qv_norm * std::polar(1.0, sqrt2 * v * q - 0.5 * q * q - 0.5 * v * v);
}

cplx kernel_qu(double q, double u)
{
    return qv_norm * std::conj(eighth_turn)
           * std::polar(1.0, sqrt2 * u * q + 0.5 * q * q + 0.5 * u * u);
}

cplx kernel_vu(double v, double u) { return std::polar(1.0 / std::sqrt(2.0 * pi), u * v); }

Grid1D default_grid() { return Grid1D::symmetric(20.0, 4096); }

GridFunction1D transform(GridFunction1D const& f, Representation target,
                         TransformOptions const& options)
{
    if (f.rep() == target)
    {
        return f;
    }
    Grid1D const& src = f.grid();
    Grid1D const dst = options.target.value_or(src);
    Leg const l = leg(f.rep(), target);

    // The chirp only matters where the input is not negligible.
    double const peak = f.sup_abs();
    double extent = 0.0;
    for (std::size_t j = 0; j < src.n; ++j)
    {
        if (std::abs(f[j]) > 1e-12 * peak)
            extent = std::max(extent, std::abs(src.x(j)));
    }
    double const rate = l.alpha * dst.max_abs() + std::abs(l.pre_chirp) * extent;
    if (src.dx * rate > pi)
    {
        throw AliasError(std::string("transform ") + to_string(f.rep()) + "->"
                         + to_string(target) + ": dx " + std::to_string(src.dx)
                         + " does not resolve phase rate " + std::to_string(rate));
    }

    std::vector<cplx> in(f.values().begin(), f.values().end());
    if (l.pre_chirp != 0.0)
    {
        for (std::size_t j = 0; j < src.n; ++j)
        {
            double const x = src.x(j);
            in[j] *= std::polar(1.0, 0.5 * l.pre_chirp * x * x);
        }
    }
    auto out = fourier::fourier_sum(in, src, dst, l.alpha, l.sign, options.path);
    for (std::size_t k = 0; k < dst.n; ++k)
    {
        double const y = dst.x(k);
        out[k] *= l.factor;
        if (l.post_chirp != 0.0)
            out[k] *= std::polar(1.0, 0.5 * l.post_chirp * y * y);
    }
    GridFunction1D result(target, dst, std::move(out));

    double const m_in = f.norm_squared();
    double const m_out = result.norm_squared();
    if (m_out < (1.0 - options.mass_tolerance) * m_in)
    {
        throw DomainError(std::string("transform ") + to_string(f.rep()) + "->"
                          + to_string(target) + ": target grid keeps "
                          + std::to_string(m_out / m_in) + " of the mass");
    }
    return result;
}

GridFunction1D sample(AnalyticPacket const& p, Representation rep, Grid1D const& grid)
{
    switch (p.family())
    {
        case PacketFamily::Bump: {
            auto const [lo, hi] = *p.support();
            if (!grid.contains(lo, hi))
            {
                throw DomainError("sample: grid does not cover the bump support");
            }
            break;
        }
        case PacketFamily::GaussHermite: {
            double const r = 8.0 * p.width();
            if (!grid.contains(p.center() - r, p.center() + r))
            {
                throw DomainError("sample: grid covers fewer than 8 widths of the packet");
            }
            break;
        }
        case PacketFamily::Monomial:
            throw DomainError("sample: monomials are not normalizable");
    }
    std::vector<cplx> v(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
        v[j] = p(grid.x(j));
    return {rep, grid, std::move(v)};
}

cplx commutator_check(AnalyticPacket const& p, Grid1D const& grid)
{
    auto const f = sample(p, Representation::V, grid);
    auto const phi = f.values();
    std::vector<cplx> vphi(grid.n);
    for (std::size_t j = 0; j < grid.n; ++j)
        vphi[j] = grid.x(j) * phi[j];
    auto const dphi = fourier::spectral_derivative(phi, grid.dx);
    auto const dvphi = fourier::spectral_derivative(vphi, grid.dx);
    // V U phi - U V phi = -i v phi' + i (v phi)'
    cplx num = 0.0;
    for (std::size_t j = 0; j < grid.n; ++j)
    {
        cplx const c = -I * grid.x(j) * dphi[j] + I * dvphi[j];
        num += trapezoid_weight(grid, j) * std::conj(phi[j]) * c;
    }
    return num / f.norm_squared();
}

cplx commutator_check(AnalyticPacket const& p)
{
    // A bump's spectrum only decays like exp(-sqrt k); resolve it on a grid
    // fitted to its support rather than the default one.
    if (p.family() == PacketFamily::Bump)
        return commutator_check(p, Grid1D::symmetric(2.0 * (std::abs(p.center()) + p.width()), 4096));
    return commutator_check(p, default_grid());
}

GridFunction1D fourier_image_of_bump(AnalyticPacket const& bump_in_v, Grid1D const& u_grid)
{
    if (bump_in_v.family() != PacketFamily::Bump)
    {
        throw DomainError("fourier_image_of_bump: packet is not a bump");
    }
    auto const [lo, hi] = *bump_in_v.support();
    double const s = 1.0 / std::sqrt(2.0 * pi);
    std::vector<cplx> out(u_grid.n);
    for (std::size_t k = 0; k < u_grid.n; ++k)
    {
        double const u = u_grid.x(k);
        out[k] = s * quad::integrate_complex(
                     [&](double v) { return std::polar(1.0, -u * v) * bump_in_v(v); }, lo, hi,
                     1e-12);
    }
    return {Representation::U, u_grid, std::move(out)};
}

}  // namespace iho::reps
