#pragma once

// Wavefunctions in the position (Q), dilating-fiber (V) and contracting-fiber
// (U) representations and the unitary transforms between them.
//
// Kernels:
//   <q|v> = (2 pi^2)^(-1/4) exp(i(sqrt2 v q - q^2/2 - v^2/2))
//   <q|u> = e^(-i pi/4) (2 pi^2)^(-1/4) exp(i(sqrt2 u q + q^2/2 + u^2/2))
//   <v|u> = exp(i u v) / sqrt(2 pi)

#include <optional>

#include "iho/fourier.hpp"
#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::reps {

cplx kernel_qv(double q, double v);
cplx kernel_qu(double q, double u);
cplx kernel_vu(double v, double u);

// 4096 points on [-20, 20).
Grid1D default_grid();

struct TransformOptions
{
    std::optional<Grid1D> target;  // output grid; the input grid when empty
    double mass_tolerance = 1e-10;
    fourier::Path path = fourier::Path::Auto;
};

// Throws AliasError when dx (alpha max|y| + chirp rate) > pi on the source
// grid, with the chirp rate taken over the region where f exceeds 1e-12 of
// its peak; DomainError when the output keeps less than
// (1 - mass_tolerance) of the input mass.
GridFunction1D transform(GridFunction1D const& f, Representation target,
                         TransformOptions const& options = {});

// Throws DomainError if the grid does not cover the packet support (Bump) or
// center +- 8 widths (GaussHermite), or the packet is not normalizable.
GridFunction1D sample(AnalyticPacket const& p, Representation rep, Grid1D const& grid);

// <phi|[V, U]|phi> / <phi|phi> in the v-representation with U = -i d/dv by
// spectral differentiation. Should equal i. Without a grid: the default
// grid, or for bumps 4096 points on twice the extent of the support.
cplx commutator_check(AnalyticPacket const& p, Grid1D const& grid);
cplx commutator_check(AnalyticPacket const& p);

// Slow constructor of a genuine Fourier image of a bump: the u-representation
// of a Bump packet given in v, by adaptive quadrature at every grid point.
GridFunction1D fourier_image_of_bump(AnalyticPacket const& bump_in_v, Grid1D const& u_grid);

}  // namespace iho::reps
