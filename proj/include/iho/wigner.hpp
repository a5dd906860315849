#pragma once

// Wigner functions of pure states.
//
//   F(q, p) = (1/2pi) int dy psi(q - y/2) conj(psi(q + y/2)) e^{ipy}
//   F(v, u) = (1/pi)  int dy psi(2v - y) conj(psi(y)) e^{iu(2y - 2v)}
//
// Both are evaluated with y on the sample lattice (index arithmetic
// psi_{j-k} conj(psi_{j+k}), no interpolation) and one FFT per row. For n
// samples of spacing dx the conjugate axis has n points of spacing
// pi / (n dx); dx = sqrt(pi / n) gives a square grid.

#include <string>
#include <vector>

#include "iho/gamow_stat.hpp"
#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::wigner {

enum class Coordinates
{
    QP,
    VU,
};

struct WignerField
{
    Coordinates coords;
    stat::PhaseDensity2D field;  // axes (q, p) or (v, u); real, signed
    double max_imag_residual;
    std::string source;

    double at(std::size_t i, std::size_t j) const { return field.at(i, j).real(); }
};

// n points of spacing pi / (n dx), centered at zero.
Grid1D conjugate_axis(Grid1D const& g);

// HermiticityError if the imaginary residual exceeds 1e-8 of the peak;
// ValidationError for odd sample counts.
WignerField wigner_qp(GridFunction1D const& psi_q);
WignerField wigner_vu(GridFunction1D const& psi_v);
// F(v, u) from the u-representation: (1/pi) int ds psi(u+s) conj(psi(u-s)) e^{2ivs}.
// The u axis is the input grid.
WignerField wigner_from_u(GridFunction1D const& psi_u);

// int F d(second) at every first-axis node and int F d(first) at every
// second-axis node (plain sums, the rule under which the discrete marginal
// identities are exact).
std::vector<double> marginal_first(WignerField const& w);
std::vector<double> marginal_second(WignerField const& w);
double total(WignerField const& w);

// F_vu(v, u) = F_qp((v - u)/sqrt2, (v + u)/sqrt2) on the given grid, by 2-D
// local Lagrange interpolation; zero outside the (q, p) grid.
WignerField remap_qp_to_vu(WignerField const& qp, Grid1D const& v_grid, Grid1D const& u_grid);

enum class Side
{
    Plus,   // Bump in v
    Minus,  // Bump in u
};

char const* to_string(Side s);

struct SpaceMappingReport
{
    Side side;
    double support_lo;
    double support_hi;
    double support_residual;  // max |F| off the support, relative to the peak
    bool support_ok;
    double slice_at;          // compact-axis coordinate of the decay slice
    double decay_exponent;    // least-squares log-log slope of the envelope on [5, 20]
    std::vector<double> window_exponents;  // same on [5,10], [10,15], [15,20]
    std::vector<bool> weighted_bounded;    // k = 1..5: |F|(1+x^2)^k not larger at 20 than at 5
    bool decay_ok;                         // decay_exponent >= 5
    bool passed;
};

// Plus: psi is a Bump packet sampled in v; Minus: in u.
SpaceMappingReport verify_space_mapping(AnalyticPacket const& psi, Side side,
                                        std::size_t n = 1024);

struct DynamicsReport
{
    double t;
    double discrepancy;            // sup |F_quantum - F_liouville|
    double relative_discrepancy;   // divided by sup |F|
    double support_edge_quantum;   // largest |v| with |F| > 1e-12 max
    double support_edge_liouville;
};

// wigner_vu(evolve_scaling(psi, t)) against evolve_liouville(wigner_vu(psi), t).
DynamicsReport wigner_dynamics_check(GridFunction1D const& psi_v, double t);

double support_edge_v(WignerField const& w, double floor = 1e-12);

}  // namespace iho::wigner
