#pragma once

// Brute-force reference computations. Nothing here calls into the modules it
// checks: kernels, transforms, quadrature rules and FFT plans are local.

#include <cstdint>
#include <string>
#include <vector>

#include "iho/gamow_stat.hpp"
#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::oracle {

struct OracleReport
{
    std::string name;
    double discrepancy;
    double tolerance;
    bool passed;
    double runtime_s;
};

OracleReport make_report(std::string name, double discrepancy, double tolerance,
                         double runtime_s = 0.0);

// 8192 points on [-40, 40).
Grid1D propagator_grid();

// Exact kernel of H = (p^2 - q^2)/2,
//   K(q, q'; t) = (2 pi i sinh t)^{-1/2} exp(i[(q^2 + q'^2) cosh t - 2 q q'] / (2 sinh t)),
// applied by direct trapezoid quadrature; negative t through the conjugate
// kernel. t == 0 is the identity; 0 < |t| < 1e-6 throws SingularTimeError.
// MassLeakError when the outer 5% of the grid holds more than 1e-10 of the mass.
GridFunction1D propagator_evolve(GridFunction1D const& psi_q, double t);

// Strang splitting exp(-iV dt/2) exp(-iT dt) exp(-iV dt/2) on the periodic
// grid, with the step shrunk so that it divides t. dt must not exceed 1e-3.
GridFunction1D splitstep_evolve(GridFunction1D const& psi_q, double t, double dt);

enum class Rule
{
    Trapezoid,
    Simpson,
};

struct PairingResult
{
    cplx value;
    double error_estimate;  // |value at h - value at 2h|
};

// (f, g) = int conj(f) g over a common grid; GridMismatchError otherwise.
PairingResult slow_pairing(GridFunction1D const& f, GridFunction1D const& g,
                           Rule rule = Rule::Trapezoid);

// Cell sampling of a nonnegative density, each particle advanced along the
// classical flow, histogram on the same grid (density units, same total
// mass). Batches of 2^14 particles, batch b seeded by splitmix64(seed + b).
stat::PhaseDensity2D mc_transport(stat::PhaseDensity2D const& rho, double t,
                                  std::uint64_t samples, std::uint64_t seed);

struct ChiSquare
{
    double chi2;
    int dof;
    double z;  // (chi2 - dof) / sqrt(2 dof)
    bool consistent;  // |z| <= 3
};

// Counts implied by a Monte-Carlo histogram against the expected counts of a
// reference density (cell averages by 3x3 Gauss-Legendre when the reference
// is analytic). Cells with fewer than 5 expected counts are pooled.
ChiSquare chi_square(stat::PhaseDensity2D const& histogram, stat::PhaseDensity2D const& expected,
                     std::uint64_t samples);

// RMS of histogram - reference over all cells.
double rms_deviation(stat::PhaseDensity2D const& histogram,
                     stat::PhaseDensity2D const& reference);

// <minus|e^{-iHt} plus> for a bump and any packet, both in the
// v-representation, by the trapezoid rule over the bump support of
// conj(minus(v)) e^{-t/2} plus(v e^{-t}). The integrand and all its
// derivatives vanish at the ends, so the rule converges spectrally.
cplx slow_survival(AnalyticPacket const& minus_v, AnalyticPacket const& plus_v, double t,
                   std::size_t intervals = 4096);

// Taylor coefficients f^(n)(x0)/n! of a packet by the trapezoid rule on a
// circle of the given radius in the complex plane (own complex evaluation of
// the closed forms, 256 nodes).
std::vector<cplx> cauchy_taylor(AnalyticPacket const& p, double x0, int order, double radius);

// int f over [a, b] by tanh-sinh quadrature.
cplx tanh_sinh_integral(AnalyticPacket const& p, double a, double b);

// psi in the target representation at one point from a Q-representation
// packet, by tanh-sinh quadrature of the kernel integral on [c - L, c + L].
cplx slow_transform_point(AnalyticPacket const& psi_q, char target, double y, double half_width);

// F(q, p) of a Q packet at one point by quadrature of the defining integral.
double slow_wigner_point(AnalyticPacket const& psi_q, double q, double p, double half_width);

// int conj(<q|v>) <q|u> dq with a smooth window around the stationary point.
cplx kernel_consistency_integral(double v, double u);

}  // namespace iho::oracle
