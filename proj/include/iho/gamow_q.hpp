#pragma once

// Quantum Gamow functionals of the inverted oscillator.
//
// Canonical pairings (v-representation):
//   <v|n>  = v^n                      so <phi|n> = int conj(phi(v)) v^n dv
//   <n~|phi> = phi^(n)(0) / n!        (Taylor coefficient at v = 0)
// Through <v|u> = e^{iuv}/sqrt(2 pi) the same functionals act on
// u-representation wavefunctions as
//   <n|psi>  = sqrt(2 pi) i^n psi^(n)(0)
//   <u|n~>   = (-i u)^n / (n! sqrt(2 pi))
// which makes <n'|n~> = delta_{n n'}. Gamow vectors are never sampled on a
// grid; they only exist as these functionals.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::gamow {

enum class Kind
{
    Decaying,  // |n>,  eigenvalue -i(n + 1/2)
    Growing,   // |n~>, eigenvalue +i(n + 1/2)
};

char const* to_string(Kind k);

struct GamowIndex
{
    int n;
    Kind kind;

    GamowIndex(int n_, Kind kind_);
};

cplx gamow_eigenvalue(GamowIndex idx);

struct GamowCoefficients
{
    Kind kind;
    Representation rep;   // representation the packet was given in
    AnalyticPacket packet;
    std::vector<cplx> values;  // index 0..N
    double radius;        // evaluation radius R of the tail estimate
    double tail_estimate; // |c_N| R^N
    bool finite_radius;   // packet is not entire; expansion valid only inside it
    std::string convention;

    int order() const noexcept { return static_cast<int>(values.size()) - 1; }
};

// c_n = <n~|phi> = phi^(n)(0)/n! for a packet in the v-representation.
GamowCoefficients decaying_coeffs(AnalyticPacket const& phi_v, int order, double radius = 1.0);

// c_n = <n|psi> = sqrt(2 pi) i^n psi^(n)(0) for a packet in the u-representation.
GamowCoefficients growing_coeffs(AnalyticPacket const& psi_u, int order, double radius = 1.0);

// V: phi(v, t) = e^{-t/2} phi(v e^{-t});  U: psi(u, t) = e^{t/2} psi(u e^t).
// Local 10-point barycentric interpolation onto the input grid.
// RepError for Q input; DomainError when the evolved function reaches the
// grid edge; AliasError when it is no longer resolved.
GridFunction1D evolve_scaling(GridFunction1D const& f, double t);

struct SurvivalSeries
{
    std::vector<cplx> moments;       // <psi_-|n>
    std::vector<cplx> coefficients;  // <n~|phi_+>
    std::vector<cplx> terms;         // product of the two
    std::vector<double> times;
    std::vector<cplx> amplitudes;
    std::vector<double> tail_bounds;
    std::vector<bool> physical;      // t >= 0
    int order = 0;
};

// A(t) = sum_n e^{-(n+1/2) t} <psi_-|n> <n~|phi_+>, minus a Bump and plus a
// GaussHermite packet, both in the v-representation.
//
// Tail bound at each t: ||psi_-||_1 sum_{k in {N-1, N}} |c_k| R^k e^{-(k+1/2)t}
// with R the largest |v| on the support of psi_-. ConvergenceError when it
// exceeds tolerance at any requested time.
SurvivalSeries survival_amplitude(AnalyticPacket const& minus, AnalyticPacket const& plus,
                                  int order, std::span<double const> times,
                                  double tolerance = 1e-10);

// Least-squares slope of log|A(t)| over the recorded times in [t_lo, t_hi].
double fit_log_slope(SurvivalSeries const& s, double t_lo, double t_hi);

// <q|n> = e^{iq^2/2} H_n(e^{-i pi/4} q), <q|n~> = e^{-iq^2/2} H_n(e^{i pi/4} q),
// normalization constants set to 1.
cplx gamow_q_representation(GamowIndex idx, double q);

struct EigenReport
{
    int n;
    Kind kind;
    cplx lhs;  // <H phi|n> or <H phi|n~>
    cplx rhs;  // z <phi|n> or conj(z) <phi|n~>
    double residual;  // |lhs - rhs| / max(1, |rhs|)
    double tolerance;
    bool passed;
};

// Decaying: both sides by quadrature of the integration-by-parts integrand
// i(v phi-bar' + phi-bar/2) v^n. Growing: through the Taylor coefficients.
EigenReport verify_generalized_eigen(GamowIndex idx, AnalyticPacket const& probe, double tol);

// Time reversal K. In the v/u pair: <u|K phi> = e^{i pi/4} conj(phi(-u)),
// and the same map takes u-functions back to v-functions; in Q it is plain
// conjugation. The output lives on the reflected grid (x0 -> -back), so no
// interpolation is involved.
GridFunction1D time_reverse(GridFunction1D const& f);

Grid1D reflected(Grid1D const& g);

struct PlacedPacket
{
    AnalyticPacket packet;
    Representation rep;
};

PlacedPacket time_reverse(PlacedPacket const& p);

// Phi_+ : entire in v (equivalently compact in u); Phi_- : compact in v
// (entire in u). Packets in Q, or monomials, are Unclassified.
enum class TestSpace
{
    PhiPlus,
    PhiMinus,
    Unclassified,
};

char const* to_string(TestSpace s);
TestSpace classify_space(PlacedPacket const& p);

struct BiorthonormalityReport
{
    int max_index;
    std::vector<std::vector<double>> deviation;  // |<n'|n~> - delta| (rows n')
    double max_deviation;
    double max_deviation_dual;  // same for <n~|n'> in the v-representation
};

// <n'|n~> built by applying growing_coeffs to (-iu)^n/(n! sqrt(2 pi)) times a
// Gaussian regulator exp(-eps u^2/2), extrapolated to eps -> 0 (Richardson);
// the dual pattern from decaying_coeffs on v^{n'}.
BiorthonormalityReport quantum_biorthonormality(int max_index);

}  // namespace iho::gamow
