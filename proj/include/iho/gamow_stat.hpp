#pragma once

// Classical statistical mechanics of the inverted oscillator on the (v, u)
// plane: Liouville transport and the Liouvillian's generalized eigenfunctions.
//
//   L rho = i(u d_u - v d_v) rho,   rho(v, u, t) = rho(v e^-t, u e^t, 0)
//
// Eigenfunction families (pairings are antilinear in the left slot):
//   PolyPoly      |m,n>   = v^n u^m / (n! m!)                 nu = i(m - n)
//   DeltaDelta    |m~,n~> = (-1)^{m+n} d^(m)(u) d^(n)(v)      nu = -i(m - n)
//   DeltaV_PolyU  |m,n~>  = (-1)^n / m! d^(n)(v) u^m          nu = i(m + n + 1)
//   DeltaU_PolyV  |m~,n>  = (-1)^m / n! d^(m)(u) v^n          nu = -i(m + n + 1)
// The distributions are never sampled: monomial factors act as moment
// integrals, delta factors as derivatives at zero.

#include <optional>
#include <vector>

#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::stat {

// rho(v, u) = v_factor(v) * u_factor(u)
struct TensorForm
{
    AnalyticPacket v_factor;
    AnalyticPacket u_factor;

    cplx operator()(double v, double u) const { return v_factor(v) * u_factor(u); }
    bool operator==(TensorForm const&) const = default;
};

// Samples on a (v, u) grid, row-major with v as the slow index. Physical
// densities are real and nonnegative; expansion intermediates may be
// complex and signed and carry physical() == false.
class PhaseDensity2D
{
  public:
    PhaseDensity2D(Grid1D v_grid, Grid1D u_grid, std::vector<cplx> values, bool physical,
                   std::optional<TensorForm> analytic = std::nullopt);

    static PhaseDensity2D from_tensor(TensorForm const& form, Grid1D v_grid, Grid1D u_grid,
                                      bool physical);

    Grid1D const& v_grid() const noexcept { return v_grid_; }
    Grid1D const& u_grid() const noexcept { return u_grid_; }
    std::vector<cplx> const& values() const noexcept { return values_; }
    cplx at(std::size_t i, std::size_t j) const { return values_[i * u_grid_.n + j]; }
    bool physical() const noexcept { return physical_; }
    std::optional<TensorForm> const& analytic() const noexcept { return analytic_; }

    // Exact from the factors in analytic mode, 2-D trapezoid otherwise.
    cplx mass() const;
    cplx grid_mass() const;

  private:
    Grid1D v_grid_;
    Grid1D u_grid_;
    std::vector<cplx> values_;
    bool physical_;
    std::optional<TensorForm> analytic_;
};

// Integral of one factor over the real line: closed form for GaussHermite,
// quadrature for Bump, DomainError for monomials.
cplx factor_integral(AnalyticPacket const& p);

enum class Family
{
    PolyPoly,
    DeltaDelta,
    DeltaV_PolyU,
    DeltaU_PolyV,
};

char const* to_string(Family f);

struct StatGamowIndex
{
    int m;
    int n;
    Family family;

    StatGamowIndex(int m_, int n_, Family family_);
};

cplx stat_eigenvalue(StatGamowIndex idx);

// Analytic mode: exact derivatives of the factors, evaluated on the grid.
// Grid mode: spectral differentiation (AliasError / DomainError from there).
PhaseDensity2D liouvillian_apply(PhaseDensity2D const& rho);

// Analytic mode: the v factor is dilated by e^t and the u factor by e^-t,
// then resampled. Grid mode: separable 10-point interpolation, negative
// interpolation ripples of physical densities clipped to zero; DomainError
// when the evolved density reaches the grid edge.
PhaseDensity2D evolve_liouville(PhaseDensity2D const& rho, double t);

// out(v, u) = in(-u, -v). The grids are swapped and reflected so that no
// interpolation is needed; the map is an exact involution.
PhaseDensity2D time_reverse_stat(PhaseDensity2D const& rho);
TensorForm time_reverse_stat(TensorForm const& form);

struct StatCoefficients
{
    int max_m;
    int max_n;
    std::vector<cplx> values;  // a(m, n) at m * (max_n + 1) + n
    TensorForm source;

    cplx operator()(int m, int n) const { return values[m * (max_n + 1) + n]; }
};

// a_mn = (1/(n! m!)) int du u^m d^n rho/dv^n (0, u) for a Psi_+ tensor
// (GaussHermite in v, Bump in u).
StatCoefficients stat_coeffs(TensorForm const& rho_plus, int max_m, int max_n);

// Double series sum_mn a_mn P_mn for (rho_minus, rho_plus), with
// P_mn = int dv v^n d^m conj(rho_minus)/du^m (v, 0); rho_minus a Psi_- tensor
// (Bump in v, GaussHermite in u).
cplx stat_series_pairing(TensorForm const& rho_minus, StatCoefficients const& a);

// <rho|Phi> = int int conj(rho) Phi for a tensor density and a family member.
cplx stat_pairing(TensorForm const& rho, StatGamowIndex idx);

struct StatEigenReport
{
    StatGamowIndex idx;
    cplx nu;
    cplx lhs;  // <L rho|Phi>
    cplx rhs;  // nu <rho|Phi>
    double residual;
    double expected_rate;  // Im(nu): <rho(-t)|Phi> = e^{Im(nu) t} <rho|Phi>
    double fitted_rate;
    double rate_error;
    double tolerance;
    bool passed;
};

// Eigen identity through the pairing, plus the growth/decay rate of the
// functional, fitted from pairings with the backward-evolved probe at the
// given times.
StatEigenReport stat_eigen_check(StatGamowIndex idx, TensorForm const& probe, double tol,
                                 std::vector<double> const& times = {0.5, 1.0, 1.5, 2.0, 2.5,
                                                                     3.0});

struct StatBiorthonormalityReport
{
    int max_m;
    int max_n;
    double max_deviation_poly_delta;   // <m,n|m~',n~'>
    double max_deviation_mixed;        // <m,n~|m~',n'>
};

StatBiorthonormalityReport stat_biorthonormality(int max_m, int max_n);

// Psi_+ : entire in v times compact in u; Psi_- the other way round.
enum class StatSpace
{
    PsiPlus,
    PsiMinus,
    Unclassified,
};

char const* to_string(StatSpace s);
StatSpace classify_space(TensorForm const& form);

}  // namespace iho::stat
