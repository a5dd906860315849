#include "iho/gamow_stat.hpp"

#include <algorithm>
#include <cmath>

#include "iho/errors.hpp"
#include "iho/fourier.hpp"
#include "iho/interp.hpp"
#include "quadrature.hpp"

namespace iho::stat {

namespace {

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

// One-dimensional factor of a family member: norm * x^k or norm * (-1)^k d^(k)(x).
struct Functional1D
{
    bool delta;
    int k;
    double norm;
};

std::pair<Functional1D, Functional1D> factors(StatGamowIndex idx)
{
    int const m = idx.m;
    int const n = idx.n;
    switch (idx.family)
    {
        case Family::PolyPoly:
            return {{false, n, 1.0 / factorial(n)}, {false, m, 1.0 / factorial(m)}};
        case Family::DeltaDelta:
            return {{true, n, 1.0}, {true, m, 1.0}};
        case Family::DeltaV_PolyU:
            return {{true, n, 1.0}, {false, m, 1.0 / factorial(m)}};
        case Family::DeltaU_PolyV:
            return {{false, n, 1.0 / factorial(n)}, {true, m, 1.0}};
    }
    return {};
}

std::pair<double, double> finite_support(AnalyticPacket const& p)
{
    auto s = p.support();
    if (!s)
    {
        throw DomainError("moment of a monomial factor diverges");
    }
    return *s;
}

// <h|F> and <x h'|F> for a packet h.
cplx pair_1d(AnalyticPacket const& h, Functional1D f, bool x_times_derivative)
{
    if (f.delta)
    {
        // int conj(h) (-1)^k d^(k) = conj(h^(k)(0)); (x h')_k = k h_k.
        auto const c = h.taylor(0.0, f.k);
        cplx const ck = x_times_derivative ? static_cast<double>(f.k) * c[f.k] : c[f.k];
        return f.norm * factorial(f.k) * std::conj(ck);
    }
    auto const [lo, hi] = finite_support(h);
    if (x_times_derivative)
    {
        return f.norm * quad::integrate_complex(
                            [&](double x) {
                                return std::conj(x * h.taylor(x, 1)[1]) * std::pow(x, f.k);
                            },
                            lo, hi);
    }
    return f.norm * quad::integrate_complex(
                        [&](double x) { return std::conj(h(x)) * std::pow(x, f.k); }, lo, hi);
}

// Pairing of a moment functional with a delta functional, both real.
double bracket_1d(Functional1D a, Functional1D b)
{
    if (a.delta == b.delta)
    {
        throw ValidationError("family", "pairing is defined between moment and delta factors");
    }
    Functional1D const mom = a.delta ? b : a;
    Functional1D const del = a.delta ? a : b;
    // int x^a (-1)^b d^(b)(x) dx = (d/dx)^b x^a at 0
    double deriv = 0.0;
    if (mom.k >= del.k)
    {
        deriv = factorial(mom.k) / factorial(mom.k - del.k) * std::pow(0.0, mom.k - del.k);
    }
    return mom.norm * del.norm * deriv;
}

std::vector<cplx> sample_axis(AnalyticPacket const& p, Grid1D const& g)
{
    std::vector<cplx> out(g.n);
    for (std::size_t i = 0; i < g.n; ++i)
        out[i] = p(g.x(i));
    return out;
}

}  // namespace

PhaseDensity2D::PhaseDensity2D(Grid1D v_grid, Grid1D u_grid, std::vector<cplx> values,
                               bool physical, std::optional<TensorForm> analytic)
    : v_grid_(v_grid),
      u_grid_(u_grid),
      values_(std::move(values)),
      physical_(physical),
      analytic_(std::move(analytic))
{
    if (values_.size() != v_grid_.n * u_grid_.n)
    {
        throw GridMismatchError("PhaseDensity2D: sample count does not match the grid");
    }
    if (physical_)
    {
        for (auto const& z : values_)
        {
            if (!(z.real() >= 0.0) || z.imag() != 0.0)
            {
                throw ValidationError("rho", "physical densities must be real and nonnegative");
            }
        }
    }
}

PhaseDensity2D PhaseDensity2D::from_tensor(TensorForm const& form, Grid1D v_grid,
                                           Grid1D u_grid, bool physical)
{
    auto const fv = sample_axis(form.v_factor, v_grid);
    auto const fu = sample_axis(form.u_factor, u_grid);
    std::vector<cplx> values(v_grid.n * u_grid.n);
    for (std::size_t i = 0; i < v_grid.n; ++i)
        for (std::size_t j = 0; j < u_grid.n; ++j)
            values[i * u_grid.n + j] = fv[i] * fu[j];
    return {v_grid, u_grid, std::move(values), physical, form};
}

cplx PhaseDensity2D::grid_mass() const
{
    cplx acc = 0.0;
    for (std::size_t i = 0; i < v_grid_.n; ++i)
    {
        double const wv = trapezoid_weight(v_grid_, i);
        for (std::size_t j = 0; j < u_grid_.n; ++j)
            acc += wv * trapezoid_weight(u_grid_, j) * values_[i * u_grid_.n + j];
    }
    return acc;
}

cplx PhaseDensity2D::mass() const
{
    if (analytic_)
    {
        return factor_integral(analytic_->v_factor) * factor_integral(analytic_->u_factor);
    }
    return grid_mass();
}

cplx factor_integral(AnalyticPacket const& p)
{
    switch (p.family())
    {
        case PacketFamily::GaussHermite: {
            int const d = p.degree();
            if (d % 2 == 1)
                return 0.0;
            // int s^d e^{-s^2/2} ds = 2^{(d+1)/2} Gamma((d+1)/2)
            return p.scale() * p.width() * std::pow(2.0, 0.5 * (d + 1)) * std::tgamma(0.5 * (d + 1));
        }
        case PacketFamily::Bump: {
            static double const unit = quad::integrate(
                [](double s) { return std::exp(-1.0 / (1.0 - s * s)); }, -1.0, 1.0, 1e-15);
            return p.scale() * p.width() * unit;
        }
        case PacketFamily::Monomial:
            break;
    }
    throw DomainError("factor_integral: monomial factors are not integrable");
}

char const* to_string(Family f)
{
    switch (f)
    {
        case Family::PolyPoly:
            return "PolyPoly";
        case Family::DeltaDelta:
            return "DeltaDelta";
        case Family::DeltaV_PolyU:
            return "DeltaV_PolyU";
        case Family::DeltaU_PolyV:
            return "DeltaU_PolyV";
    }
    return "?";
}

StatGamowIndex::StatGamowIndex(int m_, int n_, Family family_) : m(m_), n(n_), family(family_)
{
    if (m < 0 || n < 0)
    {
        throw ValidationError("m,n", "statistical Gamow indices must be nonnegative");
    }
}

cplx stat_eigenvalue(StatGamowIndex idx)
{
    double const diff = idx.m - idx.n;
    double const sum = idx.m + idx.n + 1;
    switch (idx.family)
    {
        case Family::PolyPoly:
            return {0.0, diff};
        case Family::DeltaDelta:
            return {0.0, -diff};
        case Family::DeltaV_PolyU:
            return {0.0, sum};
        case Family::DeltaU_PolyV:
            return {0.0, -sum};
    }
    return 0.0;
}

PhaseDensity2D liouvillian_apply(PhaseDensity2D const& rho)
{
    Grid1D const& vg = rho.v_grid();
    Grid1D const& ug = rho.u_grid();
    std::size_t const nv = vg.n;
    std::size_t const nu = ug.n;
    std::vector<cplx> out(nv * nu);
    if (auto const& form = rho.analytic())
    {
        std::vector<cplx> f(nv), vdf(nv), g(nu), udg(nu);
        for (std::size_t i = 0; i < nv; ++i)
        {
            auto const c = form->v_factor.taylor(vg.x(i), 1);
            f[i] = c[0];
            vdf[i] = vg.x(i) * c[1];
        }
        for (std::size_t j = 0; j < nu; ++j)
        {
            auto const c = form->u_factor.taylor(ug.x(j), 1);
            g[j] = c[0];
            udg[j] = ug.x(j) * c[1];
        }
        for (std::size_t i = 0; i < nv; ++i)
            for (std::size_t j = 0; j < nu; ++j)
                out[i * nu + j] = I * (f[i] * udg[j] - vdf[i] * g[j]);
        return {vg, ug, std::move(out), false};
    }
    auto const& vals = rho.values();
    for (std::size_t i = 0; i < nv; ++i)
    {
        std::span<cplx const> row(vals.data() + i * nu, nu);
        auto const d = fourier::spectral_derivative(row, ug.dx);
        for (std::size_t j = 0; j < nu; ++j)
            out[i * nu + j] = I * ug.x(j) * d[j];
    }
    std::vector<cplx> col(nv);
    for (std::size_t j = 0; j < nu; ++j)
    {
        for (std::size_t i = 0; i < nv; ++i)
            col[i] = vals[i * nu + j];
        auto const d = fourier::spectral_derivative(col, vg.dx);
        for (std::size_t i = 0; i < nv; ++i)
            out[i * nu + j] -= I * vg.x(i) * d[i];
    }
    return {vg, ug, std::move(out), false};
}

PhaseDensity2D evolve_liouville(PhaseDensity2D const& rho, double t)
{
    if (!std::isfinite(t))
    {
        throw ValidationError("t", "time must be finite");
    }
    if (t == 0.0)
    {
        return rho;
    }
    Grid1D const& vg = rho.v_grid();
    Grid1D const& ug = rho.u_grid();
    if (auto const& form = rho.analytic())
    {
        TensorForm const evolved{form->v_factor.dilated(std::exp(t)),
                                 form->u_factor.dilated(std::exp(-t))};
        return PhaseDensity2D::from_tensor(evolved, vg, ug, rho.physical());
    }
    std::size_t const nv = vg.n;
    std::size_t const nu = ug.n;
    auto const& vals = rho.values();
    double peak = 0.0;
    for (auto const& z : vals)
        peak = std::max(peak, std::abs(z));
    if (peak == 0.0)
    {
        return rho;
    }
    double const ev = std::exp(-t);
    double const eu = std::exp(t);
    std::vector<cplx> tmp(nv * nu);
    for (std::size_t i = 0; i < nv; ++i)
    {
        std::span<cplx const> row(vals.data() + i * nu, nu);
        LocalInterpolator interp(row, ug, 1e-10, peak);
        for (std::size_t j = 0; j < nu; ++j)
            tmp[i * nu + j] = interp(ug.x(j) * eu);
    }
    std::vector<cplx> out(nv * nu);
    std::vector<cplx> col(nv);
    for (std::size_t j = 0; j < nu; ++j)
    {
        for (std::size_t i = 0; i < nv; ++i)
            col[i] = tmp[i * nu + j];
        LocalInterpolator interp(col, vg, 1e-10, peak);
        for (std::size_t i = 0; i < nv; ++i)
            out[i * nu + j] = interp(vg.x(i) * ev);
    }
    double edge = 0.0;
    for (std::size_t i = 0; i < nv; ++i)
        edge = std::max({edge, std::abs(out[i * nu]), std::abs(out[i * nu + nu - 1])});
    for (std::size_t j = 0; j < nu; ++j)
        edge = std::max({edge, std::abs(out[j]), std::abs(out[(nv - 1) * nu + j])});
    if (edge > 1e-10 * peak)
    {
        throw DomainError("evolve_liouville: evolved density reaches the grid edge at t = "
                          + std::to_string(t));
    }
    if (rho.physical())
    {
        for (auto& z : out)
            z = std::max(z.real(), 0.0);
    }
    return {vg, ug, std::move(out), rho.physical()};
}

TensorForm time_reverse_stat(TensorForm const& form)
{
    return {form.u_factor.reflected(), form.v_factor.reflected()};
}

PhaseDensity2D time_reverse_stat(PhaseDensity2D const& rho)
{
    Grid1D const& vg = rho.v_grid();
    Grid1D const& ug = rho.u_grid();
    // v'_i = -u_{nu-1-i}, u'_j = -v_{nv-1-j}; out(v'_i, u'_j) = in(v_{nv-1-j}, u_{nu-1-i})
    Grid1D const new_v(-ug.back(), ug.dx, ug.n);
    Grid1D const new_u(-vg.back(), vg.dx, vg.n);
    std::vector<cplx> out(vg.n * ug.n);
    for (std::size_t i = 0; i < new_v.n; ++i)
        for (std::size_t j = 0; j < new_u.n; ++j)
            out[i * new_u.n + j] = rho.at(vg.n - 1 - j, ug.n - 1 - i);
    std::optional<TensorForm> form;
    if (rho.analytic())
        form = time_reverse_stat(*rho.analytic());
    return {new_v, new_u, std::move(out), rho.physical(), form};
}

char const* to_string(StatSpace s)
{
    switch (s)
    {
        case StatSpace::PsiPlus:
            return "PsiPlus";
        case StatSpace::PsiMinus:
            return "PsiMinus";
        case StatSpace::Unclassified:
            return "Unclassified";
    }
    return "?";
}

StatSpace classify_space(TensorForm const& form)
{
    auto const fv = form.v_factor.family();
    auto const fu = form.u_factor.family();
    if (fv == PacketFamily::GaussHermite && fu == PacketFamily::Bump)
        return StatSpace::PsiPlus;
    if (fv == PacketFamily::Bump && fu == PacketFamily::GaussHermite)
        return StatSpace::PsiMinus;
    return StatSpace::Unclassified;
}

StatCoefficients stat_coeffs(TensorForm const& rho_plus, int max_m, int max_n)
{
    if (classify_space(rho_plus) != StatSpace::PsiPlus)
    {
        throw DomainError("stat_coeffs: density must be GaussHermite in v times Bump in u");
    }
    if (max_m < 0 || max_n < 0)
    {
        throw ValidationError("order", "truncation orders must be nonnegative");
    }
    auto const c = rho_plus.v_factor.taylor(0.0, max_n);
    auto const [lo, hi] = finite_support(rho_plus.u_factor);
    std::vector<cplx> mu(max_m + 1);
    for (int m = 0; m <= max_m; ++m)
    {
        mu[m] = quad::integrate_complex(
                    [&](double u) { return rho_plus.u_factor(u) * std::pow(u, m); }, lo, hi)
                / factorial(m);
    }
    StatCoefficients out{max_m, max_n, std::vector<cplx>((max_m + 1) * (max_n + 1)), rho_plus};
    for (int m = 0; m <= max_m; ++m)
        for (int n = 0; n <= max_n; ++n)
            out.values[m * (max_n + 1) + n] = mu[m] * c[n];
    return out;
}

cplx stat_series_pairing(TensorForm const& rho_minus, StatCoefficients const& a)
{
    if (classify_space(rho_minus) != StatSpace::PsiMinus)
    {
        throw DomainError("stat_series_pairing: density must be Bump in v times GaussHermite in u");
    }
    auto const [lo, hi] = finite_support(rho_minus.v_factor);
    std::vector<cplx> mom(a.max_n + 1);
    for (int n = 0; n <= a.max_n; ++n)
    {
        mom[n] = quad::integrate_complex(
            [&](double v) { return std::conj(rho_minus.v_factor(v)) * std::pow(v, n); }, lo, hi);
    }
    auto const h = rho_minus.u_factor.taylor(0.0, a.max_m);
    cplx acc = 0.0;
    for (int m = a.max_m; m >= 0; --m)
    {
        cplx const dm = factorial(m) * std::conj(h[m]);
        for (int n = a.max_n; n >= 0; --n)
            acc += a(m, n) * dm * mom[n];
    }
    return acc;
}

cplx stat_pairing(TensorForm const& rho, StatGamowIndex idx)
{
    auto const [fv, fu] = factors(idx);
    return pair_1d(rho.v_factor, fv, false) * pair_1d(rho.u_factor, fu, false);
}

StatEigenReport stat_eigen_check(StatGamowIndex idx, TensorForm const& probe, double tol,
                                 std::vector<double> const& times)
{
    auto const [fv, fu] = factors(idx);
    cplx const nu = stat_eigenvalue(idx);
    cplx const pf = pair_1d(probe.v_factor, fv, false);
    cplx const pg = pair_1d(probe.u_factor, fu, false);
    cplx const pvdf = pair_1d(probe.v_factor, fv, true);
    cplx const pudg = pair_1d(probe.u_factor, fu, true);
    // L rho = i(f u g' - v f' g); the pairing is antilinear on the left.
    cplx const lhs = -I * (pf * pudg - pvdf * pg);
    cplx const base = pf * pg;
    cplx const rhs = nu * base;
    double const residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));

    double const expected = nu.imag();
    // <rho(-t)|Phi> = <rho|Phi(t)> = e^{Im(nu) t} <rho|Phi>
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    double ratio_err = 0.0;
    std::vector<double> ts{0.0};
    ts.insert(ts.end(), times.begin(), times.end());
    for (double t : ts)
    {
        TensorForm const back{probe.v_factor.dilated(std::exp(-t)),
                              probe.u_factor.dilated(std::exp(t))};
        cplx const p = stat_pairing(back, idx);
        double const y = std::log(std::abs(p));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ratio_err = std::max(ratio_err, std::abs(p / base - std::exp(expected * t))
                                            / std::exp(expected * t));
    }
    double const m = static_cast<double>(ts.size());
    double const fitted = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    double const rate_error = std::abs(fitted - expected);
    bool const ok = residual <= tol && std::isfinite(fitted) && rate_error <= 1e-4
                    && ratio_err <= 1e-8;
    return {idx, nu, lhs, rhs, residual, expected, fitted, rate_error, tol, ok};
}

StatBiorthonormalityReport stat_biorthonormality(int max_m, int max_n)
{
    if (max_m < 0 || max_n < 0)
    {
        throw ValidationError("order", "index bounds must be nonnegative");
    }
    StatBiorthonormalityReport r{max_m, max_n, 0.0, 0.0};
    for (int m = 0; m <= max_m; ++m)
        for (int n = 0; n <= max_n; ++n)
            for (int mp = 0; mp <= max_m; ++mp)
                for (int np = 0; np <= max_n; ++np)
                {
                    double const kron = (m == mp && n == np) ? 1.0 : 0.0;
                    auto const [av, au] = factors({m, n, Family::PolyPoly});
                    auto const [bv, bu] = factors({mp, np, Family::DeltaDelta});
                    double const pp = bracket_1d(av, bv) * bracket_1d(au, bu);
                    auto const [cv, cu] = factors({m, n, Family::DeltaV_PolyU});
                    auto const [dv, du] = factors({mp, np, Family::DeltaU_PolyV});
                    double const mx = bracket_1d(cv, dv) * bracket_1d(cu, du);
                    r.max_deviation_poly_delta
                        = std::max(r.max_deviation_poly_delta, std::abs(pp - kron));
                    r.max_deviation_mixed = std::max(r.max_deviation_mixed, std::abs(mx - kron));
                }
    return r;
}

}  // namespace iho::stat
