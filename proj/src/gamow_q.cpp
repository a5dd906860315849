#include "iho/gamow_q.hpp"

#include <algorithm>
#include <cmath>

#include "iho/errors.hpp"
#include "iho/fourier.hpp"
#include "iho/interp.hpp"
#include "quadrature.hpp"

namespace iho::gamow {

namespace {

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

cplx ipow(int n)
{
    static constexpr cplx cycle[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    return cycle[((n % 4) + 4) % 4];
}

cplx const eighth_turn = std::polar(1.0, pi / 4.0);

std::pair<double, double> support_of(AnalyticPacket const& p, char const* who)
{
    auto s = p.support();
    if (!s)
    {
        throw DomainError(std::string(who) + ": packet has no finite support");
    }
    return *s;
}

}  // namespace

char const* to_string(Kind k) { return k == Kind::Decaying ? "Decaying" : "Growing"; }

GamowIndex::GamowIndex(int n_, Kind kind_) : n(n_), kind(kind_)
{
    if (n < 0)
    {
        throw ValidationError("n", "Gamow index must be nonnegative");
    }
}

cplx gamow_eigenvalue(GamowIndex idx)
{
    double const im = idx.n + 0.5;
    return idx.kind == Kind::Decaying ? cplx(0.0, -im) : cplx(0.0, im);
}

GamowCoefficients decaying_coeffs(AnalyticPacket const& phi_v, int order, double radius)
{
    auto c = phi_v.taylor(0.0, order);
    double const tail = std::abs(c.back()) * std::pow(radius, order);
    bool const finite = std::isfinite(phi_v.convergence_radius(0.0));
    return {Kind::Decaying, Representation::V, phi_v, std::move(c), radius, tail, finite,
            "<n~|phi> = phi^(n)(0)/n!, v-representation"};
}

GamowCoefficients growing_coeffs(AnalyticPacket const& psi_u, int order, double radius)
{
    auto c = psi_u.taylor(0.0, order);
    double const root = std::sqrt(2.0 * pi);
    for (int n = 0; n <= order; ++n)
    {
        c[n] *= root * ipow(n) * factorial(n);
    }
    double const tail = std::abs(c.back()) * std::pow(radius, order);
    bool const finite = std::isfinite(psi_u.convergence_radius(0.0));
    return {Kind::Growing, Representation::U, psi_u, std::move(c), radius, tail, finite,
            "<n|psi> = sqrt(2 pi) i^n psi^(n)(0), u-representation"};
}

GridFunction1D evolve_scaling(GridFunction1D const& f, double t)
{
    if (f.rep() == Representation::Q)
    {
        throw RepError("evolve_scaling: no closed scaling law in the Q representation");
    }
    if (!std::isfinite(t))
    {
        throw ValidationError("t", "time must be finite");
    }
    if (t == 0.0)
    {
        return f;
    }
    bool const v_rep = f.rep() == Representation::V;
    double const amp = std::exp(v_rep ? -0.5 * t : 0.5 * t);
    double const arg = std::exp(v_rep ? -t : t);
    Grid1D const& g = f.grid();
    LocalInterpolator interp(f.values(), g);
    std::vector<cplx> out(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
    {
        out[j] = amp * interp(g.x(j) * arg);
    }
    GridFunction1D result(f.rep(), g, std::move(out));
    double const peak = result.sup_abs();
    double const edge = std::max(std::abs(result[0]), std::abs(result[g.n - 1]));
    if (edge > 1e-10 * peak)
    {
        throw DomainError("evolve_scaling: evolved function reaches the grid edge at t = "
                          + std::to_string(t));
    }
    if (fourier::spectral_tail_fraction(result.values()) > 1e-12)
    {
        throw AliasError("evolve_scaling: evolved function is not resolved at t = "
                         + std::to_string(t));
    }
    return result;
}

SurvivalSeries survival_amplitude(AnalyticPacket const& minus, AnalyticPacket const& plus,
                                  int order, std::span<double const> times, double tolerance)
{
    if (minus.family() != PacketFamily::Bump)
    {
        throw ValidationError("minus", "the detection state must be a Bump packet");
    }
    if (plus.family() != PacketFamily::GaussHermite)
    {
        throw ValidationError("plus", "the prepared state must be a GaussHermite packet");
    }
    if (order < 1)
    {
        throw ValidationError("order", "truncation order must be at least 1");
    }
    auto const [lo, hi] = support_of(minus, "survival_amplitude");
    double const radius = std::max(std::abs(lo), std::abs(hi));

    SurvivalSeries s;
    s.order = order;
    s.coefficients = decaying_coeffs(plus, order, radius).values;
    s.moments.resize(order + 1);
    for (int n = 0; n <= order; ++n)
    {
        s.moments[n] = quad::integrate_complex(
            [&](double v) { return std::conj(minus(v)) * std::pow(v, n); }, lo, hi);
    }
    s.terms.resize(order + 1);
    for (int n = 0; n <= order; ++n)
        s.terms[n] = s.moments[n] * s.coefficients[n];

    double const l1 = quad::integrate([&](double v) { return std::abs(minus(v)); }, lo, hi);
    for (double t : times)
    {
        if (!std::isfinite(t))
        {
            throw ValidationError("times", "survival times must be finite");
        }
        cplx a = 0.0;
        for (int n = order; n >= 0; --n)
        {
            a += std::exp(-(n + 0.5) * t) * s.terms[n];
        }
        double tail = 0.0;
        for (int k : {order - 1, order})
        {
            tail += std::abs(s.coefficients[k]) * std::pow(radius, k) * std::exp(-(k + 0.5) * t);
        }
        tail *= l1;
        if (tail > tolerance)
        {
            throw ConvergenceError("survival_amplitude: tail bound " + std::to_string(tail)
                                   + " exceeds tolerance at t = " + std::to_string(t)
                                   + " (order " + std::to_string(order) + ")");
        }
        s.times.push_back(t);
        s.amplitudes.push_back(a);
        s.tail_bounds.push_back(tail);
        s.physical.push_back(t >= 0.0);
    }
    return s;
}

double fit_log_slope(SurvivalSeries const& s, double t_lo, double t_hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < s.times.size(); ++i)
    {
        double const t = s.times[i];
        if (t < t_lo || t > t_hi)
            continue;
        double const y = std::log(std::abs(s.amplitudes[i]));
        sx += t;
        sy += y;
        sxx += t * t;
        sxy += t * y;
        ++m;
    }
    if (m < 2)
    {
        throw ValidationError("times", "slope fit needs at least two times in the window");
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

cplx gamow_q_representation(GamowIndex idx, double q)
{
    bool const decaying = idx.kind == Kind::Decaying;
    cplx const z = (decaying ? std::conj(eighth_turn) : eighth_turn) * q;
    cplx h_prev = 1.0;
    cplx h = 2.0 * z;
    if (idx.n == 0)
        h = h_prev;
    for (int k = 1; k < idx.n; ++k)
    {
        cplx const next = 2.0 * z * h - 2.0 * static_cast<double>(k) * h_prev;
        h_prev = h;
        h = next;
    }
    return std::polar(1.0, (decaying ? 0.5 : -0.5) * q * q) * h;
}

EigenReport verify_generalized_eigen(GamowIndex idx, AnalyticPacket const& probe, double tol)
{
    int const n = idx.n;
    cplx const z = gamow_eigenvalue(idx);
    cplx lhs;
    cplx rhs;
    if (idx.kind == Kind::Decaying)
    {
        auto const [lo, hi] = support_of(probe, "verify_generalized_eigen");
        lhs = quad::integrate_complex(
            [&](double v) {
                auto const c = probe.taylor(v, 1);
                return I * (v * std::conj(c[1]) + 0.5 * std::conj(c[0])) * std::pow(v, n);
            },
            lo, hi);
        rhs = z * quad::integrate_complex(
                      [&](double v) { return std::conj(probe(v)) * std::pow(v, n); }, lo, hi);
    }
    else
    {
        // <H phi|n~> = conj(<n~|H phi>), H phi = -i(v phi' + phi/2).
        auto const c = probe.taylor(0.0, n + 1);
        std::vector<cplx> dphi(n + 1);
        for (int k = 0; k <= n; ++k)
            dphi[k] = (k + 1.0) * c[k + 1];
        cplx const v_dphi = n >= 1 ? dphi[n - 1] : cplx(0.0);
        lhs = std::conj(-I * (v_dphi + 0.5 * c[n]));
        rhs = z * std::conj(c[n]);
    }
    double const residual = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
    return {n, idx.kind, lhs, rhs, residual, tol, residual <= tol};
}

Grid1D reflected(Grid1D const& g) { return {-g.back(), g.dx, g.n}; }

GridFunction1D time_reverse(GridFunction1D const& f)
{
    auto const vals = f.values();
    std::size_t const n = f.size();
    if (f.rep() == Representation::Q)
    {
        return f.conjugated();
    }
    std::vector<cplx> out(n);
    for (std::size_t k = 0; k < n; ++k)
    {
        out[k] = eighth_turn * std::conj(vals[n - 1 - k]);
    }
    Representation const target
        = f.rep() == Representation::V ? Representation::U : Representation::V;
    return {target, reflected(f.grid()), std::move(out)};
}

PlacedPacket time_reverse(PlacedPacket const& p)
{
    switch (p.rep)
    {
        case Representation::Q:
            return {p.packet.conjugated(), Representation::Q};
        case Representation::V:
            return {p.packet.reflected().conjugated().scaled(eighth_turn), Representation::U};
        case Representation::U:
            return {p.packet.reflected().conjugated().scaled(eighth_turn), Representation::V};
    }
    return p;
}

char const* to_string(TestSpace s)
{
    switch (s)
    {
        case TestSpace::PhiPlus:
            return "PhiPlus";
        case TestSpace::PhiMinus:
            return "PhiMinus";
        case TestSpace::Unclassified:
            return "Unclassified";
    }
    return "?";
}

TestSpace classify_space(PlacedPacket const& p)
{
    if (p.rep == Representation::Q || p.packet.family() == PacketFamily::Monomial)
    {
        return TestSpace::Unclassified;
    }
    bool const compact = p.packet.compact();
    bool const in_v = p.rep == Representation::V;
    return (compact != in_v) ? TestSpace::PhiPlus : TestSpace::PhiMinus;
}

namespace {

// Neville extrapolation of samples f(eps_k) to eps = 0.
cplx extrapolate_to_zero(std::vector<double> const& eps, std::vector<cplx> f)
{
    std::size_t const m = eps.size();
    for (std::size_t level = 1; level < m; ++level)
    {
        for (std::size_t i = m - 1; i >= level; --i)
        {
            f[i] = (eps[i - level] * f[i] - eps[i] * f[i - 1]) / (eps[i - level] - eps[i]);
        }
    }
    return f[m - 1];
}

}  // namespace

BiorthonormalityReport quantum_biorthonormality(int max_index)
{
    if (max_index < 0)
    {
        throw ValidationError("max_index", "must be nonnegative");
    }
    int const m = max_index + 1;
    BiorthonormalityReport r{max_index, std::vector<std::vector<double>>(m, std::vector<double>(m)),
                             0.0, 0.0};
    // Regulated probe (-iu)^n/(n! sqrt(2pi)) exp(-eps u^2/2) as a GaussHermite
    // packet of width 1/sqrt(eps); its coefficients are polynomial in eps of
    // degree <= max_index/2, so enough Richardson levels remove the regulator.
    int const levels = max_index / 2 + 2;
    std::vector<double> eps(levels);
    for (int k = 0; k < levels; ++k)
        eps[k] = 0.5 * std::pow(0.5, k);

    for (int n = 0; n < m; ++n)
    {
        std::vector<std::vector<cplx>> samples(m, std::vector<cplx>(levels));
        for (int k = 0; k < levels; ++k)
        {
            double const w = 1.0 / std::sqrt(eps[k]);
            cplx const scale = ipow(-n) / (factorial(n) * std::sqrt(2.0 * pi)) * std::pow(w, n);
            auto const probe = AnalyticPacket::gauss_hermite(0.0, w, n, scale);
            auto const c = growing_coeffs(probe, max_index).values;
            for (int np = 0; np < m; ++np)
                samples[np][k] = c[np];
        }
        for (int np = 0; np < m; ++np)
        {
            cplx const limit = extrapolate_to_zero(eps, samples[np]);
            double const dev = std::abs(limit - (np == n ? 1.0 : 0.0));
            r.deviation[np][n] = dev;
            r.max_deviation = std::max(r.max_deviation, dev);
        }
    }
    for (int np = 0; np < m; ++np)
    {
        auto const c = decaying_coeffs(AnalyticPacket::monomial(np), max_index).values;
        for (int n = 0; n < m; ++n)
        {
            r.max_deviation_dual
                = std::max(r.max_deviation_dual, std::abs(c[n] - (np == n ? 1.0 : 0.0)));
        }
    }
    return r;
}

}  // namespace iho::gamow
