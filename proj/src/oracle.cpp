#include "iho/oracle.hpp"

#include <fftw3.h>

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <mutex>
#include <random>

#include "iho/errors.hpp"
#include "iho/phase_core.hpp"

namespace iho::oracle {

namespace {

constexpr std::size_t reseed = 64;

void check_mass_leak(GridFunction1D const& f, char const* who)
{
    std::size_t const n = f.size();
    std::size_t const strip = n / 20;
    double total = 0.0;
    double edge = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        double const m = std::norm(f[j]);
        total += m;
        if (j < strip || j >= n - strip)
            edge += m;
    }
    if (edge > 1e-10 * total)
    {
        throw MassLeakError(std::string(who) + ": boundary strips hold "
                            + std::to_string(edge / total) + " of the mass");
    }
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

cplx eval_complex(AnalyticPacket const& p, cplx z)
{
    cplx const s = (z - p.center()) / p.width();
    switch (p.family())
    {
        case PacketFamily::Bump:
            return p.scale() * std::exp(-1.0 / (1.0 - s * s));
        case PacketFamily::GaussHermite:
            return p.scale() * std::pow(s, p.degree()) * std::exp(-0.5 * s * s);
        case PacketFamily::Monomial:
            return p.scale() * std::pow(z - p.center(), p.degree());
    }
    return 0.0;
}

template <class F>
cplx tanh_sinh_complex(F const& f, double a, double b)
{
    boost::math::quadrature::tanh_sinh<double> ts;
    double const re = ts.integrate([&](double x) { return f(x).real(); }, a, b);
    double const im = ts.integrate([&](double x) { return f(x).imag(); }, a, b);
    return {re, im};
}

// Unit-length pieces keep tanh-sinh away from long oscillatory stretches.
template <class F>
cplx piecewise(F const& f, double a, double b)
{
    cplx acc = 0.0;
    int const pieces = std::max(1, static_cast<int>(std::ceil(b - a)));
    double const h = (b - a) / pieces;
    for (int k = 0; k < pieces; ++k)
        acc += tanh_sinh_complex(f, a + k * h, a + (k + 1) * h);
    return acc;
}

double const kernel_norm = std::pow(2.0 * pi * pi, -0.25);

cplx local_kqv(double q, double v)
{
    return kernel_norm * std::polar(1.0, sqrt2 * v * q - 0.5 * q * q - 0.5 * v * v);
}

cplx local_kqu(double q, double u)
{
    return kernel_norm * std::polar(1.0, -pi / 4.0)
           * std::polar(1.0, sqrt2 * u * q + 0.5 * q * q + 0.5 * u * u);
}

std::mutex& fftw_mutex()
{
    static std::mutex m;
    return m;
}

}  // namespace

OracleReport make_report(std::string name, double discrepancy, double tolerance,
                         double runtime_s)
{
    bool const ok = std::isfinite(discrepancy) && discrepancy <= tolerance;
    return {std::move(name), discrepancy, tolerance, ok, runtime_s};
}

Grid1D propagator_grid() { return Grid1D::symmetric(40.0, 8192); }

GridFunction1D propagator_evolve(GridFunction1D const& psi_q, double t)
{
    if (psi_q.rep() != Representation::Q)
    {
        throw RepError("propagator_evolve: input must be in the Q representation");
    }
    if (t == 0.0)
    {
        return psi_q;
    }
    if (std::abs(t) < 1e-6)
    {
        throw SingularTimeError("propagator_evolve: kernel is singular for |t| < 1e-6");
    }
    check_mass_leak(psi_q, "propagator_evolve input");
    Grid1D const& g = psi_q.grid();
    double const s = std::sinh(std::abs(t));
    double const c = std::cosh(std::abs(t));
    double const alpha = c / (2.0 * s);
    double const beta = 1.0 / s;
    double const sign = t > 0 ? 1.0 : -1.0;
    cplx const amp = std::polar(1.0 / std::sqrt(2.0 * pi * s), -sign * pi / 4.0);

    std::vector<cplx> w(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
    {
        double const q = g.x(j);
        double const wt = (j == 0 || j + 1 == g.n) ? 0.5 * g.dx : g.dx;
        w[j] = wt * psi_q[j] * std::polar(1.0, sign * alpha * q * q);
    }
    std::vector<cplx> out(g.n);
    for (std::size_t k = 0; k < g.n; ++k)
    {
        double const qk = g.x(k);
        cplx const step = std::polar(1.0, -sign * beta * qk * g.dx);
        cplx acc = 0.0;
        cplx ph;
        for (std::size_t j = 0; j < g.n; ++j)
        {
            if (j % reseed == 0)
                ph = std::polar(1.0, -sign * beta * qk * g.x(j));
            acc += w[j] * ph;
            ph *= step;
        }
        out[k] = amp * std::polar(1.0, sign * alpha * qk * qk) * acc;
    }
    GridFunction1D result(Representation::Q, g, std::move(out));
    check_mass_leak(result, "propagator_evolve output");
    return result;
}

GridFunction1D splitstep_evolve(GridFunction1D const& psi_q, double t, double dt)
{
    if (psi_q.rep() != Representation::Q)
    {
        throw RepError("splitstep_evolve: input must be in the Q representation");
    }
    if (!(dt > 0.0) || dt > 1e-3)
    {
        throw ValidationError("dt", "split-step needs 0 < dt <= 1e-3");
    }
    if (t == 0.0)
    {
        return psi_q;
    }
    check_mass_leak(psi_q, "splitstep_evolve input");
    Grid1D const& g = psi_q.grid();
    std::size_t const n = g.n;
    auto const steps = static_cast<std::size_t>(std::ceil(std::abs(t) / dt - 1e-9));
    double const h = t / static_cast<double>(steps);

    std::vector<cplx> half_v(n), full_v(n), kin(n);
    double const dk = 2.0 * pi / (static_cast<double>(n) * g.dx);
    for (std::size_t j = 0; j < n; ++j)
    {
        double const q = g.x(j);
        // V = -q^2/2, exp(-i V h/2) = exp(i q^2 h/4)
        half_v[j] = std::polar(1.0, 0.25 * q * q * h);
        full_v[j] = std::polar(1.0, 0.5 * q * q * h);
        double const k = (2 * j < n) ? dk * static_cast<double>(j)
                                     : -dk * static_cast<double>(n - j);
        kin[j] = std::polar(1.0 / static_cast<double>(n), -0.5 * k * k * h);
    }
    std::vector<cplx> psi(psi_q.values().begin(), psi_q.values().end());
    auto* buf = reinterpret_cast<fftw_complex*>(psi.data());
    fftw_plan fwd;
    fftw_plan bwd;
    {
        std::lock_guard lock(fftw_mutex());
        fwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    for (std::size_t j = 0; j < n; ++j)
        psi[j] *= half_v[j];
    for (std::size_t s = 0; s < steps; ++s)
    {
        fftw_execute(fwd);
        for (std::size_t j = 0; j < n; ++j)
            psi[j] *= kin[j];
        fftw_execute(bwd);
        auto const& pot = (s + 1 == steps) ? half_v : full_v;
        for (std::size_t j = 0; j < n; ++j)
            psi[j] *= pot[j];
    }
    {
        std::lock_guard lock(fftw_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    GridFunction1D result(Representation::Q, g, std::move(psi));
    check_mass_leak(result, "splitstep_evolve output");
    return result;
}

PairingResult slow_pairing(GridFunction1D const& f, GridFunction1D const& g, Rule rule)
{
    if (f.rep() != g.rep() || !(f.grid() == g.grid()))
    {
        throw GridMismatchError("slow_pairing: functions live on different grids");
    }
    std::size_t const n = f.size();
    double const h = f.grid().dx;
    std::vector<cplx> p(n);
    for (std::size_t j = 0; j < n; ++j)
        p[j] = std::conj(f[j]) * g[j];

    auto trapezoid = [&](std::size_t stride) {
        std::size_t const last = ((n - 1) / stride) * stride;
        cplx acc = 0.5 * (p[0] + p[last]);
        for (std::size_t j = stride; j < last; j += stride)
            acc += p[j];
        return acc * (h * static_cast<double>(stride));
    };
    cplx const t1 = trapezoid(1);
    if (rule == Rule::Trapezoid)
    {
        return {t1, std::abs(t1 - trapezoid(2))};
    }
    // Composite Simpson; a 3/8 panel closes an odd number of intervals.
    std::size_t const intervals = n - 1;
    std::size_t const simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
    cplx acc = p[0] + p[simpson_end];
    for (std::size_t j = 1; j < simpson_end; ++j)
        acc += (j % 2 == 1 ? 4.0 : 2.0) * p[j];
    cplx s = acc * (h / 3.0);
    if (simpson_end != intervals)
    {
        std::size_t const a = simpson_end;
        s += (3.0 * h / 8.0) * (p[a] + 3.0 * p[a + 1] + 3.0 * p[a + 2] + p[a + 3]);
    }
    return {s, std::abs(s - t1)};
}

stat::PhaseDensity2D mc_transport(stat::PhaseDensity2D const& rho, double t,
                                  std::uint64_t samples, std::uint64_t seed)
{
    if (!rho.physical())
    {
        throw ValidationError("rho", "Monte-Carlo transport needs a physical density");
    }
    if (samples < 10000)
    {
        throw ValidationError("samples", "need at least 1e4 samples");
    }
    Grid1D const& vg = rho.v_grid();
    Grid1D const& ug = rho.u_grid();
    std::size_t const cells = vg.n * ug.n;
    std::vector<double> cdf(cells);
    double acc = 0.0;
    for (std::size_t c = 0; c < cells; ++c)
    {
        acc += rho.values()[c].real();
        cdf[c] = acc;
    }
    if (!(acc > 0.0))
    {
        throw ValidationError("rho", "density has no mass on the grid");
    }
    double const mass = acc * vg.dx * ug.dx;

    std::vector<std::uint64_t> counts(cells, 0);
    constexpr std::uint64_t batch = 1 << 14;
    for (std::uint64_t b = 0; b * batch < samples; ++b)
    {
        std::mt19937_64 rng(splitmix64(seed + b));
        std::uint64_t const todo = std::min(batch, samples - b * batch);
        for (std::uint64_t s = 0; s < todo; ++s)
        {
            double const r = uniform01(rng) * acc;
            auto const c = static_cast<std::size_t>(
                std::upper_bound(cdf.begin(), cdf.end(), r) - cdf.begin());
            std::size_t const cell = std::min(c, cells - 1);
            std::size_t const i = cell / ug.n;
            std::size_t const j = cell % ug.n;
            double const v = vg.x(i) + (uniform01(rng) - 0.5) * vg.dx;
            double const u = ug.x(j) + (uniform01(rng) - 0.5) * ug.dx;
            auto const y = phase::evolve_classical(phase::FiberPoint(v, u), t);
            long const ii = std::lround((y.v - vg.x0) / vg.dx);
            long const jj = std::lround((y.u - ug.x0) / ug.dx);
            if (ii < 0 || jj < 0 || ii >= static_cast<long>(vg.n) || jj >= static_cast<long>(ug.n))
                continue;
            ++counts[static_cast<std::size_t>(ii) * ug.n + static_cast<std::size_t>(jj)];
        }
    }
    double const to_density
        = mass / (static_cast<double>(samples) * vg.dx * ug.dx);
    std::vector<cplx> out(cells);
    for (std::size_t c = 0; c < cells; ++c)
        out[c] = static_cast<double>(counts[c]) * to_density;
    return {vg, ug, std::move(out), true};
}

namespace {

// Mean of the reference density over the cell centered at node (i, j).
double cell_average(stat::PhaseDensity2D const& ref, std::size_t i, std::size_t j)
{
    auto const& form = ref.analytic();
    if (!form)
    {
        return ref.at(i, j).real();
    }
    static constexpr double nodes[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
    static constexpr double weights[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double const v = ref.v_grid().x(i);
    double const u = ref.u_grid().x(j);
    double acc = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
        {
            double const vv = v + 0.5 * ref.v_grid().dx * nodes[a];
            double const uu = u + 0.5 * ref.u_grid().dx * nodes[b];
            acc += weights[a] * weights[b] * (*form)(vv, uu).real();
        }
    return acc / 4.0;
}

}  // namespace

ChiSquare chi_square(stat::PhaseDensity2D const& histogram, stat::PhaseDensity2D const& expected,
                     std::uint64_t samples)
{
    if (!(histogram.v_grid() == expected.v_grid()) || !(histogram.u_grid() == expected.u_grid()))
    {
        throw GridMismatchError("chi_square: histogram and reference grids differ");
    }
    double const cell = histogram.v_grid().dx * histogram.u_grid().dx;
    std::size_t const nv = histogram.v_grid().n;
    std::size_t const nu = histogram.u_grid().n;
    std::vector<double> avg(nv * nu);
    double mass = 0.0;
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nu; ++j)
        {
            avg[i * nu + j] = cell_average(expected, i, j);
            mass += avg[i * nu + j] * cell;
        }
    double const per_mass = static_cast<double>(samples) / mass;
    double chi2 = 0.0;
    int bins = 0;
    double pooled_o = 0.0;
    double pooled_e = 0.0;
    for (std::size_t i = 0; i < nv; ++i)
        for (std::size_t j = 0; j < nu; ++j)
        {
            double const o = std::round(histogram.at(i, j).real() * cell * per_mass);
            double const e = avg[i * nu + j] * cell * per_mass;
            if (e < 5.0)
            {
                pooled_o += o;
                pooled_e += e;
                continue;
            }
            chi2 += (o - e) * (o - e) / e;
            ++bins;
        }
    if (pooled_e >= 5.0)
    {
        chi2 += (pooled_o - pooled_e) * (pooled_o - pooled_e) / pooled_e;
        ++bins;
    }
    int const dof = std::max(1, bins - 1);
    double const z = (chi2 - dof) / std::sqrt(2.0 * dof);
    return {chi2, dof, z, std::abs(z) <= 3.0};
}

double rms_deviation(stat::PhaseDensity2D const& histogram, stat::PhaseDensity2D const& reference)
{
    double acc = 0.0;
    std::size_t const n = histogram.values().size();
    for (std::size_t c = 0; c < n; ++c)
        acc += std::norm(histogram.values()[c] - reference.values()[c]);
    return std::sqrt(acc / static_cast<double>(n));
}

cplx slow_survival(AnalyticPacket const& minus_v, AnalyticPacket const& plus_v, double t,
                   std::size_t intervals)
{
    if (minus_v.family() != PacketFamily::Bump)
    {
        throw ValidationError("minus", "slow_survival needs a bump detection state");
    }
    double const lo = minus_v.center() - minus_v.width();
    double const hi = minus_v.center() + minus_v.width();
    Grid1D const g(lo, (hi - lo) / static_cast<double>(intervals), intervals + 1);
    std::vector<cplx> f(g.n);
    std::vector<cplx> h(g.n);
    double const shrink = std::exp(-t);
    double const amp = std::exp(-0.5 * t);
    for (std::size_t j = 0; j < g.n; ++j)
    {
        f[j] = minus_v(g.x(j));
        h[j] = amp * plus_v(g.x(j) * shrink);
    }
    return slow_pairing({Representation::V, g, std::move(f)}, {Representation::V, g, std::move(h)})
        .value;
}

std::vector<cplx> cauchy_taylor(AnalyticPacket const& p, double x0, int order, double radius)
{
    constexpr int nodes = 256;
    std::vector<cplx> out(order + 1, 0.0);
    for (int k = 0; k < nodes; ++k)
    {
        double const theta = 2.0 * pi * k / nodes;
        cplx const f = eval_complex(p, x0 + std::polar(radius, theta));
        for (int n = 0; n <= order; ++n)
            out[n] += f * std::polar(1.0, -n * theta);
    }
    for (int n = 0; n <= order; ++n)
        out[n] /= nodes * std::pow(radius, n);
    return out;
}

cplx tanh_sinh_integral(AnalyticPacket const& p, double a, double b)
{
    return tanh_sinh_complex([&](double x) { return p(x); }, a, b);
}

cplx slow_transform_point(AnalyticPacket const& psi_q, char target, double y, double half_width)
{
    double const c = psi_q.center();
    if (target == 'V' || target == 'v')
    {
        return piecewise([&](double q) { return std::conj(local_kqv(q, y)) * psi_q(q); },
                         c - half_width, c + half_width);
    }
    if (target == 'U' || target == 'u')
    {
        return piecewise([&](double q) { return std::conj(local_kqu(q, y)) * psi_q(q); },
                         c - half_width, c + half_width);
    }
    throw ValidationError("target", "slow transform targets V or U");
}

double slow_wigner_point(AnalyticPacket const& psi_q, double q, double p, double half_width)
{
    cplx const v = piecewise(
        [&](double y) {
            return psi_q(q - 0.5 * y) * std::conj(psi_q(q + 0.5 * y)) * std::polar(1.0, p * y);
        },
        -2.0 * half_width, 2.0 * half_width);
    return v.real() / (2.0 * pi);
}

cplx kernel_consistency_integral(double v, double u)
{
    // Phase q^2 + sqrt2 (u - v) q is stationary at q* = (v - u)/sqrt2.
    double const qs = (v - u) / sqrt2;
    constexpr double inner = 20.0;
    constexpr double outer = 30.0;
    auto window = [&](double q) {
        double const d = std::abs(q - qs);
        if (d <= inner)
            return 1.0;
        if (d >= outer)
            return 0.0;
        double const x = (outer - d) / (outer - inner);
        double const a = std::exp(-1.0 / x);
        double const b = std::exp(-1.0 / (1.0 - x));
        return a / (a + b);
    };
    constexpr double h = 0.002;
    auto const n = static_cast<long>(2.0 * outer / h);
    cplx acc = 0.0;
    for (long k = 0; k <= n; ++k)
    {
        double const q = qs - outer + k * h;
        acc += window(q) * std::conj(local_kqv(q, v)) * local_kqu(q, u);
    }
    return acc * h;
}

}  // namespace iho::oracle
