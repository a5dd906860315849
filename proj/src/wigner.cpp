#include "iho/wigner.hpp"

#include <algorithm>
#include <cmath>

#include "iho/errors.hpp"
#include "iho/fourier.hpp"
#include "iho/gamow_q.hpp"
#include "iho/interp.hpp"
#include "iho/reps.hpp"

namespace iho::wigner {

namespace {

// buf[j n + l] = (dx/pi) sum_k psi_{j-k} conj(psi_{j+k}) e^{sign 2i y_l k dx},
// k in [-n/2, n/2), y_l = (l - n/2) pi/(n dx).
std::vector<cplx> slice_transform(std::span<cplx const> psi, double dx, int sign)
{
    std::size_t const n = psi.size();
    if (n % 2 != 0)
    {
        throw ValidationError("grid.n", "Wigner transform needs an even number of samples");
    }
    auto const half = static_cast<std::ptrdiff_t>(n / 2);
    auto const sn = static_cast<std::ptrdiff_t>(n);
    std::vector<cplx> buf(n * n, 0.0);
    for (std::ptrdiff_t j = 0; j < sn; ++j)
    {
        cplx* row = buf.data() + j * sn;
        for (std::ptrdiff_t kappa = 0; kappa < sn; ++kappa)
        {
            std::ptrdiff_t const k = kappa - half;
            std::ptrdiff_t const a = j - k;
            std::ptrdiff_t const b = j + k;
            if (a < 0 || a >= sn || b < 0 || b >= sn)
                continue;
            cplx const g = psi[a] * std::conj(psi[b]);
            row[kappa] = (kappa % 2 == 0) ? g : -g;
        }
    }
    fourier::dft_batch(buf, n, sign);
    double const scale = dx / pi;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
            buf[j * n + l] *= ((l + n / 2) % 2 == 0) ? scale : -scale;
    return buf;
}

WignerField finish(Coordinates coords, Grid1D first, Grid1D second, std::vector<cplx> buf,
                   std::string source)
{
    double peak = 0.0;
    double imag = 0.0;
    for (auto const& z : buf)
    {
        peak = std::max(peak, std::abs(z.real()));
        imag = std::max(imag, std::abs(z.imag()));
    }
    double const residual = peak > 0.0 ? imag / peak : 0.0;
    if (residual > 1e-8)
    {
        throw HermiticityError("Wigner field has imaginary residual "
                               + std::to_string(residual));
    }
    for (auto& z : buf)
        z = z.real();
    return {coords, stat::PhaseDensity2D(first, second, std::move(buf), false), residual,
            std::move(source)};
}

std::string describe(GridFunction1D const& psi)
{
    auto const& g = psi.grid();
    char buf[160];
    std::snprintf(buf, sizeof buf, "rep=%s x0=%.17g dx=%.17g n=%zu", to_string(psi.rep()), g.x0,
                  g.dx, g.n);
    return buf;
}

}  // namespace

Grid1D conjugate_axis(Grid1D const& g)
{
    double const dy = pi / (static_cast<double>(g.n) * g.dx);
    return {-0.5 * static_cast<double>(g.n) * dy, dy, g.n};
}

WignerField wigner_qp(GridFunction1D const& psi_q)
{
    if (psi_q.rep() != Representation::Q)
    {
        throw RepError("wigner_qp: input must be in the Q representation");
    }
    auto buf = slice_transform(psi_q.values(), psi_q.grid().dx, +1);
    return finish(Coordinates::QP, psi_q.grid(), conjugate_axis(psi_q.grid()), std::move(buf),
                  describe(psi_q));
}

WignerField wigner_vu(GridFunction1D const& psi_v)
{
    if (psi_v.rep() != Representation::V)
    {
        throw RepError("wigner_vu: input must be in the V representation");
    }
    auto buf = slice_transform(psi_v.values(), psi_v.grid().dx, +1);
    return finish(Coordinates::VU, psi_v.grid(), conjugate_axis(psi_v.grid()), std::move(buf),
                  describe(psi_v));
}

WignerField wigner_from_u(GridFunction1D const& psi_u)
{
    if (psi_u.rep() != Representation::U)
    {
        throw RepError("wigner_from_u: input must be in the U representation");
    }
    std::size_t const n = psi_u.size();
    auto const buf = slice_transform(psi_u.values(), psi_u.grid().dx, -1);
    std::vector<cplx> out(n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t l = 0; l < n; ++l)
            out[l * n + j] = buf[j * n + l];
    return finish(Coordinates::VU, conjugate_axis(psi_u.grid()), psi_u.grid(), std::move(out),
                  describe(psi_u));
}

std::vector<double> marginal_first(WignerField const& w)
{
    auto const& f = w.field;
    std::vector<double> out(f.v_grid().n, 0.0);
    for (std::size_t i = 0; i < f.v_grid().n; ++i)
    {
        double acc = 0.0;
        for (std::size_t j = 0; j < f.u_grid().n; ++j)
            acc += w.at(i, j);
        out[i] = acc * f.u_grid().dx;
    }
    return out;
}

std::vector<double> marginal_second(WignerField const& w)
{
    auto const& f = w.field;
    std::vector<double> out(f.u_grid().n, 0.0);
    for (std::size_t i = 0; i < f.v_grid().n; ++i)
        for (std::size_t j = 0; j < f.u_grid().n; ++j)
            out[j] += w.at(i, j);
    for (auto& x : out)
        x *= f.v_grid().dx;
    return out;
}

double total(WignerField const& w)
{
    double acc = 0.0;
    for (double x : marginal_first(w))
        acc += x;
    return acc * w.field.v_grid().dx;
}

WignerField remap_qp_to_vu(WignerField const& qp, Grid1D const& v_grid, Grid1D const& u_grid)
{
    if (qp.coords != Coordinates::QP)
    {
        throw RepError("remap_qp_to_vu: field is not in (q, p) coordinates");
    }
    Grid1D const& qg = qp.field.v_grid();
    Grid1D const& pg = qp.field.u_grid();
    std::vector<cplx> out(v_grid.n * u_grid.n, 0.0);
    for (std::size_t i = 0; i < v_grid.n; ++i)
    {
        for (std::size_t j = 0; j < u_grid.n; ++j)
        {
            double const v = v_grid.x(i);
            double const u = u_grid.x(j);
            auto const sq = lagrange_stencil(qg, (v - u) / sqrt2);
            auto const sp = lagrange_stencil(pg, (v + u) / sqrt2);
            if (!sq.inside || !sp.inside)
                continue;
            double acc = 0.0;
            for (int a = 0; a < interp_stencil; ++a)
            {
                double row = 0.0;
                for (int b = 0; b < interp_stencil; ++b)
                    row += sp.w[b] * qp.at(sq.start + a, sp.start + b);
                acc += sq.w[a] * row;
            }
            out[i * u_grid.n + j] = acc;
        }
    }
    return {Coordinates::VU, stat::PhaseDensity2D(v_grid, u_grid, std::move(out), false),
            qp.max_imag_residual, qp.source + "; remapped from (q,p)"};
}

char const* to_string(Side s) { return s == Side::Plus ? "Plus" : "Minus"; }

namespace {

double fit_loglog(std::vector<double> const& x, std::vector<double> const& y, double lo,
                  double hi)
{
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
    {
        if (x[i] < lo || x[i] > hi || !(y[i] > 0.0))
            continue;
        double const lx = std::log(x[i]);
        double const ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2)
        return std::numeric_limits<double>::quiet_NaN();
    // decay exponent is minus the slope
    return -(m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

SpaceMappingReport verify_space_mapping(AnalyticPacket const& psi, Side side, std::size_t n)
{
    if (psi.family() != PacketFamily::Bump)
    {
        throw ValidationError("psi", "space mapping is checked for Bump packets");
    }
    double const d = std::sqrt(pi / static_cast<double>(n));
    Grid1D const grid(-0.5 * static_cast<double>(n) * d, d, n);
    bool const plus = side == Side::Plus;
    auto const f = plus ? wigner_vu(reps::sample(psi, Representation::V, grid))
                        : wigner_from_u(reps::sample(psi, Representation::U, grid));
    Grid1D const& ga = f.field.v_grid();
    Grid1D const& gb = f.field.u_grid();
    Grid1D const& compact_axis = plus ? ga : gb;
    Grid1D const& decay_axis = plus ? gb : ga;
    auto value = [&](std::size_t c, std::size_t dd) {
        return plus ? std::abs(f.at(c, dd)) : std::abs(f.at(dd, c));
    };

    auto const [lo, hi] = *psi.support();
    double peak = 0.0;
    double outside = 0.0;
    for (std::size_t c = 0; c < compact_axis.n; ++c)
    {
        bool const off = compact_axis.x(c) < lo - 1e-12 || compact_axis.x(c) > hi + 1e-12;
        for (std::size_t dd = 0; dd < decay_axis.n; ++dd)
        {
            double const a = value(c, dd);
            peak = std::max(peak, a);
            if (off)
                outside = std::max(outside, a);
        }
    }
    SpaceMappingReport r{};
    r.side = side;
    r.support_lo = lo;
    r.support_hi = hi;
    r.support_residual = outside / peak;
    r.support_ok = r.support_residual < 1e-12;

    auto const c0 = static_cast<std::size_t>(
        std::clamp(std::lround((psi.center() - compact_axis.x0) / compact_axis.dx), 0L,
                   static_cast<long>(compact_axis.n - 1)));
    r.slice_at = compact_axis.x(c0);
    std::vector<double> xs;
    std::vector<double> env;
    for (std::size_t dd = 0; dd < decay_axis.n; ++dd)
    {
        double const x = decay_axis.x(dd);
        if (x >= 5.0 - 1e-12 && x <= 20.0 + 1e-12)
        {
            xs.push_back(x);
            env.push_back(value(c0, dd));
        }
    }
    for (std::size_t i = env.size(); i-- > 1;)
        env[i - 1] = std::max(env[i - 1], env[i]);
    r.decay_exponent = fit_loglog(xs, env, 5.0, 20.0);
    for (double w0 : {5.0, 10.0, 15.0})
        r.window_exponents.push_back(fit_loglog(xs, env, w0, w0 + 5.0));
    if (!env.empty())
    {
        double const e5 = env.front();
        double const e20 = env.back();
        double const x5 = xs.front();
        double const x20 = xs.back();
        for (int k = 1; k <= 5; ++k)
        {
            r.weighted_bounded.push_back(e20 * std::pow(1 + x20 * x20, k)
                                         <= e5 * std::pow(1 + x5 * x5, k));
        }
    }
    r.decay_ok = r.decay_exponent >= 5.0;
    r.passed = r.support_ok && r.decay_ok;
    return r;
}

double support_edge_v(WignerField const& w, double floor)
{
    auto const& f = w.field;
    double peak = 0.0;
    for (auto const& z : f.values())
        peak = std::max(peak, std::abs(z));
    double edge = 0.0;
    for (std::size_t i = 0; i < f.v_grid().n; ++i)
        for (std::size_t j = 0; j < f.u_grid().n; ++j)
            if (std::abs(f.at(i, j)) > floor * peak)
                edge = std::max(edge, std::abs(f.v_grid().x(i)));
    return edge;
}

DynamicsReport wigner_dynamics_check(GridFunction1D const& psi_v, double t)
{
    auto const initial = wigner_vu(psi_v);
    auto const quantum = wigner_vu(gamow::evolve_scaling(psi_v, t));
    auto const classical = stat::evolve_liouville(initial.field, t);
    double diff = 0.0;
    double peak = 0.0;
    auto const& a = quantum.field.values();
    auto const& b = classical.values();
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        diff = std::max(diff, std::abs(a[i] - b[i]));
        peak = std::max(peak, std::abs(a[i]));
    }
    WignerField const cl{Coordinates::VU, classical, 0.0, initial.source};
    return {t, diff, diff / peak, support_edge_v(quantum), support_edge_v(cl)};
}

}  // namespace iho::wigner
