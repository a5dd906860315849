#include "iho/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "iho/errors.hpp"

namespace iho::fourier {

namespace {
constexpr double alias_threshold = 1e-16;

// FFTW planning is not reentrant; execution of an existing plan is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}
}  // namespace

void dft(std::span<cplx> data, int sign)
{
    if (data.empty())
        return;
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(static_cast<int>(data.size()), buf, buf,
                                sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

void dft_batch(std::span<cplx> data, std::size_t howmany, int sign)
{
    if (data.empty() || howmany == 0)
        return;
    int const n = static_cast<int>(data.size() / howmany);
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_many_dft(1, &n, static_cast<int>(howmany), buf, nullptr, 1, n, buf,
                                  nullptr, 1, n, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                                  FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

bool compatible(Grid1D const& src, Grid1D const& dst, double alpha) noexcept
{
    if (src.n != dst.n)
        return false;
    double const target = 2.0 * pi / static_cast<double>(src.n);
    return std::abs(alpha * src.dx * dst.dx - target) <= 1e-12 * target;
}

namespace {

std::vector<cplx> fast_sum(std::span<cplx const> in, Grid1D const& src, Grid1D const& dst,
                           double alpha, double s)
{
    // x_j y_k = x0 y0 + x0 k dy + j dx y0 + j k dx dy
    std::size_t const n = src.n;
    std::vector<cplx> work(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double const ph = s * alpha * static_cast<double>(j) * src.dx * dst.x0;
        work[j] = trapezoid_weight(src, j) * in[j] * std::polar(1.0, ph);
    }
    dft(work, s < 0 ? -1 : 1);
    for (std::size_t k = 0; k < n; ++k)
    {
        double const ph
            = s * alpha * (src.x0 * dst.x0 + src.x0 * static_cast<double>(k) * dst.dx);
        work[k] *= std::polar(1.0, ph);
    }
    return work;
}

double tail_of_spectrum(std::span<cplx const> spec)
{
    std::size_t const n = spec.size();
    std::size_t const band = n / 8;
    double total = 0.0;
    double tail = 0.0;
    for (std::size_t j = 0; j < n; ++j)
    {
        std::size_t const dist = std::min(j, n - j);
        total += std::norm(spec[j]);
        if (dist + band >= n / 2)
            tail += std::norm(spec[j]);
    }
    return total > 0.0 ? tail / total : 0.0;
}

std::vector<cplx> direct_sum(std::span<cplx const> in, Grid1D const& src, Grid1D const& dst,
                             double alpha, double s)
{
    constexpr std::size_t reseed = 64;
    std::vector<cplx> weighted(src.n);
    for (std::size_t j = 0; j < src.n; ++j)
        weighted[j] = trapezoid_weight(src, j) * in[j];
    std::vector<cplx> out(dst.n);
    for (std::size_t k = 0; k < dst.n; ++k)
    {
        double const y = dst.x(k);
        double const step_phase = s * alpha * y * src.dx;
        cplx const step = std::polar(1.0, step_phase);
        cplx acc = 0.0;
        cplx ph;
        for (std::size_t j = 0; j < src.n; ++j)
        {
            if (j % reseed == 0)
                ph = std::polar(1.0, s * alpha * y * src.x(j));
            acc += weighted[j] * ph;
            ph *= step;
        }
        out[k] = acc;
    }
    return out;
}

}  // namespace

std::vector<cplx> fourier_sum(std::span<cplx const> in, Grid1D const& src, Grid1D const& dst,
                              double alpha, int sign, Path path)
{
    if (in.size() != src.n)
    {
        throw GridMismatchError("fourier_sum: input length does not match source grid");
    }
    double const s = sign < 0 ? -1.0 : 1.0;
    bool const fast_ok = compatible(src, dst, alpha);
    if (path == Path::Fast && !fast_ok)
    {
        throw GridMismatchError("fourier_sum: grids are not FFT-compatible");
    }
    if (fast_ok && path != Path::Direct)
    {
        return fast_sum(in, src, dst, alpha, s);
    }
    return direct_sum(in, src, dst, alpha, s);
}

double spectral_tail_fraction(std::span<cplx const> f)
{
    std::vector<cplx> work(f.begin(), f.end());
    dft(work, -1);
    return tail_of_spectrum(work);
}

std::vector<cplx> spectral_derivative(std::span<cplx const> f, double dx)
{
    std::size_t const n = f.size();
    double peak = 0.0;
    for (auto const& z : f)
        peak = std::max(peak, std::abs(z));
    if (peak == 0.0)
        return std::vector<cplx>(n, 0.0);
    double const edge = std::max(std::abs(f.front()), std::abs(f.back()));
    if (edge > 1e-10 * peak)
    {
        throw DomainError("spectral_derivative: samples do not decay to the grid edges");
    }
    std::vector<cplx> work(f.begin(), f.end());
    dft(work, -1);
    if (tail_of_spectrum(work) > alias_threshold)
    {
        throw AliasError("spectral_derivative: spectrum does not decay before Nyquist");
    }
    double const dk = 2.0 * pi / (static_cast<double>(n) * dx);
    for (std::size_t j = 0; j < n; ++j)
    {
        double k = 0.0;
        if (2 * j < n)
            k = dk * static_cast<double>(j);
        else if (2 * j > n)
            k = -dk * static_cast<double>(n - j);
        work[j] *= cplx(0.0, k) / static_cast<double>(n);
    }
    dft(work, +1);
    return work;
}

}  // namespace iho::fourier
