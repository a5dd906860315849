#include "iho/packet.hpp"

#include <cmath>
#include <string>

#include "iho/errors.hpp"
#include "quadrature.hpp"

namespace iho {

namespace {

// Taylor coefficients of exp(-1/(1 - s^2)) around s0, |s0| < 1.
// -1/(1-s^2) = -(1/(1-s) + 1/(1+s))/2 has elementary series; the exponential
// follows from E' = G' E.
std::vector<double> bump_profile_series(double s0, int order)
{
    std::vector<double> g(order + 1);
    double const a = 1.0 / (1.0 - s0);
    double const b = 1.0 / (1.0 + s0);
    double pa = a;
    double pb = b;
    for (int k = 0; k <= order; ++k)
    {
        g[k] = -0.5 * (pa + ((k % 2 == 0) ? pb : -pb));
        pa *= a;
        pb *= b;
    }
    std::vector<double> e(order + 1, 0.0);
    e[0] = std::exp(g[0]);
    for (int k = 1; k <= order; ++k)
    {
        double acc = 0.0;
        for (int j = 1; j <= k; ++j)
        {
            acc += j * g[j] * e[k - j];
        }
        e[k] = acc / k;
    }
    return e;
}

// Coefficients of s^d exp(-s^2/2) expanded around s0.
std::vector<double> gauss_profile_series(double s0, int degree, int order)
{
    // exp(-(s0+e)^2/2) = exp(-s0^2/2) sum_k (-1)^k He_k(s0)/k! e^k
    std::vector<double> h(order + 1);
    h[0] = 1.0;
    if (order >= 1)
        h[1] = s0;
    for (int k = 1; k < order; ++k)
    {
        h[k + 1] = (s0 * h[k] - h[k - 1]) / (k + 1);
    }
    double const g0 = std::exp(-0.5 * s0 * s0);
    // (s0 + e)^d = sum_j C(d,j) s0^(d-j) e^j
    std::vector<double> poly(degree + 1);
    double binom = 1.0;
    for (int j = 0; j <= degree; ++j)
    {
        poly[j] = binom * std::pow(s0, degree - j);
        binom = binom * (degree - j) / (j + 1);
    }
    std::vector<double> out(order + 1, 0.0);
    for (int k = 0; k <= order; ++k)
    {
        double acc = 0.0;
        for (int j = 0; j <= std::min(k, degree); ++j)
        {
            double const gk = h[k - j] * (((k - j) % 2 == 0) ? 1.0 : -1.0);
            acc += poly[j] * gk;
        }
        out[k] = g0 * acc;
    }
    return out;
}

}  // namespace

char const* to_string(PacketFamily f)
{
    switch (f)
    {
        case PacketFamily::Bump:
            return "Bump";
        case PacketFamily::GaussHermite:
            return "GaussHermite";
        case PacketFamily::Monomial:
            return "Monomial";
    }
    return "?";
}

AnalyticPacket AnalyticPacket::bump(double center, double half_width, cplx scale)
{
    if (!(half_width > 0) || !std::isfinite(half_width) || !std::isfinite(center))
    {
        throw DomainError("bump: half-width must be positive and finite");
    }
    return {PacketFamily::Bump, center, half_width, 0, scale};
}

AnalyticPacket AnalyticPacket::gauss_hermite(double center, double width, int degree, cplx scale)
{
    if (!(width > 0) || !std::isfinite(width) || !std::isfinite(center))
    {
        throw DomainError("gauss_hermite: width must be positive and finite");
    }
    if (degree < 0)
    {
        throw DomainError("gauss_hermite: degree must be nonnegative");
    }
    return {PacketFamily::GaussHermite, center, width, degree, scale};
}

AnalyticPacket AnalyticPacket::monomial(int degree, double center, cplx scale)
{
    if (degree < 0)
    {
        throw DomainError("monomial: degree must be nonnegative");
    }
    return {PacketFamily::Monomial, center, 1.0, degree, scale};
}

AnalyticPacket AnalyticPacket::normalized_bump(double center, double half_width)
{
    auto p = bump(center, half_width);
    return p.scaled(1.0 / p.norm());
}

AnalyticPacket AnalyticPacket::normalized_gauss_hermite(double center, double width, int degree)
{
    auto p = gauss_hermite(center, width, degree);
    return p.scaled(1.0 / p.norm());
}

std::optional<std::pair<double, double>> AnalyticPacket::support() const
{
    switch (family_)
    {
        case PacketFamily::Bump:
            return std::pair{center_ - width_, center_ + width_};
        case PacketFamily::GaussHermite: {
            double const r = (8.0 + std::sqrt(2.0 * degree_)) * width_;
            return std::pair{center_ - r, center_ + r};
        }
        case PacketFamily::Monomial:
            return std::nullopt;
    }
    return std::nullopt;
}

double AnalyticPacket::convergence_radius(double x) const
{
    if (family_ != PacketFamily::Bump)
    {
        return std::numeric_limits<double>::infinity();
    }
    double const lo = center_ - width_;
    double const hi = center_ + width_;
    return std::min(std::abs(x - lo), std::abs(x - hi));
}

cplx AnalyticPacket::operator()(double x) const
{
    double const s = (x - center_) / width_;
    switch (family_)
    {
        case PacketFamily::Bump:
            if (std::abs(s) >= 1.0)
                return 0.0;
            return scale_ * std::exp(-1.0 / (1.0 - s * s));
        case PacketFamily::GaussHermite:
            return scale_ * std::pow(s, degree_) * std::exp(-0.5 * s * s);
        case PacketFamily::Monomial:
            return scale_ * std::pow(x - center_, degree_);
    }
    return 0.0;
}

std::vector<cplx> AnalyticPacket::taylor(double x, int order) const
{
    if (order < 0)
    {
        throw OrderError("taylor: negative order");
    }
    if (family_ != PacketFamily::Monomial && order > max_exact_order)
    {
        throw OrderError("taylor: order " + std::to_string(order) + " exceeds the exact order "
                         + std::to_string(max_exact_order) + " of the " + to_string(family_)
                         + " family");
    }
    std::vector<cplx> out(order + 1, 0.0);
    double const s0 = (x - center_) / width_;
    switch (family_)
    {
        case PacketFamily::Bump: {
            if (std::abs(s0) >= 1.0)
                return out;
            auto const e = bump_profile_series(s0, order);
            double wk = 1.0;
            for (int k = 0; k <= order; ++k)
            {
                out[k] = scale_ * e[k] * wk;
                wk /= width_;
            }
            return out;
        }
        case PacketFamily::GaussHermite: {
            auto const e = gauss_profile_series(s0, degree_, order);
            double wk = 1.0;
            for (int k = 0; k <= order; ++k)
            {
                out[k] = scale_ * e[k] * wk;
                wk /= width_;
            }
            return out;
        }
        case PacketFamily::Monomial: {
            double const dx = x - center_;
            double binom = 1.0;
            for (int j = 0; j <= std::min(order, degree_); ++j)
            {
                out[j] = scale_ * binom * std::pow(dx, degree_ - j);
                binom = binom * (degree_ - j) / (j + 1);
            }
            return out;
        }
    }
    return out;
}

cplx AnalyticPacket::derivative(double x, int k) const
{
    auto const c = taylor(x, k);
    return c[k] * std::exp(std::lgamma(k + 1.0));
}

AnalyticPacket AnalyticPacket::dilated(double lambda) const
{
    if (!(lambda > 0) || !std::isfinite(lambda))
    {
        throw DomainError("dilated: factor must be positive and finite");
    }
    if (family_ == PacketFamily::Monomial)
    {
        // ((x/l) - c)^d = l^-d (x - l c)^d
        return {family_, center_ * lambda, 1.0, degree_, scale_ * std::pow(lambda, -degree_)};
    }
    return {family_, center_ * lambda, width_ * lambda, degree_, scale_};
}

AnalyticPacket AnalyticPacket::reflected() const
{
    // Bump is even in s; s^d picks up (-1)^d, as does (x-c)^d.
    double const sign = (family_ != PacketFamily::Bump && degree_ % 2 == 1) ? -1.0 : 1.0;
    return {family_, -center_, width_, degree_, scale_ * sign};
}

AnalyticPacket AnalyticPacket::conjugated() const
{
    return {family_, center_, width_, degree_, std::conj(scale_)};
}

AnalyticPacket AnalyticPacket::scaled(cplx factor) const
{
    return {family_, center_, width_, degree_, scale_ * factor};
}

double AnalyticPacket::norm() const
{
    switch (family_)
    {
        case PacketFamily::GaussHermite:
            // w * int s^(2d) e^(-s^2) ds = w Gamma(d + 1/2)
            return std::abs(scale_) * std::sqrt(width_ * std::tgamma(degree_ + 0.5));
        case PacketFamily::Bump: {
            static double const m = quad::integrate(
                [](double s) {
                    return std::exp(-2.0 / (1.0 - s * s));
                },
                -1.0, 1.0, 1e-14);
            return std::abs(scale_) * std::sqrt(width_ * m);
        }
        case PacketFamily::Monomial:
            return std::numeric_limits<double>::infinity();
    }
    return 0.0;
}

}  // namespace iho
