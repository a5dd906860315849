#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "iho/common.hpp"

namespace iho {

enum class PacketFamily
{
    Bump,          // scale * exp(-1/(1-s^2)) on |s| < 1, s = (x-c)/a; compact support
    GaussHermite,  // scale * s^d * exp(-s^2/2), s = (x-c)/w; entire, fast decrease
    Monomial,      // scale * (x-c)^d; Gamow-side polynomial factor, not normalizable
};

char const* to_string(PacketFamily f);

// Closed-form test function of one real variable. Which representation it
// lives in (q, v or u) is decided by the caller.
//
// Bump packets stand in for smooth compactly supported functions; Gauss-type
// packets for the space of Fourier images of those (entire and fast
// decreasing). Gaussians are a strict superset of that space but have the
// infinite Taylor radius every expansion here needs.
//
// Taylor coefficients at any point are exact up to rounding: polynomial and
// Gaussian factors through the Hermite recurrence, the bump through power
// series composition of exp with -1/(1-s^2).
class AnalyticPacket
{
  public:
    static constexpr int max_exact_order = 128;

    static AnalyticPacket bump(double center, double half_width, cplx scale = 1.0);
    static AnalyticPacket gauss_hermite(double center, double width, int degree,
                                        cplx scale = 1.0);
    static AnalyticPacket monomial(int degree, double center = 0.0, cplx scale = 1.0);

    // Unit L2 norm versions.
    static AnalyticPacket normalized_bump(double center, double half_width);
    static AnalyticPacket normalized_gauss_hermite(double center, double width, int degree);

    PacketFamily family() const noexcept { return family_; }
    double center() const noexcept { return center_; }
    // Bump half-width a, Gaussian width w; 1 for monomials.
    double width() const noexcept { return width_; }
    int degree() const noexcept { return degree_; }
    cplx scale() const noexcept { return scale_; }

    bool compact() const noexcept { return family_ == PacketFamily::Bump; }
    bool normalizable() const noexcept { return family_ != PacketFamily::Monomial; }

    // Interval outside which the packet is zero (Bump) or below ~1e-14 of its
    // peak (GaussHermite: c +- (8 + sqrt(2d)) w). Empty for monomials.
    std::optional<std::pair<double, double>> support() const;

    // Distance from x to the nearest singularity of the analytic continuation.
    double convergence_radius(double x) const;

    cplx operator()(double x) const;

    // c_k = f^(k)(x)/k! for k = 0..order. Throws OrderError past max_exact_order.
    std::vector<cplx> taylor(double x, int order) const;
    cplx derivative(double x, int k) const;

    // x -> f(x / lambda), lambda > 0.
    AnalyticPacket dilated(double lambda) const;
    // x -> f(-x)
    AnalyticPacket reflected() const;
    AnalyticPacket conjugated() const;
    AnalyticPacket scaled(cplx factor) const;

    // Exact for GaussHermite; adaptive quadrature for Bump.
    double norm() const;

    bool operator==(AnalyticPacket const&) const = default;

  private:
    AnalyticPacket(PacketFamily f, double c, double w, int d, cplx s)
        : family_(f), center_(c), width_(w), degree_(d), scale_(s)
    {
    }

    PacketFamily family_;
    double center_;
    double width_;
    int degree_;
    cplx scale_;
};

}  // namespace iho
