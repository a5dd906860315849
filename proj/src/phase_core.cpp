#include "iho/phase_core.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "iho/common.hpp"
#include "iho/errors.hpp"

namespace iho::phase {

namespace {
void require_finite(double a, double b, char const* what)
{
    if (!std::isfinite(a) || !std::isfinite(b))
    {
        throw DomainError(std::string(what) + " components must be finite");
    }
}
}  // namespace

PhasePoint::PhasePoint(double q_, double p_) : q(q_), p(p_)
{
    require_finite(q, p, "PhasePoint");
}

FiberPoint::FiberPoint(double v_, double u_) : v(v_), u(u_)
{
    require_finite(v, u, "FiberPoint");
}

FiberPoint to_fiber(PhasePoint x)
{
    return {(x.p + x.q) / sqrt2, (x.p - x.q) / sqrt2};
}

PhasePoint to_phase(FiberPoint x)
{
    return {(x.v - x.u) / sqrt2, (x.v + x.u) / sqrt2};
}

double hamiltonian(FiberPoint x) { return x.v * x.u; }

double hamiltonian(PhasePoint x) { return 0.5 * (x.p * x.p - x.q * x.q); }

FiberPoint evolve_classical(FiberPoint x0, double t)
{
    // exp overflows beyond log(DBL_MAX); a zero component must stay zero there
    // instead of turning into 0 * inf.
    static double const max_exponent = std::log(std::numeric_limits<double>::max());
    if (!std::isfinite(t) || std::abs(t) >= max_exponent)
    {
        throw OverflowError("evolve_classical: |t| = " + std::to_string(std::abs(t))
                            + " exceeds the representable exponent range");
    }
    double const v = x0.v * std::exp(t);
    double const u = x0.u * std::exp(-t);
    if (!std::isfinite(v) || !std::isfinite(u))
    {
        throw OverflowError("evolve_classical: trajectory leaves the double range");
    }
    return {v, u};
}

FiberPoint time_reverse(FiberPoint x) { return {-x.u, -x.v}; }

PhasePoint time_reverse(PhasePoint x) { return {x.q, -x.p}; }

Scales Scales::from_physical(double mass, double omega, double hbar)
{
    if (!(mass > 0) || !(omega > 0) || !(hbar > 0))
    {
        throw DomainError("Scales: mass, omega and hbar must be positive");
    }
    return {std::sqrt(hbar / (mass * omega)), std::sqrt(mass * omega * hbar), 1.0 / omega,
            hbar * omega};
}

}  // namespace iho::phase
