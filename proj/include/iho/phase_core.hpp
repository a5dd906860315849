#pragma once

// Classical inverted oscillator in dimensionless units: H = (p^2 - q^2)/2.
// The fiber coordinates v = (p+q)/sqrt2, u = (p-q)/sqrt2 diagonalize the
// flow, H = v u, and trajectories are v0 e^t, u0 e^-t.

namespace iho::phase {

struct PhasePoint
{
    double q;
    double p;

    PhasePoint(double q_, double p_);
};

struct FiberPoint
{
    double v;
    double u;

    FiberPoint(double v_, double u_);
};

FiberPoint to_fiber(PhasePoint x);
PhasePoint to_phase(FiberPoint x);

double hamiltonian(FiberPoint x);
double hamiltonian(PhasePoint x);

// Closed-form flow. Throws OverflowError if the result is not representable.
FiberPoint evolve_classical(FiberPoint x0, double t);

// q -> q, p -> -p, which in fiber coordinates is (v, u) -> (-u, -v).
FiberPoint time_reverse(FiberPoint x);
PhasePoint time_reverse(PhasePoint x);

// Natural scales of a physical oscillator (mass m, barrier curvature omega).
// Only used to convert inputs and outputs; all computation is dimensionless.
struct Scales
{
    double length;    // sqrt(hbar / (m omega))
    double momentum;  // sqrt(m omega hbar)
    double time;      // 1 / omega
    double energy;    // hbar omega

    static Scales from_physical(double mass, double omega, double hbar);

    PhasePoint to_dimensionless(double q, double p) const
    {
        return {q / length, p / momentum};
    }
    double time_to_dimensionless(double t) const { return t / time; }
};

}  // namespace iho::phase
