#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "iho/common.hpp"
#include "iho/errors.hpp"
#include "iho/phase_core.hpp"

using namespace iho;
using namespace iho::phase;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("to_fiber on known points")
{
    auto a = to_fiber({0.0, std::sqrt(2.0)});
    CHECK_THAT(a.v, WithinAbs(1.0, 1e-15));
    CHECK_THAT(a.u, WithinAbs(1.0, 1e-15));
    auto b = to_fiber({1.0, 1.0});
    CHECK_THAT(b.v, WithinAbs(std::sqrt(2.0), 1e-15));
    CHECK_THAT(b.u, WithinAbs(0.0, 1e-15));
    auto c = to_fiber({0.0, 0.0});
    CHECK(c.v == 0.0);
    CHECK(c.u == 0.0);
}

TEST_CASE("non-finite coordinates are rejected")
{
    CHECK_THROWS_AS(PhasePoint(NAN, 0.0), DomainError);
    CHECK_THROWS_AS(FiberPoint(0.0, INFINITY), DomainError);
}

TEST_CASE("hamiltonian in both coordinate systems")
{
    CHECK(hamiltonian(FiberPoint{1.0, 1.0}) == 1.0);
    CHECK(hamiltonian(FiberPoint{1.0, 0.0}) == 0.0);
    CHECK_THAT(hamiltonian(to_fiber({0.0, 1.0})), WithinAbs(0.5, 1e-15));
    CHECK_THAT(hamiltonian(PhasePoint{0.0, 1.0}), WithinAbs(0.5, 1e-15));
}

TEST_CASE("closed-form flow")
{
    auto x = evolve_classical({1.0, 1.0}, std::log(2.0));
    CHECK_THAT(x.v, WithinRel(2.0, 1e-15));
    CHECK_THAT(x.u, WithinRel(0.5, 1e-15));
    auto y = evolve_classical({3.0, -2.0}, 0.0);
    CHECK(y.v == 3.0);
    CHECK(y.u == -2.0);
    auto z = evolve_classical({1.0, 1.0}, 1.0);
    CHECK_THAT(hamiltonian(z), WithinRel(1.0, 1e-15));
}

TEST_CASE("overflow is reported")
{
    CHECK_THROWS_AS(evolve_classical({1.0, 1.0}, 800.0), OverflowError);
    CHECK_THROWS_AS(evolve_classical({1e300, 1.0}, 300.0), OverflowError);
    CHECK_THROWS_AS(evolve_classical({1.0, 1.0}, NAN), OverflowError);
}

TEST_CASE("randomized: canonical map round trip, energy, group law, reversal")
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> box(-10.0, 10.0);
    std::uniform_real_distribution<double> time(-20.0, 20.0);
    for (int k = 0; k < 2000; ++k)
    {
        PhasePoint const x{box(rng), box(rng)};
        auto const back = to_phase(to_fiber(x));
        REQUIRE_THAT(back.q, WithinAbs(x.q, 1e-14));
        REQUIRE_THAT(back.p, WithinAbs(x.p, 1e-14));

        auto const f = to_fiber(x);
        double const t = time(rng);
        double const h = hamiltonian(f);
        REQUIRE(std::abs(hamiltonian(evolve_classical(f, t)) - h) <= 1e-12 * (1.0 + std::abs(h)));

        double const t1 = 0.5 * time(rng);
        double const t2 = 0.5 * time(rng);
        auto const once = evolve_classical(f, t1 + t2);
        auto const twice = evolve_classical(evolve_classical(f, t1), t2);
        REQUIRE(std::abs(once.v - twice.v) <= 1e-12 * std::max(1e-300, std::abs(once.v)));
        REQUIRE(std::abs(once.u - twice.u) <= 1e-12 * std::max(1e-300, std::abs(once.u)));

        auto const a = time_reverse(evolve_classical(f, t));
        auto const b = evolve_classical(time_reverse(f), -t);
        REQUIRE(a.v == b.v);
        REQUIRE(a.u == b.u);
    }
}

TEST_CASE("time reversal agrees between coordinate systems")
{
    PhasePoint const x{0.7, -1.3};
    auto const a = to_fiber(time_reverse(x));
    auto const b = time_reverse(to_fiber(x));
    CHECK_THAT(a.v, WithinAbs(b.v, 1e-15));
    CHECK_THAT(a.u, WithinAbs(b.u, 1e-15));
}

TEST_CASE("physical scales")
{
    auto const s = Scales::from_physical(2.0, 0.5, 1.0);
    CHECK_THAT(s.length, WithinRel(1.0, 1e-15));
    CHECK_THAT(s.momentum, WithinRel(1.0, 1e-15));
    CHECK_THAT(s.time, WithinRel(2.0, 1e-15));
    CHECK_THAT(s.energy, WithinRel(0.5, 1e-15));
    CHECK_THROWS_AS(Scales::from_physical(-1.0, 1.0, 1.0), DomainError);
}
