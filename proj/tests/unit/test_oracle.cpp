#include <catch_amalgamated.hpp>

#include <cmath>

#include "iho/acceptance.hpp"
#include "iho/errors.hpp"
#include "iho/gamow_q.hpp"
#include "iho/gamow_stat.hpp"
#include "iho/oracle.hpp"
#include "iho/reps.hpp"

using namespace iho;
using namespace iho::oracle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

GridFunction1D gaussian_q()
{
    return reps::sample(AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0), Representation::Q,
                        propagator_grid());
}

stat::PhaseDensity2D mc_density(std::size_t nv, std::size_t nu)
{
    stat::TensorForm const f{AnalyticPacket::normalized_gauss_hermite(0.2, 0.7, 0),
                             AnalyticPacket::normalized_gauss_hermite(-0.1, 0.7, 0)};
    return stat::PhaseDensity2D::from_tensor(f, Grid1D::symmetric(8.0, nv),
                                             Grid1D::symmetric(4.0, nu), true);
}

}  // namespace

TEST_CASE("reports")
{
    auto const r = make_report("x", 1e-7, 1e-6, 0.5);
    CHECK(r.passed);
    CHECK_FALSE(make_report("y", 2e-6, 1e-6).passed);
    CHECK(make_report("z", 1e-6, 1e-6).passed);
    CHECK(r.runtime_s == 0.5);
}

TEST_CASE("exact propagator")
{
    auto const psi = gaussian_q();

    SECTION("identity at t = 0")
    {
        CHECK(sup_distance(propagator_evolve(psi, 0.0), psi) == 0.0);
    }
    SECTION("unitary")
    {
        CHECK_THAT(propagator_evolve(psi, 0.5).norm(), WithinAbs(1.0, 1e-6));
        CHECK_THAT(propagator_evolve(psi, -0.5).norm(), WithinAbs(1.0, 1e-6));
    }
    SECTION("composition and inverse")
    {
        auto const a = propagator_evolve(propagator_evolve(psi, 0.3), 0.4);
        auto const b = propagator_evolve(psi, 0.7);
        CHECK(sup_distance(a, b) < 1e-8);
        auto const back = propagator_evolve(propagator_evolve(psi, 0.5), -0.5);
        CHECK(sup_distance(back, psi) < 1e-8);
    }
    SECTION("agrees with the scaling law in V")
    {
        double const t = 0.7;
        reps::TransformOptions opts;
        opts.target = Grid1D::symmetric(24.0, 4096);
        opts.path = fourier::Path::Direct;
        auto const exact = reps::transform(propagator_evolve(psi, t), Representation::V, opts);
        auto const scaled = gamow::evolve_scaling(reps::transform(psi, Representation::V, opts), t);
        CHECK(sup_distance(exact, scaled) < 1e-5);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(propagator_evolve(psi, 1e-8), SingularTimeError);
        CHECK_THROWS_AS(propagator_evolve(psi, 4.0), MassLeakError);
        auto const v = reps::sample(AnalyticPacket::normalized_gauss_hermite(0, 1, 0),
                                    Representation::V, propagator_grid());
        CHECK_THROWS_AS(propagator_evolve(v, 0.5), RepError);
    }
}

TEST_CASE("split-step integration")
{
    auto const psi = gaussian_q();

    SECTION("t = 0 is the identity")
    {
        CHECK(sup_distance(splitstep_evolve(psi, 0.0, 1e-3), psi) == 0.0);
    }
    SECTION("matches the exact propagator")
    {
        auto const exact = propagator_evolve(psi, 0.5);
        CHECK(sup_distance(splitstep_evolve(psi, 0.5, 1e-3), exact) < 1e-5);
    }
    SECTION("second order in dt")
    {
        auto const a = splitstep_evolve(psi, 0.5, 1e-3);
        auto const b = splitstep_evolve(psi, 0.5, 5e-4);
        auto const c = splitstep_evolve(psi, 0.5, 2.5e-4);
        double const ratio = sup_distance(a, b) / sup_distance(b, c);
        CHECK(ratio > 3.5);
        CHECK(ratio < 4.5);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(splitstep_evolve(psi, 0.5, 2e-3), ValidationError);
        CHECK_THROWS_AS(splitstep_evolve(psi, 0.5, 0.0), ValidationError);
    }
}

TEST_CASE("slow pairing")
{
    Grid1D const g = reps::default_grid();
    auto const even = reps::sample(AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0),
                                   Representation::V, g);
    auto const odd = reps::sample(AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 1),
                                  Representation::V, g);
    CHECK_THAT(slow_pairing(even, even).value.real(), WithinAbs(1.0, 1e-10));
    CHECK_THAT(slow_pairing(even, even, Rule::Simpson).value.real(), WithinAbs(1.0, 1e-10));
    CHECK(std::abs(slow_pairing(even, odd).value) < 1e-12);

    auto const c = acceptance::default_corpus();
    // on a symmetric grid around the bump the pair is fully resolved
    Grid1D const fine = Grid1D::symmetric(20.0, 16384);
    auto const m = reps::sample(c.generic_minus, Representation::V, fine);
    auto const p = reps::sample(c.generic_plus, Representation::V, fine);
    auto const pairing = slow_pairing(m, p);
    std::vector<double> const t0{0.0};
    auto const series = gamow::survival_amplitude(c.generic_minus, c.generic_plus, 32, t0);
    CHECK(std::abs(pairing.value - series.amplitudes[0]) < 1e-6);
    CHECK(pairing.error_estimate < 1e-6);

    auto const other = reps::sample(c.generic_plus, Representation::V, Grid1D::symmetric(20.0, 2048));
    CHECK_THROWS_AS(slow_pairing(m, other), GridMismatchError);
}

TEST_CASE("slow survival against its closed form at t = 0")
{
    auto const c = acceptance::default_corpus();
    cplx const a = slow_survival(c.generic_minus, c.generic_plus, 0.0);
    cplx const b = slow_survival(c.generic_minus, c.generic_plus, 0.0, 8192);
    CHECK(std::abs(a - b) < 1e-14);
    CHECK_THROWS_AS(slow_survival(c.generic_plus, c.generic_plus, 0.0), ValidationError);
}

TEST_CASE("Cauchy-integral Taylor coefficients")
{
    auto const g = AnalyticPacket::gauss_hermite(0.3, 0.8, 2, 1.5);
    auto const exact = g.taylor(0.1, 12);
    auto const ref = cauchy_taylor(g, 0.1, 12, 1.0);
    for (int n = 0; n <= 12; ++n)
    {
        INFO("n=" << n);
        CHECK(std::abs(exact[n] - ref[n]) < 1e-12);
    }
}

TEST_CASE("tanh-sinh integrals")
{
    auto const b = AnalyticPacket::bump(0.0, 1.0);
    CHECK_THAT(tanh_sinh_integral(b, -1.0, 1.0).real(), WithinRel(0.443993816168079, 1e-12));
    auto const g = AnalyticPacket::gauss_hermite(0.0, 1.0, 0);
    CHECK_THAT(tanh_sinh_integral(g, -30.0, 30.0).real(), WithinRel(std::sqrt(2.0 * pi), 1e-12));
}

TEST_CASE("slow transform points and kernel consistency")
{
    // the unit Gaussian in Q has V and U images of closed form; compare a
    // brute-force point against the grid transform instead
    auto const p = AnalyticPacket::normalized_gauss_hermite(0.2, 1.0, 1);
    Grid1D const g = reps::default_grid();
    auto const fq = reps::sample(p, Representation::Q, g);
    auto const fv = reps::transform(fq, Representation::V);
    auto const fu = reps::transform(fq, Representation::U);
    for (std::size_t j : {1900u, 2048u, 2200u})
    {
        double const y = g.x(j);
        INFO("y=" << y);
        CHECK(std::abs(slow_transform_point(p, 'V', y, 14.0) - fv[j]) < 1e-9);
        CHECK(std::abs(slow_transform_point(p, 'U', y, 14.0) - fu[j]) < 1e-9);
    }
    CHECK_THROWS_AS(slow_transform_point(p, 'Q', 0.0, 14.0), ValidationError);

    for (auto [v, u] : {std::pair{0.0, 0.0}, {0.5, -0.3}, {1.2, 0.8}})
    {
        INFO("v=" << v << " u=" << u);
        CHECK(std::abs(kernel_consistency_integral(v, u) - reps::kernel_vu(v, u)) < 1e-8);
    }
}

TEST_CASE("Monte-Carlo transport")
{
    std::uint64_t const n = 100000;

    SECTION("t = 0 resamples the density")
    {
        auto const rho = mc_density(128, 128);
        auto const hist = mc_transport(rho, 0.0, n, 42);
        auto const chi = chi_square(hist, rho, n);
        CHECK(chi.consistent);
        CHECK(std::abs(chi.z) <= 3.0);
        // the histogram keeps the cell-sum mass of the input
        double cells = 0.0;
        for (auto x : rho.values())
            cells += x.real();
        cells *= rho.v_grid().dx * rho.u_grid().dx;
        double hist_cells = 0.0;
        for (auto x : hist.values())
            hist_cells += x.real();
        hist_cells *= rho.v_grid().dx * rho.u_grid().dx;
        CHECK_THAT(hist_cells, WithinRel(cells, 1e-12));
    }
    SECTION("transport at t = 1 matches the Liouville evolution")
    {
        auto const rho = mc_density(128, 128);
        auto const hist = mc_transport(rho, 1.0, n, 42);
        auto const chi = chi_square(hist, stat::evolve_liouville(rho, 1.0), n);
        CHECK(chi.consistent);
    }
    SECTION("deterministic in the seed")
    {
        auto const rho = mc_density(64, 64);
        auto const a = mc_transport(rho, 0.5, n, 7);
        auto const b = mc_transport(rho, 0.5, n, 7);
        auto const c = mc_transport(rho, 0.5, n, 8);
        CHECK(a.values() == b.values());
        CHECK(a.values() != c.values());
    }
    SECTION("four times the samples halves the noise")
    {
        auto const rho = mc_density(64, 64);
        double const r1 = rms_deviation(mc_transport(rho, 0.0, n, 42), rho);
        double const r4 = rms_deviation(mc_transport(rho, 0.0, 4 * n, 42), rho);
        double const ratio = r1 / r4;
        CHECK(ratio > 1.6);
        CHECK(ratio < 2.5);
    }
    SECTION("errors")
    {
        auto const rho = mc_density(64, 64);
        CHECK_THROWS_AS(mc_transport(rho, 0.0, 100, 42), ValidationError);
        stat::PhaseDensity2D const signed_rho(rho.v_grid(), rho.u_grid(), rho.values(), false);
        CHECK_THROWS_AS(mc_transport(signed_rho, 0.0, n, 42), ValidationError);
    }
}
