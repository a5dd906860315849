#include <catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "iho/acceptance.hpp"
#include "iho/errors.hpp"
#include "iho/gamow_q.hpp"
#include "iho/oracle.hpp"
#include "iho/phase_core.hpp"
#include "iho/reps.hpp"

using namespace iho;
using namespace iho::gamow;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double mean_position(GridFunction1D const& f)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < f.size(); ++j)
    {
        double const w = std::norm(f[j]) * trapezoid_weight(f.grid(), j);
        num += f.grid().x(j) * w;
        den += w;
    }
    return num / den;
}

std::vector<double> time_range(double lo, double hi, double step)
{
    std::vector<double> t;
    for (int k = 0; lo + k * step <= hi + 1e-12; ++k)
        t.push_back(lo + k * step);
    return t;
}

}  // namespace

TEST_CASE("Gamow eigenvalues")
{
    CHECK(gamow_eigenvalue({0, Kind::Decaying}) == cplx(0.0, -0.5));
    CHECK(gamow_eigenvalue({3, Kind::Growing}) == cplx(0.0, 3.5));
    for (int n = 0; n < 20; ++n)
        CHECK(gamow_eigenvalue({n, Kind::Decaying}) + gamow_eigenvalue({n, Kind::Growing}) == 0.0);
    CHECK_THROWS_AS(GamowIndex(-1, Kind::Decaying), ValidationError);
}

TEST_CASE("decaying coefficients are Taylor coefficients at zero")
{
    auto const g = AnalyticPacket::gauss_hermite(0.0, 1.0 / std::sqrt(2.0), 0);
    auto const c = decaying_coeffs(g, 4);
    std::vector<double> const want{1.0, 0.0, -1.0, 0.0, 0.5};
    REQUIRE(c.values.size() == 5);
    for (std::size_t n = 0; n < want.size(); ++n)
        CHECK(std::abs(c.values[n] - want[n]) < 1e-15);
    CHECK_FALSE(c.finite_radius);

    // v e^{-v^2}: width 1/sqrt2 and degree 1 carry a factor sqrt2
    auto const h = AnalyticPacket::gauss_hermite(0.0, 1.0 / std::sqrt(2.0), 1, 1.0 / std::sqrt(2.0));
    auto const d = decaying_coeffs(h, 2);
    CHECK(std::abs(d.values[0]) < 1e-15);
    CHECK(std::abs(d.values[1] - 1.0) < 1e-14);
    CHECK(std::abs(d.values[2]) < 1e-15);
}

TEST_CASE("bump coefficients agree with the Cauchy-integral oracle")
{
    auto const b = AnalyticPacket::bump(0.0, 1.0);
    auto const c = decaying_coeffs(b, 6);
    CHECK(c.finite_radius);
    auto const ref = oracle::cauchy_taylor(b, 0.0, 6, 0.5);
    for (int n = 0; n <= 6; ++n)
    {
        INFO("n=" << n);
        if (std::abs(ref[n]) < 1e-14)
            CHECK(std::abs(c.values[n]) < 1e-12);
        else
            CHECK(std::abs(c.values[n] - ref[n]) < 1e-7 * std::abs(ref[n]));
    }
}

TEST_CASE("growing coefficients")
{
    auto const g = AnalyticPacket::gauss_hermite(0.0, 1.0 / std::sqrt(2.0), 0);
    auto const c = growing_coeffs(g, 6);
    CHECK(std::abs(c.values[1]) < 1e-15);
    CHECK(std::abs(c.values[3]) < 1e-15);
    double const s = std::sqrt(2.0 * pi);
    CHECK(std::abs(c.values[0] - s) < 1e-14);
    // sqrt(2 pi) i^2 * (-1) * 2!
    CHECK(std::abs(c.values[2] - cplx(2.0 * s, 0.0)) < 1e-13);
}

TEST_CASE("scaling evolution")
{
    Grid1D const g = reps::default_grid();
    auto const p = AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0);
    auto const f = reps::sample(p, Representation::V, g);

    SECTION("closed form at t = ln 2")
    {
        double const t = std::log(2.0);
        auto const out = evolve_scaling(f, t);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
        {
            double const v = g.x(j);
            double const want = std::exp(-t / 2) * std::pow(pi, -0.25) * std::exp(-v * v / 8);
            worst = std::max(worst, std::abs(out[j] - want));
        }
        CHECK(worst < 1e-10);
    }
    SECTION("identity at t = 0")
    {
        CHECK(sup_distance(evolve_scaling(f, 0.0), f) == 0.0);
    }
    SECTION("norm preserved")
    {
        for (double t : {-1.0, -0.3, 0.4, 1.0})
        {
            INFO("t=" << t);
            CHECK_THAT(evolve_scaling(f, t).norm(), WithinAbs(1.0, 1e-8));
        }
        auto const wide = reps::sample(p, Representation::V, Grid1D::symmetric(100.0, 16384));
        CHECK_THAT(evolve_scaling(wide, 2.0).norm(), WithinAbs(1.0, 1e-8));
    }
    SECTION("U representation runs the other way")
    {
        auto const fu = reps::sample(p, Representation::U, g);
        auto const out = evolve_scaling(fu, 0.5);
        auto const want = reps::sample(p.dilated(std::exp(-0.5)).scaled(std::exp(0.25)),
                                       Representation::U, g);
        CHECK(sup_distance(out, want) < 1e-10);
    }
    SECTION("errors")
    {
        CHECK_THROWS_AS(evolve_scaling(reps::sample(p, Representation::Q, g), 0.5), RepError);
        CHECK_THROWS_AS(evolve_scaling(f, 3.5), DomainError);
        CHECK_THROWS_AS(evolve_scaling(f, -6.0), AliasError);
    }
}

TEST_CASE("scaling evolution against the exact propagator")
{
    Grid1D const qg = oracle::propagator_grid();
    auto const p = AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0);
    auto const psi_q = reps::sample(p, Representation::Q, qg);
    double const t = 0.7;
    auto const exact = oracle::propagator_evolve(psi_q, t);
    reps::TransformOptions opts;
    opts.target = Grid1D::symmetric(24.0, 4096);
    opts.path = fourier::Path::Direct;
    auto const exact_v = reps::transform(exact, Representation::V, opts);
    auto const scaled = evolve_scaling(reps::transform(psi_q, Representation::V, opts), t);
    CHECK(sup_distance(scaled, exact_v) < 1e-5);
}

TEST_CASE("Ehrenfest: the packet center follows the classical trajectory")
{
    Grid1D const g = Grid1D::symmetric(100.0, 16384);
    for (double v0 : {-0.7, 0.3, 1.2})
    {
        auto const f = reps::sample(AnalyticPacket::normalized_gauss_hermite(v0, 0.8, 0),
                                    Representation::V, g);
        for (double t : {0.25, 0.5, 1.0, 2.0})
        {
            double const classical = phase::evolve_classical({v0, 0.0}, t).v;
            INFO("v0=" << v0 << " t=" << t);
            CHECK_THAT(mean_position(evolve_scaling(f, t)), WithinRel(classical, 1e-6));
        }
    }
}

TEST_CASE("semigroup law on the decaying coefficients")
{
    auto const p = AnalyticPacket::normalized_gauss_hermite(0.25, 1.0, 1);
    int const order = 20;
    auto const c0 = decaying_coeffs(p, order);
    for (double t : {0.3, 1.0, 2.5})
    {
        // e^{-iHt} phi (v) = e^{-t/2} phi(v e^{-t})
        auto const evolved = p.dilated(std::exp(t)).scaled(std::exp(-t / 2));
        auto const ct = decaying_coeffs(evolved, order);
        for (int n = 0; n <= order; ++n)
        {
            cplx const want = std::exp(-(n + 0.5) * t) * c0.values[n];
            INFO("t=" << t << " n=" << n);
            CHECK(std::abs(ct.values[n] - want) <= 1e-8 * std::max(1.0, std::abs(want)));
        }
    }
}

TEST_CASE("survival amplitude")
{
    auto const corpus = acceptance::default_corpus();

    SECTION("series agrees with direct quadrature on every corpus pair")
    {
        std::vector<double> const times{0.25, 0.5, 1.0, 2.0};
        for (auto const& minus : corpus.minus)
        {
            for (auto const& plus : corpus.plus)
            {
                auto const s = survival_amplitude(minus, plus, 32, times);
                for (std::size_t k = 0; k < times.size(); ++k)
                {
                    cplx const slow = oracle::slow_survival(minus, plus, times[k]);
                    INFO("minus c=" << minus.center() << " plus c=" << plus.center()
                                    << " d=" << plus.degree() << " t=" << times[k]);
                    CHECK(std::abs(s.amplitudes[k] - slow) <= 1e-6 * std::max(std::abs(slow), 1e-12));
                }
            }
        }
    }
    SECTION("doubling the order stays within the tail bound")
    {
        auto const times = time_range(0.1, 4.0, 0.3);
        auto const a = survival_amplitude(corpus.generic_minus, corpus.generic_plus, 32, times);
        auto const b = survival_amplitude(corpus.generic_minus, corpus.generic_plus, 64, times);
        for (std::size_t k = 0; k < times.size(); ++k)
        {
            INFO("t=" << times[k]);
            CHECK(std::abs(a.amplitudes[k] - b.amplitudes[k]) <= a.tail_bounds[k] + 1e-16);
        }
    }
    SECTION("late-time slopes")
    {
        auto const times = time_range(4.0, 8.0, 0.25);
        auto const generic = survival_amplitude(corpus.generic_minus, corpus.generic_plus, 32, times);
        CHECK(std::abs(fit_log_slope(generic, 4.0, 8.0) + 0.5) < 1e-3);
        auto const odd = survival_amplitude(corpus.odd_minus, corpus.odd_plus, 32, times);
        CHECK(std::abs(fit_log_slope(odd, 4.0, 8.0) + 1.5) < 1e-3);
    }
    SECTION("negative times are computed and flagged")
    {
        // the terms grow like e^{(n+1/2)|t|}, so more of them are needed
        std::vector<double> const times{-0.5, 0.0, 0.5};
        auto const s = survival_amplitude(corpus.generic_minus, corpus.generic_plus, 64, times);
        CHECK_FALSE(s.physical[0]);
        CHECK(s.physical[1]);
        CHECK(s.physical[2]);
        CHECK(std::abs(s.amplitudes[0] - oracle::slow_survival(corpus.generic_minus,
                                                                corpus.generic_plus, -0.5))
              < 1e-6);
    }
    SECTION("t = 0 reproduces the plain overlap")
    {
        std::vector<double> const times{0.0};
        auto const s = survival_amplitude(corpus.generic_minus, corpus.generic_plus, 32, times);
        cplx const slow = oracle::slow_survival(corpus.generic_minus, corpus.generic_plus, 0.0);
        CHECK(std::abs(s.amplitudes[0] - slow) < 1e-8);
    }
    SECTION("a truncation too short for the tolerance is refused")
    {
        std::vector<double> const times{0.0};
        CHECK_THROWS_AS(survival_amplitude(corpus.generic_minus, corpus.generic_plus, 2, times),
                        ConvergenceError);
    }
}

TEST_CASE("q-representation of the Gamow vectors")
{
    for (double q : {-3.0, 0.0, 0.7, 5.0, 40.0})
        CHECK_THAT(std::abs(gamow_q_representation({0, Kind::Decaying}, q)), WithinAbs(1.0, 1e-14));
    CHECK(std::abs(gamow_q_representation({1, Kind::Decaying}, 0.0)) == 0.0);
    CHECK(std::abs(gamow_q_representation({1, Kind::Growing}, 0.0)) == 0.0);

    for (int n : {1, 2, 3})
    {
        // least squares of log |<q|n>|^2 against log q on [10, 100]
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int const m = 91;
        for (int k = 0; k < m; ++k)
        {
            double const q = 10.0 + k;
            double const x = std::log(q);
            double const y = std::log(std::norm(gamow_q_representation({n, Kind::Decaying}, q)));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double const slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        INFO("n=" << n);
        CHECK(std::abs(slope - 2.0 * n) < 0.05);
    }
}

TEST_CASE("generalized eigenvalue identities")
{
    auto const gauss = AnalyticPacket::normalized_gauss_hermite(0.2, 0.9, 0);
    CHECK(verify_generalized_eigen({0, Kind::Decaying}, gauss, 1e-10).passed);
    CHECK(verify_generalized_eigen({2, Kind::Growing}, gauss, 1e-10).passed);
    auto const bump = AnalyticPacket::normalized_bump(0.1, 0.9);
    auto const r = verify_generalized_eigen({1, Kind::Decaying}, bump, 1e-8);
    CHECK(r.residual < 1e-8);
    CHECK(r.passed);
    for (int n = 0; n < 6; ++n)
    {
        INFO("n=" << n);
        CHECK(verify_generalized_eigen({n, Kind::Decaying}, gauss, 1e-10).passed);
        CHECK(verify_generalized_eigen({n, Kind::Growing}, gauss, 1e-10).passed);
    }
}

TEST_CASE("time reversal")
{
    Grid1D const g = reps::default_grid();

    SECTION("real even Gaussian keeps its shape")
    {
        auto const p = AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0);
        auto const out = time_reverse(reps::sample(p, Representation::V, g));
        CHECK(out.rep() == Representation::U);
        CHECK(out.grid() == reflected(g));
        cplx const phase = std::polar(1.0, pi / 4);
        double worst = 0.0;
        for (std::size_t j = 0; j < g.n; ++j)
            worst = std::max(worst, std::abs(out[j] - phase * p(out.grid().x(j))));
        CHECK(worst < 1e-15);
    }
    SECTION("support is reflected")
    {
        auto const b = AnalyticPacket::bump(1.5, 0.5);
        auto const out = time_reverse(reps::sample(b, Representation::V, g));
        for (std::size_t j = 0; j < g.n; ++j)
        {
            double const u = out.grid().x(j);
            if (u < -2.0 || u > -1.0)
                CHECK(out[j] == 0.0);
        }
        auto const placed = time_reverse(PlacedPacket{b, Representation::V});
        CHECK(placed.rep == Representation::U);
        CHECK(classify_space(PlacedPacket{b, Representation::V}) == TestSpace::PhiMinus);
        CHECK(classify_space(placed) == TestSpace::PhiPlus);
        auto const gh = AnalyticPacket::normalized_gauss_hermite(0, 1, 0);
        CHECK(classify_space(PlacedPacket{gh, Representation::V}) == TestSpace::PhiPlus);
        CHECK(classify_space(time_reverse(PlacedPacket{gh, Representation::V})) == TestSpace::PhiMinus);
    }
    SECTION("applying it four times is the identity")
    {
        auto const f = reps::sample(AnalyticPacket::normalized_gauss_hermite(0.3, 1.0, 1),
                                    Representation::V, g);
        auto const twice = time_reverse(time_reverse(f));
        CHECK(twice.rep() == Representation::V);
        auto const four = time_reverse(time_reverse(twice));
        CHECK(four.grid() == g);
        CHECK(sup_distance(four, f) < 1e-15);
    }
    SECTION("agrees with conjugation in the q-representation")
    {
        for (auto const& p : acceptance::default_corpus().plus)
        {
            auto const fq = reps::sample(p, Representation::Q, g);
            auto const via_v = time_reverse(reps::transform(fq, Representation::V));
            reps::TransformOptions opts;
            opts.target = reflected(g);
            auto const via_q = reps::transform(fq.conjugated(), Representation::U, opts);
            INFO("c=" << p.center() << " d=" << p.degree());
            CHECK(sup_distance(via_v, via_q) < 1e-7);
        }
    }
}

TEST_CASE("quantum biorthonormality")
{
    auto const r = quantum_biorthonormality(12);
    CHECK(r.max_deviation < 1e-9);
    CHECK(r.max_deviation_dual < 1e-9);
    REQUIRE(r.deviation.size() == 13);
}
