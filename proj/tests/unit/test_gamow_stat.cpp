#include <catch_amalgamated.hpp>

#include <cmath>

#include "iho/acceptance.hpp"
#include "iho/errors.hpp"
#include "iho/gamow_stat.hpp"

using namespace iho;
using namespace iho::stat;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double const rt = 1.0 / std::sqrt(2.0);

// e^{-(v^2 + u^2)}
TensorForm gaussian_form()
{
    return {AnalyticPacket::gauss_hermite(0.0, rt, 0), AnalyticPacket::gauss_hermite(0.0, rt, 0)};
}

double sup_diff(PhaseDensity2D const& a, PhaseDensity2D const& b)
{
    double worst = 0.0;
    for (std::size_t k = 0; k < a.values().size(); ++k)
        worst = std::max(worst, std::abs(a.values()[k] - b.values()[k]));
    return worst;
}

// Trapezoid over the bump support; spectrally accurate for bump integrands.
cplx bump_overlap(AnalyticPacket const& bump, AnalyticPacket const& other)
{
    auto const [lo, hi] = *bump.support();
    int const n = 4096;
    double const h = (hi - lo) / n;
    cplx s = 0.0;
    for (int k = 1; k < n; ++k)
    {
        double const x = lo + k * h;
        s += std::conj(bump(x)) * other(x);
    }
    return s * h;
}

}  // namespace

TEST_CASE("Liouvillian eigenvalues per family")
{
    CHECK(stat_eigenvalue({2, 5, Family::PolyPoly}) == cplx(0.0, -3.0));
    CHECK(stat_eigenvalue({2, 5, Family::DeltaDelta}) == cplx(0.0, 3.0));
    CHECK(stat_eigenvalue({2, 5, Family::DeltaV_PolyU}) == cplx(0.0, 8.0));
    CHECK(stat_eigenvalue({2, 5, Family::DeltaU_PolyV}) == cplx(0.0, -8.0));
    CHECK(stat_eigenvalue({0, 0, Family::DeltaU_PolyV}) == cplx(0.0, -1.0));
    CHECK_THROWS_AS(StatGamowIndex(-1, 0, Family::PolyPoly), ValidationError);
}

TEST_CASE("Liouvillian on closed forms")
{
    Grid1D const g = Grid1D::symmetric(3.0, 64);

    SECTION("H itself is stationary")
    {
        TensorForm const h{AnalyticPacket::monomial(1), AnalyticPacket::monomial(1)};
        auto const out = liouvillian_apply(PhaseDensity2D::from_tensor(h, g, g, false));
        for (auto x : out.values())
            CHECK(std::abs(x) < 1e-13);
    }
    SECTION("monomials are eigenfunctions with eigenvalue i(m - n)")
    {
        for (int n = 0; n < 4; ++n)
        {
            for (int m = 0; m < 4; ++m)
            {
                TensorForm const f{AnalyticPacket::monomial(n), AnalyticPacket::monomial(m)};
                auto const rho = PhaseDensity2D::from_tensor(f, g, g, false);
                auto const out = liouvillian_apply(rho);
                cplx const nu(0.0, m - n);
                double worst = 0.0;
                for (std::size_t k = 0; k < out.values().size(); ++k)
                    worst = std::max(worst, std::abs(out.values()[k] - nu * rho.values()[k]));
                INFO("n=" << n << " m=" << m);
                CHECK(worst < 1e-11);
            }
        }
    }
    SECTION("antisymmetric under the exchange of v and u for a symmetric density")
    {
        auto const out = liouvillian_apply(PhaseDensity2D::from_tensor(gaussian_form(), g, g, true));
        for (std::size_t i = 0; i < g.n; ++i)
            for (std::size_t j = 0; j < g.n; ++j)
                CHECK(std::abs(out.at(i, j) + out.at(j, i)) < 1e-14);
    }
    SECTION("grid mode agrees with the analytic route")
    {
        Grid1D const fine = Grid1D::symmetric(8.0, 256);
        auto const a = PhaseDensity2D::from_tensor(gaussian_form(), fine, fine, true);
        PhaseDensity2D const b(fine, fine, a.values(), true);
        CHECK(sup_diff(liouvillian_apply(a), liouvillian_apply(b)) < 1e-9);
    }
}

TEST_CASE("Liouville evolution")
{
    Grid1D const g = Grid1D::symmetric(6.0, 256);
    auto const rho = PhaseDensity2D::from_tensor(gaussian_form(), g, g, true);

    SECTION("closed form at t = 1")
    {
        auto const out = evolve_liouville(rho, 1.0);
        double worst = 0.0;
        for (std::size_t i = 0; i < g.n; ++i)
        {
            for (std::size_t j = 0; j < g.n; ++j)
            {
                double const v = g.x(i), u = g.x(j);
                double const want = std::exp(-(v * v * std::exp(-2.0) + u * u * std::exp(2.0)));
                worst = std::max(worst, std::abs(out.at(i, j) - want));
            }
        }
        CHECK(worst < 1e-14);
    }
    SECTION("generator consistency at small t")
    {
        Grid1D const fine = Grid1D::symmetric(8.0, 256);
        auto const r = PhaseDensity2D::from_tensor(gaussian_form(), fine, fine, true);
        auto const lr = liouvillian_apply(r);
        std::vector<double> ratio;
        for (double t : {1e-2, 1e-3, 1e-4})
        {
            auto const out = evolve_liouville(r, t);
            double worst = 0.0;
            for (std::size_t k = 0; k < r.values().size(); ++k)
            {
                cplx const first = r.values()[k] - cplx(0.0, t) * lr.values()[k];
                worst = std::max(worst, std::abs(out.values()[k] - first));
            }
            ratio.push_back(worst / (t * t));
        }
        for (double x : ratio)
            CHECK(x < 10.0);
        CHECK_THAT(ratio[1], WithinRel(ratio[0], 0.05));
    }
    SECTION("mass is conserved exactly in analytic mode")
    {
        for (double t : {-1.0, 0.5, 2.0})
            CHECK_THAT(std::abs(evolve_liouville(rho, t).mass()), WithinRel(std::abs(rho.mass()), 1e-14));
    }
    SECTION("grid mode keeps mass and positivity")
    {
        Grid1D const vg = Grid1D::symmetric(20.0, 768);
        Grid1D const ug = Grid1D::symmetric(6.0, 512);
        TensorForm const f{AnalyticPacket::gauss_hermite(0.3, 0.7, 0),
                           AnalyticPacket::gauss_hermite(-0.2, 0.8, 0)};
        auto const a = PhaseDensity2D::from_tensor(f, vg, ug, true);
        PhaseDensity2D const b(vg, ug, a.values(), true);
        for (double t : {0.25, 0.5, 1.0})
        {
            auto const out = evolve_liouville(b, t);
            INFO("t=" << t);
            CHECK_THAT(out.grid_mass().real(), WithinRel(b.grid_mass().real(), 1e-8));
            for (auto x : out.values())
                CHECK(x.real() >= 0.0);
        }
        CHECK_THROWS_AS(evolve_liouville(b, 3.0), DomainError);
    }
}

TEST_CASE("eigen identities and rates")
{
    TensorForm const probe{AnalyticPacket::normalized_gauss_hermite(0.3, 1.0, 0),
                           AnalyticPacket::normalized_gauss_hermite(0.25, 0.9, 0)};

    auto const r = stat_eigen_check({0, 0, Family::DeltaU_PolyV}, probe, 1e-10);
    CHECK(r.nu == cplx(0.0, -1.0));
    CHECK(r.residual < 1e-10);
    CHECK(r.passed);

    auto const s = stat_eigen_check({2, 2, Family::PolyPoly}, probe, 1e-10);
    CHECK(s.nu == 0.0);
    CHECK(std::abs(s.fitted_rate) < 1e-8);

    for (auto fam : {Family::DeltaV_PolyU, Family::DeltaU_PolyV})
    {
        for (int m = 0; m < 3; ++m)
        {
            for (int n = 0; n < 3; ++n)
            {
                auto const e = stat_eigen_check({m, n, fam}, probe, 1e-8);
                INFO(to_string(fam) << " m=" << m << " n=" << n);
                CHECK(e.residual < 1e-8);
                CHECK(std::abs(e.fitted_rate - e.expected_rate) < 1e-8 * std::abs(e.expected_rate));
                CHECK(e.expected_rate == (fam == Family::DeltaV_PolyU ? 1 : -1) * (m + n + 1));
            }
        }
    }
}

TEST_CASE("statistical biorthonormality")
{
    auto const r = stat_biorthonormality(7, 7);
    CHECK(r.max_deviation_poly_delta < 1e-12);
    CHECK(r.max_deviation_mixed < 1e-12);
}

TEST_CASE("double series reproduces the pairing for every corpus pair")
{
    auto const c = acceptance::default_corpus();
    for (auto const& bump : c.minus)
    {
        for (auto const& gh : c.plus)
        {
            TensorForm const plus{gh, bump};
            TensorForm const minus{bump, gh};
            REQUIRE(classify_space(plus) == StatSpace::PsiPlus);
            REQUIRE(classify_space(minus) == StatSpace::PsiMinus);
            auto const a = stat_coeffs(plus, 24, 24);
            cplx const series = stat_series_pairing(minus, a);
            // int conj(B(v)) GH(v) dv * int conj(GH(u)) B(u) du
            cplx const direct = bump_overlap(bump, gh) * std::conj(bump_overlap(bump, gh));
            INFO("bump c=" << bump.center() << " gh c=" << gh.center() << " d=" << gh.degree());
            CHECK(std::abs(series - direct) < 1e-6);
        }
    }
}

TEST_CASE("classical time reversal")
{
    Grid1D const g = Grid1D::symmetric(4.0, 64);

    SECTION("symmetric density is fixed")
    {
        auto const rho = PhaseDensity2D::from_tensor(gaussian_form(), g, g, true);
        auto const out = time_reverse_stat(rho);
        auto const fresh = PhaseDensity2D::from_tensor(gaussian_form(), out.v_grid(), out.u_grid(), true);
        CHECK(sup_diff(out, fresh) < 1e-15);
    }
    SECTION("Psi_+ goes to Psi_-")
    {
        TensorForm const plus{AnalyticPacket::gauss_hermite(0.2, 1.0, 0),
                              AnalyticPacket::bump(0.5, 0.4)};
        auto const rev = time_reverse_stat(plus);
        CHECK(classify_space(plus) == StatSpace::PsiPlus);
        CHECK(classify_space(rev) == StatSpace::PsiMinus);
        CHECK(rev.v_factor.family() == PacketFamily::Bump);
        CHECK(rev.v_factor.center() == -0.5);
        CHECK(rev.u_factor.center() == -0.2);
    }
    SECTION("involution")
    {
        TensorForm const f{AnalyticPacket::gauss_hermite(0.2, 1.0, 1),
                           AnalyticPacket::bump(0.5, 0.4)};
        CHECK(time_reverse_stat(time_reverse_stat(f)) == f);
        auto const rho = PhaseDensity2D::from_tensor(f, g, Grid1D::symmetric(2.0, 32), false);
        auto const twice = time_reverse_stat(time_reverse_stat(rho));
        CHECK(twice.v_grid() == rho.v_grid());
        CHECK(twice.u_grid() == rho.u_grid());
        CHECK(twice.values() == rho.values());
    }
    SECTION("conjugates the evolution")
    {
        TensorForm const f{AnalyticPacket::gauss_hermite(0.2, 0.8, 0),
                           AnalyticPacket::gauss_hermite(-0.4, 0.6, 0)};
        auto const rho = PhaseDensity2D::from_tensor(f, g, g, true);
        for (double t : {0.3, 1.0})
        {
            auto const lhs = evolve_liouville(time_reverse_stat(rho), t);
            auto const rhs = time_reverse_stat(evolve_liouville(rho, -t));
            INFO("t=" << t);
            CHECK(*lhs.analytic() == *rhs.analytic());
            CHECK(lhs.v_grid() == rhs.v_grid());
            CHECK(sup_diff(lhs, rhs) == 0.0);
        }
    }
}

TEST_CASE("factor integrals")
{
    CHECK_THAT(factor_integral(AnalyticPacket::gauss_hermite(0.3, 1.0, 0)).real(),
               WithinRel(std::sqrt(2.0 * pi), 1e-14));
    CHECK(std::abs(factor_integral(AnalyticPacket::gauss_hermite(0.0, 1.0, 1))) < 1e-15);
    CHECK_THROWS_AS(factor_integral(AnalyticPacket::monomial(2)), DomainError);
    CHECK_THAT(factor_integral(AnalyticPacket::bump(0.0, 1.0)).real(), WithinRel(0.443993816168079, 1e-10));
}
