#include "iho/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <functional>

#include "iho/errors.hpp"
#include "iho/gamow_q.hpp"
#include "iho/gamow_stat.hpp"
#include "iho/io.hpp"
#include "iho/phase_core.hpp"
#include "iho/reps.hpp"
#include "iho/wigner.hpp"

namespace iho::acceptance {

namespace {

using Clock = std::chrono::steady_clock;
using oracle::make_report;
using oracle::OracleReport;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Runs body, stamps the runtime, and turns an exception into a failed
// report so that one broken check does not hide the others.
CriterionResult timed(int id, std::string title, std::function<void(CriterionResult&)> const& body)
{
    CriterionResult r{id, std::move(title), {}, {}, 0.0};
    auto const t0 = Clock::now();
    try
    {
        body(r);
    }
    catch (std::exception const& e)
    {
        r.reports.push_back(
            {std::string("exception: ") + e.what(), INFINITY, 0.0, false, 0.0});
    }
    r.runtime_s = seconds_since(t0);
    for (auto& rep : r.reports)
        rep.runtime_s = r.runtime_s;
    return r;
}

std::string label(std::string base, double t)
{
    return base + "_t=" + io::fmt(t);
}

std::string describe(AnalyticPacket const& p)
{
    return std::string(to_string(p.family())) + "(" + io::fmt(p.center()) + ","
           + io::fmt(p.width()) + "," + std::to_string(p.degree()) + ")";
}

}  // namespace

bool CriterionResult::passed() const
{
    if (reports.empty())
        return false;
    for (auto const& r : reports)
        if (!r.passed)
            return false;
    return true;
}

Corpus default_corpus()
{
    using P = AnalyticPacket;
    return {
        {P::normalized_bump(0.3, 0.9), P::normalized_bump(-0.25, 0.8),
         P::normalized_bump(0.1, 1.1)},
        {P::normalized_gauss_hermite(0.0, 1.0, 0), P::normalized_gauss_hermite(0.25, 1.0, 0),
         P::normalized_gauss_hermite(-0.2, 1.2, 1), P::normalized_gauss_hermite(0.0, 1.1, 2),
         P::normalized_gauss_hermite(0.0, 1.0, 1)},
        P::normalized_bump(0.3, 0.9),
        P::normalized_gauss_hermite(0.25, 1.0, 0),
        P::normalized_bump(0.3, 0.9),
        P::normalized_gauss_hermite(0.0, 1.0, 1),
        P::normalized_bump(0.0, 1.0),
    };
}

CriterionResult decay_law(Corpus const& c, Settings const& s)
{
    return timed(1, "exponential decay law", [&](CriterionResult& r) {
        std::vector<double> times;
        for (int k = 0; k <= 16; ++k)
            times.push_back(4.0 + 0.25 * k);
        auto const generic
            = gamow::survival_amplitude(c.generic_minus, c.generic_plus, s.series_order, times);
        double const sg = gamow::fit_log_slope(generic, 4.0, 8.0);
        r.reports.push_back(make_report("decay_slope_generic", std::abs(sg + 0.5), 1e-3));
        r.files["survival_generic.csv"] = io::survival_csv(generic);

        auto const odd = gamow::survival_amplitude(c.odd_minus, c.odd_plus, s.series_order, times);
        double const so = gamow::fit_log_slope(odd, 4.0, 8.0);
        r.reports.push_back(make_report("decay_slope_odd", std::abs(so + 1.5), 1e-3));
        r.files["survival_odd.csv"] = io::survival_csv(odd);
    });
}

CriterionResult series_quadrature(Corpus const& c, Settings const& s)
{
    return timed(2, "series-quadrature equivalence", [&](CriterionResult& r) {
        std::vector<double> const times{0.0, 0.25, 0.5, 1.0, 2.0};
        std::string table = "minus,plus,t,re_series,im_series,re_quad,im_quad,relative\n";
        for (std::size_t a = 0; a < c.minus.size(); ++a)
            for (std::size_t b = 0; b < c.plus.size(); ++b)
            {
                auto const& minus = c.minus[a];
                auto const& plus = c.plus[b];
                auto const series = gamow::survival_amplitude(minus, plus, s.series_order, times);
                double worst = 0.0;
                for (std::size_t k = 0; k < times.size(); ++k)
                {
                    double const t = times[k];
                    cplx const slow = oracle::slow_survival(minus, plus, t);
                    cplx const fast = series.amplitudes[k];
                    double const rel = std::abs(fast - slow) / std::abs(slow);
                    worst = std::max(worst, rel);
                    table += std::to_string(a) + "," + std::to_string(b) + "," + io::fmt(t) + ","
                             + io::fmt(fast.real()) + "," + io::fmt(fast.imag()) + ","
                             + io::fmt(slow.real()) + "," + io::fmt(slow.imag()) + ","
                             + io::fmt(rel) + "\n";
                }
                r.reports.push_back(make_report(
                    "series_vs_quadrature_" + describe(minus) + "_" + describe(plus), worst, 1e-6));
            }
        r.files["series_vs_quadrature.csv"] = table;
    });
}

CriterionResult scaling_evolution(Corpus const&, Settings const&)
{
    return timed(3, "scaling-evolution correctness", [&](CriterionResult& r) {
        Grid1D const qg = oracle::propagator_grid();
        Grid1D const vg = Grid1D::symmetric(40.0, 8192);
        auto const psi_q
            = reps::sample(AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0),
                           Representation::Q, qg);
        reps::TransformOptions to_v;
        to_v.target = vg;
        auto const psi_v = reps::transform(psi_q, Representation::V, to_v);
        std::string table = "t,scaling_vs_propagator,splitstep_vs_propagator\n";
        for (double t : {0.25, 0.7, 1.5})
        {
            auto const exact_q = oracle::propagator_evolve(psi_q, t);
            auto const exact_v = reps::transform(exact_q, Representation::V, to_v);
            auto const scaled = gamow::evolve_scaling(psi_v, t);
            double const d1 = sup_distance(scaled, exact_v);
            r.reports.push_back(make_report(label("scaling_vs_propagator", t), d1, 1e-5));

            auto const stepped = oracle::splitstep_evolve(psi_q, t, 1e-3);
            double const d2 = sup_distance(stepped, exact_q);
            r.reports.push_back(make_report(label("splitstep_vs_propagator", t), d2, 1e-5));
            table += io::fmt(t) + "," + io::fmt(d1) + "," + io::fmt(d2) + "\n";
        }
        r.files["scaling_evolution.csv"] = table;
    });
}

CriterionResult biorthonormality(Corpus const&, Settings const&)
{
    return timed(4, "biorthonormality", [&](CriterionResult& r) {
        auto const q = gamow::quantum_biorthonormality(12);
        r.reports.push_back(make_report("quantum_biorthonormality_n<=12",
                                        std::max(q.max_deviation, q.max_deviation_dual), 1e-9));
        auto const st = stat::stat_biorthonormality(7, 7);
        r.reports.push_back(make_report(
            "stat_biorthonormality_8x8",
            std::max(st.max_deviation_poly_delta, st.max_deviation_mixed), 1e-12));
        std::string table = "n_prime,n,deviation\n";
        for (std::size_t a = 0; a < q.deviation.size(); ++a)
            for (std::size_t b = 0; b < q.deviation[a].size(); ++b)
                table += std::to_string(a) + "," + std::to_string(b) + ","
                         + io::fmt(q.deviation[a][b]) + "\n";
        r.files["quantum_biorthonormality.csv"] = table;
    });
}

CriterionResult liouville_characteristics(Corpus const&, Settings const& s)
{
    return timed(5, "Liouville characteristics", [&](CriterionResult& r) {
        stat::TensorForm const form{AnalyticPacket::gauss_hermite(0.2, 0.7, 0),
                                    AnalyticPacket::gauss_hermite(-0.1, 0.7, 0)};
        Grid1D const vg = Grid1D::symmetric(8.0, 256);
        Grid1D const ug = Grid1D::symmetric(4.0, 256);
        auto const rho = stat::PhaseDensity2D::from_tensor(form, vg, ug, true);
        std::string table = "t,chi2,dof,z\n";
        for (double t : {0.0, 1.0})
        {
            auto const hist = oracle::mc_transport(rho, t, s.samples, s.seed);
            auto const expected = stat::evolve_liouville(rho, t);
            auto const chi = oracle::chi_square(hist, expected, s.samples);
            r.reports.push_back(make_report(label("mc_chi2_|z|", t), std::abs(chi.z), 3.0));
            table += io::fmt(t) + "," + io::fmt(chi.chi2) + "," + std::to_string(chi.dof) + ","
                     + io::fmt(chi.z) + "\n";
        }
        r.files["mc_chi_square.csv"] = table;

        // Mass of the analytic evolution on a grid wide and fine enough for
        // the trapezoid rule to be exact to rounding.
        Grid1D const wv = Grid1D::symmetric(60.0, 600);
        Grid1D const wu = Grid1D::symmetric(8.0, 800);
        auto const base = stat::PhaseDensity2D::from_tensor(form, wv, wu, true);
        double const m0 = base.mass().real();
        double worst = 0.0;
        for (double t : {0.5, 1.0, 2.0})
        {
            auto const evolved = stat::evolve_liouville(base, t);
            worst = std::max(worst, std::abs(evolved.grid_mass().real() - m0) / m0);
        }
        r.reports.push_back(make_report("liouville_mass_conservation", worst, 1e-10));
    });
}

CriterionResult stat_eigen_evolution(Corpus const&, Settings const&)
{
    return timed(6, "statistical eigen-evolution", [&](CriterionResult& r) {
        stat::TensorForm const probe{AnalyticPacket::gauss_hermite(0.3, 1.0, 0),
                                     AnalyticPacket::gauss_hermite(0.25, 0.9, 0)};
        std::string table = "family,m,n,expected_rate,fitted_rate,rate_error,residual\n";
        for (auto fam : {stat::Family::DeltaV_PolyU, stat::Family::DeltaU_PolyV})
            for (int m = 0; m <= 2; ++m)
                for (int n = 0; n <= 2; ++n)
                {
                    auto const e = stat::stat_eigen_check({m, n, fam}, probe, 1e-10);
                    std::string const tag = std::string(to_string(fam)) + "_m=" + std::to_string(m)
                                            + "_n=" + std::to_string(n);
                    r.reports.push_back(make_report("rate_" + tag, e.rate_error, 1e-4));
                    r.reports.push_back(make_report("eigen_identity_" + tag, e.residual, 1e-10));
                    table += std::string(to_string(fam)) + "," + std::to_string(m) + ","
                             + std::to_string(n) + "," + io::fmt(e.expected_rate) + ","
                             + io::fmt(e.fitted_rate) + "," + io::fmt(e.rate_error) + ","
                             + io::fmt(e.residual) + "\n";
                }
        r.files["stat_eigen_rates.csv"] = table;
    });
}

CriterionResult wigner_bridge(Corpus const& c, Settings const&)
{
    return timed(7, "Wigner bridge", [&](CriterionResult& r) {
        std::string table = "side,support_lo,support_hi,support_residual,decay_exponent\n";
        for (auto side : {wigner::Side::Plus, wigner::Side::Minus})
        {
            auto const m = wigner::verify_space_mapping(c.wigner_bump, side);
            std::string const tag = wigner::to_string(side);
            r.reports.push_back(
                make_report("wigner_" + tag + "_support_residual", m.support_residual, 1e-12));
            // Deficit below the required exponent; zero or less passes.
            r.reports.push_back(
                make_report("wigner_" + tag + "_decay_deficit", 5.0 - m.decay_exponent, 0.0));
            table += tag + "," + io::fmt(m.support_lo) + "," + io::fmt(m.support_hi) + ","
                     + io::fmt(m.support_residual) + "," + io::fmt(m.decay_exponent) + "\n";
        }
        r.files["wigner_space_mapping.csv"] = table;

        auto const psi_v = reps::sample(AnalyticPacket::normalized_gauss_hermite(0.0, 1.0, 0),
                                        Representation::V, Grid1D::symmetric(80.0, 2048));
        std::string sq = "t,discrepancy,relative,edge_quantum,edge_liouville\n";
        for (double t : {0.5, 1.0, 1.5, 2.0})
        {
            auto const d = wigner::wigner_dynamics_check(psi_v, t);
            r.reports.push_back(make_report(label("wigner_commuting_square", t), d.discrepancy, 1e-6));
            sq += io::fmt(t) + "," + io::fmt(d.discrepancy) + "," + io::fmt(d.relative_discrepancy)
                  + "," + io::fmt(d.support_edge_quantum) + "," + io::fmt(d.support_edge_liouville)
                  + "\n";
        }
        r.files["wigner_commuting_square.csv"] = sq;
    });
}

CriterionResult time_reversal(Corpus const& c, Settings const&)
{
    return timed(8, "time reversal", [&](CriterionResult& r) {
        using gamow::TestSpace;
        int flips_failed = 0;
        double grid_mismatch = 0.0;
        double involution = 0.0;
        std::string table = "packet,rep,space,reversed_rep,reversed_space\n";
        Grid1D const g = Grid1D::symmetric(20.0, 2048);
        auto check = [&](AnalyticPacket const& p) {
            gamow::PlacedPacket const placed{p, Representation::V};
            auto const before = gamow::classify_space(placed);
            auto const rev = gamow::time_reverse(placed);
            auto const after = gamow::classify_space(rev);
            bool const flipped = (before == TestSpace::PhiPlus && after == TestSpace::PhiMinus)
                                 || (before == TestSpace::PhiMinus && after == TestSpace::PhiPlus);
            if (!flipped)
                ++flips_failed;
            table += describe(p) + ",V," + gamow::to_string(before) + "," + to_string(rev.rep)
                     + "," + gamow::to_string(after) + "\n";

            auto const sampled = reps::sample(p, Representation::V, g);
            auto const k = gamow::time_reverse(sampled);
            auto const direct = reps::sample(rev.packet, rev.rep, gamow::reflected(g));
            grid_mismatch = std::max(grid_mismatch, sup_distance(k, direct));
            involution = std::max(involution, sup_distance(gamow::time_reverse(k), sampled));
        };
        for (auto const& p : c.minus)
            check(p);
        for (auto const& p : c.plus)
            check(p);
        check(c.wigner_bump);
        r.reports.push_back(make_report("quantum_space_flips_failed", flips_failed, 0.0));
        r.reports.push_back(make_report("time_reverse_grid_vs_packet", grid_mismatch, 1e-14));
        r.reports.push_back(make_report("time_reverse_involution", involution, 1e-15));

        int stat_failed = 0;
        double stat_mismatch = 0.0;
        Grid1D const sv = Grid1D::symmetric(12.0, 96);
        Grid1D const su = Grid1D::symmetric(10.0, 80);
        for (auto const& b : c.minus)
            for (auto const& h : c.plus)
                for (bool plus_side : {true, false})
                {
                    stat::TensorForm const form = plus_side ? stat::TensorForm{h, b}
                                                            : stat::TensorForm{b, h};
                    auto const before = stat::classify_space(form);
                    auto const rev = stat::time_reverse_stat(form);
                    auto const after = stat::classify_space(rev);
                    bool const ok
                        = (before == stat::StatSpace::PsiPlus && after == stat::StatSpace::PsiMinus)
                          || (before == stat::StatSpace::PsiMinus
                              && after == stat::StatSpace::PsiPlus);
                    if (!ok)
                        ++stat_failed;
                    auto const rho = stat::PhaseDensity2D::from_tensor(form, sv, su, false);
                    auto const k = stat::time_reverse_stat(rho);
                    auto const direct = stat::PhaseDensity2D::from_tensor(rev, k.v_grid(),
                                                                          k.u_grid(), false);
                    for (std::size_t i = 0; i < k.values().size(); ++i)
                        stat_mismatch
                            = std::max(stat_mismatch, std::abs(k.values()[i] - direct.values()[i]));
                }
        r.reports.push_back(make_report("stat_space_flips_failed", stat_failed, 0.0));
        r.reports.push_back(make_report("time_reverse_stat_grid_vs_form", stat_mismatch, 1e-15));

        // reverse(evolve(x, t)) = evolve(reverse(x), -t), compared bit for bit.
        double classical = 0.0;
        for (double q : {-1.5, 0.0, 0.7, 2.0})
            for (double p : {-0.8, 0.0, 1.3})
                for (double t : {-2.0, 0.5, 1.0, 3.0})
                {
                    auto const x = phase::to_fiber({q, p});
                    auto const a = phase::time_reverse(phase::evolve_classical(x, t));
                    auto const b = phase::evolve_classical(phase::time_reverse(x), -t);
                    classical = std::max({classical, std::abs(a.v - b.v), std::abs(a.u - b.u)});
                }
        r.reports.push_back(make_report("classical_flow_conjugation", classical, 0.0));
        r.files["time_reversal_spaces.csv"] = table;
    });
}

int criterion_count()
{
    return 9;
}

CriterionResult run_criterion(int id, Corpus const& c, Settings const& s)
{
    switch (id)
    {
    case 1: return decay_law(c, s);
    case 2: return series_quadrature(c, s);
    case 3: return scaling_evolution(c, s);
    case 4: return biorthonormality(c, s);
    case 5: return liouville_characteristics(c, s);
    case 6: return stat_eigen_evolution(c, s);
    case 7: return wigner_bridge(c, s);
    case 8: return time_reversal(c, s);
    default: throw ValidationError("criterion", "no criterion " + std::to_string(id));
    }
}

std::string reports_csv(std::vector<CriterionResult> const& results)
{
    std::string out = "criterion,name,discrepancy,tolerance,passed\n";
    for (auto const& c : results)
        for (auto const& r : c.reports)
            out += std::to_string(c.id) + "," + r.name + "," + io::fmt(r.discrepancy) + ","
                   + io::fmt(r.tolerance) + "," + (r.passed ? "true" : "false") + "\n";
    return out;
}

std::string fingerprint(std::vector<CriterionResult> const& results)
{
    std::string out = reports_csv(results);
    for (auto const& c : results)
        for (auto const& [name, body] : c.files)
            out += "== " + name + "\n" + body;
    return out;
}

CriterionResult determinism(std::vector<CriterionResult> const& first, Corpus const& c,
                            Settings const& s)
{
    return timed(9, "determinism", [&](CriterionResult& r) {
        std::vector<CriterionResult> second;
        for (auto const& f : first)
            second.push_back(run_criterion(f.id, c, s));
        std::string const a = fingerprint(first);
        std::string const b = fingerprint(second);
        std::size_t differ = 0;
        for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
            if (a[i] != b[i])
                ++differ;
        differ += std::max(a.size(), b.size()) - std::min(a.size(), b.size());
        r.reports.push_back(make_report("rerun_bytes_differing", static_cast<double>(differ), 0.0));
    });
}

}  // namespace iho::acceptance
