#include "iho/experiment.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "iho/acceptance.hpp"
#include "iho/errors.hpp"
#include "iho/gamow_q.hpp"
#include "iho/gamow_stat.hpp"
#include "iho/io.hpp"
#include "iho/oracle.hpp"
#include "iho/phase_core.hpp"
#include "iho/reps.hpp"
#include "iho/wigner.hpp"

namespace iho::experiment {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr std::pair<Command, char const*> command_table[] = {
    {Command::Classical, "classical"}, {Command::Transform, "transform"},
    {Command::Coeffs, "coeffs"},       {Command::Survival, "survival"},
    {Command::Evolve, "evolve"},       {Command::Liouville, "liouville"},
    {Command::Wigner, "wigner"},       {Command::Verify, "verify"},
};

std::string lower(std::string s)
{
    for (auto& ch : s)
        ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    return s;
}

std::string trim(std::string const& s)
{
    auto const a = s.find_first_not_of(" \t");
    if (a == std::string::npos)
        return "";
    auto const b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

PacketFamily family_from_string(std::string const& field, std::string const& s)
{
    auto const l = lower(s);
    if (l == "bump")
        return PacketFamily::Bump;
    if (l == "gauss_hermite" || l == "gaussian" || l == "gausshermite")
        return PacketFamily::GaussHermite;
    if (l == "monomial")
        return PacketFamily::Monomial;
    throw ValidationError(field, "unknown packet family '" + s + "'");
}

char const* family_key(PacketFamily f)
{
    switch (f)
    {
    case PacketFamily::Bump: return "bump";
    case PacketFamily::GaussHermite: return "gauss_hermite";
    case PacketFamily::Monomial: return "monomial";
    }
    return "?";
}

double to_double(std::string const& field, std::string const& s)
{
    std::size_t used = 0;
    double x = 0.0;
    try
    {
        x = std::stod(s, &used);
    }
    catch (std::exception const&)
    {
        throw ValidationError(field, "not a number: '" + s + "'");
    }
    if (trim(s.substr(used)) != "")
        throw ValidationError(field, "not a number: '" + s + "'");
    return x;
}

long long to_integer(std::string const& field, std::string const& s)
{
    double const x = to_double(field, s);
    if (x != std::floor(x) || std::abs(x) > 9e15)
        throw ValidationError(field, "not an integer: '" + s + "'");
    return static_cast<long long>(x);
}

std::vector<double> number_list(std::string const& field, std::string const& s)
{
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        if (trim(item).empty())
            continue;
        out.push_back(to_double(field, trim(item)));
    }
    return out;
}

void parse_grid(ExperimentSpec& spec, std::string const& text)
{
    auto const sep = text.find_first_of(",:");
    if (sep == std::string::npos)
        throw ValidationError("grid", "expected 'n,dx', got '" + text + "'");
    long long const n = to_integer("grid.n", trim(text.substr(0, sep)));
    if (n < 0)
        throw ValidationError("grid.n", "must be positive");
    spec.grid.n = static_cast<std::size_t>(n);
    spec.grid.dx = to_double("grid.dx", trim(text.substr(sep + 1)));
}

std::vector<double> steps(double t0, double t1, double dt)
{
    std::vector<double> out;
    int const n = static_cast<int>(std::lround((t1 - t0) / dt));
    for (int k = 0; k <= n; ++k)
        out.push_back(t0 + dt * k);
    return out;
}

json packet_json(PacketSpec const& p)
{
    return {{"family", family_key(p.family)}, {"center", p.center}, {"width", p.width},
            {"degree", p.degree}, {"rep", to_string(p.rep)}};
}

PacketSpec packet(PacketFamily f, double c, double w, int d, Representation r)
{
    return {f, c, w, d, r};
}

std::string tagged(std::string base, double t, std::string const& ext)
{
    return base + "_t=" + io::fmt(t) + ext;
}

// Collects output files so that the manifest can list them in write order.
struct Writer
{
    fs::path root;
    std::vector<std::string> files;

    void put(std::string const& name, std::string const& content)
    {
        io::write_file(root / name, content);
        files.push_back(name);
    }
};

json run_classical(ExperimentSpec const& s, Writer& w)
{
    std::string table = "point,t,q,p,v,u,H\n";
    double drift = 0.0;
    for (std::size_t k = 0; k < s.points.size(); ++k)
    {
        auto const [q, p] = s.points[k];
        auto const x0 = phase::to_fiber({q, p});
        double const h0 = phase::hamiltonian(x0);
        for (double t : s.times)
        {
            auto const x = phase::evolve_classical(x0, t);
            auto const y = phase::to_phase(x);
            double const h = phase::hamiltonian(x);
            drift = std::max(drift, std::abs(h - h0) / std::max(1.0, std::abs(h0)));
            table += std::to_string(k) + "," + io::fmt(t) + "," + io::fmt(y.q) + ","
                     + io::fmt(y.p) + "," + io::fmt(x.v) + "," + io::fmt(x.u) + ","
                     + io::fmt(h) + "\n";
        }
    }
    w.put("trajectories.csv", table);
    return {{"energy_drift", drift}};
}

json run_transform(ExperimentSpec const& s, Writer& w)
{
    auto const& ps = s.packets.at("psi");
    Grid1D const g = s.grid.grid();
    auto const f = reps::sample(ps.build(), ps.rep, g);
    reps::TransformOptions opts;
    opts.mass_tolerance = s.tol;
    w.put(std::string("psi_") + to_string(ps.rep) + ".csv", io::grid_function_csv(f));
    json norms = json::object();
    json round_trip = json::object();
    norms[to_string(ps.rep)] = f.norm();
    for (auto target : {Representation::Q, Representation::V, Representation::U})
    {
        if (target == ps.rep)
            continue;
        auto const out = reps::transform(f, target, opts);
        auto const back = reps::transform(out, ps.rep, opts);
        w.put(std::string("psi_") + to_string(target) + ".csv", io::grid_function_csv(out));
        norms[to_string(target)] = out.norm();
        round_trip[to_string(target)] = sup_distance(back, f);
    }
    return {{"norms", norms}, {"round_trip_sup_error", round_trip}};
}

json run_coeffs(ExperimentSpec const& s, Writer& w)
{
    auto const plus = s.packets.at("plus").build();
    auto const growing = s.packets.at("psi_u").build();
    auto const dec = gamow::decaying_coeffs(plus, s.order);
    auto const gro = gamow::growing_coeffs(growing, s.order);
    w.put("coeffs_decaying.csv", io::coefficients_csv(dec));
    w.put("coeffs_growing.csv", io::coefficients_csv(gro));

    // Contour-integral Taylor coefficients as the independent check.
    auto const cd = oracle::cauchy_taylor(plus, 0.0, s.order, 1.0);
    auto const cg = oracle::cauchy_taylor(growing, 0.0, s.order, 1.0);
    // Both are compared as Taylor coefficients psi^(n)(0)/n!.
    double err_d = 0.0;
    double err_g = 0.0;
    double fact = 1.0;
    for (int n = 0; n <= s.order; ++n)
    {
        if (n > 0)
            fact *= n;
        cplx const in = std::pow(I, n);
        err_d = std::max(err_d, std::abs(dec.values[n] - cd[n]));
        err_g = std::max(err_g, std::abs(gro.values[n] / (std::sqrt(2.0 * pi) * in * fact) - cg[n]));
    }
    return {{"decaying_tail_estimate", dec.tail_estimate},
            {"growing_tail_estimate", gro.tail_estimate},
            {"decaying_vs_contour_max_abs", err_d},
            {"growing_vs_contour_max_abs", err_g}};
}

json run_survival(ExperimentSpec const& s, Writer& w)
{
    auto const minus = s.packets.at("minus").build();
    auto const plus = s.packets.at("plus").build();
    auto const series = gamow::survival_amplitude(minus, plus, s.order, s.times, s.tol);
    w.put("survival.csv", io::survival_csv(series));

    std::string overlay = "t,re_series,im_series,re_quadrature,im_quadrature,relative\n";
    double worst = 0.0;
    for (std::size_t k = 0; k < series.times.size(); ++k)
    {
        double const t = series.times[k];
        cplx const a = series.amplitudes[k];
        cplx const b = oracle::slow_survival(minus, plus, t);
        double const rel = std::abs(a - b) / std::max(std::abs(b), 1e-300);
        worst = std::max(worst, rel);
        overlay += io::fmt(t) + "," + io::fmt(a.real()) + "," + io::fmt(a.imag()) + ","
                   + io::fmt(b.real()) + "," + io::fmt(b.imag()) + "," + io::fmt(rel) + "\n";
    }
    w.put("survival_overlay.csv", overlay);

    // The slope is set by the first nonvanishing term.
    double biggest = 0.0;
    for (auto const& term : series.terms)
        biggest = std::max(biggest, std::abs(term));
    int leading = 0;
    while (leading < series.order && std::abs(series.terms[leading]) <= 1e-12 * biggest)
        ++leading;
    json out = {{"leading_index", leading},
                {"expected_slope", -(leading + 0.5)},
                {"max_relative_series_vs_quadrature", worst}};
    int in_window = 0;
    for (double t : series.times)
        in_window += (t >= 4.0 && t <= 8.0) ? 1 : 0;
    if (in_window >= 2)
        out["fitted_slope_4_8"] = gamow::fit_log_slope(series, 4.0, 8.0);
    else
        out["fitted_slope_4_8"] = nullptr;
    return out;
}

json run_evolve(ExperimentSpec const& s, Writer& w)
{
    auto const& ps = s.packets.at("psi");
    if (ps.rep != Representation::Q)
        throw ValidationError("packet.psi.rep", "evolve starts from a Q-representation packet");
    Grid1D const qg = oracle::propagator_grid();
    Grid1D const vg = s.grid.grid();
    auto const psi_q = reps::sample(ps.build(), Representation::Q, qg);
    reps::TransformOptions to_v;
    to_v.target = vg;
    to_v.mass_tolerance = s.tol;
    auto const psi_v = reps::transform(psi_q, Representation::V, to_v);
    w.put("psi_V_t=0.csv", io::grid_function_csv(psi_v));

    std::string table = "t,sup_scaling_vs_propagator,norm\n";
    double worst = 0.0;
    for (double t : s.times)
    {
        auto const scaled = gamow::evolve_scaling(psi_v, t);
        double d = 0.0;
        if (t != 0.0)
        {
            auto const exact = reps::transform(oracle::propagator_evolve(psi_q, t),
                                               Representation::V, to_v);
            d = sup_distance(scaled, exact);
        }
        worst = std::max(worst, d);
        w.put(tagged("psi_V", t, ".csv"), io::grid_function_csv(scaled));
        table += io::fmt(t) + "," + io::fmt(d) + "," + io::fmt(scaled.norm()) + "\n";
    }
    w.put("evolve_check.csv", table);

    // Generalized eigenvalue relations of the Gamow functionals.
    auto const probe = s.packets.at("probe").build();
    std::string eig = "n,kind,re_lhs,im_lhs,re_rhs,im_rhs,residual,passed\n";
    bool all = true;
    for (auto kind : {gamow::Kind::Decaying, gamow::Kind::Growing})
        for (int n = 0; n <= std::min(s.order, 12); ++n)
        {
            auto const e = gamow::verify_generalized_eigen({n, kind}, probe, 1e-9);
            all = all && e.passed;
            eig += std::to_string(n) + "," + gamow::to_string(kind) + "," + io::fmt(e.lhs.real())
                   + "," + io::fmt(e.lhs.imag()) + "," + io::fmt(e.rhs.real()) + ","
                   + io::fmt(e.rhs.imag()) + "," + io::fmt(e.residual) + ","
                   + (e.passed ? "true" : "false") + "\n";
        }
    w.put("gamow_eigen.csv", eig);
    return {{"max_sup_scaling_vs_propagator", worst}, {"eigen_relations_hold", all}};
}

// int conj(a) b over the support of whichever factor is a bump, by the
// trapezoid rule (spectrally accurate for bump integrands).
cplx factor_pairing(AnalyticPacket const& a, AnalyticPacket const& b)
{
    auto const& bump = a.compact() ? a : b;
    if (!bump.compact())
        throw ValidationError("packets", "factor pairing needs a bump factor");
    double const lo = bump.center() - bump.width();
    double const hi = bump.center() + bump.width();
    Grid1D const g(lo, (hi - lo) / 4096.0, 4097);
    std::vector<cplx> fa(g.n);
    std::vector<cplx> fb(g.n);
    for (std::size_t j = 0; j < g.n; ++j)
    {
        fa[j] = a(g.x(j));
        fb[j] = b(g.x(j));
    }
    return oracle::slow_pairing({Representation::V, g, std::move(fa)},
                                {Representation::V, g, std::move(fb)})
        .value;
}

json run_liouville(ExperimentSpec const& s, Writer& w)
{
    stat::TensorForm const form{s.packets.at("rho_v").build(), s.packets.at("rho_u").build()};
    Grid1D const g = s.grid.grid();
    bool const physical = stat::classify_space(form) != stat::StatSpace::Unclassified
                          && form.v_factor.scale().imag() == 0.0
                          && form.u_factor.scale().imag() == 0.0
                          && form.v_factor.degree() == 0 && form.u_factor.degree() == 0;
    auto const rho = stat::PhaseDensity2D::from_tensor(form, g, g, physical);
    std::string mc = "t,chi2,dof,z,consistent\n";
    std::string mass = "t,analytic_mass,grid_mass\n";
    for (double t : s.times)
    {
        auto const evolved = stat::evolve_liouville(rho, t);
        w.put(tagged("density", t, ".csv"), io::density_csv(evolved));
        w.put(tagged("density", t, ".bin"), io::density_binary(evolved));
        mass += io::fmt(t) + "," + io::fmt(evolved.mass().real()) + ","
                + io::fmt(evolved.grid_mass().real()) + "\n";
        if (physical)
        {
            auto const hist = oracle::mc_transport(rho, t, s.samples, s.seed);
            auto const chi = oracle::chi_square(hist, evolved, s.samples);
            mc += io::fmt(t) + "," + io::fmt(chi.chi2) + "," + std::to_string(chi.dof) + ","
                  + io::fmt(chi.z) + "," + (chi.consistent ? "true" : "false") + "\n";
        }
    }
    w.put("mass.csv", mass);
    if (physical)
        w.put("mc_chi_square.csv", mc);
    json out = {{"physical", physical}, {"space", stat::to_string(stat::classify_space(form))}};
    if (stat::classify_space(form) == stat::StatSpace::PsiPlus)
    {
        auto const a = stat::stat_coeffs(form, s.order_m, s.order);
        w.put("stat_coeffs.csv", io::stat_coefficients_csv(a));
        // Pairing with the time-reversed density through the double series
        // against direct quadrature of the factors.
        auto const minus = stat::time_reverse_stat(form);
        cplx const series = stat::stat_series_pairing(minus, a);
        cplx const direct = factor_pairing(minus.v_factor, form.v_factor)
                            * factor_pairing(minus.u_factor, form.u_factor);
        out["series_pairing_with_reversed"] = {series.real(), series.imag()};
        out["quadrature_pairing_with_reversed"] = {direct.real(), direct.imag()};
        out["series_vs_quadrature_relative"] = std::abs(series - direct) / std::abs(direct);
    }
    return out;
}

json run_wigner(ExperimentSpec const& s, Writer& w)
{
    auto const& ps = s.packets.at("psi");
    if (ps.family != PacketFamily::Bump && ps.family != PacketFamily::GaussHermite)
        throw ValidationError("packet.psi.family", "Wigner fields need a normalizable packet");
    Grid1D const g = s.grid.grid();
    auto const psi = ps.build();
    auto const f = reps::sample(psi, ps.rep, g);
    wigner::WignerField field = [&] {
        switch (ps.rep)
        {
        case Representation::Q: return wigner::wigner_qp(f);
        case Representation::V: return wigner::wigner_vu(f);
        case Representation::U: return wigner::wigner_from_u(f);
        }
        throw ValidationError("packet.psi.rep", "unknown representation");
    }();
    std::string const stem = field.coords == wigner::Coordinates::QP ? "wigner_qp" : "wigner_vu";
    w.put(stem + ".csv", io::density_csv(field.field));
    w.put(stem + ".bin", io::density_binary(field.field));

    json checks = {{"total", wigner::total(field)},
                   {"norm_squared", f.norm_squared()},
                   {"max_imag_residual", field.max_imag_residual}};
    if (ps.family == PacketFamily::Bump && ps.rep != Representation::Q)
    {
        auto const side = ps.rep == Representation::V ? wigner::Side::Plus : wigner::Side::Minus;
        auto const m = wigner::verify_space_mapping(psi, side);
        json exps = json::array();
        for (double e : m.window_exponents)
            exps.push_back(e);
        json bounded = json::array();
        for (bool b : m.weighted_bounded)
            bounded.push_back(b);
        checks["space_mapping"] = {{"side", wigner::to_string(m.side)},
                                   {"support", {m.support_lo, m.support_hi}},
                                   {"support_residual", m.support_residual},
                                   {"support_ok", m.support_ok},
                                   {"slice_at", m.slice_at},
                                   {"decay_exponent", m.decay_exponent},
                                   {"window_exponents", exps},
                                   {"weighted_bounded", bounded},
                                   {"decay_ok", m.decay_ok},
                                   {"passed", m.passed}};
    }
    w.put(stem + ".json", io::wigner_sidecar_json(field, checks.dump()));
    return checks;
}

json run_verify(ExperimentSpec const& s, Writer& w, std::vector<std::string>& log, int& code)
{
    acceptance::Settings settings;
    settings.seed = s.seed;
    settings.samples = s.samples;
    settings.series_order = s.order;
    auto const corpus = acceptance::default_corpus();
    std::vector<acceptance::CriterionResult> results;
    for (int id = 1; id < acceptance::criterion_count(); ++id)
        results.push_back(acceptance::run_criterion(id, corpus, settings));
    results.push_back(acceptance::determinism(results, corpus, settings));

    std::string csv = "name,discrepancy,tolerance,passed\n";
    json summary = json::array();
    bool all = true;
    for (auto const& c : results)
    {
        all = all && c.passed();
        summary.push_back({{"criterion", c.id}, {"title", c.title}, {"passed", c.passed()}});
        for (auto const& r : c.reports)
        {
            csv += r.name + "," + io::fmt(r.discrepancy) + "," + io::fmt(r.tolerance) + ","
                   + (r.passed ? "true" : "false") + "\n";
            log.push_back(io::report_json_line(r));
        }
        for (auto const& [name, body] : c.files)
            w.put("criterion_" + std::to_string(c.id) + "/" + name, body);
    }
    w.put("verify_reports.csv", csv);
    code = all ? 0 : 2;
    return {{"criteria", summary}, {"all_passed", all}};
}

}  // namespace

char const* to_string(Command c)
{
    for (auto const& [k, name] : command_table)
        if (k == c)
            return name;
    return "?";
}

Command command_from_string(std::string const& s)
{
    for (auto const& [k, name] : command_table)
        if (s == name)
            return k;
    throw ValidationError("command", "unknown command '" + s + "'");
}

std::vector<std::string> command_names()
{
    std::vector<std::string> out;
    for (auto const& [k, name] : command_table)
        out.emplace_back(name);
    return out;
}

AnalyticPacket PacketSpec::build() const
{
    switch (family)
    {
    case PacketFamily::Bump: return AnalyticPacket::normalized_bump(center, width);
    case PacketFamily::GaussHermite:
        return AnalyticPacket::normalized_gauss_hermite(center, width, degree);
    case PacketFamily::Monomial: return AnalyticPacket::monomial(degree, center);
    }
    throw ValidationError("family", "unknown packet family");
}

Grid1D GridSpec::grid() const
{
    return {-0.5 * static_cast<double>(n) * dx, dx, n};
}

ExperimentSpec default_spec(Command c)
{
    using F = PacketFamily;
    using R = Representation;
    ExperimentSpec s;
    s.command = c;
    char const* root = std::getenv("IHO_OUTPUT_ROOT");
    s.output_dir = (fs::path(root && *root ? root : "iho_out") / to_string(c)).string();
    switch (c)
    {
    case Command::Classical:
        s.points = {{1.0, 0.0}, {0.0, 1.0}, {0.5, -0.3}, {1.0, 1.0}, {-1.0, 1.0}};
        s.times = steps(0.0, 3.0, 0.25);
        break;
    case Command::Transform:
        s.packets["psi"] = packet(F::GaussHermite, 0.3, 1.0, 0, R::Q);
        break;
    case Command::Coeffs:
        s.packets["plus"] = packet(F::GaussHermite, 0.25, 1.0, 0, R::V);
        s.packets["psi_u"] = packet(F::GaussHermite, -0.2, 1.0, 1, R::U);
        break;
    case Command::Survival:
        s.packets["minus"] = packet(F::Bump, 0.3, 0.9, 0, R::V);
        s.packets["plus"] = packet(F::GaussHermite, 0.25, 1.0, 0, R::V);
        s.times = steps(0.0, 8.0, 0.25);
        break;
    case Command::Evolve:
        s.packets["psi"] = packet(F::GaussHermite, 0.0, 1.0, 0, R::Q);
        s.packets["probe"] = packet(F::Bump, 0.2, 1.0, 0, R::V);
        s.grid = {8192, 80.0 / 8192.0};
        s.times = {0.0, 0.25, 0.7, 1.5};
        break;
    case Command::Liouville:
        s.packets["rho_v"] = packet(F::GaussHermite, 0.2, 0.7, 0, R::V);
        s.packets["rho_u"] = packet(F::Bump, 0.0, 1.0, 0, R::U);
        s.grid = {256, 1.0 / 16.0};
        s.times = {0.0, 0.5, 1.0};
        s.order = 24;
        s.order_m = 24;
        break;
    case Command::Wigner:
        s.packets["psi"] = packet(F::Bump, 0.0, 1.0, 0, R::V);
        s.grid = {256, std::sqrt(pi / 256.0)};
        break;
    case Command::Verify: break;
    }
    return s;
}

void apply_config(ExperimentSpec& spec, std::string const& text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    try
    {
        std::istringstream in(text);
        pt::ini_parser::read_ini(in, tree);
    }
    catch (pt::ini_parser_error const& e)
    {
        throw ValidationError("config", "line " + std::to_string(e.line()) + ": " + e.message());
    }
    auto const key = [](std::string const& section, std::string const& k) {
        return section + "." + k;
    };
    for (auto const& [section, body] : tree)
    {
        if (body.empty() && !body.data().empty())
            throw ValidationError(section, "keys must sit under a section header");
        for (auto const& [k, node] : body)
        {
            std::string const field = key(section, k);
            std::string const v = trim(node.data());
            if (section == "run")
            {
                if (k == "output")
                    spec.output_dir = v;
                else if (k == "seed")
                {
                    auto const x = to_integer(field, v);
                    if (x < 0)
                        throw ValidationError(field, "must be nonnegative");
                    spec.seed = static_cast<std::uint64_t>(x);
                }
                else if (k == "samples")
                {
                    auto const x = to_integer(field, v);
                    if (x < 0)
                        throw ValidationError(field, "must be positive");
                    spec.samples = static_cast<std::uint64_t>(x);
                }
                else if (k == "tol")
                    spec.tol = to_double(field, v);
                else
                    throw ValidationError(field, "unknown key");
            }
            else if (section == "grid")
            {
                if (k == "n")
                {
                    auto const x = to_integer(field, v);
                    if (x < 0)
                        throw ValidationError(field, "must be positive");
                    spec.grid.n = static_cast<std::size_t>(x);
                }
                else if (k == "dx")
                    spec.grid.dx = to_double(field, v);
                else
                    throw ValidationError(field, "unknown key");
            }
            else if (section == "order")
            {
                if (k == "n")
                    spec.order = static_cast<int>(to_integer(field, v));
                else if (k == "m")
                    spec.order_m = static_cast<int>(to_integer(field, v));
                else
                    throw ValidationError(field, "unknown key");
            }
            else if (section == "times")
            {
                if (k == "values")
                    spec.times = number_list(field, v);
                else if (k == "range")
                {
                    auto const r = number_list(field, v);
                    if (r.size() != 3 || !(r[2] > 0.0) || r[1] < r[0])
                        throw ValidationError(field, "expected 'start, stop, step' with step > 0");
                    spec.times = steps(r[0], r[1], r[2]);
                }
                else
                    throw ValidationError(field, "unknown key");
            }
            else if (section == "classical")
            {
                if (k != "points")
                    throw ValidationError(field, "unknown key");
                auto const xs = number_list(field, v);
                if (xs.size() % 2 != 0 || xs.empty())
                    throw ValidationError(field, "expected q1, p1, q2, p2, ...");
                spec.points.clear();
                for (std::size_t i = 0; i < xs.size(); i += 2)
                    spec.points.emplace_back(xs[i], xs[i + 1]);
            }
            else if (section.rfind("packet.", 0) == 0)
            {
                std::string const role = section.substr(7);
                auto& p = spec.packets[role];
                if (k == "family")
                    p.family = family_from_string(field, v);
                else if (k == "center")
                    p.center = to_double(field, v);
                else if (k == "width")
                    p.width = to_double(field, v);
                else if (k == "degree")
                    p.degree = static_cast<int>(to_integer(field, v));
                else if (k == "rep")
                {
                    try
                    {
                        p.rep = representation_from_string(v);
                    }
                    catch (std::exception const&)
                    {
                        throw ValidationError(field, "expected Q, V or U, got '" + v + "'");
                    }
                }
                else
                    throw ValidationError(field, "unknown key");
            }
            else
                throw ValidationError(section, "unknown section");
        }
    }
}

void apply_overrides(ExperimentSpec& spec, Overrides const& o)
{
    if (o.seed)
        spec.seed = *o.seed;
    if (o.tol)
        spec.tol = *o.tol;
    if (o.order)
        spec.order = *o.order;
    if (o.grid)
        parse_grid(spec, *o.grid);
    if (o.output)
        spec.output_dir = *o.output;
}

void validate(ExperimentSpec const& s)
{
    if (s.grid.n < 16)
        throw ValidationError("grid.n", "need at least 16 points");
    if (s.grid.n % 2 != 0)
        throw ValidationError("grid.n", "point count must be even");
    if (!(s.grid.dx > 0.0) || !std::isfinite(s.grid.dx))
        throw ValidationError("grid.dx", "spacing must be positive and finite");
    if (s.order < 1 || s.order > AnalyticPacket::max_exact_order - 1)
        throw ValidationError("order.n", "truncation order must lie in [1, 127]");
    if (s.order_m < 0 || s.order_m > AnalyticPacket::max_exact_order - 1)
        throw ValidationError("order.m", "must lie in [0, 127]");
    if (!(s.tol > 0.0) || !std::isfinite(s.tol))
        throw ValidationError("run.tol", "tolerance must be positive");
    if (s.samples < 10000)
        throw ValidationError("run.samples", "need at least 1e4 samples");
    if (s.output_dir.empty())
        throw ValidationError("run.output", "output directory must be set");
    for (double t : s.times)
        if (!std::isfinite(t))
            throw ValidationError("times", "times must be finite");
    for (auto const& [role, p] : s.packets)
    {
        std::string const f = "packet." + role;
        if (!(p.width > 0.0) || !std::isfinite(p.width))
            throw ValidationError(f + ".width", "width must be positive");
        if (!std::isfinite(p.center))
            throw ValidationError(f + ".center", "center must be finite");
        if (p.degree < 0 || p.degree > 64)
            throw ValidationError(f + ".degree", "degree must lie in [0, 64]");
    }
    auto const need = [&](char const* role, std::optional<PacketFamily> family,
                          std::optional<Representation> rep) {
        auto const it = s.packets.find(role);
        if (it == s.packets.end())
            throw ValidationError(std::string("packet.") + role, "missing packet");
        if (family && it->second.family != *family)
            throw ValidationError(std::string("packet.") + role + ".family",
                                  std::string("expected ") + family_key(*family));
        if (rep && it->second.rep != *rep)
            throw ValidationError(std::string("packet.") + role + ".rep",
                                  std::string("expected ") + to_string(*rep));
    };
    using F = PacketFamily;
    using R = Representation;
    switch (s.command)
    {
    case Command::Classical:
        if (s.points.empty())
            throw ValidationError("classical.points", "need at least one starting point");
        break;
    case Command::Transform: need("psi", std::nullopt, std::nullopt); break;
    case Command::Coeffs:
        need("plus", std::nullopt, R::V);
        need("psi_u", std::nullopt, R::U);
        break;
    case Command::Survival:
        need("minus", F::Bump, R::V);
        need("plus", F::GaussHermite, R::V);
        break;
    case Command::Evolve:
        need("psi", std::nullopt, R::Q);
        need("probe", std::nullopt, R::V);
        break;
    case Command::Liouville:
        need("rho_v", std::nullopt, R::V);
        need("rho_u", std::nullopt, R::U);
        break;
    case Command::Wigner: need("psi", std::nullopt, std::nullopt); break;
    case Command::Verify: break;
    }
}

std::string spec_json(ExperimentSpec const& s)
{
    json packets = json::object();
    for (auto const& [role, p] : s.packets)
        packets[role] = packet_json(p);
    json points = json::array();
    for (auto const& [q, p] : s.points)
        points.push_back({q, p});
    Grid1D const g = s.grid.grid();
    json j = {{"command", to_string(s.command)},
              {"grid", {{"n", s.grid.n}, {"dx", s.grid.dx}, {"x0", g.x0}}},
              {"order", {{"n", s.order}, {"m", s.order_m}}},
              {"times", s.times},
              {"tol", s.tol},
              {"seed", s.seed},
              {"samples", s.samples},
              {"output", s.output_dir},
              {"packets", packets},
              {"points", points}};
    return j.dump(2);
}

RunResult run(ExperimentSpec const& spec)
{
    validate(spec);
    RunResult res;
    Writer w{spec.output_dir, {}};
    auto const t0 = std::chrono::steady_clock::now();
    json results;
    switch (spec.command)
    {
    case Command::Classical: results = run_classical(spec, w); break;
    case Command::Transform: results = run_transform(spec, w); break;
    case Command::Coeffs: results = run_coeffs(spec, w); break;
    case Command::Survival: results = run_survival(spec, w); break;
    case Command::Evolve: results = run_evolve(spec, w); break;
    case Command::Liouville: results = run_liouville(spec, w); break;
    case Command::Wigner: results = run_wigner(spec, w); break;
    case Command::Verify: results = run_verify(spec, w, res.log, res.exit_code); break;
    }
    json manifest = {{"spec", json::parse(spec_json(spec))},
                     {"results", results},
                     {"outputs", w.files},
                     {"exit_code", res.exit_code}};
    w.put("manifest.json", manifest.dump(2) + "\n");
    res.files = w.files;
    double const secs
        = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char buf[128];
    std::snprintf(buf, sizeof buf, "%s: %zu files in %s (%.2f s)", to_string(spec.command),
                  res.files.size(), spec.output_dir.c_str(), secs);
    res.log.emplace_back(buf);
    return res;
}

int main_entry(int argc, char** argv)
{
    CLI::App app{"Inverted harmonic oscillator lab: Gamow expansions, Liouville transport and "
                 "Wigner fields"};
    app.require_subcommand(1);
    struct Args
    {
        std::string config;
        Overrides o;
        std::string grid;
        std::string output;
    };
    std::map<std::string, Args> args;
    for (auto const& name : command_names())
    {
        auto* sub = app.add_subcommand(name, "run the " + name + " pipeline");
        auto& a = args[name];
        sub->add_option("-c,--config", a.config, "INI config file")->check(CLI::ExistingFile);
        sub->add_option("--seed", a.o.seed, "Monte-Carlo seed");
        sub->add_option("--tol", a.o.tol, "tolerance");
        sub->add_option("--order", a.o.order, "truncation order N");
        sub->add_option("--grid", a.o.grid, "grid as 'n,dx'");
        sub->add_option("-o,--output", a.o.output, "output directory");
    }
    try
    {
        app.parse(argc, argv);
    }
    catch (CLI::ParseError const& e)
    {
        int const code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    auto* sub = app.get_subcommands().front();
    auto const& a = args[sub->get_name()];
    try
    {
        auto spec = default_spec(command_from_string(sub->get_name()));
        if (!a.config.empty())
            apply_config(spec, io::read_file(a.config));
        apply_overrides(spec, a.o);
        auto const res = run(spec);
        for (auto const& line : res.log)
            std::cout << line << "\n";
        return res.exit_code;
    }
    catch (ValidationError const& e)
    {
        std::cerr << "invalid spec: " << e.what() << "\n";
        return 1;
    }
    catch (Error const& e)
    {
        std::cerr << "run failed: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace iho::experiment
