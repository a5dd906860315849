#include "iho/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "iho/errors.hpp"

namespace iho::io {

namespace {

void append(std::string& out, double x)
{
    static_assert(std::endian::native == std::endian::little
                      || std::endian::native == std::endian::big,
                  "mixed-endian platforms are not supported");
    char b[8];
    std::memcpy(b, &x, 8);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + 8);
    out.append(b, 8);
}

double take(std::string const& in, std::size_t& pos)
{
    if (pos + 8 > in.size())
    {
        throw ValidationError("binary", "truncated density file");
    }
    char b[8];
    std::memcpy(b, in.data() + pos, 8);
    if constexpr (std::endian::native == std::endian::big)
        std::reverse(b, b + 8);
    pos += 8;
    double x;
    std::memcpy(&x, b, 8);
    return x;
}

bool is_real(stat::PhaseDensity2D const& rho)
{
    for (auto const& z : rho.values())
        if (z.imag() != 0.0)
            return false;
    return true;
}

}  // namespace

std::string fmt(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string grid_function_csv(GridFunction1D const& f)
{
    auto const& g = f.grid();
    std::string out = std::string("# rep=") + to_string(f.rep()) + " x0=" + fmt(g.x0)
                      + " dx=" + fmt(g.dx) + " n=" + std::to_string(g.n) + "\n";
    out += "x,re,im\n";
    for (std::size_t j = 0; j < g.n; ++j)
    {
        out += fmt(g.x(j)) + "," + fmt(f[j].real()) + "," + fmt(f[j].imag()) + "\n";
    }
    return out;
}

GridFunction1D parse_grid_function_csv(std::string const& text)
{
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    char rep[8] = {};
    double x0 = 0;
    double dx = 0;
    std::size_t n = 0;
    if (std::sscanf(header.c_str(), "# rep=%7s x0=%lf dx=%lf n=%zu", rep, &x0, &dx, &n) != 4)
    {
        throw ValidationError("csv", "missing or malformed grid header");
    }
    Grid1D const g(x0, dx, n);
    std::string line;
    std::getline(in, line);  // column names
    std::vector<cplx> values;
    values.reserve(n);
    while (std::getline(in, line))
    {
        if (line.empty())
            continue;
        double x, re, im;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &x, &re, &im) != 3)
        {
            throw ValidationError("csv", "malformed row '" + line + "'");
        }
        values.emplace_back(re, im);
    }
    return {representation_from_string(rep), g, std::move(values)};
}

std::string coefficients_csv(gamow::GamowCoefficients const& c)
{
    std::string out = "n,re_c,im_c\n";
    for (std::size_t n = 0; n < c.values.size(); ++n)
    {
        out += std::to_string(n) + "," + fmt(c.values[n].real()) + "," + fmt(c.values[n].imag())
               + "\n";
    }
    return out;
}

std::string survival_csv(gamow::SurvivalSeries const& s)
{
    std::string out = "t,re_A,im_A,abs_A,tail_bound\n";
    for (std::size_t i = 0; i < s.times.size(); ++i)
    {
        auto const a = s.amplitudes[i];
        out += fmt(s.times[i]) + "," + fmt(a.real()) + "," + fmt(a.imag()) + ","
               + fmt(std::abs(a)) + "," + fmt(s.tail_bounds[i]) + "\n";
    }
    return out;
}

std::string density_csv(stat::PhaseDensity2D const& rho)
{
    bool const real = is_real(rho);
    std::string out = real ? "v,u,rho\n" : "v,u,re_rho,im_rho\n";
    auto const& vg = rho.v_grid();
    auto const& ug = rho.u_grid();
    for (std::size_t i = 0; i < vg.n; ++i)
        for (std::size_t j = 0; j < ug.n; ++j)
        {
            auto const z = rho.at(i, j);
            out += fmt(vg.x(i)) + "," + fmt(ug.x(j)) + "," + fmt(z.real());
            if (!real)
                out += "," + fmt(z.imag());
            out += "\n";
        }
    return out;
}

std::string density_binary(stat::PhaseDensity2D const& rho)
{
    bool const real = is_real(rho);
    auto const& vg = rho.v_grid();
    auto const& ug = rho.u_grid();
    std::string out = "PHDENS2D";
    for (double x : {static_cast<double>(vg.n), static_cast<double>(ug.n), vg.x0, ug.x0, vg.dx,
                     ug.dx, real ? 0.0 : 1.0})
        append(out, x);
    for (auto const& z : rho.values())
    {
        append(out, z.real());
        if (!real)
            append(out, z.imag());
    }
    return out;
}

stat::PhaseDensity2D parse_density_binary(std::string const& bytes)
{
    if (bytes.size() < 64 || bytes.compare(0, 8, "PHDENS2D") != 0)
    {
        throw ValidationError("binary", "not a PHDENS2D file");
    }
    std::size_t pos = 8;
    auto const nv = static_cast<std::size_t>(take(bytes, pos));
    auto const nu = static_cast<std::size_t>(take(bytes, pos));
    double const v0 = take(bytes, pos);
    double const u0 = take(bytes, pos);
    double const dv = take(bytes, pos);
    double const du = take(bytes, pos);
    bool const complex = take(bytes, pos) != 0.0;
    std::vector<cplx> values(nv * nu);
    for (auto& z : values)
    {
        double const re = take(bytes, pos);
        double const im = complex ? take(bytes, pos) : 0.0;
        z = {re, im};
    }
    return {Grid1D(v0, dv, nv), Grid1D(u0, du, nu), std::move(values), false};
}

std::string stat_coefficients_csv(stat::StatCoefficients const& a)
{
    std::string out = "m,n,re_a,im_a\n";
    for (int m = 0; m <= a.max_m; ++m)
        for (int n = 0; n <= a.max_n; ++n)
        {
            auto const z = a(m, n);
            out += std::to_string(m) + "," + std::to_string(n) + "," + fmt(z.real()) + ","
                   + fmt(z.imag()) + "\n";
        }
    return out;
}

std::string report_json_line(oracle::OracleReport const& r)
{
    nlohmann::ordered_json j;
    j["name"] = r.name;
    j["discrepancy"] = r.discrepancy;
    j["tolerance"] = r.tolerance;
    j["passed"] = r.passed;
    j["runtime_s"] = r.runtime_s;
    return j.dump();
}

std::string wigner_sidecar_json(wigner::WignerField const& w, std::string const& checks_json)
{
    auto const& f = w.field;
    nlohmann::ordered_json j;
    j["coordinates"] = w.coords == wigner::Coordinates::QP ? "qp" : "vu";
    j["source"] = w.source;
    j["grid"] = {{"n0", f.v_grid().n}, {"x0", f.v_grid().x0}, {"d0", f.v_grid().dx},
                 {"n1", f.u_grid().n}, {"y0", f.u_grid().x0}, {"d1", f.u_grid().dx}};
    j["max_imag_residual"] = w.max_imag_residual;
    j["checks"] = checks_json.empty() ? nlohmann::ordered_json::object()
                                      : nlohmann::ordered_json::parse(checks_json);
    return j.dump(2) + "\n";
}

void write_file(std::filesystem::path const& path, std::string const& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
    {
        throw ValidationError("output", "cannot write " + path.string());
    }
    out << content;
}

std::string read_file(std::filesystem::path const& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
    {
        throw ValidationError("input", "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace iho::io
