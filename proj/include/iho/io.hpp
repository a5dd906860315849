#pragma once

// Text and binary serialization. All reals are written with 17 significant
// digits so identical inputs give byte-identical files.

#include <filesystem>
#include <string>

#include "iho/gamow_q.hpp"
#include "iho/gamow_stat.hpp"
#include "iho/grid.hpp"
#include "iho/oracle.hpp"
#include "iho/wigner.hpp"

namespace iho::io {

std::string fmt(double x);

// "# rep=<Q|V|U> x0=<..> dx=<..> n=<..>" then rows "x,re,im".
std::string grid_function_csv(GridFunction1D const& f);
GridFunction1D parse_grid_function_csv(std::string const& text);

// "n,re_c,im_c"
std::string coefficients_csv(gamow::GamowCoefficients const& c);
// "t,re_A,im_A,abs_A,tail_bound"
std::string survival_csv(gamow::SurvivalSeries const& s);

// "v,u,rho" for real densities, "v,u,re_rho,im_rho" otherwise.
std::string density_csv(stat::PhaseDensity2D const& rho);

// 64-byte header: magic "PHDENS2D", then nv, nu, v0, u0, dv, du and a
// complex flag as little-endian doubles; then the samples row-major (v
// slow), one double per sample for real data, two for complex.
std::string density_binary(stat::PhaseDensity2D const& rho);
stat::PhaseDensity2D parse_density_binary(std::string const& bytes);

// "m,n,re_a,im_a"
std::string stat_coefficients_csv(stat::StatCoefficients const& a);

// {"name":..,"discrepancy":..,"tolerance":..,"passed":..,"runtime_s":..}
std::string report_json_line(oracle::OracleReport const& r);

// Provenance and check results of a Wigner field.
std::string wigner_sidecar_json(wigner::WignerField const& w, std::string const& checks_json);

void write_file(std::filesystem::path const& path, std::string const& content);
std::string read_file(std::filesystem::path const& path);

}  // namespace iho::io
