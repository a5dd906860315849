#pragma once

// Declarative experiment runs: an INI-style config (section headers,
// key = value lines) resolved against per-command defaults, overridden
// by flags, validated, executed, and echoed into a run manifest.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "iho/grid.hpp"
#include "iho/packet.hpp"

namespace iho::experiment {

enum class Command
{
    Classical,
    Transform,
    Coeffs,
    Survival,
    Evolve,
    Liouville,
    Wigner,
    Verify,
};

char const* to_string(Command c);
Command command_from_string(std::string const& s);
std::vector<std::string> command_names();

// A packet role such as "minus" or "plus". Packets are unit-normalized
// unless they are monomials.
struct PacketSpec
{
    PacketFamily family = PacketFamily::GaussHermite;
    double center = 0.0;
    double width = 1.0;
    int degree = 0;
    Representation rep = Representation::V;

    AnalyticPacket build() const;
};

// n points of spacing dx centered on zero: x0 = -n dx / 2.
struct GridSpec
{
    std::size_t n = 4096;
    double dx = 40.0 / 4096.0;

    Grid1D grid() const;
};

struct ExperimentSpec
{
    Command command = Command::Verify;
    std::map<std::string, PacketSpec> packets;
    GridSpec grid;
    int order = 32;    // truncation N
    int order_m = 8;   // second index M of the statistical coefficients
    std::vector<double> times;
    double tol = 1e-10;
    std::uint64_t seed = 42;
    std::uint64_t samples = 100000;
    std::string output_dir;
    std::vector<std::pair<double, double>> points;  // classical (q, p) starts
};

// Defaults of a command; the output directory is $IHO_OUTPUT_ROOT/<command>
// (or iho_out/<command> when the variable is unset).
ExperimentSpec default_spec(Command c);

// Applies a config file's contents on top of spec. Unknown sections or keys
// are a ValidationError naming them.
void apply_config(ExperimentSpec& spec, std::string const& text);

struct Overrides
{
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> order;
    std::optional<std::string> grid;  // "n,dx"
    std::optional<std::string> output;
};

void apply_overrides(ExperimentSpec& spec, Overrides const& o);

// ValidationError naming the offending field.
void validate(ExperimentSpec const& spec);

// The resolved spec as JSON; parsing it back with apply_config is not
// needed, every value is echoed verbatim.
std::string spec_json(ExperimentSpec const& spec);

struct RunResult
{
    int exit_code = 0;
    std::vector<std::string> files;  // relative to the output directory
    std::vector<std::string> log;    // lines for stdout, may contain timings
};

RunResult run(ExperimentSpec const& spec);

// Full command line handling; returns the process exit status.
int main_entry(int argc, char** argv);

}  // namespace iho::experiment
