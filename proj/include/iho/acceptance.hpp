#pragma once

// The acceptance suite: each criterion runs its checks and returns one
// OracleReport per comparison, plus the data tables it produced.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "iho/oracle.hpp"
#include "iho/packet.hpp"

namespace iho::acceptance {

// Test states, all in the v-representation. Detection states are bumps
// (compact in v), prepared states Gauss-Hermite packets (entire in v).
struct Corpus
{
    std::vector<AnalyticPacket> minus;
    std::vector<AnalyticPacket> plus;
    AnalyticPacket generic_minus;
    AnalyticPacket generic_plus;
    AnalyticPacket odd_minus;  // nonzero first moment
    AnalyticPacket odd_plus;   // odd about v = 0, so c_0 = 0
    AnalyticPacket wigner_bump;
};

Corpus default_corpus();

struct Settings
{
    std::uint64_t seed = 42;
    std::uint64_t samples = 100000;
    int series_order = 32;
};

struct CriterionResult
{
    int id;
    std::string title;
    std::vector<oracle::OracleReport> reports;
    std::map<std::string, std::string> files;  // data tables by file name
    double runtime_s = 0.0;

    bool passed() const;
};

CriterionResult decay_law(Corpus const& c, Settings const& s);
CriterionResult series_quadrature(Corpus const& c, Settings const& s);
CriterionResult scaling_evolution(Corpus const& c, Settings const& s);
CriterionResult biorthonormality(Corpus const& c, Settings const& s);
CriterionResult liouville_characteristics(Corpus const& c, Settings const& s);
CriterionResult stat_eigen_evolution(Corpus const& c, Settings const& s);
CriterionResult wigner_bridge(Corpus const& c, Settings const& s);
CriterionResult time_reversal(Corpus const& c, Settings const& s);

int criterion_count();
// Criteria 1..8 by number.
CriterionResult run_criterion(int id, Corpus const& c, Settings const& s);

// Everything a run writes except timings: the report table and every data
// table, concatenated in a fixed order.
std::string reports_csv(std::vector<CriterionResult> const& results);
std::string fingerprint(std::vector<CriterionResult> const& results);

// Criterion 9: a second in-process run of the given criteria must
// reproduce the first byte for byte.
CriterionResult determinism(std::vector<CriterionResult> const& first, Corpus const& c,
                            Settings const& s);

}  // namespace iho::acceptance
