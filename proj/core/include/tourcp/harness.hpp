#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tourcp/branching.hpp"
#include "tourcp/circuit.hpp"
#include "tourcp/halfcheck.hpp"
#include "tourcp/portfolio.hpp"

namespace tourcp {

enum class Strategy {
  Combined,        // all requested propagators together in one extra asset
  MultipleAssets,  // one extra asset per requested propagator
  RoundRobin,      // one extra asset cycling through them, one per restart
};

std::string_view strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(std::string_view name);

struct SolveConfig {
  std::vector<std::string> props;  // half-checking selection: ncl wncl cbp onetree fail
  Strategy strategy = Strategy::Combined;
  int complete_assets = 1;
  std::optional<double> time_limit_s;
  std::uint64_t seed = 1;
  double epsilon = 0.1;
  int start_node = 0;
  std::uint64_t luby_scale = 32;
  bool record_nogoods_incomplete = false;
  bool search_all = false;
  int ncl_node_limit = 130;
  double reuse_threshold = 0.25;
};

struct RunReport {
  SolveConfig config;
  std::string instance_name;
  int n = 0;
  PortfolioOutcome outcome;
  std::vector<std::string> asset_names;
  std::vector<bool> asset_complete;
  // (elapsed ms, cost) for each accepted incumbent, non-increasing in cost.
  std::vector<std::pair<long long, long long>> trajectory;
  std::uint64_t enumerated = 0;  // solutions seen in search-all mode
  bool incumbent_verified = false;
  double wall_seconds = 0.0;
};

// Builds the portfolio for a config: the complete assets run the standard
// propagators; when half-checking propagators are requested they go into
// extra assets, last, never complete, and by default without no-good
// recording (their no-goods would not be valid anywhere else).
std::vector<Asset> assemble_assets(const CircuitModel& model, const SolveConfig& config);

RunReport solve_instance(std::shared_ptr<const TspInstance> inst, const SolveConfig& config);
RunReport cmd_solve(const std::string& path, const SolveConfig& config);

void write_run_report(std::ostream& out, const RunReport& report);
// The deterministic slice of the report: everything except wall-clock
// fields.  Two runs with the same config, seed and epsilon=0 that end by
// exhaustion produce identical digests.
std::string report_statistics_digest(const RunReport& report);

// --- the domain-filtering comparison experiment ---

struct FilterConfigCell {
  std::string label;
  bool failed = false;
  long long sum_dom = 0;  // sum of successor domain sizes
  long long cost_min = 0;
  long long cost_max = 0;
};

struct FilterExperimentResult {
  std::string instance_name;
  int n = 0;
  int assigned = 0;  // length of the shared decision prefix
  std::vector<FilterConfigCell> cells;  // [0] is the standard baseline
};

// Propagates five models side by side - standard alone and standard plus
// each of wncl/cbp/onetree and all three - then assigns the same path
// prefix (about assign_frac of the cities, chosen by the deterministic
// epsilon=0 branching) in each and reports the filtering reached.
FilterExperimentResult filter_experiment(std::shared_ptr<const TspInstance> inst,
                                         double assign_frac, std::uint64_t seed,
                                         const SolveConfig& base = {});

// Remaining-fraction ratios against the baseline cell; nullopt for a failed
// cell, 1.0 when unchanged.  sum_dom and cost_max divide config by standard
// (smaller is stronger); cost_min divides standard by config so a raised
// lower bound also shows up as a fraction below one.
std::optional<double> sum_dom_ratio(const FilterExperimentResult& r, std::size_t idx);
std::optional<double> cost_min_ratio(const FilterExperimentResult& r, std::size_t idx);
std::optional<double> cost_max_ratio(const FilterExperimentResult& r, std::size_t idx);

void write_filter_report(std::ostream& out, const FilterExperimentResult& result);

// --- randomized acceptance harness for the half-checking guarantee ---

struct OracleOptions {
  std::uint64_t trials = 1000;
  int n_min = 5;
  int n_max = 10;
  std::uint64_t seed = 20240817;
};

struct OraclePropReport {
  std::string prop;
  std::uint64_t trials = 0;
  std::uint64_t accepted = 0;    // full assignments left unfailed
  std::uint64_t rejected = 0;    // runs failed before or at full assignment
  std::uint64_t violations = 0;  // accepted assignments the checker refused,
                                 // or contraction/locality breaches
  std::vector<std::uint64_t> violation_trials;
};

struct OracleReport {
  std::vector<OraclePropReport> props;
  double seconds = 0.0;
  bool ok() const;
};

// For each propagator key and trial: build a random Euclidean instance,
// drive the store toward a random full assignment value by value with the
// propagator running intermittently (contract checks on), and verify that
// any accepted full assignment is a genuine tour of consistent cost.
OracleReport hc_oracle_suite(std::span<const std::string> prop_keys,
                             const OracleOptions& options = {});

void write_oracle_report(std::ostream& out, const OracleReport& report);

// Random instance with distinct integer coordinates; used by the oracle
// suite and the randomized tests.
TspInstance random_euclidean_instance(int n, std::mt19937_64& rng);

}  // namespace tourcp
