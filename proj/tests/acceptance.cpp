// Acceptance gate for the solver: ten end-to-end criteria, one verdict line
// each, exit status = number of failures.  Budgets and thresholds are pinned
// as constants next to the criterion that uses them.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "testutil.hpp"
#include "tourcp/branching.hpp"
#include "tourcp/circuit.hpp"
#include "tourcp/geometry.hpp"
#include "tourcp/halfcheck.hpp"
#include "tourcp/harness.hpp"
#include "tourcp/portfolio.hpp"
#include "tourcp/search.hpp"
#include "tourcp/tsplib.hpp"

using namespace tourcp;
namespace tu = tourcp::testutil;
using clock_type = std::chrono::steady_clock;

namespace {

constexpr double kOracleBudgetSeconds = 60.0;      // criterion 1
constexpr std::uint64_t kOracleTrials = 1000;      // criterion 1, per propagator
constexpr double kEnumerationBudgetSeconds = 60.0; // criterion 2
constexpr double kUpperBoundBudgetSeconds = 60.0;  // criterion 4
constexpr double kCbpMaxCutoff = 0.50;             // criterion 6: required max(c) reduction
constexpr double kCrossTableBudgetSeconds = 5.0;   // criterion 7
constexpr int kSegmentRounds = 100;                // criterion 8
constexpr int kSegmentCap = 200;                   // criterion 8
constexpr std::size_t kLubyPrefix = 64;            // criterion 9

int g_failures = 0;

void verdict(int id, bool ok, const std::string& text) {
  std::cout << "criterion " << id << ": " << (ok ? "PASS" : "FAIL") << " - " << text << "\n";
  if (!ok) ++g_failures;
}

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::string data_path(const std::string& file) {
  return std::string(TOURCP_DATA_DIR) + "/" + file;
}

std::shared_ptr<const TspInstance> make_instance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::make_shared<const TspInstance>(random_euclidean_instance(n, rng));
}

std::vector<int> tour_to_successors(const std::vector<int>& tour) {
  std::vector<int> succ(tour.size());
  for (std::size_t k = 0; k < tour.size(); ++k)
    succ[static_cast<std::size_t>(tour[k])] = tour[(k + 1) % tour.size()];
  return succ;
}

// The 25 instances shared by criteria 2 and 3.
std::vector<std::shared_ptr<const TspInstance>> small_batch() {
  std::vector<std::shared_ptr<const TspInstance>> out;
  for (int i = 0; i < 25; ++i) out.push_back(make_instance(5 + i % 5, 9000 + i));
  return out;
}

// The 50 instances shared by criteria 4 and 5.
std::vector<std::shared_ptr<const TspInstance>> bound_batch() {
  std::vector<std::shared_ptr<const TspInstance>> out;
  for (int i = 0; i < 50; ++i) out.push_back(make_instance(6 + i % 7, 7000 + i));
  return out;
}

// --- criterion 1: randomized acceptance oracle for every propagator ---

void criterion_1() {
  const std::vector<std::string> keys = {"ncl", "wncl", "cbp", "onetree"};
  OracleOptions options;
  options.trials = kOracleTrials;
  options.n_min = 5;
  options.n_max = 10;
  const OracleReport report = hc_oracle_suite(keys, options);

  std::uint64_t violations = 0;
  std::ostringstream detail;
  for (const OraclePropReport& p : report.props) {
    violations += p.violations;
    detail << ' ' << p.prop << "=" << p.accepted << "/" << p.rejected << "/" << p.violations;
  }
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1fs", report.seconds);
  const bool ok = violations == 0 && report.ok() && report.seconds < kOracleBudgetSeconds;
  verdict(1, ok,
          "randomized oracle, accepted/rejected/violations per propagator:" + detail.str() +
              ", " + buf + " (budget 60s)");
}

// --- criterion 2: enumeration and optimization against brute force ---

void criterion_2() {
  const auto t0 = clock_type::now();
  bool sets_match = true;
  bool costs_match = true;
  for (const auto& inst : small_batch()) {
    const int n = inst->n;
    CircuitModel model(inst);

    std::set<std::vector<int>> found;
    auto brancher = std::make_shared<WarnsdorffBrancher>(inst, 0, 0.0, 1);
    Asset asset = Asset::make("enumerate", model.standard_propagators(), brancher,
                              model.var_count(), /*complete=*/true, /*nogood_recording=*/true,
                              RestartPolicy{/*enabled=*/false, 32}, 1);
    SharedIncumbent incumbent;
    SolutionSink sink = [&](std::span<const int> assignment, long long cost) {
      std::vector<int> succ(assignment.begin(), assignment.begin() + n);
      if (successor_tour_weight(*inst, succ) != cost) costs_match = false;
      found.insert(std::move(succ));
    };
    SearchOptions so;
    so.mode = SearchMode::EnumerateAll;
    const SearchOutcome out = search_restarting(asset, model.root_store(), incumbent, sink, so);
    if (!out.exhausted) sets_match = false;

    std::set<std::vector<int>> expected;
    for (auto& succ : tu::all_circuit_successors(n)) expected.insert(std::move(succ));
    if (found != expected) sets_match = false;

    SolveConfig config;
    config.seed = 100 + static_cast<std::uint64_t>(n);
    const RunReport report = solve_instance(inst, config);
    if (!report.outcome.proven_optimal || !report.outcome.incumbent ||
        report.outcome.incumbent->cost != tu::held_karp_optimum(*inst))
      costs_match = false;
  }
  const double secs = seconds_since(t0);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1fs", secs);
  verdict(2, sets_match && costs_match && secs < kEnumerationBudgetSeconds,
          std::string("25 instances: enumerated circuit sets ") +
              (sets_match ? "match" : "MISMATCH") + " brute force, optimized costs " +
              (costs_match ? "match" : "MISMATCH") + " the subset DP, " + buf +
              " (budget 60s)");
}

// --- criterion 3: the mixed portfolio still proves the optimum ---

void criterion_3() {
  bool ok = true;
  for (const auto& inst : small_batch()) {
    SolveConfig config;
    config.props = {"wncl", "cbp", "onetree"};
    config.seed = 300 + static_cast<std::uint64_t>(inst->n);
    const RunReport report = solve_instance(inst, config);
    if (!report.outcome.proven_optimal || !report.outcome.incumbent ||
        report.outcome.incumbent->cost != tu::held_karp_optimum(*inst) ||
        !report.incumbent_verified)
      ok = false;
  }
  verdict(3, ok,
          "complete asset + pruning asset with all three extra propagators proves the DP "
          "optimum on all 25 instances");
}

// --- criterion 4: the tour-construction upper bound is witnessed ---

void criterion_4() {
  const auto t0 = clock_type::now();
  bool sound = true;
  bool witnessed = true;
  for (const auto& inst : bound_batch()) {
    CircuitModel model(inst);
    CbpPropagator cbp(inst);
    Store store = model.root_store();
    if (cbp.propagate(store) == PropStatus::Failed || !cbp.last_witness()) {
      sound = false;
      continue;
    }
    const TourWitness& witness = *cbp.last_witness();
    const std::vector<int> succ = tour_to_successors(witness.tour);
    if (!model.check_solution(succ, witness.weight)) witnessed = false;
    if (store.cost_max() != witness.weight) witnessed = false;
    if (store.cost_max() < tu::held_karp_optimum(*inst)) sound = false;
  }
  const double secs = seconds_since(t0);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1fs", secs);
  verdict(4, sound && witnessed && secs < kUpperBoundBudgetSeconds,
          std::string("50 instances: root upper bound ") +
              (sound ? "never undercuts" : "UNDERCUTS") + " the optimum and " +
              (witnessed ? "equals" : "DIFFERS FROM") +
              " its checker-verified witness tour, " + buf + " (budget 60s)");
}

// --- criterion 5: the hub-tree lower bound is sound, exact when small ---

void criterion_5() {
  bool sound = true;
  bool exact = true;
  int exhaustive_checks = 0;
  const auto batch = bound_batch();
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& inst = batch[i];
    CircuitModel model(inst);
    HubTreePropagator onetree(inst, 500 + i);
    Store store = model.root_store();
    onetree.propagate(store);
    if (!onetree.last_summary()) {
      sound = false;
      continue;
    }
    const auto& summary = *onetree.last_summary();
    if (summary.bound > tu::held_karp_optimum(*inst)) sound = false;
    if (inst->n <= 8) {
      ++exhaustive_checks;
      if (summary.bound != tu::brute_min_hub_tree_weight(*inst, summary.hub)) exact = false;
    }
  }
  verdict(5, sound && exact && exhaustive_checks > 0,
          std::string("50 instances: root lower bound ") +
              (sound ? "never exceeds" : "EXCEEDS") + " the optimum; " +
              std::to_string(exhaustive_checks) + " exhaustive tree comparisons " +
              (exact ? "all exact" : "NOT exact"));
}

// --- criterion 6: filtering strength on berlin52 ---

void criterion_6() {
  auto inst = std::make_shared<const TspInstance>(load_instance(data_path("berlin52.tsp")));
  const FilterExperimentResult result = filter_experiment(inst, 0.10, 52);
  write_filter_report(std::cout, result);  // the raw before/after numbers

  bool ok = result.cells.size() == 5;
  for (const FilterConfigCell& cell : result.cells) ok = ok && !cell.failed;
  std::string detail;
  if (ok) {
    const FilterConfigCell& standard = result.cells[0];
    const FilterConfigCell& wncl = result.cells[1];
    const FilterConfigCell& cbp = result.cells[2];
    const FilterConfigCell& onetree = result.cells[3];
    const FilterConfigCell& all = result.cells[4];

    const bool cbp_halves_max = *cost_max_ratio(result, 2) <= kCbpMaxCutoff;
    const bool onetree_raises_min = onetree.cost_min > standard.cost_min;
    const bool wncl_shrinks = wncl.sum_dom < standard.sum_dom;
    const bool all_strongest = all.sum_dom <= wncl.sum_dom && all.sum_dom <= cbp.sum_dom &&
                               all.sum_dom <= onetree.sum_dom;
    ok = cbp_halves_max && onetree_raises_min && wncl_shrinks && all_strongest;
    std::ostringstream d;
    d << "cbp max ratio " << *cost_max_ratio(result, 2) << (cbp_halves_max ? " <= " : " > ")
      << kCbpMaxCutoff << ", onetree min " << standard.cost_min << " -> " << onetree.cost_min
      << (onetree_raises_min ? " (raised)" : " (NOT raised)") << ", wncl domains "
      << standard.sum_dom << " -> " << wncl.sum_dom
      << (wncl_shrinks ? " (reduced)" : " (NOT reduced)") << ", combined domains "
      << all.sum_dom << (all_strongest ? " <= " : " NOT <= ") << "every single lane";
    detail = d.str();
  } else {
    detail = "a lane failed before the comparison";
  }
  verdict(6, ok, "berlin52 at 10% assignment: " + detail);
}

// --- criterion 7: crossing-table budget and node cap ---

void criterion_7() {
  auto berlin = std::make_shared<const TspInstance>(load_instance(data_path("berlin52.tsp")));
  const auto t0 = clock_type::now();
  const CrossTable table = CrossTable::build(*berlin);
  const double secs = seconds_since(t0);

  bool refused = false;
  std::string message;
  auto big = make_instance(131, 7777);
  try {
    (void)CrossTable::build(*big);
  } catch (const CrossTableLimitError& e) {
    refused = true;
    message = e.what();
  }
  const bool diagnostic_clear = message.find("131") != std::string::npos &&
                                message.find("130") != std::string::npos;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2fs", secs);
  verdict(7, secs < kCrossTableBudgetSeconds && refused && diagnostic_clear && table.n() == 52,
          std::string("berlin52 table built in ") + buf + " (budget 5s) with " +
              std::to_string(table.total_entries()) + " entries; 131-node build " +
              (refused ? "refused with a diagnostic naming both sizes" : "NOT refused"));
}

// --- criterion 8: spatial index versus the all-pairs scan ---

void criterion_8() {
  std::mt19937_64 rng(880088);
  std::uniform_real_distribution<double> coord(0.0, 1000.0);
  int mismatches = 0;
  for (int round = 0; round < kSegmentRounds; ++round) {
    const int count = 1 + static_cast<int>(rng() % kSegmentCap);
    std::vector<Segment> segments;
    for (int i = 0; i < count; ++i)
      segments.push_back(Segment{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, i});

    const SegmentIndex index = SegmentIndex::build(segments);
    std::set<std::pair<int, int>> via_index;
    for (const Segment& s : segments)
      for (int hit : index.query_crossing(s))
        if (hit != s.id) via_index.insert({std::min(s.id, hit), std::max(s.id, hit)});

    const auto brute = tu::brute_crossings(segments);
    if (std::vector<std::pair<int, int>>(via_index.begin(), via_index.end()) != brute)
      ++mismatches;
  }
  verdict(8, mismatches == 0,
          std::to_string(kSegmentRounds) + " random segment sets (up to " +
              std::to_string(kSegmentCap) + " segments): " + std::to_string(mismatches) +
              " mismatches against the all-pairs scan");
}

// --- criterion 9: restart sequence ---

void criterion_9() {
  const auto expected = tu::luby_reference(kLubyPrefix);
  bool ok = true;
  for (std::size_t i = 0; i < kLubyPrefix; ++i)
    if (luby(i + 1) != expected[i]) ok = false;
  verdict(9, ok,
          "first " + std::to_string(kLubyPrefix) +
              " restart budgets match the concatenation recurrence");
}

// --- criterion 10: statistics reproducibility through the CLI path ---

void criterion_10() {
  std::mt19937_64 rng(9100);
  const TspInstance inst = random_euclidean_instance(10, rng);
  const std::string path = "acceptance-rand10.tsp";
  {
    std::ofstream out(path);
    out << "NAME: acceptance-rand10\nTYPE: TSP\nDIMENSION: " << inst.n
        << "\nEDGE_WEIGHT_TYPE: EUC_2D\nNODE_COORD_SECTION\n";
    for (int i = 0; i < inst.n; ++i)
      out << (i + 1) << ' ' << inst.coords[static_cast<std::size_t>(i)].x << ' '
          << inst.coords[static_cast<std::size_t>(i)].y << '\n';
    out << "EOF\n";
  }

  SolveConfig config;
  config.props = {"wncl", "cbp", "onetree"};
  config.epsilon = 0.0;
  config.seed = 4242;
  const RunReport first = cmd_solve(path, config);
  const RunReport second = cmd_solve(path, config);
  const std::string da = report_statistics_digest(first);
  const std::string db = report_statistics_digest(second);
  const bool finished = first.outcome.proven_optimal && second.outcome.proven_optimal;
  verdict(10, finished && da == db,
          std::string("two runs, same seed and zero exploration: digests ") +
              (da == db ? "byte-identical" : "DIFFER") + ", both " +
              (finished ? "proved optimal" : "DID NOT finish"));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  std::cout << (g_failures == 0 ? "acceptance: all criteria passed"
                                : "acceptance: " + std::to_string(g_failures) +
                                      " criteria failed")
            << "\n";
  return g_failures;
}
