// Command-line front end: solve an instance, run the side-by-side filtering
// experiment, or run the randomized propagator acceptance suite.
//
// Exit codes: 0 success; 1 infeasible, no incumbent found, or a failing
// acceptance report; 2 usage, option or input-file errors.

#include <array>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tourcp/harness.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& csv) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(csv);
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

constexpr std::array<std::string_view, 5> kPropKeys = {"ncl", "wncl", "cbp", "onetree", "fail"};

bool known_prop(const std::string& key) {
  for (std::string_view k : kPropKeys)
    if (key == k) return true;
  return false;
}

int run_solve(const std::string& file, const tourcp::SolveConfig& config) {
  const tourcp::RunReport report = tourcp::cmd_solve(file, config);
  tourcp::write_run_report(std::cout, report);
  if (!report.outcome.incumbent) return 1;
  if (!report.incumbent_verified) {
    std::cerr << "error: incumbent failed re-verification\n";
    return 1;
  }
  return 0;
}

int run_filter(const std::string& file, double assign_frac, std::uint64_t seed) {
  auto inst = std::make_shared<const tourcp::TspInstance>(tourcp::load_instance(file));
  const tourcp::FilterExperimentResult result =
      tourcp::filter_experiment(std::move(inst), assign_frac, seed);
  tourcp::write_filter_report(std::cout, result);
  return 0;
}

int run_oracle(const std::vector<std::string>& props, const tourcp::OracleOptions& options) {
  const tourcp::OracleReport report = tourcp::hc_oracle_suite(props, options);
  tourcp::write_oracle_report(std::cout, report);
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tourcp: tour optimization with half-checking propagators"};
  app.require_subcommand(1);

  std::string file;
  std::string props_csv;
  tourcp::SolveConfig config;
  double time_limit = 0.0;

  CLI::App* solve = app.add_subcommand("solve", "Search for a minimum-cost tour");
  solve->add_option("file", file, "node coordinate file (EUC_2D)")->required();
  solve->add_option("--props", props_csv,
                    "comma-separated extra propagators: ncl,wncl,cbp,onetree (or fail)");
  solve->add_option("--assets", config.complete_assets, "number of complete assets")
      ->check(CLI::PositiveNumber);
  std::string strategy = "combined";
  solve->add_option("--strategy", strategy, "how requested propagators form assets")
      ->check(CLI::IsMember({"combined", "multi", "roundrobin"}));
  CLI::Option* tl = solve->add_option("--time-limit", time_limit, "wall-clock limit in seconds");
  solve->add_option("--seed", config.seed, "master seed");
  solve->add_flag("--record-nogoods-incomplete", config.record_nogoods_incomplete,
                  "record no-goods even in incomplete assets");
  solve->add_flag("--search-all", config.search_all,
                  "enumerate every solution with the standard model instead of optimizing");
  solve->add_option("--epsilon", config.epsilon, "value-selection randomization in [0,1]")
      ->check(CLI::Range(0.0, 1.0));
  solve->add_option("--start-node", config.start_node, "path start city");
  solve->add_option("--luby-scale", config.luby_scale, "failures per restart budget unit");
  solve->add_option("--ncl-node-limit", config.ncl_node_limit,
                    "refuse the crossing-table build above this many cities");

  std::string filter_file;
  double assign_frac = 0.1;
  std::uint64_t filter_seed = 1;
  CLI::App* filter = app.add_subcommand(
      "filter-exp", "Compare root filtering of the propagator configurations side by side");
  filter->add_option("file", filter_file, "node coordinate file (EUC_2D)")->required();
  filter->add_option("--assign-frac", assign_frac, "fraction of cities to assign")
      ->check(CLI::Range(0.0, 1.0));
  filter->add_option("--seed", filter_seed, "seed for the shared decision prefix");

  tourcp::OracleOptions oracle_options;
  std::string oracle_props_csv = "ncl,wncl,cbp,onetree";
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Randomized acceptance audit of the half-checking propagators");
  oracle->add_option("--trials", oracle_options.trials, "trials per propagator");
  oracle->add_option("--props", oracle_props_csv, "propagators to audit");
  oracle->add_option("--seed", oracle_options.seed, "suite seed");
  oracle->add_option("--n-min", oracle_options.n_min, "smallest instance size");
  oracle->add_option("--n-max", oracle_options.n_max, "largest instance size");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (solve->parsed()) {
      config.props = split_csv(props_csv);
      for (const std::string& key : config.props)
        if (!known_prop(key)) {
          std::cerr << "error: unknown propagator '" << key << "' (choose from ncl, wncl, cbp, "
                    << "onetree, fail)\n";
          return 2;
        }
      if (auto s = tourcp::strategy_from_name(strategy)) config.strategy = *s;
      if (tl->count() > 0) config.time_limit_s = time_limit;
      return run_solve(file, config);
    }
    if (filter->parsed()) return run_filter(filter_file, assign_frac, filter_seed);
    if (oracle->parsed()) {
      const std::vector<std::string> props = split_csv(oracle_props_csv);
      for (const std::string& key : props)
        if (!known_prop(key)) {
          std::cerr << "error: unknown propagator '" << key << "'\n";
          return 2;
        }
      return run_oracle(props, oracle_options);
    }
  } catch (const tourcp::TsplibError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const tourcp::CrossTableLimitError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
