#include "tourcp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tourcp {

namespace {

constexpr std::uint64_t kSeedMix = 0x9e3779b97f4a7c15ull;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base ^ (kSeedMix * (salt + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

}  // namespace

std::string_view strategy_name(Strategy s) {
  switch (s) {
    case Strategy::Combined: return "combined";
    case Strategy::MultipleAssets: return "multi";
    case Strategy::RoundRobin: return "roundrobin";
  }
  return "combined";
}

std::optional<Strategy> strategy_from_name(std::string_view name) {
  if (name == "combined") return Strategy::Combined;
  if (name == "multi") return Strategy::MultipleAssets;
  if (name == "roundrobin") return Strategy::RoundRobin;
  return std::nullopt;
}

std::vector<Asset> assemble_assets(const CircuitModel& model, const SolveConfig& config) {
  const int var_count = model.var_count();
  const RestartPolicy restarts{true, config.luby_scale};
  std::vector<Asset> assets;

  const int complete_count = std::max(1, config.complete_assets);
  for (int a = 0; a < complete_count; ++a) {
    auto brancher = std::make_shared<WarnsdorffBrancher>(
        model.instance_ptr(), config.start_node, config.search_all ? 0.0 : config.epsilon,
        derive_seed(config.seed, static_cast<std::uint64_t>(a)));
    Asset asset = Asset::make("complete-" + std::to_string(a), model.standard_propagators(),
                              std::move(brancher), var_count, /*complete=*/true,
                              /*nogood_recording=*/true, restarts,
                              derive_seed(config.seed, static_cast<std::uint64_t>(a)));
    if (config.search_all) asset.restarts.enabled = false;
    assets.push_back(std::move(asset));
  }
  if (config.search_all || config.props.empty()) return assets;

  HalfcheckOptions hc;
  hc.cross_table.node_limit = config.ncl_node_limit;
  hc.cbp_reuse_threshold = config.reuse_threshold;
  hc.path_start = config.start_node;

  // The crossing table depends only on the instance; share one build.
  std::shared_ptr<const CrossTable> table;
  for (const auto& key : config.props)
    if (key == "ncl" && !table)
      table = std::make_shared<const CrossTable>(
          CrossTable::build(model.instance(), hc.cross_table));

  auto hc_prop = [&](const std::string& key, std::uint64_t salt) {
    return make_halfcheck_propagator(key, model, derive_seed(config.seed, 100 + salt), hc, table);
  };
  auto hc_brancher = [&](std::uint64_t salt) {
    return std::make_shared<WarnsdorffBrancher>(model.instance_ptr(), config.start_node,
                                                config.epsilon,
                                                derive_seed(config.seed, 200 + salt));
  };
  const bool hc_recording = config.record_nogoods_incomplete;

  switch (config.strategy) {
    case Strategy::Combined: {
      auto props = model.standard_propagators();
      for (std::size_t i = 0; i < config.props.size(); ++i)
        props.push_back(hc_prop(config.props[i], i));
      assets.push_back(Asset::make("hc-combined", std::move(props), hc_brancher(0), var_count,
                                   /*complete=*/false, hc_recording, restarts,
                                   derive_seed(config.seed, 300)));
      break;
    }
    case Strategy::MultipleAssets: {
      for (std::size_t i = 0; i < config.props.size(); ++i) {
        auto props = model.standard_propagators();
        props.push_back(hc_prop(config.props[i], i));
        assets.push_back(Asset::make("hc-" + config.props[i], std::move(props), hc_brancher(i),
                                     var_count, /*complete=*/false, hc_recording, restarts,
                                     derive_seed(config.seed, 300 + i)));
      }
      break;
    }
    case Strategy::RoundRobin: {
      Asset asset = Asset::make("hc-roundrobin", model.standard_propagators(), hc_brancher(0),
                                var_count, /*complete=*/false, hc_recording, restarts,
                                derive_seed(config.seed, 300));
      for (std::size_t i = 0; i < config.props.size(); ++i)
        asset.rotation.push_back({hc_prop(config.props[i], i)});
      asset.complete = false;
      assets.push_back(std::move(asset));
      break;
    }
  }
  return assets;
}

RunReport solve_instance(std::shared_ptr<const TspInstance> inst, const SolveConfig& config) {
  using clock = std::chrono::steady_clock;
  RunReport report;
  report.config = config;
  report.instance_name = inst->name;
  report.n = inst->n;

  CircuitModel model(std::move(inst));
  std::vector<Asset> assets = assemble_assets(model, config);
  for (const Asset& a : assets) {
    report.asset_names.push_back(a.name);
    report.asset_complete.push_back(a.complete);
  }

  const auto t0 = clock::now();
  if (config.search_all) {
    SharedIncumbent incumbent;  // unused for pruning when enumerating
    std::optional<SharedIncumbent::Best> best;
    SolutionSink sink = [&](std::span<const int> assignment, long long cost) {
      ++report.enumerated;
      if (!best || cost < best->cost)
        best = SharedIncumbent::Best{{assignment.begin(), assignment.end()}, cost};
    };
    SearchOptions so;
    so.mode = SearchMode::EnumerateAll;
    SearchOutcome out = search_restarting(assets[0], model.root_store(), incumbent,
                                          std::move(sink), so);
    report.outcome.asset_stats = {out.stats};
    report.outcome.asset_exhausted = {out.exhausted};
    report.outcome.proven_optimal = out.exhausted;
    report.outcome.incumbent = std::move(best);
  } else {
    PortfolioOptions po;
    if (config.time_limit_s)
      po.time_limit = std::chrono::duration<double>(*config.time_limit_s);
    po.on_incumbent = [&report](const SharedIncumbent::Best& best, double seconds) {
      report.trajectory.emplace_back(std::llround(seconds * 1000.0), best.cost);
    };
    report.outcome = portfolio_run(assets, model.root_store(), po);
  }
  report.wall_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  if (report.outcome.incumbent) {
    const auto& best = *report.outcome.incumbent;
    report.incumbent_verified = model.check_solution(
        std::span<const int>(best.assignment.data(), static_cast<std::size_t>(report.n)),
        best.cost);
  }
  return report;
}

RunReport cmd_solve(const std::string& path, const SolveConfig& config) {
  auto inst = std::make_shared<const TspInstance>(load_instance(path));
  return solve_instance(std::move(inst), config);
}

namespace {

void write_stats_block(std::ostream& out, const RunReport& r) {
  const SolveConfig& c = r.config;
  out << "tourcp-run v1\n";
  out << "instance = " << r.instance_name << "\n";
  out << "n = " << r.n << "\n";
  out << "props = " << (c.props.empty() ? "none" : join(c.props, ',')) << "\n";
  out << "strategy = " << strategy_name(c.strategy) << "\n";
  out << "complete_assets = " << c.complete_assets << "\n";
  out << "seed = " << c.seed << "\n";
  out << "epsilon = " << c.epsilon << "\n";
  out << "start = " << c.start_node << "\n";
  out << "luby_scale = " << c.luby_scale << "\n";
  out << "search_all = " << (c.search_all ? 1 : 0) << "\n";
  out << "record_nogoods_incomplete = " << (c.record_nogoods_incomplete ? 1 : 0) << "\n";

  out << "assets = " << r.asset_names.size() << "\n";
  SearchStats total;
  for (std::size_t i = 0; i < r.asset_names.size(); ++i) {
    out << "asset " << i << ": name=" << r.asset_names[i]
        << " complete=" << (r.asset_complete[i] ? 1 : 0);
    if (i < r.outcome.asset_stats.size()) {
      const SearchStats& s = r.outcome.asset_stats[i];
      out << " nodes=" << s.nodes << " failures=" << s.failures
          << " solutions=" << s.solutions << " restarts=" << s.restarts;
      total.nodes += s.nodes;
      total.failures += s.failures;
      total.solutions += s.solutions;
      total.restarts += s.restarts;
    }
    if (i < r.outcome.asset_exhausted.size())
      out << " exhausted=" << (r.outcome.asset_exhausted[i] ? 1 : 0);
    out << "\n";
  }
  out << "nodes = " << total.nodes << "\n";
  out << "failures = " << total.failures << "\n";
  out << "solutions = " << total.solutions << "\n";
  out << "restarts = " << total.restarts << "\n";
  if (c.search_all) out << "enumerated = " << r.enumerated << "\n";
  out << "proven_optimal = " << (r.outcome.proven_optimal ? 1 : 0) << "\n";
  out << "proven_infeasible = " << (r.outcome.proven_infeasible() ? 1 : 0) << "\n";
  out << "timed_out = " << (r.outcome.timed_out ? 1 : 0) << "\n";

  if (r.outcome.incumbent) {
    const auto& best = *r.outcome.incumbent;
    out << "best_cost = " << best.cost << "\n";
    out << "incumbent_verified = " << (r.incumbent_verified ? 1 : 0) << "\n";
    out << "succ =";
    for (int i = 0; i < r.n; ++i) out << ' ' << best.assignment[static_cast<std::size_t>(i)];
    out << "\n";
    if (r.incumbent_verified) {
      out << "tour =";
      int at = 0;
      for (int i = 0; i < r.n; ++i) {
        out << ' ' << at;
        at = best.assignment[static_cast<std::size_t>(at)];
      }
      out << "\n";
    }
  } else {
    out << "best_cost = none\n";
  }
  out << "improvements = " << r.trajectory.size() << "\n";
  for (std::size_t i = 0; i < r.trajectory.size(); ++i)
    out << "improvement " << i << ": cost=" << r.trajectory[i].second << "\n";
}

}  // namespace

void write_run_report(std::ostream& out, const RunReport& report) {
  write_stats_block(out, report);
  // Timing lives below this line so everything above is reproducible.
  out << "time_limit_s = ";
  if (report.config.time_limit_s)
    out << *report.config.time_limit_s << "\n";
  else
    out << "none\n";
  out << "wall_ms = " << std::llround(report.wall_seconds * 1000.0) << "\n";
  for (std::size_t i = 0; i < report.trajectory.size(); ++i)
    out << "improvement " << i << ": ms=" << report.trajectory[i].first << "\n";
}

std::string report_statistics_digest(const RunReport& report) {
  std::ostringstream ss;
  write_stats_block(ss, report);
  return ss.str();
}

FilterExperimentResult filter_experiment(std::shared_ptr<const TspInstance> inst,
                                         double assign_frac, std::uint64_t seed,
                                         const SolveConfig& base) {
  CircuitModel model(inst);

  struct Lane {
    std::string label;
    std::vector<std::string> keys;
  };
  const std::vector<Lane> lanes = {
      {"standard", {}},
      {"wncl", {"wncl"}},
      {"cbp", {"cbp"}},
      {"onetree", {"onetree"}},
      {"all", {"wncl", "cbp", "onetree"}},
  };

  HalfcheckOptions hc;
  hc.cross_table.node_limit = base.ncl_node_limit;
  hc.cbp_reuse_threshold = base.reuse_threshold;
  hc.path_start = base.start_node;

  std::vector<Store> stores;
  std::vector<std::vector<std::shared_ptr<Propagator>>> props;
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    stores.push_back(model.root_store());
    auto ps = model.standard_propagators();
    for (std::size_t j = 0; j < lanes[k].keys.size(); ++j)
      ps.push_back(make_halfcheck_propagator(lanes[k].keys[j], model,
                                             derive_seed(seed, k * 10 + j), hc));
    props.push_back(std::move(ps));
  }

  FixpointOptions fo;
  fo.check_contracts = false;
  auto run = [&](std::size_t k) {
    if (stores[k].failed()) return;
    propagate_fixpoint(props[k], stores[k], fo);
  };
  for (std::size_t k = 0; k < lanes.size(); ++k) run(k);
  if (stores[0].failed())
    throw std::runtime_error("filter experiment: the standard model failed at the root of " +
                             inst->name + ", nothing to compare against");

  // All lanes receive the identical decision prefix, chosen deterministically
  // on the standard lane (epsilon 0 = pure nearest-city branching).
  const int target =
      std::max(1, static_cast<int>(std::llround(assign_frac * static_cast<double>(inst->n))));
  WarnsdorffBrancher brancher(inst, base.start_node, 0.0, seed);
  FilterExperimentResult result;
  result.instance_name = inst->name;
  result.n = inst->n;

  for (int step = 0; step < target; ++step) {
    auto var = brancher.select_variable(stores[0]);
    if (!var) break;
    const int value = brancher.select_value(stores[0], *var);
    for (std::size_t k = 0; k < lanes.size(); ++k) {
      if (stores[k].failed()) continue;
      stores[k].assign(*var, value);
      run(k);
    }
    if (stores[0].failed())
      throw std::runtime_error(
          "filter experiment: the standard model rejected the shared decision prefix on " +
          inst->name + " after " + std::to_string(step + 1) + " assignments");
    ++result.assigned;
  }

  for (std::size_t k = 0; k < lanes.size(); ++k) {
    FilterConfigCell cell;
    cell.label = lanes[k].label;
    cell.failed = stores[k].failed();
    if (!cell.failed) {
      for (int i = 0; i < inst->n; ++i)
        cell.sum_dom += stores[k].domain(model.succ_var(i)).size();
      cell.cost_min = stores[k].cost_min();
      cell.cost_max = stores[k].cost_max();
    }
    result.cells.push_back(std::move(cell));
  }
  return result;
}

namespace {

std::optional<double> cell_ratio(const FilterExperimentResult& r, std::size_t idx,
                                 long long FilterConfigCell::*field, bool invert) {
  if (idx >= r.cells.size() || r.cells.empty()) return std::nullopt;
  const FilterConfigCell& base = r.cells[0];
  const FilterConfigCell& cell = r.cells[idx];
  if (base.failed || cell.failed) return std::nullopt;
  const double num = static_cast<double>(invert ? base.*field : cell.*field);
  const double den = static_cast<double>(invert ? cell.*field : base.*field);
  if (den == 0.0) return num == 0.0 ? std::optional<double>(1.0) : std::nullopt;
  return num / den;
}

}  // namespace

std::optional<double> sum_dom_ratio(const FilterExperimentResult& r, std::size_t idx) {
  return cell_ratio(r, idx, &FilterConfigCell::sum_dom, /*invert=*/false);
}
std::optional<double> cost_min_ratio(const FilterExperimentResult& r, std::size_t idx) {
  return cell_ratio(r, idx, &FilterConfigCell::cost_min, /*invert=*/true);
}
std::optional<double> cost_max_ratio(const FilterExperimentResult& r, std::size_t idx) {
  return cell_ratio(r, idx, &FilterConfigCell::cost_max, /*invert=*/false);
}

void write_filter_report(std::ostream& out, const FilterExperimentResult& r) {
  out << "tourcp-filter v1\n";
  out << "instance = " << r.instance_name << "\n";
  out << "n = " << r.n << "\n";
  out << "assigned = " << r.assigned << "\n";
  for (const FilterConfigCell& cell : r.cells) {
    out << "config " << cell.label << ": ";
    if (cell.failed) {
      out << "failed\n";
    } else {
      out << "sum_dom=" << cell.sum_dom << " cost_min=" << cell.cost_min
          << " cost_max=" << cell.cost_max << "\n";
    }
  }
  out << "ratios vs standard (smaller = stronger filtering)\n";
  char buf[64];
  auto pct = [&buf](std::optional<double> v) -> std::string {
    if (!v) return "failed";
    std::snprintf(buf, sizeof(buf), "%.2f%%", *v * 100.0);
    return buf;
  };
  for (std::size_t k = 1; k < r.cells.size(); ++k) {
    out << "ratio " << r.cells[k].label << ": ";
    if (r.cells[k].failed) {
      out << "failed\n";
    } else {
      out << "sum_dom=" << pct(sum_dom_ratio(r, k)) << " cost_min=" << pct(cost_min_ratio(r, k))
          << " cost_max=" << pct(cost_max_ratio(r, k)) << "\n";
    }
  }
}

TspInstance random_euclidean_instance(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coord(0, 499);
  std::set<std::pair<int, int>> used;
  std::vector<Point> coords;
  while (static_cast<int>(coords.size()) < n) {
    const int x = coord(rng);
    const int y = coord(rng);
    if (used.insert({x, y}).second)
      coords.push_back(Point{static_cast<double>(x), static_cast<double>(y)});
  }
  return TspInstance::from_coords("rand-" + std::to_string(n), std::move(coords));
}

bool OracleReport::ok() const {
  for (const OraclePropReport& p : props)
    if (p.violations > 0) return false;
  return true;
}

OracleReport hc_oracle_suite(std::span<const std::string> prop_keys,
                             const OracleOptions& options) {
  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  OracleReport report;

  for (std::size_t pidx = 0; pidx < prop_keys.size(); ++pidx) {
    OraclePropReport pr;
    pr.prop = prop_keys[pidx];
    for (std::uint64_t trial = 0; trial < options.trials; ++trial) {
      ++pr.trials;
      std::mt19937_64 rng(derive_seed(options.seed, pidx * 1000003ull + trial));
      const int span = std::max(1, options.n_max - options.n_min + 1);
      const int n = options.n_min + static_cast<int>(rng() % static_cast<std::uint64_t>(span));

      bool violated = false;
      bool accepted = false;
      try {
        auto inst = std::make_shared<const TspInstance>(random_euclidean_instance(n, rng));
        CircuitModel model(inst);
        Store store = model.root_store();

        HalfcheckOptions hc;
        std::vector<std::shared_ptr<Propagator>> props = {
            make_halfcheck_propagator(pr.prop, model, rng(), hc)};

        // The target full assignment the shrink loop steers towards; it is
        // usually not a tour, which is exactly the point.
        std::vector<int> target(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          const auto values = store.domain(model.succ_var(i)).values();
          target[static_cast<std::size_t>(i)] =
              values[rng() % values.size()];
        }

        FixpointOptions fo;
        fo.check_contracts = true;  // every step audited for contraction/locality

        auto succ_assigned = [&] {
          for (int i = 0; i < n; ++i)
            if (!store.domain(model.succ_var(i)).is_assigned()) return false;
          return true;
        };

        const int guard = n * 64;
        for (int it = 0; it < guard; ++it) {
          if (store.failed() || succ_assigned()) break;
          if (rng() % 2 == 0 &&
              propagate_fixpoint(props, store, fo) == FixpointResult::Failed)
            break;
          std::vector<int> open;
          for (int i = 0; i < n; ++i)
            if (!store.domain(model.succ_var(i)).is_assigned()) open.push_back(i);
          if (open.empty()) break;
          const int i = open[rng() % open.size()];
          const Domain& d = store.domain(model.succ_var(i));
          std::vector<int> values = d.values();
          const int want = target[static_cast<std::size_t>(i)];
          if (d.contains(want) && d.size() > 1)
            std::erase(values, want);
          store.remove_value(model.succ_var(i), values[rng() % values.size()]);
        }

        if (!store.failed() && succ_assigned() &&
            propagate_fixpoint(props, store, fo) != FixpointResult::Failed) {
          accepted = true;
          std::vector<int> succ(static_cast<std::size_t>(n));
          for (int i = 0; i < n; ++i)
            succ[static_cast<std::size_t>(i)] = store.domain(model.succ_var(i)).value();
          const bool cost_pinned = store.cost_min() == store.cost_max();
          if (!cost_pinned || !model.check_solution(succ, store.cost_min())) violated = true;
        }
      } catch (const ContractViolation&) {
        violated = true;
      }

      if (accepted && !violated)
        ++pr.accepted;
      else if (!violated)
        ++pr.rejected;
      if (violated) {
        ++pr.violations;
        pr.violation_trials.push_back(trial);
      }
    }
    report.props.push_back(std::move(pr));
  }
  report.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  return report;
}

void write_oracle_report(std::ostream& out, const OracleReport& report) {
  out << "tourcp-oracle v1\n";
  for (const OraclePropReport& p : report.props) {
    out << p.prop << ": trials=" << p.trials << " accepted=" << p.accepted
        << " rejected=" << p.rejected << " violations=" << p.violations;
    if (!p.violation_trials.empty()) {
      out << " first_bad_trials=";
      const std::size_t shown = std::min<std::size_t>(p.violation_trials.size(), 8);
      for (std::size_t i = 0; i < shown; ++i) {
        if (i) out << ',';
        out << p.violation_trials[i];
      }
    }
    out << "\n";
  }
  out << "verdict = " << (report.ok() ? "PASS" : "FAIL") << "\n";
  out << "seconds = " << report.seconds << "\n";
}

}  // namespace tourcp
