#include <algorithm>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "testutil.hpp"
#include "tourcp/branching.hpp"
#include "tourcp/circuit.hpp"
#include "tourcp/harness.hpp"
#include "tourcp/portfolio.hpp"

using namespace tourcp;

namespace {

std::shared_ptr<const TspInstance> random_instance(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return std::make_shared<const TspInstance>(random_euclidean_instance(n, rng));
}

Asset complete_asset(const CircuitModel& model, std::uint64_t seed, double epsilon = 0.0) {
  auto brancher = std::make_shared<WarnsdorffBrancher>(model.instance_ptr(), 0, epsilon, seed);
  return Asset::make("complete", model.standard_propagators(), std::move(brancher),
                     model.var_count(), /*complete=*/true, /*nogood_recording=*/true,
                     RestartPolicy{true, 32}, seed);
}

}  // namespace

TEST_CASE("no-good extraction from a decision path") {
  CHECK(extract_nogoods({}, true).empty());

  const std::vector<Decision> path{
      Decision{VarId(0), 3, Polarity::Assign},
      Decision{VarId(1), 4, Polarity::Exclude},
      Decision{VarId(2), 5, Polarity::Assign},
      Decision{VarId(3), 6, Polarity::Exclude},
  };
  const auto ngs = extract_nogoods(path, /*origin_complete=*/true);
  REQUIRE(ngs.size() == 2);
  CHECK(ngs[0].decisions ==
        std::vector<Decision>{Decision{VarId(0), 3, Polarity::Assign},
                              Decision{VarId(1), 4, Polarity::Assign}});
  CHECK(ngs[1].decisions ==
        std::vector<Decision>{Decision{VarId(0), 3, Polarity::Assign},
                              Decision{VarId(2), 5, Polarity::Assign},
                              Decision{VarId(3), 6, Polarity::Assign}});
  CHECK_FALSE(ngs[0].origin_incomplete);

  const auto tagged = extract_nogoods(path, /*origin_complete=*/false);
  CHECK(tagged[0].origin_incomplete);
}

TEST_CASE("single-decision no-good from a refuted root branch") {
  const std::vector<Decision> path{Decision{VarId(7), 3, Polarity::Exclude}};
  const auto ngs = extract_nogoods(path, true);
  REQUIRE(ngs.size() == 1);
  CHECK(ngs[0].decisions == std::vector<Decision>{Decision{VarId(7), 3, Polarity::Assign}});
}

TEST_CASE("no-good store applies the unit rule") {
  std::vector<Domain> doms(2, Domain(4));
  Store store{std::move(doms)};

  auto ngs = std::make_shared<NoGoodStore>(2);
  NoGood ng;
  ng.decisions = {Decision{VarId(0), 1, Polarity::Assign}, Decision{VarId(1), 2, Polarity::Assign}};
  ngs->add(ng);

  SUBCASE("one pending assignment removes its value") {
    store.assign(VarId(0), 1);
    CHECK(ngs->propagate(store) == PropStatus::NotAtFixpoint);
    CHECK_FALSE(store.domain(VarId(1)).contains(2));
  }
  SUBCASE("all assignments held fails the store") {
    store.assign(VarId(0), 1);
    store.assign(VarId(1), 2);
    CHECK(ngs->propagate(store) == PropStatus::Failed);
    CHECK(store.failed());
  }
  SUBCASE("a disabled no-good stays quiet") {
    store.remove_value(VarId(0), 1);
    CHECK(ngs->propagate(store) == PropStatus::AtFixpoint);
    CHECK(store.domain(VarId(1)).contains(2));
  }
}

TEST_CASE("an asset with the fail propagator emits nothing and exhausts") {
  auto inst = random_instance(5, 11);
  CircuitModel model(inst);
  auto props = model.standard_propagators();
  props.push_back(std::make_shared<FailPropagator>());
  Asset asset = Asset::make("failing", std::move(props),
                            std::make_shared<WarnsdorffBrancher>(inst, 0, 0.0, 1),
                            model.var_count(), true, true, RestartPolicy{true, 32}, 1);
  CHECK_FALSE(asset.complete);  // the claim is withdrawn automatically

  SharedIncumbent incumbent;
  int emitted = 0;
  auto outcome = search_restarting(
      asset, model.root_store(), incumbent,
      [&](std::span<const int>, long long) { ++emitted; });
  CHECK(outcome.exhausted);
  CHECK(emitted == 0);
  CHECK_FALSE(incumbent.best().has_value());
}

TEST_CASE("three cities have a single tour and the search proves it") {
  auto inst = random_instance(3, 5);
  CircuitModel model(inst);
  Asset asset = complete_asset(model, 1);
  SharedIncumbent incumbent;
  auto outcome = search_restarting(asset, model.root_store(), incumbent,
                                   [](std::span<const int>, long long) {});
  CHECK(outcome.exhausted);
  REQUIRE(incumbent.best().has_value());
  const long long triangle =
      inst->weight(0, 1) + inst->weight(1, 2) + inst->weight(2, 0);
  CHECK(incumbent.best()->cost == triangle);
}

TEST_CASE("branch and bound matches the subset-DP optimum on 8 cities") {
  for (std::uint64_t seed : {101u, 102u, 103u}) {
    auto inst = random_instance(8, seed);
    CircuitModel model(inst);
    Asset asset = complete_asset(model, seed);
    SharedIncumbent incumbent;
    auto outcome = search_restarting(asset, model.root_store(), incumbent,
                                     [](std::span<const int>, long long) {});
    CHECK(outcome.exhausted);
    REQUIRE(incumbent.best().has_value());
    CHECK(incumbent.best()->cost == tourcp::testutil::held_karp_optimum(*inst));
    CHECK(model.check_solution(
        std::span<const int>(incumbent.best()->assignment.data(), 8), incumbent.best()->cost));
  }
}

TEST_CASE("search statistics are reproducible for a fixed seed") {
  auto inst = random_instance(8, 42);
  CircuitModel model(inst);
  SearchStats first;
  for (int run = 0; run < 2; ++run) {
    Asset asset = complete_asset(model, 99);
    SharedIncumbent incumbent;
    auto outcome = search_restarting(asset, model.root_store(), incumbent,
                                     [](std::span<const int>, long long) {});
    if (run == 0)
      first = outcome.stats;
    else {
      CHECK(outcome.stats.nodes == first.nodes);
      CHECK(outcome.stats.failures == first.failures);
      CHECK(outcome.stats.restarts == first.restarts);
      CHECK(outcome.stats.solutions == first.solutions);
    }
  }
}

TEST_CASE("portfolio ignores a failing asset and still proves the optimum") {
  auto inst = random_instance(7, 21);
  CircuitModel model(inst);
  std::vector<Asset> assets;
  assets.push_back(complete_asset(model, 3));
  auto fail_props = model.standard_propagators();
  fail_props.push_back(std::make_shared<FailPropagator>());
  assets.push_back(Asset::make("stress", std::move(fail_props),
                               std::make_shared<WarnsdorffBrancher>(inst, 0, 0.0, 4),
                               model.var_count(), true, false, RestartPolicy{true, 32}, 4));

  auto outcome = portfolio_run(assets, model.root_store());
  CHECK(outcome.proven_optimal);
  REQUIRE(outcome.incumbent.has_value());
  CHECK(outcome.incumbent->cost == tourcp::testutil::held_karp_optimum(*inst));
  CHECK_FALSE(outcome.proven_infeasible());
}

TEST_CASE("a single-asset portfolio equals the bare search") {
  auto inst = random_instance(7, 33);
  CircuitModel model(inst);

  Asset bare = complete_asset(model, 8);
  SharedIncumbent incumbent;
  auto solo = search_restarting(bare, model.root_store(), incumbent,
                                [](std::span<const int>, long long) {});

  std::vector<Asset> assets;
  assets.push_back(complete_asset(model, 8));
  auto outcome = portfolio_run(assets, model.root_store());

  CHECK(outcome.proven_optimal == solo.exhausted);
  REQUIRE(outcome.incumbent.has_value());
  CHECK(outcome.incumbent->cost == incumbent.best()->cost);
  CHECK(outcome.asset_stats[0].nodes == solo.stats.nodes);
}

TEST_CASE("no-good hygiene at the portfolio boundary") {
  auto inst = random_instance(5, 55);
  CircuitModel model(inst);
  Asset complete = complete_asset(model, 1);
  auto props = model.standard_propagators();
  props.push_back(std::make_shared<FailPropagator>());
  Asset incomplete = Asset::make("hc", std::move(props),
                                 std::make_shared<WarnsdorffBrancher>(inst, 0, 0.0, 2),
                                 model.var_count(), false, false, RestartPolicy{true, 32}, 2);

  NoGood from_incomplete;
  from_incomplete.decisions = {Decision{VarId(0), 1, Polarity::Assign}};
  from_incomplete.origin_incomplete = true;
  NoGood from_complete;
  from_complete.decisions = {Decision{VarId(0), 2, Polarity::Assign}};
  from_complete.origin_incomplete = false;

  CHECK_FALSE(portfolio_inject_nogood(complete, from_incomplete));
  CHECK(portfolio_inject_nogood(complete, from_complete));
  CHECK(portfolio_inject_nogood(incomplete, from_incomplete));
  CHECK(portfolio_inject_nogood(incomplete, from_complete));

  CHECK(complete.nogoods->size() == 1);
  for (const NoGood& ng : complete.nogoods->entries()) CHECK_FALSE(ng.origin_incomplete);
  CHECK(incomplete.nogoods->size() == 2);
}

TEST_CASE("enumeration mode visits every solution exactly once") {
  auto inst = random_instance(5, 77);
  CircuitModel model(inst);
  Asset asset = complete_asset(model, 6);
  asset.restarts.enabled = false;
  SharedIncumbent incumbent;
  std::vector<std::vector<int>> seen;
  SearchOptions options;
  options.mode = SearchMode::EnumerateAll;
  auto outcome = search_restarting(
      asset, model.root_store(), incumbent,
      [&](std::span<const int> a, long long) {
        seen.emplace_back(a.begin(), a.begin() + 5);
      },
      options);
  CHECK(outcome.exhausted);

  auto expected = tourcp::testutil::all_circuit_successors(5);
  std::sort(seen.begin(), seen.end());
  std::sort(expected.begin(), expected.end());
  CHECK(seen == expected);
}
