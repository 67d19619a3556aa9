#include <cmath>
#include <random>

#include "doctest.h"
#include "induct/ils.hpp"
#include "induct/instance_gen.hpp"
#include "induct/model.hpp"
#include "induct/oracle.hpp"
#include "test_util.hpp"

using namespace induct;

namespace {

IlsParams tiny_params() {
  IlsParams p;
  p.time_limit = -1;      // iteration-bounded
  p.max_iterations = 60;
  return p;
}

// Two disjoint out-and-back routes, one stationary candidate reachable per
// route. Removing one station cannot affect the other vehicle.
Instance disjoint_two_routes() {
  Instance inst;
  inst.vertices = {{0, 0}, {3, 0}, {-3, 0}, {1.5, 1}, {-1.5, 1}};
  inst.arcs = {{0, 1, 3, 3},   {1, 0, 3, 3},    {0, 2, 3, 3},  {2, 0, 3, 3},
               {0, 3, 1.6, 1.6}, {3, 1, 1.6, 1.6}, {0, 4, 1.6, 1.6},
               {4, 2, 1.6, 1.6}};
  inst.stationary = {{"sA", 3, 2.0, 20.0}, {"sB", 4, 2.0, 21.0}};
  inst.routes = {{"v0", {0, 1, 0}, {{0, 30}, {0, 30}, {0, 40}}},
                 {"v1", {0, 2, 0}, {{0, 30}, {0, 30}, {0, 40}}}};
  inst.params = {6, 0, 8, 0.05, 1};
  inst.price_curve = PriceCurve(0.05);
  inst.depot_start = 0;
  inst.depot_end = 0;
  inst.build_index();
  inst.check();
  return inst;
}

// Single gap bridged by a one-segment dynamic station; infeasible without it.
Instance single_segment_bridge() {
  Instance inst;
  inst.vertices = {{0, 0}, {4, 0}, {1, 0.1}, {2, 0.1}};
  inst.arcs = {{0, 1, 2, 3},      {1, 0, 2, 1},      {0, 2, 0.5, 0.5},
               {2, 3, 1, 0.5},    {3, 1, 0.5, 0.5}};
  inst.dynamic.push_back({"bridge", 3.0, 2.0, {{2, 3, 1e-3}}});
  inst.routes = {{"v0", {0, 1, 0}, {{0, 30}, {0, 30}, {0, 40}}}};
  inst.params = {2, 0, 4, 0.05, 1};
  inst.price_curve = PriceCurve(0.05);
  inst.depot_start = 0;
  inst.depot_end = 0;
  inst.build_index();
  inst.check();
  return inst;
}

}  // namespace

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(IlsParams{}.check());
  IlsParams p;
  p.phi = 0;
  CHECK_THROWS(p.check());
  p = IlsParams{};
  p.zeta = 0;
  CHECK_THROWS(p.check());
  p = IlsParams{};
  p.epsilon = 0;
  CHECK_THROWS(p.check());
  p = IlsParams{};
  p.kappa = 0;
  CHECK_THROWS(p.check());
}

TEST_CASE("evaluator caches full configurations") {
  const Instance inst = tiny_family("fig3-toy");
  Evaluator eval(inst, 2.5e5, 1);
  const Configuration full = testutil::all_built(inst);
  const EvalResult first = eval.evaluate(full);
  REQUIRE(first.feasible);
  const long solves = eval.solves();
  const EvalResult again = eval.evaluate(full);
  CHECK(eval.solves() == solves);  // second call performs no subproblem solves
  CHECK(again.total == first.total);
}

TEST_CASE("evaluator reuses plans of unaffected vehicles") {
  // The initial charge covers both routes, so no vehicle charges anywhere
  // and dropping a station invalidates no plan at all.
  {
    const Instance inst = disjoint_two_routes();
    Evaluator eval(inst, 2.5e5, 1);
    const Configuration full = testutil::all_built(inst);
    REQUIRE(eval.evaluate(full).feasible);
    const long solves = eval.solves();
    Configuration removed = full;
    removed.set_stationary(0, false);
    CHECK(eval.evaluate(removed, &full).feasible);
    CHECK(eval.solves() == solves);  // both plans carried over
  }
  // With a short initial charge every vehicle must charge, so dropping sA
  // forces a re-solve of v0 only; v1 cannot reach sA and keeps its plan.
  {
    Instance inst = disjoint_two_routes();
    inst.params.q_init = 4;
    Evaluator eval(inst, 2.5e5, 1);
    const Configuration full = testutil::all_built(inst);
    REQUIRE(eval.evaluate(full).feasible);
    const long solves = eval.solves();
    Configuration removed = full;
    removed.set_stationary(0, false);
    const EvalResult res = eval.evaluate(removed, &full);
    CHECK(!res.feasible);  // v0 has no other charging option
    CHECK(eval.solves() == solves + 1);
  }
}

TEST_CASE("evaluator cache coherence across clear") {
  std::mt19937_64 rng(1);
  const Instance inst = tiny_family("redundant-stat");
  Evaluator eval(inst, 2.5e5, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const Configuration c = testutil::random_config(inst, rng);
    const EvalResult a = eval.evaluate(c);
    const bool feasible = a.feasible;
    const double total = a.total;
    eval.clear();
    const EvalResult b = eval.evaluate(c);
    CHECK(b.feasible == feasible);
    if (feasible) CHECK(std::abs(b.total - total) <= 1e-9);
  }
}

TEST_CASE("infeasible instance is detected at initialization") {
  const Instance inst = tiny_family("infeasible-window");
  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(1);
  CHECK_THROWS_AS(initialize(inst, tiny_params(), eval, rng, nullptr),
                  InfeasibleError);
  CHECK_THROWS_AS(run(inst, tiny_params()), InfeasibleError);
}

TEST_CASE("initialization returns a feasible configuration") {
  for (const char* name : {"empty-feasible", "fig3-toy", "two-vehicles"}) {
    const Instance inst = tiny_family(name);
    Evaluator eval(inst, 2.5e5, 1);
    std::mt19937_64 rng(5);
    long draws = 0;
    const Configuration c = initialize(inst, tiny_params(), eval, rng, &draws);
    CAPTURE(name);
    CHECK(eval.feasible(c));
    CHECK(draws >= 1);
  }
}

TEST_CASE("tightening finds the minimal feasible segment prefix") {
  const Instance inst = tiny_family("prefix-2of3");
  Evaluator eval(inst, 2.5e5, 1);
  Configuration start = Configuration::zeros(inst);
  start.set_segment_prefix(0, 3);  // dynamic station fully built, no fallback
  const Configuration tight = tighten_configuration(start, 0, eval);
  CHECK(tight.segment_prefix(0) == 2);
  CHECK(eval.feasible(tight));

  // Minimality: the next-shorter prefix is infeasible.
  Configuration shorter = tight;
  shorter.set_segment_prefix(0, 1);
  CHECK(!eval.feasible(shorter));

  // Cross-check against a linear scan over all prefixes.
  for (int r = 0; r <= 3; ++r) {
    Configuration c = Configuration::zeros(inst);
    c.set_segment_prefix(0, r);
    CHECK(eval.feasible(c) == (r >= 2));
  }
}

TEST_CASE("tightening clears a useless dynamic station entirely") {
  const Instance inst = tiny_family("fig4-triangle");  // direct route feasible
  Evaluator eval(inst, 2.5e5, 1);
  const Configuration tight =
      tighten_configuration(testutil::all_built(inst), 0, eval);
  CHECK(tight.segment_prefix(0) == 0);
  CHECK(!tight.inverter_built(0));
}

TEST_CASE("tightening keeps a mandatory single segment") {
  const Instance inst = single_segment_bridge();
  Evaluator eval(inst, 2.5e5, 1);
  const Configuration tight =
      tighten_configuration(testutil::all_built(inst), 0, eval);
  CHECK(tight.segment_prefix(0) == 1);
  Configuration empty = Configuration::zeros(inst);
  CHECK(!eval.feasible(empty));
}

TEST_CASE("operators are the identity on empty pools") {
  const Instance inst = tiny_family("empty-feasible");
  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(3);
  const Configuration none = Configuration::zeros(inst);
  // No active stations: strip/remove/swap pools are empty.
  for (Operator op : {Operator::StripDyn, Operator::RemoveStat,
                      Operator::SwapToDyn, Operator::SwapToStat}) {
    CHECK(apply_operator(op, none, inst, tiny_params(), eval, rng) == none);
  }
  // No dynamic candidates exist at all: the dynamic add has no counterpart.
  const Configuration full = testutil::all_built(inst);
  CHECK(apply_operator(Operator::AddDyn, full, inst, tiny_params(), eval,
                       rng) == full);
}

TEST_CASE("removal operator drops a redundant station") {
  const Instance inst = tiny_family("redundant-stat");
  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(7);
  const Configuration full = testutil::all_built(inst);  // both stations
  const double before = eval.evaluate(full).total;
  const Configuration after =
      apply_operator(Operator::RemoveStat, full, inst, tiny_params(), eval, rng);
  CHECK(after.active_stationary() == 1);
  CHECK(eval.evaluate(after).total < before);
}

TEST_CASE("swap to a cheaper stationary station is accepted") {
  const Instance inst = tiny_family("swap-cheaper-stat");
  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(9);
  Configuration dyn_only = Configuration::zeros(inst);
  dyn_only.set_segment_prefix(0, 2);  // pricey dynamic station active
  REQUIRE(eval.feasible(dyn_only));
  const double before = eval.evaluate(dyn_only).total;
  const Configuration after = apply_operator(Operator::SwapToStat, dyn_only,
                                             inst, tiny_params(), eval, rng);
  CHECK(after.stationary_built(0));
  CHECK(!after.inverter_built(0));
  CHECK(eval.evaluate(after).total < before);
}

TEST_CASE("the lower-bound screen suppresses hopeless evaluations") {
  const Instance inst = tiny_family("redundant-stat");
  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(11);
  Configuration one = Configuration::zeros(inst);
  one.set_stationary(0, true);
  REQUIRE(eval.feasible(one));
  const long solves = eval.solves();
  OperatorStats stats;
  // Adding the second station can only raise the cost by its build price,
  // which already exceeds any routing saving, so the screen must fire.
  const Configuration after = apply_operator(Operator::AddStat, one, inst,
                                             tiny_params(), eval, rng, &stats);
  CHECK(after == one);
  CHECK(eval.solves() == solves);  // every candidate screened out
  CHECK(stats.accepts == 0);
}

TEST_CASE("local search leaves an optimal configuration unchanged in cost") {
  for (const char* name : {"redundant-stat", "forced-station", "fig3-toy"}) {
    const Instance inst = tiny_family(name);
    const OracleResult orc = oracle_solve(inst);
    REQUIRE(orc.feasible);
    Evaluator eval(inst, 2.5e5, 1);
    std::mt19937_64 rng(13);
    const Configuration out =
        local_search(orc.solution.config, inst, tiny_params(), eval, rng);
    CAPTURE(name);
    CHECK(eval.evaluate(out).total ==
          doctest::Approx(orc.solution.total_cost()).epsilon(1e-9));
  }
}

TEST_CASE("perturbation is deterministic under a fixed seed") {
  const Instance inst = tiny_family("redundant-stat");
  Evaluator eval(inst, 2.5e5, 1);
  const Configuration full = testutil::all_built(inst);
  std::mt19937_64 rng_a(21), rng_b(21);
  bool fa = false, fb = false;
  const Configuration a = perturb(full, 1, inst, eval, rng_a, &fa);
  const Configuration b = perturb(full, 1, inst, eval, rng_b, &fb);
  CHECK(a == b);
  CHECK(fa == fb);
  CHECK(eval.feasible(a));
}

TEST_CASE("full teardown is repaired from the sampled pool") {
  const Instance inst = tiny_family("forced-station");
  Evaluator eval(inst, 2.5e5, 1);
  const Configuration full = testutil::all_built(inst);  // both stations
  REQUIRE(eval.feasible(full));
  std::mt19937_64 rng(31);
  bool fallback = false;
  // Strength 2 tears down every station; the repair loop re-samples from the
  // now-inactive pool until the mandatory station is back.
  const Configuration out = perturb(full, 2, inst, eval, rng, &fallback);
  CHECK(!fallback);
  CHECK(eval.feasible(out));
  CHECK(out.stationary_built(0));  // the only station that restores feasibility
}

TEST_CASE("perturbation falls back to the incumbent when repair is impossible") {
  // A station-free instance whose bare network is infeasible: nothing can be
  // added back, so the liveness guard must return the incumbent.
  Instance inst;
  inst.vertices = {{0, 0}, {3, 0}};
  inst.arcs = {{0, 1, 3, 3}, {1, 0, 3, 3}};
  inst.routes = {{"v0", {0, 1, 0}, {{0, 30}, {0, 30}, {0, 40}}}};
  inst.params = {2, 0, 4, 0.05, 1};  // route needs 6 kWh, none available
  inst.price_curve = PriceCurve(0.05);
  inst.depot_start = 0;
  inst.depot_end = 0;
  inst.build_index();
  inst.check();

  Evaluator eval(inst, 2.5e5, 1);
  std::mt19937_64 rng(31);
  bool fallback = false;
  const Configuration incumbent = Configuration::zeros(inst);
  const Configuration out = perturb(incumbent, 1, inst, eval, rng, &fallback);
  CHECK(fallback);
  CHECK(out == incumbent);
}

TEST_CASE("zero time limit returns the locally searched initial solution") {
  IlsParams p;
  p.time_limit = 0;
  p.seed = 3;
  const RunResult res = run(tiny_family("fig3-toy"), p);
  CHECK(res.feasible);
  CHECK(res.stats.iterations == 0);
  CHECK(!validate_solution(res.best, tiny_family("fig3-toy")).has_value());
}

TEST_CASE("runs are bit-deterministic under a fixed seed") {
  IlsParams p = tiny_params();
  p.seed = 7;
  const Instance inst = tiny_family("two-vehicles");
  const RunResult a = run(inst, p);
  const RunResult b = run(inst, p);
  REQUIRE(a.feasible);
  CHECK(a.best.config == b.best.config);
  CHECK(a.best.total_cost() == b.best.total_cost());
  CHECK(a.stats.iterations == b.stats.iterations);
  CHECK(a.stats.trajectory == b.stats.trajectory);
  for (int i = 0; i < kOperatorCount; ++i) {
    CHECK(a.stats.ops[i].attempts == b.stats.ops[i].attempts);
    CHECK(a.stats.ops[i].accepts == b.stats.ops[i].accepts);
  }
}

TEST_CASE("incumbent trajectory never worsens beyond the tolerance") {
  IlsParams p = tiny_params();
  p.seed = 11;
  const RunResult res = run(tiny_family("prefix-2of3"), p);
  REQUIRE(res.feasible);
  REQUIRE(!res.stats.trajectory.empty());
  for (std::size_t i = 1; i < res.stats.trajectory.size(); ++i) {
    CHECK(res.stats.trajectory[i].second <=
          res.stats.trajectory[i - 1].second + p.epsilon + 1e-12);
  }
}

TEST_CASE("the search reaches oracle optima on catalog instances") {
  IlsParams p = tiny_params();
  for (const char* name :
       {"fig4-triangle", "fig3-toy", "forced-station", "swap-cheaper-stat"}) {
    const Instance inst = tiny_family(name);
    const OracleResult orc = oracle_solve(inst);
    REQUIRE(orc.feasible);
    p.seed = 1;
    const RunResult res = run(inst, p);
    CAPTURE(name);
    REQUIRE(res.feasible);
    CHECK(res.best.total_cost() ==
          doctest::Approx(orc.solution.total_cost()).epsilon(1e-9));
    CHECK(!validate_solution(res.best, inst).has_value());
  }
}

TEST_CASE("multi-threaded evaluation matches single-threaded results") {
  const Instance inst = tiny_family("two-vehicles");
  Evaluator seq(inst, 2.5e5, 1);
  Evaluator par(inst, 2.5e5, 2);
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Configuration c = testutil::random_config(inst, rng);
    const EvalResult a = seq.evaluate(c);
    const EvalResult b = par.evaluate(c);
    CHECK(a.feasible == b.feasible);
    if (a.feasible) CHECK(a.total == doctest::Approx(b.total).epsilon(1e-12));
  }
}
