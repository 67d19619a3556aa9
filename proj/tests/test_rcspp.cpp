#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "induct/instance_gen.hpp"
#include "induct/instance_io.hpp"
#include "induct/model.hpp"
#include "induct/oracle.hpp"
#include "induct/rcspp.hpp"
#include "induct/vehicle_graph.hpp"
#include "test_util.hpp"

using namespace induct;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SolveOptions exact_options() {
  SolveOptions opts;
  opts.beta_min = kInf;
  return opts;
}

struct Label {
  double gamma, rho, tau;
};

bool pairwise_dominated(const std::vector<Label>& stored, const Label& q,
                        bool backward) {
  for (const Label& s : stored) {
    const bool dom = backward
                         ? dominates_backward(s.gamma, s.rho, s.tau, q.gamma,
                                              q.rho, q.tau)
                         : dominates_forward(s.gamma, s.rho, s.tau, q.gamma,
                                             q.rho, q.tau);
    if (dom) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("pairwise dominance relations") {
  // Reflexivity.
  CHECK(dominates_forward(1, 5, 3, 1, 5, 3));
  CHECK(dominates_backward(1, 5, 3, 1, 5, 3));

  // Forward: cheaper, more charged, earlier.
  CHECK(dominates_forward(1, 5, 3, 2, 4, 4));
  CHECK(!dominates_forward(1, 5, 3, 0.5, 4, 4));  // worse cost
  CHECK(!dominates_forward(1, 3, 3, 2, 4, 4));    // less charged
  CHECK(!dominates_forward(1, 5, 5, 2, 4, 4));    // later

  // Backward: cheaper, less charged (less still to repay), later.
  CHECK(dominates_backward(1, 2, 5, 2, 3, 4));
  CHECK(!dominates_backward(1, 4, 5, 2, 3, 4));
  CHECK(!dominates_backward(1, 2, 3, 2, 3, 4));
}

TEST_CASE("dominance store basics") {
  DominanceStore store(false);
  CHECK(!store.is_dominated(0, 0, 0));  // empty store

  store.insert(1, 5, 3, 0);
  CHECK(store.is_dominated(2, 5, 3));   // equal resources, higher cost
  CHECK(store.is_dominated(1, 5, 3));   // identical label
  CHECK(!store.is_dominated(0.5, 0, 9));  // cheaper than everything stored

  // Both prefix rejection bounds fire: every stored label in the affordable
  // prefix has less charge and earlier-or-equal... construct the reverse.
  DominanceStore bounds(false);
  bounds.insert(1, 4, 5, 0);
  bounds.insert(2, 3, 6, 1);
  // Query cost 3 covers the whole store; prefix-max rho = 4 <= 6 and
  // prefix-min tau = 5 >= 2, so dominance is rejected without scanning.
  CHECK(!bounds.is_dominated(3, 6, 2));
  CHECK(!pairwise_dominated({{1, 4, 5}, {2, 3, 6}}, {3, 6, 2}, false));
}

TEST_CASE("lazy dominance agrees with the pairwise scan") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0, 10);
  std::uniform_int_distribution<int> coarse(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const bool backward = trial % 2 == 1;
    DominanceStore store(backward);
    std::vector<Label> stored;
    for (int i = 0; i < 40; ++i) {
      // Coarse grid values provoke ties in every component.
      Label l{static_cast<double>(coarse(rng)), static_cast<double>(coarse(rng)),
              static_cast<double>(coarse(rng))};
      if (i % 3 == 0) l = {u(rng), u(rng), u(rng)};
      store.insert(l.gamma, l.rho, l.tau, i);
      stored.push_back(l);
    }
    for (int q = 0; q < 25; ++q) {
      Label query{static_cast<double>(coarse(rng)),
                  static_cast<double>(coarse(rng)),
                  static_cast<double>(coarse(rng))};
      if (q % 3 == 0) query = {u(rng), u(rng), u(rng)};
      CHECK(store.is_dominated(query.gamma, query.rho, query.tau) ==
            pairwise_dominated(stored, query, backward));
    }
  }
}

TEST_CASE("direct path on a station-free graph") {
  const Instance inst = tiny_family("empty-feasible");
  const VehicleGraph g =
      build_vehicle_graph(inst, Configuration::zeros(inst), 0);
  const SolveResult res = solve_subproblem(g, inst, exact_options());
  REQUIRE(res.feasible);
  CHECK(res.cost == doctest::Approx(0.1).epsilon(1e-12));  // 2 kWh at 0.05
  CHECK(res.plan.steps.size() == 3);
}

TEST_CASE("insufficient charge with all stations disabled is infeasible") {
  const Instance inst = tiny_family("fig3-toy");  // needs 9 kWh, q_init 5
  const VehicleGraph g =
      build_vehicle_graph(inst, Configuration::zeros(inst), 0);
  CHECK(!solve_subproblem(g, inst, exact_options()).feasible);
}

TEST_CASE("returned paths validate as single-vehicle solutions") {
  for (const std::string& name : tiny_family_names()) {
    if (name == "infeasible-window") continue;
    const Instance inst = tiny_family(name);
    const Configuration full = testutil::all_built(inst);
    Solution sol;
    sol.config = full;
    for (std::size_t k = 0; k < inst.routes.size(); ++k) {
      const VehicleGraph g =
          build_vehicle_graph(inst, full, static_cast<int>(k));
      const SolveResult res = solve_subproblem(g, inst, exact_options());
      CAPTURE(name);
      REQUIRE(res.feasible);
      sol.plans.push_back(res.plan);
    }
    sol.infrastructure_cost = infrastructure_cost(full, inst);
    sol.operational_cost =
        operational_cost(sol.plans, inst.price_curve, inst.params.p_c);
    CHECK(!validate_solution(sol, inst).has_value());
  }
}

TEST_CASE("forward-only search returns identical costs") {
  std::mt19937_64 rng(41);
  for (const std::string& name : tiny_family_names()) {
    const Instance inst = tiny_family(name);
    for (int trial = 0; trial < 5; ++trial) {
      const Configuration c = trial == 0 ? testutil::all_built(inst)
                                         : testutil::random_config(inst, rng);
      for (std::size_t k = 0; k < inst.routes.size(); ++k) {
        const VehicleGraph g =
            build_vehicle_graph(inst, c, static_cast<int>(k));
        const SolveResult bi = solve_subproblem(g, inst, exact_options());
        SolveOptions fwd = exact_options();
        fwd.disable_backward = true;
        const SolveResult fw = solve_subproblem(g, inst, fwd);
        CAPTURE(name);
        REQUIRE(bi.feasible == fw.feasible);
        if (bi.feasible) {
          CHECK(bi.cost == doctest::Approx(fw.cost).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("disabling dominance never changes the exact optimum") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Instance inst = random_tiny(seed);
    const Configuration full = testutil::all_built(inst);
    const VehicleGraph g = build_vehicle_graph(inst, full, 0);
    const SolveResult with = solve_subproblem(g, inst, exact_options());
    SolveOptions nodom = exact_options();
    nodom.disable_dominance = true;
    const SolveResult without = solve_subproblem(g, inst, nodom);
    CAPTURE(seed);
    REQUIRE(with.feasible == without.feasible);
    if (with.feasible) {
      CHECK(with.cost == doctest::Approx(without.cost).epsilon(1e-9));
    }
  }
}

TEST_CASE("heuristic mode never beats the exact optimum") {
  GenSpec spec;
  spec.stops = 8;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    spec.seed = seed;
    const Instance inst = generate(spec);
    const Configuration full = testutil::all_built(inst);
    for (std::size_t k = 0; k < inst.routes.size(); ++k) {
      const VehicleGraph g =
          build_vehicle_graph(inst, full, static_cast<int>(k));
      const SolveResult exact = solve_subproblem(g, inst, exact_options());
      SolveOptions heur;
      heur.beta_min = 0;  // may switch to heuristic mode immediately
      const SolveResult quick = solve_subproblem(g, inst, heur);
      CAPTURE(seed);
      REQUIRE(exact.feasible);
      if (quick.feasible) CHECK(quick.cost >= exact.cost - 1e-9);
    }
  }
}

TEST_CASE("solver is deterministic") {
  const Instance inst = tiny_family("fig3-toy");
  const VehicleGraph g =
      build_vehicle_graph(inst, testutil::all_built(inst), 0);
  const SolveResult a = solve_subproblem(g, inst, exact_options());
  const SolveResult b = solve_subproblem(g, inst, exact_options());
  REQUIRE(a.feasible);
  CHECK(a.cost == b.cost);
  CHECK(a.stats.pops == b.stats.pops);
  REQUIRE(a.plan.steps.size() == b.plan.steps.size());
  for (std::size_t i = 0; i < a.plan.steps.size(); ++i) {
    CHECK(a.plan.steps[i].vertex == b.plan.steps[i].vertex);
    CHECK(a.plan.steps[i].departure == b.plan.steps[i].departure);
    CHECK(a.plan.steps[i].soc == b.plan.steps[i].soc);
  }
}

TEST_CASE("trace output reports pops") {
  const Instance inst = tiny_family("fig4-triangle");
  const VehicleGraph g =
      build_vehicle_graph(inst, testutil::all_built(inst), 0);
  std::ostringstream trace;
  SolveOptions opts = exact_options();
  opts.trace = &trace;
  const SolveResult res = solve_subproblem(g, inst, opts);
  REQUIRE(res.feasible);
  long lines = 0;
  std::istringstream is(trace.str());
  for (std::string line; std::getline(is, line);) ++lines;
  CHECK(lines >= res.stats.pops);
  CHECK(lines > 0);
}
