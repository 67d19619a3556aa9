#include <cmath>
#include <random>

#include "doctest.h"
#include "induct/instance_gen.hpp"
#include "induct/model.hpp"
#include "induct/oracle.hpp"
#include "test_util.hpp"

using namespace induct;

TEST_CASE("energy params invariants") {
  EnergyParams ok{2, 0, 5, 0.05, 1};
  CHECK_NOTHROW(ok.check());
  CHECK_THROWS(EnergyParams{-1, 0, 5, 0.05, 1}.check());  // q_init < q_min
  CHECK_THROWS(EnergyParams{6, 0, 5, 0.05, 1}.check());   // q_init > q_max
  CHECK_THROWS(EnergyParams{3, 3, 3, 0.05, 1}.check());   // q_min == q_max
  CHECK_THROWS(EnergyParams{2, 0, 5, 0, 1}.check());      // p_c not positive
  CHECK_THROWS(EnergyParams{2, 0, 5, 0.05, 0}.check());   // delta not positive
}

TEST_CASE("price curve construction invariants") {
  CHECK_THROWS(PriceCurve(std::vector<std::pair<double, double>>{}));
  CHECK_THROWS(PriceCurve({{1.0, 0.3}}));            // must start at time 0
  CHECK_THROWS(PriceCurve({{0.0, 0.3}, {0.0, 0.2}}));  // strictly increasing
  CHECK_THROWS(PriceCurve({{0.0, -0.1}}));           // negative price
}

TEST_CASE("price evaluation") {
  const PriceCurve constant(0.3);
  CHECK(constant.is_constant());
  CHECK(constant.at(100) == 0.3);

  const PriceCurve curve({{0, 0.3}, {8, 0.04}, {13, 0.2067}});
  CHECK(!curve.is_constant());
  CHECK(curve.at(8) == 0.04);      // breakpoint belongs to the new interval
  CHECK(curve.at(7.999) == 0.3);   // intervals are right-open
  CHECK(curve.at(0) == 0.3);
  CHECK(curve.at(12.999) == 0.04);
  CHECK(curve.at(13) == 0.2067);
  CHECK(curve.at(1e6) == 0.2067);
  CHECK_THROWS(curve.at(-0.001));

  CHECK(curve.global_min() == 0.04);
  CHECK(curve.min_from(0) == 0.04);
  CHECK(curve.min_from(13) == 0.2067);
  CHECK(curve.min_upto(7.999) == 0.3);
  CHECK(curve.min_upto(8) == 0.04);
  CHECK(curve.min_upto(20) == 0.04);
}

TEST_CASE("price curve is piecewise constant on interval interiors") {
  const PriceCurve curve({{0, 0.3}, {8, 0.04}, {13, 0.2067}});
  std::mt19937_64 rng(7);
  const double edges[] = {0, 8, 13, 50};
  for (int i = 0; i < 3; ++i) {
    const double ref = curve.at(edges[i]);
    std::uniform_real_distribution<double> in(edges[i], edges[i + 1]);
    for (int trial = 0; trial < 200; ++trial) {
      double t = in(rng);
      if (t >= edges[i + 1]) continue;
      CHECK(curve.at(t) == ref);
    }
  }
}

TEST_CASE("configuration bit coupling") {
  const Instance inst = tiny_family("fig3-toy");  // 1 stationary, 1 dynamic x2
  Configuration c = Configuration::zeros(inst);
  CHECK(c.active_stations() == 0);

  // Building a segment forces the owning inverter on.
  c.set_segment(0, 1, true);
  CHECK(c.inverter_built(0));
  CHECK(c.active_segments() == 1);

  // Clearing the inverter clears its segments.
  c.set_inverter(0, false);
  CHECK(!c.segment_built(0, 1));
  CHECK(c.active_segments() == 0);

  c.set_segment_prefix(0, 2);
  CHECK(c.segment_prefix(0) == 2);
  CHECK(c.inverter_built(0));
  c.set_segment_prefix(0, 0);
  CHECK(!c.inverter_built(0));

  // packed() round-trips through equality.
  Configuration a = Configuration::zeros(inst);
  a.set_stationary(0, true);
  Configuration b = Configuration::zeros(inst);
  CHECK(a != b);
  b.set_stationary(0, true);
  CHECK(a == b);
  CHECK(a.packed() == b.packed());
}

TEST_CASE("infrastructure cost") {
  const Instance inst = tiny_family("fig3-toy");
  Configuration c = Configuration::zeros(inst);
  CHECK(infrastructure_cost(c, inst) == 0.0);  // empty sum

  c.set_stationary(0, true);  // single stationary station, cost 20
  CHECK(infrastructure_cost(c, inst) == doctest::Approx(20.0).epsilon(1e-12));

  // Dynamic station: inverter 2.0 plus two segments at 0.001 each.
  Configuration d = Configuration::zeros(inst);
  d.set_segment_prefix(0, 2);
  CHECK(infrastructure_cost(d, inst) == doctest::Approx(2.002).epsilon(1e-12));

  // Dimension mismatch is an error.
  const Instance other = tiny_family("two-vehicles");
  CHECK_THROWS(infrastructure_cost(Configuration::zeros(other), inst));
}

TEST_CASE("infrastructure cost is monotone in every bit") {
  std::mt19937_64 rng(11);
  for (const char* name : {"fig3-toy", "prefix-2of3", "redundant-stat"}) {
    const Instance inst = tiny_family(name);
    for (int trial = 0; trial < 50; ++trial) {
      Configuration c = testutil::random_config(inst, rng);
      const double base = infrastructure_cost(c, inst);
      for (int f = 0; f < c.stationary_count(); ++f) {
        Configuration up = c;
        up.set_stationary(f, true);
        CHECK(infrastructure_cost(up, inst) >= base - kTol);
      }
      for (int f = 0; f < c.dynamic_count(); ++f) {
        Configuration up = c;
        up.set_segment_prefix(f, c.segment_count(f));
        CHECK(infrastructure_cost(up, inst) >= base - kTol);
      }
    }
  }
}

namespace {

VehiclePlan two_step_plan(double soc0, double soc1, double recharge,
                          double charge_start) {
  VehiclePlan plan;
  plan.steps.push_back({0, 0.0, soc0, 0.0, -1, 0});
  plan.steps.push_back({1, 1.0, soc1, recharge, charge_start, 1});
  return plan;
}

}  // namespace

TEST_CASE("operational cost") {
  const PriceCurve constant(0.3);
  CHECK(operational_cost({}, constant, 0.05) == 0.0);

  // Single arc consuming 2 kWh, no recharge, p_c = 0.05.
  CHECK(operational_cost({two_step_plan(5, 3, 0, -1)}, constant, 0.05) ==
        doctest::Approx(0.1).epsilon(1e-12));

  // 3 kWh recharged starting at t = 9 under {0: 0.3, 8: 0.04}: the recharge is
  // priced at the band containing the charging start.
  const PriceCurve curve({{0, 0.3}, {8, 0.04}});
  const double cost =
      operational_cost({two_step_plan(5, 6, 3, 9)}, curve, 0.05);
  // consumption = 5 - 6 + 3 = 2 kWh
  CHECK(cost == doctest::Approx(3 * 0.04 + 2 * 0.05).epsilon(1e-12));

  CHECK_THROWS(operational_cost({two_step_plan(5, 3, -1, 0)}, constant, 0.05));
}

TEST_CASE("operational cost matches a direct per-arc evaluation") {
  // Cross-check against an independent accumulation over oracle plans.
  std::mt19937_64 rng(3);
  for (const char* name : {"fig3-toy", "forced-station", "two-vehicles"}) {
    const Instance inst = tiny_family(name);
    const OracleResult orc = oracle_solve(inst);
    REQUIRE(orc.feasible);
    double direct = 0;
    for (const VehiclePlan& plan : orc.solution.plans) {
      for (std::size_t i = 1; i < plan.steps.size(); ++i) {
        const Step& prev = plan.steps[i - 1];
        const Step& cur = plan.steps[i];
        double consumption = prev.soc - cur.soc + cur.recharge;
        direct += inst.params.p_c * consumption;
        if (cur.recharge > 0) {
          direct += inst.price_curve.at(cur.charge_start) * cur.recharge;
        }
      }
    }
    CHECK(operational_cost(orc.solution.plans, inst.price_curve,
                           inst.params.p_c) ==
          doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("validate_solution accepts oracle solutions") {
  for (const std::string& name : tiny_family_names()) {
    if (name == "infeasible-window") continue;
    const Instance inst = tiny_family(name);
    const OracleResult orc = oracle_solve(inst);
    REQUIRE(orc.feasible);
    const auto violation = validate_solution(orc.solution, inst);
    CAPTURE(name);
    CHECK(!violation.has_value());
  }
}

TEST_CASE("validate_solution flags a skipped stop") {
  const Instance inst = tiny_family("fig3-toy");
  Solution sol = oracle_solve(inst).solution;
  auto& steps = sol.plans[0].steps;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].route_pos == 2) {
      steps.erase(steps.begin() + i);
      break;
    }
  }
  const auto violation = validate_solution(sol, inst);
  REQUIRE(violation.has_value());
  CHECK(violation->code == "stop-order");
}

TEST_CASE("validate_solution flags a SoC dip below the minimum") {
  const Instance inst = tiny_family("fig3-toy");
  Solution sol = oracle_solve(inst).solution;
  sol.plans[0].steps[1].soc = inst.params.q_min - 0.1;
  const auto violation = validate_solution(sol, inst);
  REQUIRE(violation.has_value());
  CHECK(violation->code == "soc-lower");
}

TEST_CASE("validate_solution flags further bookkeeping defects") {
  const Instance inst = tiny_family("fig3-toy");
  const Solution good = oracle_solve(inst).solution;

  {  // wrong cached cost
    Solution sol = good;
    sol.infrastructure_cost += 1;
    REQUIRE(validate_solution(sol, inst).has_value());
    CHECK(validate_solution(sol, inst)->code == "cost");
  }
  {  // charging with the station bit cleared
    Solution sol = good;
    bool charged_dynamic = false;
    for (const Step& st : sol.plans[0].steps) {
      charged_dynamic |= st.recharge > 0;
    }
    REQUIRE(charged_dynamic);  // the optimum builds the dynamic station
    sol.config = Configuration::zeros(inst);
    sol.infrastructure_cost = 0;
    REQUIRE(validate_solution(sol, inst).has_value());
    CHECK(validate_solution(sol, inst)->code == "config");
  }
  {  // plan count mismatch
    Solution sol = good;
    sol.plans.clear();
    REQUIRE(validate_solution(sol, inst).has_value());
    CHECK(validate_solution(sol, inst)->code == "plan-count");
  }
}
