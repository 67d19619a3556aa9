#include <fstream>
#include <sstream>

#include "doctest.h"
#include "induct/instance_gen.hpp"
#include "induct/mip.hpp"
#include "induct/model.hpp"
#include "induct/oracle.hpp"
#include "test_util.hpp"

using namespace induct;

namespace {

std::string lp_text(const MipModel& model) {
  std::ostringstream os;
  write_lp(model, os);
  return os.str();
}

int rows_with_prefix(const MipModel& model, const std::string& prefix) {
  int n = 0;
  for (const MipRow& row : model.rows) {
    if (row.name.rfind(prefix, 0) == 0) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("triangle model matches the hand count without copies") {
  const MipModel m = build_mip(tiny_family("fig4-triangle"), 0);
  // Hand tally: 13 arc selectors, 1+1+2 build bits, 8 departure times,
  // 8 departure SoCs, 1 charging-period counter, 1 stationary recharge,
  // 2 segment recharges = 37 variables.
  CHECK(m.vars.size() == 37);
  CHECK(m.rows.size() == 62);
  CHECK(m.vertex_count == 8);  // 7 base vertices plus the split depot end
  CHECK(m.arcs.size() == 13);
  // Every row references only registered variables.
  for (const MipRow& row : m.rows) {
    for (const auto& [var, coef] : row.terms) {
      CHECK(var >= 0);
      CHECK(var < static_cast<int>(m.vars.size()));
    }
  }
  // Charging-period counters are the only integers.
  int integers = 0;
  for (const MipVar& v : m.vars) integers += v.kind == VarKind::Integer;
  CHECK(integers == 1);
}

TEST_CASE("no dynamic stations means no dynamic rows or variables") {
  const MipModel m = build_mip(tiny_family("empty-feasible"), 0);
  CHECK(m.w.empty());
  CHECK(m.z.empty());
  CHECK(rows_with_prefix(m, "seglink") == 0);
  CHECK(rows_with_prefix(m, "dynrate") == 0);
  CHECK(rows_with_prefix(m, "dynopen") == 0);
  CHECK(rows_with_prefix(m, "dynforce") == 0);
}

TEST_CASE("copies are linked to their originals") {
  const MipModel m = build_mip(tiny_family("fig4-triangle"), 1);
  CHECK(m.stationary.size() == 2);  // original + copy
  CHECK(m.dynamic.size() == 2);
  CHECK(rows_with_prefix(m, "ylink") == 1);
  CHECK(rows_with_prefix(m, "wlink") == 1);
  CHECK(rows_with_prefix(m, "zlink") == 2);
  // Copies are free: only the originals carry objective cost.
  CHECK(m.vars[m.y[0]].obj == 20.0);
  CHECK(m.vars[m.y[1]].obj == 0.0);
  CHECK(m.vars[m.w[1]].obj == 0.0);
  // The linking row is copy - original <= 0.
  for (const MipRow& row : m.rows) {
    if (row.name.rfind("ylink", 0) != 0) continue;
    REQUIRE(row.terms.size() == 2);
    CHECK(row.sense == RowSense::LE);
    CHECK(row.rhs == 0.0);
  }
}

TEST_CASE("LP writer is deterministic and matches the golden file") {
  const Instance inst = tiny_family("fig4-triangle");
  const std::string text = lp_text(build_mip(inst, 1));
  CHECK(text == lp_text(build_mip(inst, 1)));

  std::ifstream golden(std::string(INDUCT_GOLDEN_DIR) + "/fig4.lp");
  REQUIRE(golden.good());
  std::stringstream want;
  want << golden.rdbuf();
  CHECK(text == want.str());
}

TEST_CASE("empty model writes a minimal LP skeleton") {
  const std::string text = lp_text(MipModel{});
  CHECK(text.find("Minimize") != std::string::npos);
  CHECK(text.find("End") != std::string::npos);
}

TEST_CASE("builder requires a constant price curve") {
  Instance inst = tiny_family("var-price-base");
  inst.price_curve = PriceCurve({{0, 0.3}, {8, 0.04}});
  CHECK_THROWS(build_mip(inst, 1));
}

TEST_CASE("assignment parser accepts both separators and comments") {
  std::istringstream is("# comment\n"
                        "x_0_1_2 1\n"
                        "y_0=0.5\n"
                        "\n"
                        "tau_0_3 4.25\n");
  const auto values = parse_assignment(is);
  CHECK(values.size() == 3);
  CHECK(values.at("x_0_1_2") == 1.0);
  CHECK(values.at("y_0") == 0.5);
  CHECK(values.at("tau_0_3") == 4.25);
}

TEST_CASE("warm starts satisfy every constraint and price the oracle cost") {
  for (const std::string& name : tiny_family_names()) {
    if (name == "infeasible-window") continue;
    const Instance inst = tiny_family(name);
    const OracleResult orc = oracle_solve(inst);
    REQUIRE(orc.feasible);
    const MipModel m = build_mip(inst, 1);
    std::ostringstream os;
    write_warm_start(m, inst, orc.solution, os);
    std::istringstream is(os.str());
    const auto values = parse_assignment(is);
    CAPTURE(name);
    CHECK(check_assignment(m, values).empty());
    CHECK(objective_value(m, values) ==
          doctest::Approx(orc.solution.total_cost()).epsilon(1e-9));

    // Decoding the assignment yields a validator-clean solution of equal cost.
    const Solution decoded = decode_solution(m, inst, values);
    CHECK(!validate_solution(decoded, inst).has_value());
    CHECK(decoded.total_cost() ==
          doctest::Approx(orc.solution.total_cost()).epsilon(1e-6));
  }
}

TEST_CASE("oracle refuses over-limit instances") {
  GenSpec spec;
  spec.stops = 16;  // eight stops per vehicle exceeds the per-route limit
  spec.seed = 1;
  CHECK_THROWS(oracle_solve(generate(spec)));
}

TEST_CASE("oracle keeps zero infrastructure when the bare network suffices") {
  const OracleResult orc = oracle_solve(tiny_family("empty-feasible"));
  REQUIRE(orc.feasible);
  CHECK(orc.solution.infrastructure_cost == 0.0);
  CHECK(orc.solution.config == Configuration::zeros(tiny_family("empty-feasible")));
}
