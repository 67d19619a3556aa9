#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "induct/model.hpp"

namespace induct {

enum class Topology { Clustered, Random, Mixed };

struct GenSpec {
  Topology topology = Topology::Random;
  int stops = 10;
  int vehicles = 2;
  double dynamic_fraction = 0.3;  // share of inter-stop arcs with candidates
  int segment_min = 2;
  int segment_max = 3;
  double stationary_cost_lo = 15.0;
  double stationary_cost_hi = 25.0;
  double dynamic_cost_lo = 1.5;
  double dynamic_cost_hi = 2.5;
  double segment_cost = 1e-3;
  double p_c = 5e-2;
  double p_r = 5e-2;
  double rate_boost = 4.0;
  double rate_boost_prob = 2.0 / 3.0;
  double window_slack = 1.5;  // windows from cumulative travel times x slack
  std::uint64_t seed = 1;
};

/// Synthetic benchmark instance. Regenerates with a fresh sub-seed until the
/// all-stations configuration is feasible for every vehicle.
Instance generate(const GenSpec& spec);

/// Fixed catalog of hand-built micro instances with oracle-computable optima.
Instance tiny_family(const std::string& name);
std::vector<std::string> tiny_family_names();

/// Seeded random micro instance within oracle limits (constant price).
Instance random_tiny(std::uint64_t seed);

}  // namespace induct
