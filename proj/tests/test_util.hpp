#pragma once

#include <random>
#include <vector>

#include "induct/model.hpp"

namespace testutil {

/// Configuration with every stationary station, inverter, and segment built.
inline induct::Configuration all_built(const induct::Instance& inst) {
  induct::Configuration c = induct::Configuration::zeros(inst);
  for (int f = 0; f < c.stationary_count(); ++f) c.set_stationary(f, true);
  for (int f = 0; f < c.dynamic_count(); ++f)
    c.set_segment_prefix(f, c.segment_count(f));
  return c;
}

/// Uniformly random configuration (independent bits, segment prefixes).
inline induct::Configuration random_config(const induct::Instance& inst,
                                           std::mt19937_64& rng) {
  induct::Configuration c = induct::Configuration::zeros(inst);
  for (int f = 0; f < c.stationary_count(); ++f) {
    c.set_stationary(f, rng() & 1);
  }
  for (int f = 0; f < c.dynamic_count(); ++f) {
    c.set_segment_prefix(
        f, std::uniform_int_distribution<int>(0, c.segment_count(f))(rng));
  }
  return c;
}

}  // namespace testutil
