#pragma once

#include <optional>

#include "induct/model.hpp"

namespace induct {

struct OracleLimits {
  int max_stations = 12;
  int max_vehicles = 3;
  int max_stops = 6;  // per vehicle, excluding depots
};

struct OracleResult {
  bool feasible = false;
  Solution solution;
  long configs_tried = 0;
};

/// Exhaustive per-vehicle search over gap choices (direct, stationary detour
/// with every discrete duration, full dynamic traversal). Returns the optimal
/// routing cost and plan for a fixed configuration, or nullopt if infeasible.
std::optional<VehiclePlan> oracle_vehicle_plan(const Instance& instance,
                                               const Configuration& config,
                                               int vehicle);

/// Enumerates all stationary subsets x per-dynamic-station segment prefixes
/// and solves every vehicle exhaustively. Refuses instances over the limits.
OracleResult oracle_solve(const Instance& instance,
                          const OracleLimits& limits = {});

}  // namespace induct
