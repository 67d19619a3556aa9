#pragma once

#include <iosfwd>
#include <vector>

#include "induct/model.hpp"

namespace induct {

enum class ArcKind { Direct, StationaryCharge, Connect, DynamicCharge };

struct Hop {
  int base_vertex = -1;
  double time = 0;
  double energy = 0;
  double recharge = 0;
};

/// Arc quintuple (i, j, t, q, r) of the expanded per-vehicle graph, plus the
/// charging-start offset chi and the embedded SoC checkpoints of contracted
/// dynamic arcs.
struct ExpandedArc {
  int from = -1;
  int to = -1;
  double time = 0;
  double energy = 0;
  double recharge = 0;
  double chi = 0;
  ArcKind kind = ArcKind::Direct;
  int station = -1;  // stationary or dynamic station index, by kind
  // Cumulative net energy balance (-consumed + recharged) at interior
  // boundaries of a contracted dynamic arc, relative to the SoC at arc entry.
  std::vector<double> checkpoints;
  double max_checkpoint = 0;  // max(checkpoints, 0)
  std::vector<Hop> hops;      // base-level expansion of a dynamic arc
};

enum class VgVertexKind { RoutePoint, ChargerEntry, ChargerExit };

struct VgVertex {
  VgVertexKind kind = VgVertexKind::RoutePoint;
  int base_vertex = -1;
  int route_pos = -1;  // RoutePoint only
  int gap = -1;        // charger copies: gap index 1..n+1
  int station = -1;    // charger copies: stationary station index
  double earliest = 0;
  double latest = 0;
  double energy_lb = 0;  // local energy bound
};

struct VehicleGraph {
  int vehicle = -1;
  std::vector<VgVertex> vertices;
  std::vector<ExpandedArc> arcs;
  std::vector<std::vector<int>> out;  // arc indices by origin
  std::vector<std::vector<int>> in;   // arc indices by target
  int source = -1;  // depot-start representation
  int sink = -1;    // depot-end representation
  double routing_lb = 0;  // lower bound on this vehicle's routing cost
};

/// Per-route-position minimal remaining consumption when servicing the stop
/// sequence directly. Independent of the configuration, so callers may cache
/// the result across rebuilds.
std::vector<double> stop_energy_bounds(const Instance& instance,
                                       const VehicleRoute& route);

/// Maximum number of charging periods at stationary station f within the gap
/// (route position gap-1 -> gap), including the bound tightening. Returns 0
/// when the station is unreachable or useless in this gap.
int max_charge_periods(const Instance& instance, const VehicleRoute& route,
                       int gap, const StationaryStation& station,
                       const std::vector<double>& stop_bounds);

VehicleGraph build_vehicle_graph(const Instance& instance,
                                 const Configuration& config, int vehicle,
                                 const std::vector<double>* cached_stop_bounds =
                                     nullptr);

/// Recomputes every local energy bound in place (sink, stops, charger copies).
void local_energy_bounds(VehicleGraph& graph, const Instance& instance);

double routing_lower_bound(double source_bound, const EnergyParams& params,
                           const PriceCurve& curve);

/// Structured text dump for golden-file tests.
void dump_graph(const VehicleGraph& graph, std::ostream& os);

}  // namespace induct
