#include "induct/vehicle_graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace induct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Ceiling that keeps values already integral (up to kTol) as they are.
double ceil_tol(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= kTol) return r;
  return std::ceil(x);
}

int floor_tol(double x) {
  const double r = std::round(x);
  if (std::abs(x - r) <= kTol) return static_cast<int>(r);
  return static_cast<int>(std::floor(x));
}

}  // namespace

std::vector<double> stop_energy_bounds(const Instance& instance,
                                       const VehicleRoute& route) {
  const int n = static_cast<int>(route.stops.size());
  std::vector<double> bounds(n, 0.0);
  for (int i = n - 2; i >= 0; --i) {
    bounds[i] =
        instance.arc(route.stops[i], route.stops[i + 1]).energy + bounds[i + 1];
  }
  return bounds;
}

int max_charge_periods(const Instance& instance, const VehicleRoute& route,
                       int gap, const StationaryStation& station,
                       const std::vector<double>& stop_bounds) {
  const EnergyParams& p = instance.params;
  const int from = route.stops[gap - 1];
  const int to = route.stops[gap];
  const NetArc* in = instance.find_arc(from, station.vertex);
  const NetArc* out = instance.find_arc(station.vertex, to);
  if (!in || !out) return 0;

  const double slack = route.windows[gap].latest -
                       route.windows[gap - 1].earliest - in->time - out->time;
  const double headroom = (p.q_max - p.q_min + in->energy) / station.rate;
  int periods = floor_tol(std::min(slack, headroom) / p.delta);
  if (periods < 0) return 0;

  const double q_direct = instance.arc(from, to).energy;
  const double useful = stop_bounds[gap - 1] + out->energy - q_direct;
  const int cap = floor_tol(ceil_tol(useful) / p.delta);
  periods = std::min(periods, cap);
  return std::max(periods, 0);
}

VehicleGraph build_vehicle_graph(const Instance& instance,
                                 const Configuration& config, int vehicle,
                                 const std::vector<double>* cached_stop_bounds) {
  if (config.stationary_count() != static_cast<int>(instance.stationary.size()) ||
      config.dynamic_count() != static_cast<int>(instance.dynamic.size())) {
    throw std::runtime_error("configuration references unknown stations");
  }
  const VehicleRoute& route = instance.routes[vehicle];
  const EnergyParams& p = instance.params;
  const int n_points = static_cast<int>(route.stops.size());

  VehicleGraph g;
  g.vehicle = vehicle;
  g.vertices.reserve(n_points);
  for (int i = 0; i < n_points; ++i) {
    VgVertex v;
    v.kind = VgVertexKind::RoutePoint;
    v.base_vertex = route.stops[i];
    v.route_pos = i;
    v.earliest = route.windows[i].earliest;
    v.latest = route.windows[i].latest;
    g.vertices.push_back(v);
  }
  g.source = 0;
  g.sink = n_points - 1;

  const std::vector<double> own_bounds =
      cached_stop_bounds ? std::vector<double>() : stop_energy_bounds(instance, route);
  const std::vector<double>& stop_bounds =
      cached_stop_bounds ? *cached_stop_bounds : own_bounds;

  auto add_arc = [&g](ExpandedArc arc) {
    g.arcs.push_back(std::move(arc));
  };

  for (int gap = 1; gap < n_points; ++gap) {
    const int from = route.stops[gap - 1];
    const int to = route.stops[gap];
    const NetArc& direct = instance.arc(from, to);

    ExpandedArc d;
    d.from = gap - 1;
    d.to = gap;
    d.time = direct.time;
    d.energy = direct.energy;
    d.kind = ArcKind::Direct;
    add_arc(d);

    for (int f = 0; f < config.stationary_count(); ++f) {
      if (!config.stationary_built(f)) continue;
      const StationaryStation& st = instance.stationary[f];
      if (st.vertex == from) continue;  // charge before servicing the stop
      const NetArc* in = instance.find_arc(from, st.vertex);
      const NetArc* out = instance.find_arc(st.vertex, to);
      if (!in || !out) continue;
      const int periods =
          max_charge_periods(instance, route, gap, st, stop_bounds);
      if (periods == 0) continue;
      // Detours with a negative net energy balance are useless.
      if (in->energy + out->energy - direct.energy >=
          periods * p.delta * st.rate) {
        continue;
      }

      const int entry = static_cast<int>(g.vertices.size());
      VgVertex ve;
      ve.kind = VgVertexKind::ChargerEntry;
      ve.base_vertex = st.vertex;
      ve.gap = gap;
      ve.station = f;
      ve.earliest = 0;
      ve.latest = kInf;
      g.vertices.push_back(ve);
      VgVertex vx = ve;
      vx.kind = VgVertexKind::ChargerExit;
      g.vertices.push_back(vx);
      const int exit = entry + 1;

      ExpandedArc c_in;
      c_in.from = gap - 1;
      c_in.to = entry;
      c_in.time = in->time;
      c_in.energy = in->energy;
      c_in.kind = ArcKind::Connect;
      c_in.station = f;
      add_arc(c_in);
      for (int l = 1; l <= periods; ++l) {
        ExpandedArc ch;
        ch.from = entry;
        ch.to = exit;
        ch.time = p.delta * l;
        ch.recharge = p.delta * l * st.rate;
        ch.kind = ArcKind::StationaryCharge;
        ch.station = f;
        add_arc(ch);
      }
      ExpandedArc c_out;
      c_out.from = exit;
      c_out.to = gap;
      c_out.time = out->time;
      c_out.energy = out->energy;
      c_out.kind = ArcKind::Connect;
      c_out.station = f;
      add_arc(c_out);
    }

    for (int f = 0; f < config.dynamic_count(); ++f) {
      if (!config.inverter_built(f)) continue;
      const DynamicStation& dyn = instance.dynamic[f];
      const int alpha1 = dyn.segments.front().from;
      const int omega_m = dyn.segments.back().to;
      const NetArc* in = instance.find_arc(from, alpha1);
      const NetArc* out = instance.find_arc(omega_m, to);
      if (!in || !out) continue;

      ExpandedArc a;
      a.from = gap - 1;
      a.to = gap;
      a.kind = ArcKind::DynamicCharge;
      a.station = f;
      a.hops.push_back({alpha1, in->time, in->energy, 0.0});
      double recharge = 0;
      double chi = in->time;
      bool seen_active = false;
      for (int s = 0; s < static_cast<int>(dyn.segments.size()); ++s) {
        const Segment& seg = dyn.segments[s];
        const NetArc& sa = instance.arc(seg.from, seg.to);
        const bool active = config.segment_built(f, s);
        const double r = active ? dyn.rate * sa.time : 0.0;
        if (!seen_active) {
          if (active) {
            seen_active = true;
          } else {
            chi += sa.time;
          }
        }
        recharge += r;
        a.hops.push_back({seg.to, sa.time, sa.energy, r});
      }
      a.hops.push_back({to, out->time, out->energy, 0.0});
      double time = 0, energy = 0, balance = 0;
      for (std::size_t h = 0; h < a.hops.size(); ++h) {
        time += a.hops[h].time;
        energy += a.hops[h].energy;
        balance += a.hops[h].recharge - a.hops[h].energy;
        if (h + 1 < a.hops.size()) a.checkpoints.push_back(balance);
      }
      a.time = time;
      a.energy = energy;
      a.recharge = recharge;
      a.chi = seen_active ? chi : 0.0;
      a.max_checkpoint = 0;
      for (double c : a.checkpoints) a.max_checkpoint = std::max(a.max_checkpoint, c);
      // Skip detours whose recharge does not cover the extra consumption.
      if (recharge <= energy - direct.energy) continue;
      add_arc(a);
    }
  }

  g.out.assign(g.vertices.size(), {});
  g.in.assign(g.vertices.size(), {});
  for (std::size_t i = 0; i < g.arcs.size(); ++i) {
    g.out[g.arcs[i].from].push_back(static_cast<int>(i));
    g.in[g.arcs[i].to].push_back(static_cast<int>(i));
  }

  local_energy_bounds(g, instance);
  g.routing_lb =
      routing_lower_bound(g.vertices[g.source].energy_lb, p, instance.price_curve);
  return g;
}

void local_energy_bounds(VehicleGraph& graph, const Instance& instance) {
  const VehicleRoute& route = instance.routes[graph.vehicle];
  const std::vector<double> stop_bounds = stop_energy_bounds(instance, route);
  for (VgVertex& v : graph.vertices) {
    switch (v.kind) {
      case VgVertexKind::RoutePoint:
        v.energy_lb = stop_bounds[v.route_pos];
        break;
      case VgVertexKind::ChargerEntry:
      case VgVertexKind::ChargerExit: {
        // Minimum remaining consumption: reach the gap's target stop, then
        // service the rest of the sequence directly.
        const int target = route.stops[v.gap];
        const double q_out =
            instance.arc(instance.stationary[v.station].vertex, target).energy;
        v.energy_lb = q_out + stop_bounds[v.gap];
        break;
      }
    }
  }
}

double routing_lower_bound(double source_bound, const EnergyParams& params,
                           const PriceCurve& curve) {
  const double recharge_need =
      std::max(source_bound - params.q_init + params.q_min, 0.0);
  return source_bound * params.p_c + recharge_need * curve.global_min();
}

namespace {

void put(std::ostream& os, double v) {
  char buf[32];
  if (v == kInf) {
    os << "inf";
    return;
  }
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  os << buf;
}

}  // namespace

void dump_graph(const VehicleGraph& graph, std::ostream& os) {
  os << "vehicle-graph " << graph.vehicle << "\n";
  os << "vertices " << graph.vertices.size() << "\n";
  for (std::size_t i = 0; i < graph.vertices.size(); ++i) {
    const VgVertex& v = graph.vertices[i];
    os << i << " ";
    switch (v.kind) {
      case VgVertexKind::RoutePoint:
        os << "route pos=" << v.route_pos;
        break;
      case VgVertexKind::ChargerEntry:
        os << "charger-entry gap=" << v.gap << " station=" << v.station;
        break;
      case VgVertexKind::ChargerExit:
        os << "charger-exit gap=" << v.gap << " station=" << v.station;
        break;
    }
    os << " base=" << v.base_vertex << " window=[";
    put(os, v.earliest);
    os << ",";
    put(os, v.latest);
    os << "] lb=";
    put(os, v.energy_lb);
    os << "\n";
  }
  os << "arcs " << graph.arcs.size() << "\n";
  for (const ExpandedArc& a : graph.arcs) {
    os << a.from << " " << a.to << " ";
    switch (a.kind) {
      case ArcKind::Direct: os << "direct"; break;
      case ArcKind::StationaryCharge: os << "charge"; break;
      case ArcKind::Connect: os << "connect"; break;
      case ArcKind::DynamicCharge: os << "dynamic"; break;
    }
    os << " t=";
    put(os, a.time);
    os << " q=";
    put(os, a.energy);
    os << " r=";
    put(os, a.recharge);
    os << " chi=";
    put(os, a.chi);
    if (!a.checkpoints.empty()) {
      os << " checkpoints=";
      for (std::size_t i = 0; i < a.checkpoints.size(); ++i) {
        if (i) os << ",";
        put(os, a.checkpoints[i]);
      }
    }
    os << "\n";
  }
  os << "routing-lb ";
  put(os, graph.routing_lb);
  os << "\n";
}

}  // namespace induct
