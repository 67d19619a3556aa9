#include "induct/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace induct {

namespace {

struct State {
  double cost = 0;
  double soc = 0;
  double tau = 0;  // departure time at the current stop
  std::vector<Step> steps;
};

// Forward dominance on (cost, soc, tau); sound only under a constant price.
bool dominates(const State& a, const State& b) {
  return a.cost <= b.cost && a.soc >= b.soc && a.tau <= b.tau;
}

void add_state(std::vector<State>& pool, State s, bool prune) {
  if (prune) {
    for (const State& o : pool)
      if (dominates(o, s)) return;
    std::erase_if(pool, [&](const State& o) { return dominates(s, o); });
  }
  pool.push_back(std::move(s));
}

}  // namespace

std::optional<VehiclePlan> oracle_vehicle_plan(const Instance& instance,
                                               const Configuration& config,
                                               int vehicle) {
  const VehicleRoute& route = instance.routes[vehicle];
  const EnergyParams& p = instance.params;
  const PriceCurve& curve = instance.price_curve;
  const bool prune = curve.is_constant();
  const int n = static_cast<int>(route.stops.size());

  std::vector<State> current;
  {
    State init;
    init.soc = p.q_init;
    init.tau = route.windows[0].earliest;
    init.steps.push_back({route.stops[0], init.tau, init.soc, 0, -1, 0});
    current.push_back(std::move(init));
  }

  for (int pos = 1; pos < n; ++pos) {
    const int from = route.stops[pos - 1];
    const int to = route.stops[pos];
    const TimeWindow& win = route.windows[pos];
    const NetArc& direct = instance.arc(from, to);
    std::vector<State> next;

    auto arrive = [&](const State& base, double arr_time, double soc,
                      double cost, std::vector<Step> steps) {
      if (arr_time > win.latest + kTol) return;
      if (soc < p.q_min - kTol || soc > p.q_max + kTol) return;
      State s;
      s.cost = cost;
      s.soc = soc;
      s.tau = std::max(arr_time, win.earliest);
      s.steps = std::move(steps);
      s.steps.push_back({to, s.tau, soc, 0, -1, pos});
      (void)base;
      add_state(next, std::move(s), prune);
    };

    for (const State& s : current) {
      // Direct.
      arrive(s, s.tau + direct.time, s.soc - direct.energy,
             s.cost + p.p_c * direct.energy, s.steps);

      // Stationary detours, every feasible discrete duration.
      for (int f = 0; f < config.stationary_count(); ++f) {
        if (!config.stationary_built(f)) continue;
        const StationaryStation& st = instance.stationary[f];
        if (st.vertex == from) continue;
        const NetArc* in = instance.find_arc(from, st.vertex);
        const NetArc* out = instance.find_arc(st.vertex, to);
        if (!in || !out) continue;
        const double arr_soc = s.soc - in->energy;
        if (arr_soc < p.q_min - kTol) continue;
        const double arr_t = s.tau + in->time;
        for (int l = 1;; ++l) {
          const double charged = l * p.delta * st.rate;
          if (arr_soc + charged > p.q_max + kTol) break;
          const double leave_t = arr_t + l * p.delta;
          if (leave_t + out->time > win.latest + kTol) break;
          std::vector<Step> steps = s.steps;
          steps.push_back({st.vertex, arr_t, arr_soc, 0, -1, -1});
          steps.push_back({st.vertex, leave_t, arr_soc + charged, charged,
                           arr_t, -1});
          const double cost = s.cost +
                              p.p_c * (in->energy + out->energy) +
                              curve.at(arr_t) * charged;
          arrive(s, leave_t + out->time, arr_soc + charged - out->energy, cost,
                 std::move(steps));
        }
      }

      // Dynamic traversals, all-or-nothing over the built prefix.
      for (int f = 0; f < config.dynamic_count(); ++f) {
        if (!config.inverter_built(f)) continue;
        const DynamicStation& dyn = instance.dynamic[f];
        const NetArc* in = instance.find_arc(from, dyn.segments.front().from);
        const NetArc* out = instance.find_arc(dyn.segments.back().to, to);
        if (!in || !out) continue;
        std::vector<Step> steps = s.steps;
        double t = s.tau + in->time;
        double soc = s.soc - in->energy;
        double cost = s.cost + p.p_c * in->energy;
        double chi = in->time;
        bool seen_active = false, ok = soc >= p.q_min - kTol;
        double charge_start = -1;
        double recharge_total = 0;
        if (ok) steps.push_back({dyn.segments.front().from, t, soc, 0, -1, -1});
        for (int sg = 0; ok && sg < static_cast<int>(dyn.segments.size());
             ++sg) {
          const Segment& seg = dyn.segments[sg];
          const NetArc& sa = instance.arc(seg.from, seg.to);
          const bool active = config.segment_built(f, sg);
          if (!seen_active && active) {
            seen_active = true;
            charge_start = s.tau + chi;
          }
          if (!seen_active) chi += sa.time;
          const double r = active ? dyn.rate * sa.time : 0.0;
          t += sa.time;
          soc += r - sa.energy;
          recharge_total += r;
          cost += p.p_c * sa.energy;
          if (soc < p.q_min - kTol || soc > p.q_max + kTol) {
            ok = false;
            break;
          }
          steps.push_back({seg.to, t, soc, r, r > 0 ? charge_start : -1, -1});
        }
        if (!ok) continue;
        if (recharge_total > 0) cost += curve.at(charge_start) * recharge_total;
        cost += p.p_c * out->energy;
        arrive(s, t + out->time, soc - out->energy, cost, std::move(steps));
      }
    }
    current = std::move(next);
    if (current.empty()) return std::nullopt;
  }

  const State* best = nullptr;
  for (const State& s : current)
    if (!best || s.cost < best->cost ||
        (s.cost == best->cost && s.tau < best->tau))
      best = &s;
  if (!best) return std::nullopt;
  VehiclePlan plan;
  plan.steps = best->steps;
  plan.routing_cost = best->cost;
  return plan;
}

OracleResult oracle_solve(const Instance& instance, const OracleLimits& limits) {
  if (instance.station_count() > limits.max_stations)
    throw std::runtime_error("oracle limits exceeded: too many stations");
  if (static_cast<int>(instance.routes.size()) > limits.max_vehicles)
    throw std::runtime_error("oracle limits exceeded: too many vehicles");
  for (const VehicleRoute& r : instance.routes)
    if (static_cast<int>(r.stops.size()) > limits.max_stops + 2)
      throw std::runtime_error("oracle limits exceeded: too many stops");

  const int ns = static_cast<int>(instance.stationary.size());
  const int nd = static_cast<int>(instance.dynamic.size());
  std::vector<int> seg_counts;
  for (const DynamicStation& d : instance.dynamic)
    seg_counts.push_back(static_cast<int>(d.segments.size()));

  OracleResult result;
  double best_cost = 0;

  std::vector<int> prefix(nd, 0);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << ns); ++mask) {
    // Odometer over per-station segment prefixes (0 = station absent).
    std::fill(prefix.begin(), prefix.end(), 0);
    while (true) {
      Configuration config(ns, seg_counts);
      for (int f = 0; f < ns; ++f)
        config.set_stationary(f, (mask >> f) & 1);
      for (int f = 0; f < nd; ++f) config.set_segment_prefix(f, prefix[f]);

      ++result.configs_tried;
      const double infra = infrastructure_cost(config, instance);
      // Routing cost is non-negative, so configs whose infrastructure alone
      // exceeds the incumbent cannot improve it.
      if (!result.feasible || infra <= best_cost) {
        double total = infra;
        std::vector<VehiclePlan> plans;
        bool ok = true;
        for (std::size_t k = 0; k < instance.routes.size(); ++k) {
          auto plan = oracle_vehicle_plan(instance, config, static_cast<int>(k));
          if (!plan) {
            ok = false;
            break;
          }
          total += plan->routing_cost;
          plans.push_back(std::move(*plan));
        }
        if (ok && (!result.feasible || total < best_cost)) {
          best_cost = total;
          result.feasible = true;
          result.solution.config = config;
          result.solution.plans = std::move(plans);
          result.solution.infrastructure_cost = infra;
          result.solution.operational_cost = total - infra;
        }
      }

      int f = 0;
      for (; f < nd; ++f) {
        if (prefix[f] < seg_counts[f]) {
          ++prefix[f];
          break;
        }
        prefix[f] = 0;
      }
      if (f == nd) break;
    }
  }
  return result;
}

}  // namespace induct
