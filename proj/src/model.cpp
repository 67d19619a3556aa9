#include "induct/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace induct {

void EnergyParams::check() const {
  if (!(q_min <= q_init && q_init <= q_max)) {
    throw std::runtime_error("energy params: require q_min <= q_init <= q_max");
  }
  if (!(q_min < q_max)) {
    throw std::runtime_error("energy params: require q_min < q_max");
  }
  if (!(p_c > 0)) throw std::runtime_error("energy params: require p_c > 0");
  if (!(delta > 0)) throw std::runtime_error("energy params: require delta > 0");
}

PriceCurve::PriceCurve(double constant_price)
    : PriceCurve(std::vector<std::pair<double, double>>{{0.0, constant_price}}) {}

PriceCurve::PriceCurve(std::vector<std::pair<double, double>> breakpoints)
    : bp_(std::move(breakpoints)) {
  if (bp_.empty()) throw std::runtime_error("price curve: no breakpoints");
  if (bp_.front().first != 0.0) {
    throw std::runtime_error("price curve: first breakpoint must be at time 0");
  }
  for (std::size_t i = 0; i < bp_.size(); ++i) {
    if (bp_[i].second < 0) {
      throw std::runtime_error("price curve: negative price");
    }
    if (i > 0 && !(bp_[i - 1].first < bp_[i].first)) {
      throw std::runtime_error("price curve: breakpoints must be increasing");
    }
  }
  suffix_min_.assign(bp_.size(), 0.0);
  prefix_min_.assign(bp_.size(), 0.0);
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = bp_.size(); i-- > 0;) {
    m = std::min(m, bp_[i].second);
    suffix_min_[i] = m;
  }
  m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < bp_.size(); ++i) {
    m = std::min(m, bp_[i].second);
    prefix_min_[i] = m;
  }
}

namespace {

// Index of the right-open interval containing t.
std::size_t interval_index(const std::vector<std::pair<double, double>>& bp,
                           double t) {
  auto it = std::upper_bound(
      bp.begin(), bp.end(), t,
      [](double v, const std::pair<double, double>& b) { return v < b.first; });
  return static_cast<std::size_t>(it - bp.begin()) - 1;
}

}  // namespace

double PriceCurve::at(double t) const {
  if (t < 0) throw std::runtime_error("price curve: negative time");
  return bp_[interval_index(bp_, t)].second;
}

double PriceCurve::min_from(double t) const {
  if (t < 0) throw std::runtime_error("price curve: negative time");
  return suffix_min_[interval_index(bp_, t)];
}

double PriceCurve::min_upto(double t) const {
  if (t < 0) throw std::runtime_error("price curve: negative time");
  return prefix_min_[interval_index(bp_, t)];
}

double PriceCurve::global_min() const { return suffix_min_.front(); }

void Instance::build_index() {
  arc_index_.clear();
  arc_index_.reserve(arcs.size());
  const std::int64_t n = static_cast<std::int64_t>(vertices.size());
  for (std::size_t i = 0; i < arcs.size(); ++i) {
    const NetArc& a = arcs[i];
    arc_index_[a.from * n + a.to] = static_cast<int>(i);
  }
}

const NetArc* Instance::find_arc(int from, int to) const {
  const std::int64_t n = static_cast<std::int64_t>(vertices.size());
  auto it = arc_index_.find(static_cast<std::int64_t>(from) * n + to);
  return it == arc_index_.end() ? nullptr : &arcs[it->second];
}

const NetArc& Instance::arc(int from, int to) const {
  const NetArc* a = find_arc(from, to);
  if (!a) {
    throw std::runtime_error("missing arc " + std::to_string(from) + " -> " +
                             std::to_string(to));
  }
  return *a;
}

void Instance::check() const {
  params.check();
  const int n = static_cast<int>(vertices.size());
  auto vertex_ok = [n](int v) { return v >= 0 && v < n; };
  if (!vertex_ok(depot_start) || !vertex_ok(depot_end)) {
    throw std::runtime_error("instance: depot vertices out of range");
  }
  for (const NetArc& a : arcs) {
    if (!vertex_ok(a.from) || !vertex_ok(a.to)) {
      throw std::runtime_error("instance: arc endpoint out of range");
    }
    if (a.time < 0 || a.energy < 0) {
      throw std::runtime_error("instance: negative arc time or energy");
    }
  }
  for (const StationaryStation& s : stationary) {
    if (!vertex_ok(s.vertex)) {
      throw std::runtime_error("instance: station vertex out of range");
    }
    if (!(s.rate > 0) || s.cost < 0) {
      throw std::runtime_error("instance: bad station rate or cost");
    }
  }
  for (const DynamicStation& d : dynamic) {
    if (d.segments.empty()) {
      throw std::runtime_error("instance: dynamic station without segments");
    }
    if (!(d.rate > 0) || d.inverter_cost < 0) {
      throw std::runtime_error("instance: bad dynamic station rate or cost");
    }
    for (std::size_t i = 0; i < d.segments.size(); ++i) {
      const Segment& seg = d.segments[i];
      if (!vertex_ok(seg.from) || !vertex_ok(seg.to) || seg.cost < 0) {
        throw std::runtime_error("instance: bad segment");
      }
      if (i > 0 && d.segments[i - 1].to != seg.from) {
        throw std::runtime_error("instance: segments of " + d.id +
                                 " are not chained");
      }
    }
  }
  for (const VehicleRoute& r : routes) {
    if (r.stops.size() < 3 || r.windows.size() != r.stops.size()) {
      throw std::runtime_error("instance: malformed route " + r.id);
    }
    if (r.stops.front() != depot_start || r.stops.back() != depot_end) {
      throw std::runtime_error("instance: route " + r.id +
                               " must start/end at the depot");
    }
    for (std::size_t i = 0; i < r.stops.size(); ++i) {
      if (!vertex_ok(r.stops[i])) {
        throw std::runtime_error("instance: route stop out of range");
      }
      if (r.windows[i].earliest > r.windows[i].latest) {
        throw std::runtime_error("instance: empty time window on route " + r.id);
      }
    }
  }
}

Configuration::Configuration(int stationary_count,
                             const std::vector<int>& segment_counts)
    : y_(stationary_count, 0), w_(segment_counts.size(), 0) {
  z_.reserve(segment_counts.size());
  for (int m : segment_counts) z_.emplace_back(m, 0);
}

Configuration Configuration::zeros(const Instance& instance) {
  std::vector<int> counts;
  counts.reserve(instance.dynamic.size());
  for (const DynamicStation& d : instance.dynamic) {
    counts.push_back(static_cast<int>(d.segments.size()));
  }
  return Configuration(static_cast<int>(instance.stationary.size()), counts);
}

void Configuration::set_segment(int f, int s, bool built) {
  z_[f][s] = built ? 1 : 0;
  if (built) w_[f] = 1;
}

void Configuration::set_inverter(int f, bool built) {
  w_[f] = built ? 1 : 0;
  if (!built) std::fill(z_[f].begin(), z_[f].end(), 0);
}

void Configuration::set_segment_prefix(int f, int r) {
  for (int s = 0; s < segment_count(f); ++s) z_[f][s] = s < r ? 1 : 0;
  w_[f] = r > 0 ? 1 : 0;
}

int Configuration::segment_prefix(int f) const {
  int r = 0;
  while (r < segment_count(f) && z_[f][r]) ++r;
  return r;
}

int Configuration::active_stationary() const {
  return static_cast<int>(std::count(y_.begin(), y_.end(), 1));
}

int Configuration::active_dynamic() const {
  return static_cast<int>(std::count(w_.begin(), w_.end(), 1));
}

int Configuration::active_segments() const {
  int total = 0;
  for (const auto& z : z_) total += static_cast<int>(std::count(z.begin(), z.end(), 1));
  return total;
}

int Configuration::active_segments(int f) const {
  return static_cast<int>(std::count(z_[f].begin(), z_[f].end(), 1));
}

std::vector<std::uint64_t> Configuration::packed() const {
  std::vector<std::uint64_t> words;
  std::uint64_t cur = 0;
  int nbits = 0;
  auto push_bit = [&](bool b) {
    cur = (cur << 1) | (b ? 1u : 0u);
    if (++nbits == 64) {
      words.push_back(cur);
      cur = 0;
      nbits = 0;
    }
  };
  for (auto b : y_) push_bit(b);
  for (auto b : w_) push_bit(b);
  for (const auto& z : z_) {
    for (auto b : z) push_bit(b);
  }
  if (nbits > 0) words.push_back(cur);
  return words;
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const {
  std::uint64_t h = 1469598103934665603ull;
  for (std::uint64_t w : c.packed()) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

double infrastructure_cost(const Configuration& config,
                           const Instance& instance) {
  if (config.stationary_count() != static_cast<int>(instance.stationary.size()) ||
      config.dynamic_count() != static_cast<int>(instance.dynamic.size())) {
    throw std::runtime_error("configuration does not match instance");
  }
  double total = 0;
  for (int f = 0; f < config.stationary_count(); ++f) {
    if (config.stationary_built(f)) total += instance.stationary[f].cost;
  }
  for (int f = 0; f < config.dynamic_count(); ++f) {
    const DynamicStation& d = instance.dynamic[f];
    if (config.segment_count(f) != static_cast<int>(d.segments.size())) {
      throw std::runtime_error("configuration does not match instance");
    }
    if (config.inverter_built(f)) total += d.inverter_cost;
    for (int s = 0; s < config.segment_count(f); ++s) {
      if (config.segment_built(f, s)) total += d.segments[s].cost;
    }
  }
  return total;
}

double operational_cost(const std::vector<VehiclePlan>& plans,
                        const PriceCurve& curve, double p_c) {
  double total = 0;
  for (const VehiclePlan& plan : plans) {
    for (std::size_t i = 1; i < plan.steps.size(); ++i) {
      const Step& prev = plan.steps[i - 1];
      const Step& cur = plan.steps[i];
      if (cur.recharge < 0) {
        throw std::runtime_error("negative recharge amount in plan");
      }
      const double consumption = prev.soc - cur.soc + cur.recharge;
      total += p_c * consumption;
      if (cur.recharge > 0) total += curve.at(cur.charge_start) * cur.recharge;
    }
  }
  return total;
}

namespace {

struct SegmentRef {
  int station = -1;
  int index = -1;
};

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::optional<Violation> validate_solution(const Solution& sol,
                                           const Instance& instance) {
  const EnergyParams& p = instance.params;
  if (sol.plans.size() != instance.routes.size()) {
    return Violation{"plan-count", "one plan per route required"};
  }

  // Map segment arcs and stationary station vertices for config checks.
  std::unordered_map<std::int64_t, SegmentRef> segment_of;
  const std::int64_t nv = static_cast<std::int64_t>(instance.vertices.size());
  for (std::size_t f = 0; f < instance.dynamic.size(); ++f) {
    const auto& segs = instance.dynamic[f].segments;
    for (std::size_t s = 0; s < segs.size(); ++s) {
      segment_of[segs[s].from * nv + segs[s].to] = {static_cast<int>(f),
                                                    static_cast<int>(s)};
    }
  }
  std::unordered_map<int, int> stationary_at;  // vertex -> station index
  for (std::size_t f = 0; f < instance.stationary.size(); ++f) {
    stationary_at[instance.stationary[f].vertex] = static_cast<int>(f);
  }

  for (std::size_t k = 0; k < sol.plans.size(); ++k) {
    const VehiclePlan& plan = sol.plans[k];
    const VehicleRoute& route = instance.routes[k];
    const std::string who = " (vehicle " + route.id + ")";
    if (plan.steps.empty()) return Violation{"empty-plan", "no steps" + who};

    // Stop order and time windows.
    int expect_pos = 0;
    for (const Step& st : plan.steps) {
      if (st.route_pos < 0) continue;
      if (st.route_pos != expect_pos) {
        return Violation{"stop-order", "expected route position " +
                                           std::to_string(expect_pos) +
                                           ", got " +
                                           std::to_string(st.route_pos) + who};
      }
      if (st.vertex != route.stops[st.route_pos]) {
        return Violation{"stop-order",
                         "route position served at wrong vertex" + who};
      }
      const TimeWindow& w = route.windows[st.route_pos];
      if (st.departure < w.earliest - kTol || st.departure > w.latest + kTol) {
        return Violation{"time-window",
                         "departure " + fmt(st.departure) + " outside [" +
                             fmt(w.earliest) + ", " + fmt(w.latest) + "]" + who};
      }
      ++expect_pos;
    }
    if (expect_pos != static_cast<int>(route.stops.size())) {
      return Violation{"stop-order", "route not fully serviced" + who};
    }

    // Start conditions.
    const Step& first = plan.steps.front();
    if (first.vertex != instance.depot_start || first.route_pos != 0) {
      return Violation{"start-depot", "plan must start at the depot" + who};
    }
    if (std::abs(first.soc - p.q_init) > kTol) {
      return Violation{"initial-soc", "SoC at depot departure must be q_init" + who};
    }

    // Step-level propagation, SoC limits, and configuration consistency.
    for (std::size_t i = 0; i < plan.steps.size(); ++i) {
      const Step& st = plan.steps[i];
      if (st.soc < p.q_min - kTol || st.soc > p.q_max + kTol) {
        return Violation{st.soc < p.q_min ? "soc-lower" : "soc-upper",
                         "SoC " + fmt(st.soc) + " at vertex " +
                             std::to_string(st.vertex) + who};
      }
      if (i == 0) continue;
      const Step& prev = plan.steps[i - 1];
      if (st.departure < prev.departure - kTol) {
        return Violation{"time-order", "departure times decrease" + who};
      }
      if (st.recharge < -kTol) {
        return Violation{"recharge", "negative recharge" + who};
      }
      if (st.recharge > 0 && st.charge_start < -kTol) {
        return Violation{"recharge", "recharge without start time" + who};
      }

      if (st.vertex == prev.vertex) {
        // Idling at a stationary charging station.
        auto it = stationary_at.find(st.vertex);
        if (st.recharge > kTol) {
          if (it == stationary_at.end()) {
            return Violation{"config", "charging at a non-station vertex" + who};
          }
          const int f = it->second;
          if (!sol.config.stationary_built(f)) {
            return Violation{"config", "charging at unbuilt station " +
                                           instance.stationary[f].id + who};
          }
          const double duration = st.departure - prev.departure;
          if (std::abs(st.recharge - duration * instance.stationary[f].rate) >
              1e-6) {
            return Violation{"recharge",
                             "stationary recharge inconsistent with rate" + who};
          }
        }
        if (std::abs(st.soc - (prev.soc + st.recharge)) > 1e-6) {
          return Violation{"soc-propagation",
                           "SoC inconsistent while idling" + who};
        }
        continue;
      }

      const NetArc* arc = instance.find_arc(prev.vertex, st.vertex);
      if (!arc) {
        return Violation{"arc", "no arc " + std::to_string(prev.vertex) +
                                    " -> " + std::to_string(st.vertex) + who};
      }
      if (st.departure < prev.departure + arc->time - kTol) {
        return Violation{"time-propagation",
                         "departure earlier than travel time allows" + who};
      }
      auto seg = segment_of.find(prev.vertex * nv + st.vertex);
      if (st.recharge > kTol) {
        if (seg == segment_of.end()) {
          return Violation{"config", "recharge on a non-segment arc" + who};
        }
        const DynamicStation& d = instance.dynamic[seg->second.station];
        if (!sol.config.inverter_built(seg->second.station) ||
            !sol.config.segment_built(seg->second.station, seg->second.index)) {
          return Violation{"config",
                           "charging on unbuilt segment of " + d.id + who};
        }
        if (std::abs(st.recharge - d.rate * arc->time) > 1e-6) {
          return Violation{"recharge",
                           "dynamic recharge inconsistent with rate" + who};
        }
      }
      if (std::abs(st.soc - (prev.soc - arc->energy + st.recharge)) > 1e-6) {
        return Violation{"soc-propagation",
                         "SoC inconsistent along arc" + who};
      }
    }
  }

  const double infra = infrastructure_cost(sol.config, instance);
  if (std::abs(infra - sol.infrastructure_cost) > 1e-6) {
    return Violation{"cost", "infrastructure cost mismatch"};
  }
  const double op =
      operational_cost(sol.plans, instance.price_curve, instance.params.p_c);
  if (std::abs(op - sol.operational_cost) > 1e-6) {
    return Violation{"cost", "operational cost mismatch"};
  }
  return std::nullopt;
}

}  // namespace induct
