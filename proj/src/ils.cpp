#include "induct/ils.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <future>
#include <limits>
#include <stdexcept>

#include "induct/rcspp.hpp"
#include "induct/vehicle_graph.hpp"

namespace induct {

void IlsParams::check() const {
  if (phi < 1) throw std::invalid_argument("phi must be >= 1");
  if (xi_max < 1) throw std::invalid_argument("xi_max must be >= 1");
  if (zeta < 1) throw std::invalid_argument("zeta must be >= 1");
  if (epsilon <= 0) throw std::invalid_argument("epsilon must be > 0");
  if (kappa < 1) throw std::invalid_argument("kappa must be >= 1");
}

const char* operator_name(Operator op) {
  switch (op) {
    case Operator::StripDyn: return "strip-dyn";
    case Operator::RemoveStat: return "remove-stat";
    case Operator::SwapToDyn: return "swap-to-dyn";
    case Operator::SwapToStat: return "swap-to-stat";
    case Operator::AddDyn: return "add-dyn";
    case Operator::AddStat: return "add-stat";
  }
  return "?";
}

std::size_t Evaluator::VecHash::operator()(
    const std::vector<std::uint64_t>& v) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (std::uint64_t w : v) {
    h ^= w;
    h *= 0x100000001b3ull;
  }
  return h;
}

Evaluator::Evaluator(const Instance& instance, double beta_min, int threads)
    : inst_(instance), beta_min_(beta_min), threads_(std::max(threads, 1)) {
  const int ns = static_cast<int>(inst_.stationary.size());
  const int nv = static_cast<int>(inst_.routes.size());
  stop_bounds_.reserve(nv);
  per_vehicle_.resize(nv);
  reach_stat_.resize(nv);
  reach_dyn_.resize(nv);
  for (int k = 0; k < nv; ++k) {
    const VehicleRoute& route = inst_.routes[k];
    stop_bounds_.push_back(stop_energy_bounds(inst_, route));
    routing_lb_.push_back(routing_lower_bound(stop_bounds_[k][0], inst_.params,
                                              inst_.price_curve));
    total_routing_lb_ += routing_lb_[k];
    for (int f = 0; f < ns; ++f) {
      const int v = inst_.stationary[f].vertex;
      for (int gap = 1; gap < static_cast<int>(route.stops.size()); ++gap) {
        if (route.stops[gap - 1] != v &&
            inst_.find_arc(route.stops[gap - 1], v) &&
            inst_.find_arc(v, route.stops[gap])) {
          reach_stat_[k].push_back(f);
          break;
        }
      }
    }
    for (int f = 0; f < static_cast<int>(inst_.dynamic.size()); ++f) {
      const DynamicStation& d = inst_.dynamic[f];
      for (int gap = 1; gap < static_cast<int>(route.stops.size()); ++gap) {
        if (inst_.find_arc(route.stops[gap - 1], d.segments.front().from) &&
            inst_.find_arc(d.segments.back().to, route.stops[gap])) {
          reach_dyn_[k].push_back(f);
          break;
        }
      }
    }
  }
  for (int f = 0; f < ns; ++f)
    vertex_station_[inst_.stationary[f].vertex].push_back(f);
  for (int f = 0; f < static_cast<int>(inst_.dynamic.size()); ++f)
    for (const Segment& s : inst_.dynamic[f].segments)
      vertex_station_[s.to].push_back(ns + f);
}

void Evaluator::clear() {
  full_.clear();
  for (auto& m : per_vehicle_) m.clear();
}

std::vector<std::uint64_t> Evaluator::project(const Configuration& config,
                                              int vehicle) const {
  std::vector<std::uint64_t> key;
  std::uint64_t word = 0;
  int bits = 0;
  auto push_bit = [&](bool b) {
    if (b) word |= std::uint64_t{1} << bits;
    if (++bits == 64) {
      key.push_back(word);
      word = 0;
      bits = 0;
    }
  };
  for (int f : reach_stat_[vehicle]) push_bit(config.stationary_built(f));
  for (int f : reach_dyn_[vehicle]) {
    push_bit(config.inverter_built(f));
    for (int s = 0; s < config.segment_count(f); ++s)
      push_bit(config.segment_built(f, s));
  }
  if (bits > 0) key.push_back(word);
  return key;
}

std::vector<int> Evaluator::used_stations(const VehiclePlan& plan) const {
  std::vector<int> used;
  for (const Step& s : plan.steps) {
    if (s.recharge <= 0) continue;
    auto it = vertex_station_.find(s.vertex);
    if (it == vertex_station_.end()) continue;
    used.insert(used.end(), it->second.begin(), it->second.end());
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return used;
}

Evaluator::VehicleEntry Evaluator::solve_vehicle(const Configuration& config,
                                                 int vehicle) {
  const VehicleGraph g =
      build_vehicle_graph(inst_, config, vehicle, &stop_bounds_[vehicle]);
  SolveOptions opts;
  opts.beta_min = beta_min_;
  const SolveResult res = solve_subproblem(g, inst_, opts);
  VehicleEntry entry;
  entry.feasible = res.feasible;
  if (res.feasible) {
    entry.plan = res.plan;
    entry.used = used_stations(res.plan);
    if (res.plan.heuristic) any_heuristic_ = true;
  }
  return entry;
}

const EvalResult& Evaluator::evaluate(const Configuration& config,
                                      const Configuration* parent) {
  const auto key = config.packed();
  if (auto it = full_.find(key); it != full_.end()) {
    ++full_hits_;
    return it->second;
  }
  ++full_misses_;

  // Station indices (combined numbering) that differ from the parent; plan
  // reuse on removal is sound only when the query is a subset of the parent.
  const int ns = static_cast<int>(inst_.stationary.size());
  std::vector<int> removed;
  const EvalResult* parent_eval = nullptr;
  if (parent) {
    if (auto it = full_.find(parent->packed());
        it != full_.end() && it->second.feasible) {
      bool subset = true;
      for (int f = 0; f < ns && subset; ++f)
        if (config.stationary_built(f) && !parent->stationary_built(f))
          subset = false;
      for (int f = 0; f < config.dynamic_count() && subset; ++f) {
        if (config.inverter_built(f) && !parent->inverter_built(f))
          subset = false;
        for (int s = 0; s < config.segment_count(f) && subset; ++s)
          if (config.segment_built(f, s) && !parent->segment_built(f, s))
            subset = false;
      }
      if (subset) {
        parent_eval = &it->second;
        for (int f = 0; f < ns; ++f)
          if (parent->stationary_built(f) != config.stationary_built(f))
            removed.push_back(f);
        for (int f = 0; f < config.dynamic_count(); ++f) {
          bool diff = parent->inverter_built(f) != config.inverter_built(f);
          for (int s = 0; s < config.segment_count(f); ++s)
            if (parent->segment_built(f, s) != config.segment_built(f, s))
              diff = true;
          if (diff) removed.push_back(ns + f);
        }
      }
    }
  }

  const int nv = static_cast<int>(inst_.routes.size());
  std::vector<VehicleEntry> entries(nv);
  std::vector<std::vector<std::uint64_t>> vkeys(nv);
  std::vector<int> missing;
  for (int k = 0; k < nv; ++k) {
    vkeys[k] = project(config, k);
    if (auto it = per_vehicle_[k].find(vkeys[k]); it != per_vehicle_[k].end()) {
      ++vehicle_hits_;
      entries[k] = it->second;
      continue;
    }
    if (parent_eval) {
      const std::vector<int>& used = parent_eval->used[k];
      const bool affected = std::any_of(removed.begin(), removed.end(),
                                        [&](int f) {
                                          return std::binary_search(
                                              used.begin(), used.end(), f);
                                        });
      if (!affected) {
        // The vehicle never charged at any removed station; its optimal plan
        // carries over unchanged.
        ++vehicle_hits_;
        entries[k].feasible = true;
        entries[k].plan = parent_eval->plans[k];
        entries[k].used = used;
        per_vehicle_[k].emplace(vkeys[k], entries[k]);
        continue;
      }
    }
    missing.push_back(k);
  }

  if (threads_ > 1 && missing.size() > 1) {
    std::vector<std::future<VehicleEntry>> futures;
    for (int k : missing)
      futures.push_back(std::async(std::launch::async, [&, k] {
        return solve_vehicle(config, k);
      }));
    for (std::size_t i = 0; i < missing.size(); ++i) {
      entries[missing[i]] = futures[i].get();
      ++solves_;
      per_vehicle_[missing[i]].emplace(vkeys[missing[i]], entries[missing[i]]);
    }
  } else {
    for (int k : missing) {
      entries[k] = solve_vehicle(config, k);
      ++solves_;
      per_vehicle_[k].emplace(vkeys[k], entries[k]);
    }
  }

  EvalResult result;
  result.infra = infrastructure_cost(config, inst_);
  result.total = result.infra;
  result.feasible = true;
  for (int k = 0; k < nv; ++k) {
    if (!entries[k].feasible) {
      result.feasible = false;
      break;
    }
    result.total += entries[k].plan.routing_cost;
    result.plans.push_back(std::move(entries[k].plan));
    result.used.push_back(std::move(entries[k].used));
  }
  if (!result.feasible) {
    result.plans.clear();
    result.used.clear();
    result.total = std::numeric_limits<double>::infinity();
  }
  return full_.emplace(key, std::move(result)).first->second;
}

Solution Evaluator::to_solution(const Configuration& config,
                                const EvalResult& eval) const {
  Solution sol;
  sol.config = config;
  sol.plans = eval.plans;
  sol.infrastructure_cost = eval.infra;
  sol.operational_cost = eval.total - eval.infra;
  return sol;
}

namespace {

std::vector<int> active_stations(const Configuration& c) {
  std::vector<int> ids;
  for (int f = 0; f < c.stationary_count(); ++f)
    if (c.stationary_built(f)) ids.push_back(f);
  for (int f = 0; f < c.dynamic_count(); ++f)
    if (c.inverter_built(f)) ids.push_back(c.stationary_count() + f);
  return ids;
}

std::vector<int> inactive_stations(const Configuration& c) {
  std::vector<int> ids;
  for (int f = 0; f < c.stationary_count(); ++f)
    if (!c.stationary_built(f)) ids.push_back(f);
  for (int f = 0; f < c.dynamic_count(); ++f)
    if (!c.inverter_built(f)) ids.push_back(c.stationary_count() + f);
  return ids;
}

void add_station(Configuration& c, int id) {
  if (id < c.stationary_count()) {
    c.set_stationary(id, true);
  } else {
    c.set_segment_prefix(id - c.stationary_count(),
                         c.segment_count(id - c.stationary_count()));
  }
}

void remove_station(Configuration& c, int id) {
  if (id < c.stationary_count()) {
    c.set_stationary(id, false);
  } else {
    c.set_segment_prefix(id - c.stationary_count(), 0);
  }
}

Vertex station_position(const Instance& inst, int id) {
  const int ns = static_cast<int>(inst.stationary.size());
  if (id < ns) return inst.vertices[inst.stationary[id].vertex];
  return inst.vertices[inst.dynamic[id - ns].segments.front().from];
}

double station_distance(const Instance& inst, int a, int b) {
  const Vertex va = station_position(inst, a);
  const Vertex vb = station_position(inst, b);
  return std::hypot(va.x - vb.x, va.y - vb.y);
}

// Cheapest inactive counterpart selector: closest (swaps) / farthest (adds),
// ties broken by station index.
int pick_counterpart(const Instance& inst, const Configuration& c, int from_id,
                     bool want_dynamic, bool farthest) {
  const int ns = static_cast<int>(inst.stationary.size());
  int best = -1;
  double best_d = 0;
  const int lo = want_dynamic ? ns : 0;
  const int hi = want_dynamic ? ns + static_cast<int>(inst.dynamic.size()) : ns;
  for (int id = lo; id < hi; ++id) {
    const bool active = want_dynamic ? c.inverter_built(id - ns)
                                     : c.stationary_built(id);
    if (active) continue;
    const double d = station_distance(inst, from_id, id);
    if (best < 0 || (farthest ? d > best_d : d < best_d)) {
      best = id;
      best_d = d;
    }
  }
  return best;
}

double min_new_cost(const Instance& inst, int id) {
  const int ns = static_cast<int>(inst.stationary.size());
  if (id < ns) return inst.stationary[id].cost;
  const DynamicStation& d = inst.dynamic[id - ns];
  double seg = d.segments.front().cost;
  for (const Segment& s : d.segments) seg = std::min(seg, s.cost);
  return d.inverter_cost + seg;
}

std::vector<int> sample_ids(const std::vector<int>& pool, int count,
                            std::mt19937_64& rng) {
  std::vector<int> out;
  std::sample(pool.begin(), pool.end(), std::back_inserter(out),
              std::min<std::size_t>(count, pool.size()), rng);
  return out;
}

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 over (seed, stream) so streams are decorrelated.
  std::uint64_t x = seed + 0x9e3779b97f4a7c15ull * (stream + 1);
  auto mix = [&]() {
    x += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  return std::mt19937_64(mix() ^ mix());
}

}  // namespace

Configuration initialize(const Instance& instance, const IlsParams& params,
                         Evaluator& eval, std::mt19937_64& rng, long* draws) {
  // The all-stations configuration dominates every other one in feasibility,
  // so its infeasibility proves the instance infeasible.
  Configuration full = Configuration::zeros(instance);
  for (int id = 0; id < instance.station_count(); ++id)
    add_station(full, id);
  if (!eval.feasible(full))
    throw InfeasibleError(
        "infeasible: no fleet plan exists even with every station built");

  std::vector<int> pool(instance.station_count());
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<int>(i);
  const int kappa = std::min<int>(params.kappa, static_cast<int>(pool.size()));
  for (long attempt = 0; attempt < params.max_init_draws; ++attempt) {
    Configuration config = Configuration::zeros(instance);
    for (int id : sample_ids(pool, kappa, rng)) add_station(config, id);
    if (draws) ++*draws;
    if (eval.feasible(config)) return config;
    if (static_cast<int>(pool.size()) <= kappa) break;  // draws are exhaustive
  }
  return full;
}

Configuration tighten_configuration(const Configuration& config,
                                    int dyn_station, Evaluator& eval) {
  const int m = config.segment_count(dyn_station);
  int lb = -1, ub = m, r = m;
  Configuration c = config;
  c.set_segment_prefix(dyn_station, r);
  while (ub - lb > 1) {
    if (eval.feasible(c)) {
      ub = r;
      r = ub - (ub + 1) / 2;
    } else {
      lb = r;
      r = lb + (ub - lb) / 2;
    }
    c.set_segment_prefix(dyn_station, r);
  }
  c.set_segment_prefix(dyn_station, ub);
  return c;
}

Configuration apply_operator(Operator op, const Configuration& config,
                             const Instance& instance, const IlsParams& params,
                             Evaluator& eval, std::mt19937_64& rng,
                             OperatorStats* op_stats) {
  const int ns = static_cast<int>(instance.stationary.size());
  Configuration best = config;
  double best_cost = eval.evaluate(config).total;
  const double lb_fleet = eval.total_routing_lb();

  auto consider = [&](const Configuration& cand, const Configuration* parent) {
    if (op_stats) ++op_stats->attempts;
    const EvalResult& res = eval.evaluate(cand, parent);
    if (res.feasible && res.total + params.epsilon <= best_cost) {
      best = cand;
      best_cost = res.total;
      if (op_stats) ++op_stats->accepts;
    }
  };

  std::vector<int> pool;
  switch (op) {
    case Operator::StripDyn:
      for (int f = 0; f < config.dynamic_count(); ++f)
        if (config.inverter_built(f)) pool.push_back(ns + f);
      break;
    case Operator::RemoveStat:
    case Operator::SwapToDyn:
      for (int f = 0; f < ns; ++f)
        if (config.stationary_built(f)) pool.push_back(f);
      break;
    case Operator::SwapToStat:
    case Operator::AddDyn:
    case Operator::AddStat:
      pool = active_stations(config);
      break;
  }

  for (int f : sample_ids(pool, params.zeta, rng)) {
    switch (op) {
      case Operator::StripDyn: {
        consider(tighten_configuration(config, f - ns, eval), &config);
        break;
      }
      case Operator::RemoveStat: {
        Configuration cand = config;
        remove_station(cand, f);
        consider(cand, &config);
        break;
      }
      case Operator::SwapToDyn:
      case Operator::SwapToStat: {
        const bool to_dyn = op == Operator::SwapToDyn;
        const int fp = pick_counterpart(instance, config, f, to_dyn, false);
        if (fp < 0) continue;
        Configuration cand = config;
        remove_station(cand, f);
        if (op_stats) ++op_stats->attempts;
        if (infrastructure_cost(cand, instance) + lb_fleet +
                min_new_cost(instance, fp) >=
            best_cost)
          continue;  // cannot beat the incumbent even at the routing bound
        if (op_stats) --op_stats->attempts;  // counted again by consider()
        add_station(cand, fp);
        if (to_dyn) cand = tighten_configuration(cand, fp - ns, eval);
        consider(cand, nullptr);
        break;
      }
      case Operator::AddDyn:
      case Operator::AddStat: {
        const bool to_dyn = op == Operator::AddDyn;
        const int fp = pick_counterpart(instance, config, f, to_dyn, true);
        if (fp < 0) continue;
        if (op_stats) ++op_stats->attempts;
        if (infrastructure_cost(config, instance) + lb_fleet +
                min_new_cost(instance, fp) >=
            best_cost)
          continue;
        if (op_stats) --op_stats->attempts;
        Configuration cand = config;
        add_station(cand, fp);
        if (to_dyn) cand = tighten_configuration(cand, fp - ns, eval);
        consider(cand, nullptr);
        break;
      }
    }
  }
  return best;
}

Configuration local_search(const Configuration& start, const Instance& instance,
                           const IlsParams& params, Evaluator& eval,
                           std::mt19937_64& rng, RunStats* stats) {
  static constexpr Operator kOrder[] = {
      Operator::StripDyn,  Operator::RemoveStat, Operator::SwapToDyn,
      Operator::SwapToStat, Operator::AddDyn,     Operator::AddStat};
  Configuration s = start;
  double local_min = eval.evaluate(s).total + 2 * params.epsilon;
  while (eval.evaluate(s).total + params.epsilon <= local_min) {
    local_min = eval.evaluate(s).total;
    for (Operator op : kOrder) {
      OperatorStats* os =
          stats ? &stats->ops[static_cast<int>(op)] : nullptr;
      s = apply_operator(op, s, instance, params, eval, rng, os);
    }
  }
  return s;
}

Configuration perturb(const Configuration& incumbent, int strength,
                      const Instance& instance, Evaluator& eval,
                      std::mt19937_64& rng, bool* fallback) {
  if (fallback) *fallback = false;
  Configuration destroyed = incumbent;
  for (int id : sample_ids(active_stations(incumbent), strength, rng))
    remove_station(destroyed, id);

  int phi = strength;
  while (!eval.feasible(destroyed, &incumbent)) {
    const std::vector<int> pool = inactive_stations(destroyed);
    if (pool.empty()) {
      if (fallback) *fallback = true;
      return incumbent;
    }
    Configuration repaired = destroyed;
    for (int id : sample_ids(pool, phi, rng)) add_station(repaired, id);
    if (eval.feasible(repaired)) return repaired;
    if (static_cast<std::size_t>(phi) >= pool.size()) {
      // Even the full inactive pool cannot repair the destroyed configuration.
      if (fallback) *fallback = true;
      return incumbent;
    }
    ++phi;
  }
  return destroyed;
}

RunResult run(const Instance& instance, const IlsParams& params) {
  params.check();
  const auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  RunResult out;
  Evaluator eval(instance, params.beta_min, params.threads);
  std::mt19937_64 init_rng = stream_rng(params.seed, 0);
  std::mt19937_64 ls_rng = stream_rng(params.seed, 1);
  std::mt19937_64 perturb_rng = stream_rng(params.seed, 2);

  Configuration s0 = initialize(instance, params, eval, init_rng,
                                &out.stats.init_draws);
  const int phi_max = s0.active_stationary() + s0.active_segments();
  Configuration best = local_search(s0, instance, params, eval, ls_rng,
                                    &out.stats);
  double best_cost = eval.evaluate(best).total;
  out.stats.trajectory.emplace_back(0, best_cost);

  int xi = 0;
  int phi = params.phi;
  while ((params.time_limit < 0 || elapsed() < params.time_limit) &&
         (params.max_iterations == 0 ||
          out.stats.iterations < params.max_iterations)) {
    ++out.stats.iterations;
    if (xi >= params.xi_max) phi = std::min(phi + params.phi, phi_max);
    bool fb = false;
    Configuration perturbed =
        perturb(best, phi, instance, eval, perturb_rng, &fb);
    if (fb) ++out.stats.perturb_fallbacks;
    Configuration improved =
        local_search(perturbed, instance, params, eval, ls_rng, &out.stats);
    const double cost = eval.evaluate(improved).total;
    if (cost <= best_cost + params.epsilon) {
      best = improved;
      best_cost = cost;
      xi = 0;
      phi = params.phi;
      ++out.stats.accepted;
      out.stats.trajectory.emplace_back(out.stats.iterations, best_cost);
    } else {
      ++xi;
    }
  }

  out.feasible = true;
  out.best = eval.to_solution(best, eval.evaluate(best));
  out.stats.solves = eval.solves();
  out.stats.cache_hits = eval.cache_hits();
  const long lookups = eval.cache_hits() + eval.cache_misses();
  out.stats.cache_hit_rate =
      lookups > 0 ? static_cast<double>(eval.cache_hits()) / lookups : 0;
  out.stats.any_heuristic = eval.any_heuristic();
  out.stats.wall_seconds = elapsed();
  return out;
}

}  // namespace induct
