#include "induct/instance_gen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "induct/oracle.hpp"
#include "induct/rcspp.hpp"
#include "induct/vehicle_graph.hpp"

namespace induct {

namespace {

// Incremental builder used by the hand-written catalog.
struct Builder {
  Instance inst;

  int vertex(double x, double y) {
    inst.vertices.push_back({x, y});
    return static_cast<int>(inst.vertices.size()) - 1;
  }
  void arc(int from, int to, double t, double q) {
    inst.arcs.push_back({from, to, t, q});
  }
  void stationary(std::string id, int v, double rate, double cost) {
    inst.stationary.push_back({std::move(id), v, rate, cost});
  }
  void route(std::string id, std::vector<int> stops,
             std::vector<TimeWindow> windows) {
    inst.routes.push_back({std::move(id), std::move(stops), std::move(windows)});
  }
  Instance finish(double q_init, double q_min, double q_max, double price,
                  double p_c = 5e-2, double delta = 1.0) {
    inst.params = {q_init, q_min, q_max, p_c, delta};
    inst.price_curve = PriceCurve(price);
    inst.build_index();
    inst.check();
    return std::move(inst);
  }
};

std::vector<TimeWindow> wide(std::size_t n, double latest, double last) {
  std::vector<TimeWindow> w(n, {0, latest});
  w.back().latest = last;
  return w;
}

Instance make_fig4_triangle() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int s1 = b.vertex(1, 0);
  const int s2 = b.vertex(0.5, 0.866);
  const int f = b.vertex(0.5, 0.289);
  const int a0 = b.vertex(0.7, 0.2);
  const int a1 = b.vertex(0.65, 0.45);
  const int a2 = b.vertex(0.6, 0.7);
  b.arc(d, s1, 1, 1);
  b.arc(s1, s2, 1, 1);
  b.arc(s2, d, 1, 1);
  b.arc(d, f, 0.6, 0.2);
  b.arc(f, s1, 0.6, 1.0);
  b.arc(s1, f, 0.6, 0.2);
  b.arc(f, s2, 0.6, 2.0);
  b.arc(s2, f, 0.6, 0.2);
  b.arc(f, d, 0.6, 3.0);
  b.arc(s1, a0, 0.3, 0.3);
  b.arc(a0, a1, 0.3, 0.3);
  b.arc(a1, a2, 0.3, 0.3);
  b.arc(a2, s2, 0.3, 0.3);
  b.stationary("center", f, 1.0, 20.0);
  b.inst.dynamic.push_back(
      {"strip", 2.0, 2.0, {{a0, a1, 1e-3}, {a1, a2, 1e-3}}});
  b.route("v0", {d, s1, s2, d}, wide(4, 10, 20));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(3, 0, 5, 0.05);
}

Instance make_fig3_toy() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int sA = b.vertex(2, 1);
  const int a0 = b.vertex(2.5, 0);
  const int a1 = b.vertex(3, 0);
  const int a2 = b.vertex(3.5, 0);
  b.arc(d, A, 2, 3);
  b.arc(A, B, 2, 3);
  b.arc(B, d, 2, 3);
  b.arc(A, sA, 1, 0.5);
  b.arc(sA, B, 2, 3.0);
  b.arc(A, a0, 0.5, 0.75);
  b.arc(a0, a1, 0.5, 0.75);
  b.arc(a1, a2, 0.5, 0.75);
  b.arc(a2, B, 0.5, 0.75);
  b.stationary("near-A", sA, 2.0, 20.0);
  b.inst.dynamic.push_back(
      {"road-AB", 6.0, 2.0, {{a0, a1, 1e-3}, {a1, a2, 1e-3}}});
  b.route("v0", {d, A, B, d}, wide(4, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(5, 0, 10, 0.05);
}

Instance make_infeasible_window() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(5, 0);
  const int s = b.vertex(2.5, 1);
  b.arc(d, A, 5, 1);
  b.arc(A, d, 5, 1);
  b.arc(d, s, 3, 0.6);
  b.arc(s, A, 3, 0.6);
  b.stationary("mid", s, 2.0, 18.0);
  b.route("v0", {d, A, d}, {{0, 1}, {0, 2}, {0, 20}});
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(5, 0, 5, 0.05);
}

Instance make_forced_station() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int good = b.vertex(3, 0.5);
  const int bad = b.vertex(10, 10);
  b.arc(d, A, 2, 2);
  b.arc(A, B, 2, 2);
  b.arc(B, d, 2, 2);
  b.arc(A, good, 0.6, 1.0);
  b.arc(good, B, 0.6, 1.0);
  b.arc(A, bad, 8, 8);
  b.arc(bad, B, 8, 8);
  b.stationary("good", good, 2.0, 20.0);
  b.stationary("bad", bad, 2.0, 18.0);
  b.route("v0", {d, A, B, d}, wide(4, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(4, 0, 6, 0.05);
}

Instance make_prefix_2of3() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int a0 = b.vertex(2.3, 0);
  const int a1 = b.vertex(2.8, 0);
  const int a2 = b.vertex(3.3, 0);
  const int a3 = b.vertex(3.8, 0);
  const int s = b.vertex(3, 1);
  b.arc(d, A, 2, 3);
  b.arc(A, B, 2, 3);
  b.arc(B, d, 2, 3);
  b.arc(A, a0, 0.5, 0.6);
  b.arc(a0, a1, 1, 0.6);
  b.arc(a1, a2, 1, 0.6);
  b.arc(a2, a3, 1, 0.6);
  b.arc(a3, B, 0.5, 0.6);
  b.arc(A, s, 1.2, 1.5);
  b.arc(s, B, 1.2, 1.5);
  b.stationary("fallback", s, 2.0, 22.0);
  b.inst.dynamic.push_back(
      {"road3", 2.0, 2.0, {{a0, a1, 1e-3}, {a1, a2, 1e-3}, {a2, a3, 1e-3}}});
  b.route("v0", {d, A, B, d}, wide(4, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(5, 0, 10, 0.05);
}

Instance make_two_vehicles() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(2, 2);
  const int s = b.vertex(0.5, 0.5);
  b.arc(d, A, 2, 3);
  b.arc(A, d, 2, 3);
  b.arc(d, B, 2, 3);
  b.arc(B, d, 2, 3);
  b.arc(d, s, 0.7, 1);
  b.arc(s, d, 0.7, 1);
  b.arc(s, A, 1.5, 2.2);
  b.arc(A, s, 1.5, 2.2);
  b.arc(s, B, 1.5, 2.2);
  b.arc(B, s, 1.5, 2.2);
  b.stationary("shared", s, 3.0, 20.0);
  b.route("v0", {d, A, d}, wide(3, 20, 30));
  b.route("v1", {d, B, d}, wide(3, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(5, 0, 8, 0.05);
}

Instance make_swap_cheaper_stat() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int s = b.vertex(3, 0.4);
  const int a0 = b.vertex(2.4, 0);
  const int a1 = b.vertex(3, 0);
  const int a2 = b.vertex(3.6, 0);
  b.arc(d, A, 2, 2);
  b.arc(A, B, 2, 2);
  b.arc(B, d, 2, 2);
  b.arc(A, s, 0.5, 1.0);
  b.arc(s, B, 0.5, 1.0);
  b.arc(A, a0, 0.3, 0.35);
  b.arc(a0, a1, 0.6, 0.65);
  b.arc(a1, a2, 0.6, 0.65);
  b.arc(a2, B, 0.3, 0.35);
  b.stationary("cheap", s, 2.0, 16.0);
  b.inst.dynamic.push_back(
      {"pricey", 2.0, 18.0, {{a0, a1, 1e-3}, {a1, a2, 1e-3}}});
  b.route("v0", {d, A, B, d}, wide(4, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(4, 0, 6, 0.05);
}

Instance make_redundant_stat() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int s1 = b.vertex(3, 0.5);
  const int s2 = b.vertex(2, -0.5);
  b.arc(d, A, 2, 2);
  b.arc(A, B, 2, 2);
  b.arc(B, d, 2, 2);
  b.arc(A, s1, 0.6, 1.0);
  b.arc(s1, B, 0.6, 1.0);
  b.arc(B, s2, 0.6, 1.0);
  b.arc(s2, d, 0.6, 1.0);
  b.stationary("mid-AB", s1, 2.0, 20.0);
  b.stationary("mid-Bd", s2, 2.0, 21.0);
  b.route("v0", {d, A, B, d}, wide(4, 20, 30));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(4.5, 0, 6, 0.05);
}

Instance make_empty_feasible() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(1, 0);
  const int s = b.vertex(0.5, 0.5);
  b.arc(d, A, 1, 1);
  b.arc(A, d, 1, 1);
  b.arc(d, s, 0.7, 0.7);
  b.arc(s, A, 0.7, 0.7);
  b.stationary("spare", s, 2.0, 15.0);
  b.route("v0", {d, A, d}, wide(3, 10, 20));
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(3, 0, 5, 0.05);
}

Instance make_var_price_base() {
  Builder b;
  const int d = b.vertex(0, 0);
  const int A = b.vertex(2, 0);
  const int B = b.vertex(4, 0);
  const int s = b.vertex(2, 1);
  b.arc(d, A, 2, 2);
  b.arc(A, B, 2, 2);
  b.arc(B, d, 2, 2);
  b.arc(B, s, 1, 1.0);
  b.arc(s, d, 1, 1.0);
  b.stationary("late", s, 2.0, 20.0);
  // The earliest-departure bound at B pushes the charging start to 9.5, which
  // falls into the cheap band of the off-peak tariff used in tests.
  b.route("v0", {d, A, B, d}, {{0, 20}, {0, 20}, {8.5, 20}, {0, 12}});
  b.inst.depot_start = d;
  b.inst.depot_end = d;
  return b.finish(5, 0, 10, 0.3);
}

}  // namespace

std::vector<std::string> tiny_family_names() {
  return {"fig4-triangle", "fig3-toy",         "infeasible-window",
          "forced-station", "prefix-2of3",     "two-vehicles",
          "swap-cheaper-stat", "redundant-stat", "empty-feasible",
          "var-price-base"};
}

Instance tiny_family(const std::string& name) {
  if (name == "fig4-triangle") return make_fig4_triangle();
  if (name == "fig3-toy") return make_fig3_toy();
  if (name == "infeasible-window") return make_infeasible_window();
  if (name == "forced-station") return make_forced_station();
  if (name == "prefix-2of3") return make_prefix_2of3();
  if (name == "two-vehicles") return make_two_vehicles();
  if (name == "swap-cheaper-stat") return make_swap_cheaper_stat();
  if (name == "redundant-stat") return make_redundant_stat();
  if (name == "empty-feasible") return make_empty_feasible();
  if (name == "var-price-base") return make_var_price_base();
  throw std::runtime_error("unknown tiny-family instance: " + name);
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0, 1)(rng);
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double dist(const Vertex& a, const Vertex& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

Configuration all_stations(const Instance& inst) {
  std::vector<int> seg_counts;
  for (const DynamicStation& d : inst.dynamic)
    seg_counts.push_back(static_cast<int>(d.segments.size()));
  Configuration c(static_cast<int>(inst.stationary.size()), seg_counts);
  for (int f = 0; f < c.stationary_count(); ++f) c.set_stationary(f, true);
  for (int f = 0; f < c.dynamic_count(); ++f)
    c.set_segment_prefix(f, c.segment_count(f));
  return c;
}

bool all_stations_feasible(const Instance& inst) {
  const Configuration config = all_stations(inst);
  for (std::size_t k = 0; k < inst.routes.size(); ++k) {
    const VehicleGraph g = build_vehicle_graph(inst, config, static_cast<int>(k));
    SolveOptions opts;
    opts.beta_min = std::numeric_limits<double>::infinity();
    if (!solve_subproblem(g, inst, opts).feasible) return false;
  }
  return true;
}

Instance generate_attempt(const GenSpec& spec, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Instance inst;

  // Stop layout per topology on a 100x100 field, depot in the center.
  std::vector<Vertex> stops;
  const int clusters = std::max(2, spec.stops / 4);
  std::vector<Vertex> centers;
  for (int c = 0; c < clusters; ++c)
    centers.push_back({uniform(rng, 10, 90), uniform(rng, 10, 90)});
  for (int i = 0; i < spec.stops; ++i) {
    const bool clustered =
        spec.topology == Topology::Clustered ||
        (spec.topology == Topology::Mixed && i % 2 == 0);
    if (clustered) {
      const Vertex& c = centers[i % clusters];
      stops.push_back({c.x + uniform(rng, -6, 6), c.y + uniform(rng, -6, 6)});
    } else {
      stops.push_back({uniform(rng, 0, 100), uniform(rng, 0, 100)});
    }
  }

  const int depot = 0;
  inst.vertices.push_back({50, 50});
  std::vector<int> stop_vertex;
  for (const Vertex& v : stops) {
    stop_vertex.push_back(static_cast<int>(inst.vertices.size()));
    inst.vertices.push_back(v);
  }
  inst.depot_start = depot;
  inst.depot_end = depot;

  // Assign stops round-robin by polar angle, order each tour by angle.
  std::vector<int> order(stop_vertex.begin(), stop_vertex.end());
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const Vertex& va = inst.vertices[a];
    const Vertex& vb = inst.vertices[b];
    return std::atan2(va.y - 50, va.x - 50) < std::atan2(vb.y - 50, vb.x - 50);
  });
  std::vector<std::vector<int>> tours(spec.vehicles);
  for (std::size_t i = 0; i < order.size(); ++i)
    tours[i * spec.vehicles / order.size()].push_back(order[i]);

  const double speed = 10.0;        // distance per time unit
  const double consume = 0.15;      // kWh per distance unit
  auto travel = [&](int a, int b) {
    return dist(inst.vertices[a], inst.vertices[b]) / speed;
  };
  auto energy = [&](int a, int b) {
    return dist(inst.vertices[a], inst.vertices[b]) * consume;
  };

  double max_route_energy = 0;
  struct GapRef {
    int route, pos, from, to;
    double length;
  };
  std::vector<GapRef> gaps;
  for (int k = 0; k < spec.vehicles; ++k) {
    VehicleRoute route;
    route.id = "v" + std::to_string(k);
    route.stops.push_back(depot);
    for (int s : tours[k]) route.stops.push_back(s);
    route.stops.push_back(depot);
    double t = 0, e = 0;
    route.windows.push_back({0, 2});
    for (std::size_t i = 1; i < route.stops.size(); ++i) {
      const int a = route.stops[i - 1];
      const int b = route.stops[i];
      if (!inst.find_arc(a, b)) {
        inst.arcs.push_back({a, b, travel(a, b), energy(a, b)});
        inst.build_index();
      }
      gaps.push_back({k, static_cast<int>(i), a, b,
                      dist(inst.vertices[a], inst.vertices[b])});
      t += travel(a, b);
      e += energy(a, b);
      route.windows.push_back({0, t * spec.window_slack + 2});
    }
    max_route_energy = std::max(max_route_energy, e);
    inst.routes.push_back(std::move(route));
  }

  inst.params.q_min = 0;
  inst.params.q_max = max_route_energy;
  inst.params.q_init = 0.6 * max_route_energy;
  inst.params.p_c = spec.p_c;
  inst.params.delta = 1.0;
  inst.price_curve = PriceCurve(spec.p_r);

  auto rate = [&](double base) {
    return std::bernoulli_distribution(spec.rate_boost_prob)(rng)
               ? base * spec.rate_boost
               : base;
  };
  const double base_rate = consume * speed * 3;  // 3x the consumption rate

  // Dynamic candidates on the longest gaps, ties broken by gap index.
  std::vector<std::size_t> by_length(gaps.size());
  std::iota(by_length.begin(), by_length.end(), 0);
  std::stable_sort(by_length.begin(), by_length.end(),
                   [&](std::size_t a, std::size_t b) {
                     return gaps[a].length > gaps[b].length;
                   });
  const int dyn_count = std::min<int>(
      static_cast<int>(spec.dynamic_fraction * gaps.size()),
      static_cast<int>(gaps.size()));
  for (int i = 0; i < dyn_count; ++i) {
    const GapRef& g = gaps[by_length[i]];
    const int parts = uniform_int(rng, spec.segment_min, spec.segment_max);
    const Vertex& va = inst.vertices[g.from];
    const Vertex& vb = inst.vertices[g.to];
    // Interior points 10%..90% along the gap; in/out arcs and segments carry
    // proportional time and a 10% energy detour surcharge.
    std::vector<int> pts;
    for (int s = 0; s <= parts; ++s) {
      const double f = 0.1 + 0.8 * s / parts;
      pts.push_back(static_cast<int>(inst.vertices.size()));
      inst.vertices.push_back(
          {va.x + f * (vb.x - va.x), va.y + f * (vb.y - va.y)});
    }
    auto seg_arc = [&](int a, int b) {
      const double d = dist(inst.vertices[a], inst.vertices[b]);
      inst.arcs.push_back({a, b, d / speed, d * consume * 1.1});
    };
    seg_arc(g.from, pts.front());
    DynamicStation dyn;
    dyn.id = "dyn" + std::to_string(inst.dynamic.size());
    dyn.rate = rate(base_rate);
    dyn.inverter_cost = uniform(rng, spec.dynamic_cost_lo, spec.dynamic_cost_hi);
    for (int s = 0; s < parts; ++s) {
      seg_arc(pts[s], pts[s + 1]);
      dyn.segments.push_back({pts[s], pts[s + 1], spec.segment_cost});
    }
    seg_arc(pts.back(), g.to);
    inst.dynamic.push_back(std::move(dyn));
  }

  // Stationary candidates near random gap midpoints, up to 2 per vehicle.
  const int stat_count = std::min<int>(2 * spec.vehicles,
                                       static_cast<int>(gaps.size()));
  for (int i = 0; i < stat_count; ++i) {
    const GapRef& g = gaps[uniform_int(rng, 0, static_cast<int>(gaps.size()) - 1)];
    const Vertex& va = inst.vertices[g.from];
    const Vertex& vb = inst.vertices[g.to];
    const int v = static_cast<int>(inst.vertices.size());
    inst.vertices.push_back({(va.x + vb.x) / 2 + uniform(rng, -3, 3),
                             (va.y + vb.y) / 2 + uniform(rng, -3, 3)});
    const double din = dist(va, inst.vertices[v]);
    const double dout = dist(inst.vertices[v], vb);
    inst.arcs.push_back({g.from, v, din / speed, din * consume});
    inst.arcs.push_back({v, g.to, dout / speed, dout * consume});
    inst.stationary.push_back(
        {"stat" + std::to_string(i), v, rate(base_rate),
         uniform(rng, spec.stationary_cost_lo, spec.stationary_cost_hi)});
  }

  inst.build_index();
  inst.check();
  return inst;
}

}  // namespace

Instance generate(const GenSpec& spec) {
  for (int attempt = 0; attempt < 100; ++attempt) {
    Instance inst = generate_attempt(spec, spec.seed * 1000003 + attempt);
    if (all_stations_feasible(inst)) return inst;
  }
  throw std::runtime_error("instance generation failed: no feasible draw");
}

Instance random_tiny(std::uint64_t seed) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::mt19937_64 rng(seed * 2654435761u + attempt);
    Builder b;
    const int n_stops = uniform_int(rng, 2, 3);
    const int d = b.vertex(5, 5);
    std::vector<int> stops{d};
    for (int i = 0; i < n_stops; ++i)
      stops.push_back(b.vertex(uniform(rng, 0, 10), uniform(rng, 0, 10)));
    stops.push_back(d);

    auto dist_v = [&](int a, int c) {
      return dist(b.inst.vertices[a], b.inst.vertices[c]);
    };
    double total_e = 0, total_t = 0;
    std::vector<TimeWindow> windows{{0, 2}};
    for (std::size_t i = 1; i < stops.size(); ++i) {
      const double dd = std::max(dist_v(stops[i - 1], stops[i]), 0.5);
      b.arc(stops[i - 1], stops[i], dd, dd * 0.5);
      total_e += dd * 0.5;
      total_t += dd;
      windows.push_back({0, total_t * 2 + 2});
    }

    const int n_stat = uniform_int(rng, 0, 2);
    for (int s = 0; s < n_stat; ++s) {
      const int gap = uniform_int(rng, 1, static_cast<int>(stops.size()) - 1);
      const int from = stops[gap - 1];
      const int to = stops[gap];
      const int v = b.vertex((b.inst.vertices[from].x + b.inst.vertices[to].x) / 2 +
                                 uniform(rng, -1, 1),
                             (b.inst.vertices[from].y + b.inst.vertices[to].y) / 2 +
                                 uniform(rng, -1, 1));
      const double din = std::max(dist_v(from, v), 0.3);
      const double dout = std::max(dist_v(v, to), 0.3);
      b.arc(from, v, din, din * 0.5);
      b.arc(v, to, dout, dout * 0.5);
      b.stationary("s" + std::to_string(s), v, uniform(rng, 1, 4),
                   uniform(rng, 15, 25));
    }
    const int n_dyn = uniform_int(rng, 0, 1);
    for (int s = 0; s < n_dyn; ++s) {
      const int gap = uniform_int(rng, 1, static_cast<int>(stops.size()) - 1);
      const int from = stops[gap - 1];
      const int to = stops[gap];
      const Vertex va = b.inst.vertices[from];
      const Vertex vb = b.inst.vertices[to];
      std::vector<int> pts;
      for (int j = 0; j <= 2; ++j) {
        const double f = 0.2 + 0.3 * j;
        pts.push_back(b.vertex(va.x + f * (vb.x - va.x) + 0.1,
                               va.y + f * (vb.y - va.y)));
      }
      auto seg_arc = [&](int x, int y) {
        const double dd = std::max(dist_v(x, y), 0.2);
        b.arc(x, y, dd, dd * 0.55);
      };
      seg_arc(from, pts[0]);
      seg_arc(pts[0], pts[1]);
      seg_arc(pts[1], pts[2]);
      seg_arc(pts[2], to);
      DynamicStation dyn;
      dyn.id = "d0";
      dyn.rate = uniform(rng, 1, 4);
      dyn.inverter_cost = uniform(rng, 1.5, 2.5);
      dyn.segments.push_back({pts[0], pts[1], 1e-3});
      dyn.segments.push_back({pts[1], pts[2], 1e-3});
      b.inst.dynamic.push_back(std::move(dyn));
    }

    b.route("v0", stops, windows);
    b.inst.depot_start = d;
    b.inst.depot_end = d;
    const double q_max = std::max(total_e * uniform(rng, 0.8, 1.3), 1.0);
    const double q_init = q_max * uniform(rng, 0.5, 1.0);
    Instance inst = b.finish(q_init, 0, q_max, 0.05);
    try {
      if (all_stations_feasible(inst)) return inst;
    } catch (const std::exception&) {
      // unusable draw; retry with the next sub-seed
    }
  }
  throw std::runtime_error("random_tiny: no feasible draw");
}

}  // namespace induct
