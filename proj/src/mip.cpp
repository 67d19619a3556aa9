#include "induct/mip.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include "induct/instance_io.hpp"

namespace induct {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int add_var(MipModel& m, std::string name, VarKind kind, double lb, double ub,
            double obj) {
  const int id = static_cast<int>(m.vars.size());
  m.index.emplace(name, id);
  m.vars.push_back({std::move(name), kind, lb, ub, obj});
  return id;
}

void add_row(MipModel& m, std::string name,
             std::vector<std::pair<int, double>> terms, RowSense sense,
             double rhs) {
  m.rows.push_back({std::move(name), std::move(terms), sense, rhs});
}

std::string tag(const char* stem, std::initializer_list<int> ids) {
  std::string s = stem;
  for (int i : ids) {
    s += '_';
    s += std::to_string(i);
  }
  return s;
}

}  // namespace

MipModel build_mip(const Instance& instance, int copy_count) {
  if (copy_count < 0) throw std::invalid_argument("copy_count must be >= 0");
  if (!instance.price_curve.is_constant())
    throw std::runtime_error(
        "MIP export requires a constant recharge price curve");
  const double p_r = instance.price_curve.global_min();
  const EnergyParams& P = instance.params;
  const int nl = static_cast<int>(instance.routes.size());

  MipModel m;

  // Expanded vertex set: instance vertices, plus a separate depot-end
  // representation when the depot start/end share a vertex, plus copies.
  const int nv = static_cast<int>(instance.vertices.size());
  m.vertex_count = nv;
  m.base_vertex.resize(nv);
  for (int v = 0; v < nv; ++v) m.base_vertex[v] = v;
  m.dplus = instance.depot_start;
  if (instance.depot_end == instance.depot_start) {
    m.dminus = m.vertex_count++;
    m.base_vertex.push_back(instance.depot_end);
  } else {
    m.dminus = instance.depot_end;
  }
  auto new_vertex = [&](int base) {
    m.base_vertex.push_back(base);
    return m.vertex_count++;
  };

  // Every route must start at the depot start, end at the depot end, and not
  // revisit vertices in between: departure times are indexed per vertex.
  for (const VehicleRoute& r : instance.routes) {
    if (r.stops.front() != instance.depot_start ||
        r.stops.back() != instance.depot_end)
      throw std::runtime_error("MIP export: route must start/end at the depot");
    std::set<int> seen(r.stops.begin(), std::prev(r.stops.end()));
    if (seen.size() != r.stops.size() - 1)
      throw std::runtime_error("MIP export: route revisits a vertex");
    if (!std::isfinite(r.windows.back().latest))
      throw std::runtime_error("MIP export: route end window must be finite");
  }

  // Base arcs, redirected so the depot-end representation receives all arcs
  // into the depot while the start representation keeps the outgoing ones.
  // Segment arcs are added later by the dynamic-station block so each exists
  // exactly once, tagged with its owner.
  std::set<std::pair<int, int>> segment_pairs;
  for (const DynamicStation& d : instance.dynamic)
    for (const Segment& s : d.segments) segment_pairs.emplace(s.from, s.to);
  const bool split = m.dminus >= nv;
  for (const NetArc& a : instance.arcs) {
    if (segment_pairs.count({a.from, a.to})) continue;
    const int to = split && a.to == instance.depot_start ? m.dminus : a.to;
    if (split && a.from == instance.depot_start && to == m.dminus) continue;
    m.arcs.push_back({a.from, to, a.time, a.energy});
  }

  // Stationary stations with zero-cost copies on duplicated vertices.
  for (int f = 0; f < static_cast<int>(instance.stationary.size()); ++f)
    m.stationary.push_back(
        {instance.stationary[f].vertex, instance.stationary[f].rate, f});
  const int n_stat_orig = static_cast<int>(m.stationary.size());
  for (int c = 0; c < copy_count; ++c) {
    for (int f = 0; f < n_stat_orig; ++f) {
      const int orig_v = m.stationary[f].vertex;
      const int v = new_vertex(m.base_vertex[orig_v]);
      const int n_arcs = static_cast<int>(m.arcs.size());
      for (int a = 0; a < n_arcs; ++a) {
        if (m.arcs[a].dyn >= 0) continue;
        if (m.arcs[a].from == orig_v)
          m.arcs.push_back({v, m.arcs[a].to, m.arcs[a].time, m.arcs[a].energy});
        else if (m.arcs[a].to == orig_v)
          m.arcs.push_back(
              {m.arcs[a].from, v, m.arcs[a].time, m.arcs[a].energy});
      }
      m.stationary.push_back({v, m.stationary[f].rate, m.stationary[f].orig});
    }
  }

  // Dynamic stations: segment arcs of the originals, then full chain copies
  // (fresh chain vertices, duplicated connect arcs at both ends).
  for (int f = 0; f < static_cast<int>(instance.dynamic.size()); ++f) {
    const DynamicStation& d = instance.dynamic[f];
    MipDynamic md{d.rate, f, {}};
    for (int s = 0; s < static_cast<int>(d.segments.size()); ++s) {
      const NetArc& a = instance.arc(d.segments[s].from, d.segments[s].to);
      md.seg_arcs.push_back(static_cast<int>(m.arcs.size()));
      m.arcs.push_back({a.from, a.to, a.time, a.energy, static_cast<int>(f), s});
    }
    m.dynamic.push_back(std::move(md));
  }
  const int n_dyn_orig = static_cast<int>(m.dynamic.size());
  for (int c = 0; c < copy_count; ++c) {
    for (int f = 0; f < n_dyn_orig; ++f) {
      const DynamicStation& d = instance.dynamic[m.dynamic[f].orig];
      std::unordered_map<int, int> chain;  // original vertex -> copy vertex
      chain.emplace(d.segments.front().from,
                    new_vertex(d.segments.front().from));
      for (const Segment& s : d.segments)
        chain.emplace(s.to, new_vertex(s.to));
      const int n_arcs = static_cast<int>(m.arcs.size());
      for (int a = 0; a < n_arcs; ++a) {
        if (m.arcs[a].dyn >= 0) continue;
        const bool from_in = chain.count(m.arcs[a].from) > 0;
        const bool to_in = chain.count(m.arcs[a].to) > 0;
        if (from_in == to_in) continue;  // connect arcs only
        m.arcs.push_back({from_in ? chain[m.arcs[a].from] : m.arcs[a].from,
                          to_in ? chain[m.arcs[a].to] : m.arcs[a].to,
                          m.arcs[a].time, m.arcs[a].energy});
      }
      MipDynamic md{m.dynamic[f].rate, m.dynamic[f].orig, {}};
      for (int s = 0; s < static_cast<int>(d.segments.size()); ++s) {
        const NetArc& a = instance.arc(d.segments[s].from, d.segments[s].to);
        md.seg_arcs.push_back(static_cast<int>(m.arcs.size()));
        m.arcs.push_back({chain[a.from], chain[a.to], a.time, a.energy,
                          static_cast<int>(m.dynamic.size()), s});
      }
      m.dynamic.push_back(std::move(md));
    }
  }

  const int na = static_cast<int>(m.arcs.size());
  const int ns = static_cast<int>(m.stationary.size());
  const int nd = static_cast<int>(m.dynamic.size());
  std::vector<int> stat_at(m.vertex_count, -1);  // vertex -> stationary index
  for (int f = 0; f < ns; ++f) stat_at[m.stationary[f].vertex] = f;

  // --- Variables (deterministic order) ---
  for (int k = 0; k < nl; ++k) {
    m.x.emplace_back();
    for (int a = 0; a < na; ++a)
      m.x[k].push_back(add_var(
          m, tag("x", {k, m.arcs[a].from, m.arcs[a].to}), VarKind::Binary, 0, 1,
          P.p_c * m.arcs[a].energy));
  }
  for (int f = 0; f < ns; ++f)
    m.y.push_back(add_var(m, tag("y", {f}), VarKind::Binary, 0, 1,
                          f < n_stat_orig
                              ? instance.stationary[m.stationary[f].orig].cost
                              : 0.0));
  for (int f = 0; f < nd; ++f) {
    m.w.push_back(add_var(
        m, tag("w", {f}), VarKind::Binary, 0, 1,
        f < n_dyn_orig ? instance.dynamic[m.dynamic[f].orig].inverter_cost
                       : 0.0));
    m.z.emplace_back();
    const DynamicStation& d = instance.dynamic[m.dynamic[f].orig];
    for (int s = 0; s < static_cast<int>(d.segments.size()); ++s)
      m.z[f].push_back(add_var(m, tag("z", {f, s}), VarKind::Binary, 0, 1,
                               f < n_dyn_orig ? d.segments[s].cost : 0.0));
  }
  for (int k = 0; k < nl; ++k) {
    const VehicleRoute& route = instance.routes[k];
    const double horizon = route.windows.back().latest;
    std::vector<double> e(m.vertex_count, 0), l(m.vertex_count, horizon);
    for (std::size_t p = 0; p < route.stops.size(); ++p) {
      const int v = p + 1 == route.stops.size() ? m.dminus : route.stops[p];
      e[v] = route.windows[p].earliest;
      l[v] = route.windows[p].latest;
    }
    m.tau.emplace_back();
    m.rho.emplace_back();
    for (int v = 0; v < m.vertex_count; ++v) {
      m.tau[k].push_back(
          add_var(m, tag("tau", {k, v}), VarKind::Continuous, e[v], l[v], 0));
      m.rho[k].push_back(add_var(m, tag("rho", {k, v}), VarKind::Continuous,
                                 P.q_min, P.q_max, 0));
    }
  }
  for (int k = 0; k < nl; ++k) {
    const double horizon = instance.routes[k].windows.back().latest;
    m.dtau.emplace_back();
    m.drho.emplace_back();
    for (int f = 0; f < ns; ++f) {
      m.dtau[k].push_back(add_var(m, tag("dtau", {k, f}), VarKind::Integer, 0,
                                  std::floor(horizon / P.delta), 0));
      m.drho[k].push_back(
          add_var(m, tag("drho", {k, f}), VarKind::Continuous, 0, kInf, p_r));
    }
  }
  for (int k = 0; k < nl; ++k) {
    m.seg_rho.emplace_back();
    for (int f = 0; f < nd; ++f) {
      m.seg_rho[k].emplace_back();
      for (int s = 0; s < static_cast<int>(m.dynamic[f].seg_arcs.size()); ++s)
        m.seg_rho[k][f].push_back(add_var(m, tag("drhos", {k, f, s}),
                                          VarKind::Continuous, 0, kInf, p_r));
    }
  }

  std::vector<std::vector<int>> in(m.vertex_count), out(m.vertex_count);
  for (int a = 0; a < na; ++a) {
    out[m.arcs[a].from].push_back(a);
    in[m.arcs[a].to].push_back(a);
  }

  // --- Constraints ---
  // Flow conservation at every vertex except the depot representations.
  for (int k = 0; k < nl; ++k)
    for (int v = 0; v < m.vertex_count; ++v) {
      if (v == m.dplus || v == m.dminus) continue;
      std::vector<std::pair<int, double>> terms;
      for (int a : in[v]) terms.emplace_back(m.x[k][a], 1.0);
      for (int a : out[v]) terms.emplace_back(m.x[k][a], -1.0);
      add_row(m, tag("flow", {k, v}), std::move(terms), RowSense::EQ, 0);
    }
  // Mandatory visits: every route vertex after the start depot is entered.
  for (int k = 0; k < nl; ++k) {
    const VehicleRoute& route = instance.routes[k];
    for (std::size_t p = 1; p < route.stops.size(); ++p) {
      const int v = p + 1 == route.stops.size() ? m.dminus : route.stops[p];
      std::vector<std::pair<int, double>> terms;
      for (int a : in[v]) terms.emplace_back(m.x[k][a], 1.0);
      add_row(m, tag("visit", {k, static_cast<int>(p)}), std::move(terms),
              RowSense::GE, 1);
    }
    std::vector<std::pair<int, double>> terms;
    for (int a : out[m.dplus]) terms.emplace_back(m.x[k][a], 1.0);
    add_row(m, tag("depart", {k}), std::move(terms), RowSense::GE, 1);
  }
  // Segments require their inverter.
  for (int f = 0; f < nd; ++f) {
    std::vector<std::pair<int, double>> terms;
    for (int id : m.z[f]) terms.emplace_back(id, 1.0);
    terms.emplace_back(m.w[f], -static_cast<double>(m.z[f].size()));
    add_row(m, tag("seglink", {f}), std::move(terms), RowSense::LE, 0);
  }
  // Stop order along each route.
  for (int k = 0; k < nl; ++k) {
    const VehicleRoute& route = instance.routes[k];
    for (std::size_t p = 1; p + 1 < route.stops.size(); ++p) {
      const int u = route.stops[p];
      const int v = p + 2 == route.stops.size() ? m.dminus : route.stops[p + 1];
      add_row(m, tag("order", {k, static_cast<int>(p)}),
              {{m.tau[k][u], 1.0}, {m.tau[k][v], -1.0}}, RowSense::LE, 0);
    }
  }
  // Big-M time propagation with idling allowed; the discrete charging time at
  // the target vertex delays departure.
  for (int k = 0; k < nl; ++k) {
    const double big = instance.routes[k].windows.back().latest;
    for (int a = 0; a < na; ++a) {
      const MipArc& arc = m.arcs[a];
      std::vector<std::pair<int, double>> terms = {{m.tau[k][arc.from], 1.0},
                                                   {m.tau[k][arc.to], -1.0},
                                                   {m.x[k][a], big}};
      if (stat_at[arc.to] >= 0)
        terms.emplace_back(m.dtau[k][stat_at[arc.to]], P.delta);
      add_row(m, tag("tprop", {k, a}), std::move(terms), RowSense::LE,
              big - arc.time);
    }
  }
  // Big-M SoC propagation, as an equality pair so SoC limits bind everywhere.
  for (int k = 0; k < nl; ++k)
    for (int a = 0; a < na; ++a) {
      const MipArc& arc = m.arcs[a];
      const double big = P.q_max - P.q_min + arc.energy;
      std::vector<std::pair<int, double>> terms = {{m.rho[k][arc.from], 1.0},
                                                   {m.rho[k][arc.to], -1.0}};
      if (arc.dyn >= 0) terms.emplace_back(m.seg_rho[k][arc.dyn][arc.seg], 1.0);
      if (stat_at[arc.to] >= 0)
        terms.emplace_back(m.drho[k][stat_at[arc.to]], 1.0);
      auto ge = terms;
      ge.emplace_back(m.x[k][a], -big);
      add_row(m, tag("socge", {k, a}), std::move(ge), RowSense::GE,
              arc.energy - big);
      terms.emplace_back(m.x[k][a], big);
      add_row(m, tag("socle", {k, a}), std::move(terms), RowSense::LE,
              arc.energy + big);
    }
  // Arrival SoC at stations stays above the minimum.
  for (int k = 0; k < nl; ++k)
    for (int f = 0; f < ns; ++f)
      add_row(m, tag("socmin", {k, f}),
              {{m.rho[k][m.stationary[f].vertex], 1.0}, {m.drho[k][f], -1.0}},
              RowSense::GE, P.q_min);
  // Initial SoC.
  for (int k = 0; k < nl; ++k)
    add_row(m, tag("init", {k}), {{m.rho[k][m.dplus], 1.0}}, RowSense::EQ,
            P.q_init);
  // Stationary charging: discrete periods at the station rate, only if built.
  for (int k = 0; k < nl; ++k)
    for (int f = 0; f < ns; ++f) {
      add_row(m, tag("statrate", {k, f}),
              {{m.drho[k][f], 1.0},
               {m.dtau[k][f], -P.delta * m.stationary[f].rate}},
              RowSense::EQ, 0);
      add_row(m, tag("statopen", {k, f}),
              {{m.drho[k][f], 1.0}, {m.y[f], -(P.q_max - P.q_min)}},
              RowSense::LE, 0);
    }
  // Dynamic charging: full segment rate while traversing a built segment.
  for (int k = 0; k < nl; ++k)
    for (int f = 0; f < nd; ++f)
      for (int s = 0; s < static_cast<int>(m.dynamic[f].seg_arcs.size()); ++s) {
        const MipArc& arc = m.arcs[m.dynamic[f].seg_arcs[s]];
        const double full = arc.time * m.dynamic[f].rate;
        const int xid = m.x[k][m.dynamic[f].seg_arcs[s]];
        add_row(m, tag("dynrate", {k, f, s}),
                {{m.seg_rho[k][f][s], 1.0}, {xid, -full}}, RowSense::LE, 0);
        add_row(m, tag("dynopen", {k, f, s}),
                {{m.seg_rho[k][f][s], 1.0}, {m.z[f][s], -(P.q_max - P.q_min)}},
                RowSense::LE, 0);
        add_row(m, tag("dynforce", {k, f, s}),
                {{m.seg_rho[k][f][s], 1.0}, {xid, -full}, {m.z[f][s], -full}},
                RowSense::GE, -full);
      }
  // Copies buildable only when their original is built.
  for (int f = n_stat_orig; f < ns; ++f) {
    const int orig = m.stationary[f].orig;
    int orig_idx = -1;
    for (int g = 0; g < n_stat_orig; ++g)
      if (m.stationary[g].orig == orig) orig_idx = g;
    add_row(m, tag("ylink", {f}), {{m.y[f], 1.0}, {m.y[orig_idx], -1.0}},
            RowSense::LE, 0);
  }
  for (int f = n_dyn_orig; f < nd; ++f) {
    int orig_idx = -1;
    for (int g = 0; g < n_dyn_orig; ++g)
      if (m.dynamic[g].orig == m.dynamic[f].orig) orig_idx = g;
    add_row(m, tag("wlink", {f}), {{m.w[f], 1.0}, {m.w[orig_idx], -1.0}},
            RowSense::LE, 0);
    for (int s = 0; s < static_cast<int>(m.z[f].size()); ++s)
      add_row(m, tag("zlink", {f, s}),
              {{m.z[f][s], 1.0}, {m.z[orig_idx][s], -1.0}}, RowSense::LE, 0);
  }

  return m;
}

namespace {

void write_terms(std::ostream& os, const MipModel& m,
                 const std::vector<std::pair<int, double>>& terms) {
  bool first = true;
  for (const auto& [var, coef] : terms) {
    if (coef == 0) continue;
    if (coef < 0) {
      os << (first ? "- " : " - ");
    } else if (!first) {
      os << " + ";
    }
    const double mag = std::abs(coef);
    if (mag != 1.0) os << format_double(mag) << ' ';
    os << m.vars[var].name;
    first = false;
  }
  if (first) os << "0 " << (m.vars.empty() ? "x" : m.vars[0].name);
}

}  // namespace

void write_lp(const MipModel& m, std::ostream& os) {
  os << "\\ induct mip export\n";
  os << "Minimize\n obj: ";
  std::vector<std::pair<int, double>> obj;
  for (int v = 0; v < static_cast<int>(m.vars.size()); ++v)
    if (m.vars[v].obj != 0) obj.emplace_back(v, m.vars[v].obj);
  if (m.vars.empty())
    os << "0";
  else
    write_terms(os, m, obj);
  os << "\nSubject To\n";
  for (const MipRow& row : m.rows) {
    os << ' ' << row.name << ": ";
    write_terms(os, m, row.terms);
    os << (row.sense == RowSense::LE   ? " <= "
           : row.sense == RowSense::GE ? " >= "
                                       : " = ")
       << format_double(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (const MipVar& v : m.vars) {
    if (v.kind == VarKind::Binary) continue;
    if (v.lb == v.ub) {
      os << ' ' << v.name << " = " << format_double(v.lb) << '\n';
    } else {
      os << ' ' << format_double(v.lb) << " <= " << v.name;
      if (std::isfinite(v.ub)) os << " <= " << format_double(v.ub);
      os << '\n';
    }
  }
  bool any = false;
  for (const MipVar& v : m.vars)
    if (v.kind == VarKind::Integer) {
      os << (any ? " " : "Generals\n ") << v.name;
      any = true;
    }
  if (any) os << '\n';
  any = false;
  for (const MipVar& v : m.vars)
    if (v.kind == VarKind::Binary) {
      os << (any ? " " : "Binaries\n ") << v.name;
      any = true;
    }
  if (any) os << '\n';
  os << "End\n";
}

std::unordered_map<std::string, double> parse_assignment(std::istream& is) {
  std::unordered_map<std::string, double> values;
  std::string line;
  while (std::getline(is, line)) {
    std::replace(line.begin(), line.end(), '=', ' ');
    std::istringstream ls(line);
    std::string name;
    double value;
    if (!(ls >> name) || name[0] == '#') continue;
    if (!(ls >> value)) throw std::runtime_error("bad assignment line: " + line);
    values[name] = value;
  }
  return values;
}

double objective_value(const MipModel& m,
                       const std::unordered_map<std::string, double>& values) {
  double total = 0;
  for (const MipVar& v : m.vars)
    if (v.obj != 0)
      if (auto it = values.find(v.name); it != values.end())
        total += v.obj * it->second;
  return total;
}

std::vector<std::string> check_assignment(
    const MipModel& m, const std::unordered_map<std::string, double>& values,
    double tol) {
  auto value = [&](int var) {
    auto it = values.find(m.vars[var].name);
    return it == values.end() ? 0.0 : it->second;
  };
  std::vector<std::string> violated;
  for (const MipRow& row : m.rows) {
    double lhs = 0;
    for (const auto& [var, coef] : row.terms) lhs += coef * value(var);
    const bool ok = row.sense == RowSense::LE   ? lhs <= row.rhs + tol
                    : row.sense == RowSense::GE ? lhs >= row.rhs - tol
                                                : std::abs(lhs - row.rhs) <= tol;
    if (!ok) violated.push_back(row.name);
  }
  return violated;
}

void write_warm_start(const MipModel& m, const Instance& instance,
                      const Solution& solution, std::ostream& os) {
  const int nl = static_cast<int>(instance.routes.size());
  std::vector<double> values(m.vars.size(), 0);
  // Defaults keep deactivated big-M rows satisfied.
  for (int k = 0; k < nl; ++k)
    for (int v = 0; v < m.vertex_count; ++v) {
      values[m.tau[k][v]] = m.vars[m.tau[k][v]].lb;
      values[m.rho[k][v]] = instance.params.q_max;
    }
  const int n_stat_orig = static_cast<int>(instance.stationary.size());
  const int n_dyn_orig = static_cast<int>(instance.dynamic.size());
  for (int f = 0; f < n_stat_orig; ++f)
    values[m.y[f]] = solution.config.stationary_built(f) ? 1 : 0;
  for (int f = 0; f < n_dyn_orig; ++f) {
    values[m.w[f]] = solution.config.inverter_built(f) ? 1 : 0;
    for (int s = 0; s < solution.config.segment_count(f); ++s)
      values[m.z[f][s]] = solution.config.segment_built(f, s) ? 1 : 0;
  }

  std::vector<std::vector<int>> out(m.vertex_count);
  for (int a = 0; a < static_cast<int>(m.arcs.size()); ++a)
    out[m.arcs[a].from].push_back(a);

  for (int k = 0; k < nl; ++k) {
    const VehiclePlan& plan = solution.plans[k];
    std::vector<char> visited(m.vertex_count, 0);
    int cur = m.dplus;
    visited[cur] = 1;
    values[m.tau[k][cur]] = plan.steps.front().departure;
    values[m.rho[k][cur]] = plan.steps.front().soc;
    for (std::size_t i = 1; i < plan.steps.size(); ++i) {
      const Step& st = plan.steps[i];
      if (st.vertex == m.base_vertex[cur] && st.route_pos < 0) {
        // Stationary idle: convert duration and recharge to the discrete
        // charging variables of the occupied station (or its copy).
        int f = -1;
        for (int g = 0; g < static_cast<int>(m.stationary.size()); ++g)
          if (m.stationary[g].vertex == cur) f = g;
        if (f < 0) throw std::runtime_error("warm start: idle off-station");
        const double dur = st.departure - plan.steps[i - 1].departure;
        values[m.dtau[k][f]] =
            std::llround(dur / instance.params.delta);
        values[m.drho[k][f]] = st.recharge;
        values[m.y[f]] = 1;
        values[m.tau[k][cur]] = st.departure;
        values[m.rho[k][cur]] = st.soc;
        continue;
      }
      const bool last = i + 1 == plan.steps.size();
      int chosen = -1;
      for (int a : out[cur]) {
        const int to = m.arcs[a].to;
        if (m.base_vertex[to] != st.vertex) continue;
        if (last != (to == m.dminus)) continue;
        if (visited[to]) continue;
        chosen = a;
        break;
      }
      if (chosen < 0)
        throw std::runtime_error("warm start: no unvisited expanded arc");
      values[m.x[k][chosen]] = 1;
      if (st.recharge > 0 && m.arcs[chosen].dyn >= 0) {
        const MipArc& arc = m.arcs[chosen];
        values[m.seg_rho[k][arc.dyn][arc.seg]] = st.recharge;
        values[m.z[arc.dyn][arc.seg]] = 1;
        values[m.w[arc.dyn]] = 1;
      }
      cur = m.arcs[chosen].to;
      visited[cur] = 1;
      values[m.tau[k][cur]] = st.departure;
      values[m.rho[k][cur]] = st.soc;
    }
    if (cur != m.dminus)
      throw std::runtime_error("warm start: plan does not reach the depot end");
  }
  for (std::size_t v = 0; v < m.vars.size(); ++v)
    os << m.vars[v].name << ' ' << format_double(values[v]) << '\n';
}

Solution decode_solution(const MipModel& m, const Instance& instance,
                         const std::unordered_map<std::string, double>& values) {
  auto value = [&](int var) {
    auto it = values.find(m.vars[var].name);
    return it == values.end() ? 0.0 : it->second;
  };
  Solution sol;
  sol.config = Configuration::zeros(instance);
  for (int f = 0; f < static_cast<int>(instance.stationary.size()); ++f)
    sol.config.set_stationary(f, value(m.y[f]) > 0.5);
  for (int f = 0; f < static_cast<int>(instance.dynamic.size()); ++f) {
    for (int s = 0; s < sol.config.segment_count(f); ++s)
      sol.config.set_segment(f, s, value(m.z[f][s]) > 0.5);
    if (value(m.w[f]) > 0.5 && sol.config.active_segments(f) == 0)
      sol.config.set_inverter(f, true);
  }

  std::vector<std::vector<int>> out(m.vertex_count);
  for (int a = 0; a < static_cast<int>(m.arcs.size()); ++a)
    out[m.arcs[a].from].push_back(a);
  std::vector<int> stat_at(m.vertex_count, -1);
  for (int f = 0; f < static_cast<int>(m.stationary.size()); ++f)
    stat_at[m.stationary[f].vertex] = f;

  for (int k = 0; k < static_cast<int>(instance.routes.size()); ++k) {
    const VehicleRoute& route = instance.routes[k];
    VehiclePlan plan;
    int cur = m.dplus;
    int expect = 1;
    plan.steps.push_back(
        {m.base_vertex[cur], value(m.tau[k][cur]), value(m.rho[k][cur]), 0, -1,
         0});
    const std::size_t guard = m.arcs.size() + 2;
    while (cur != m.dminus) {
      if (plan.steps.size() > guard)
        throw std::runtime_error("decode: selected arcs do not form a path");
      int chosen = -1;
      for (int a : out[cur])
        if (value(m.x[k][a]) > 0.5) {
          if (chosen >= 0)
            throw std::runtime_error("decode: branching arc selection");
          chosen = a;
        }
      if (chosen < 0)
        throw std::runtime_error("decode: path ends before the depot end");
      const MipArc& arc = m.arcs[chosen];
      const int to = arc.to;
      const double tau = value(m.tau[k][to]);
      const double rho = value(m.rho[k][to]);
      const int f = stat_at[to];
      const double drho = f >= 0 ? value(m.drho[k][f]) : 0.0;
      double seg_r = 0;
      if (arc.dyn >= 0) seg_r = value(m.seg_rho[k][arc.dyn][arc.seg]);
      int pos = -1;
      if (expect < static_cast<int>(route.stops.size()) &&
          ((to == m.dminus && expect + 1 == static_cast<int>(route.stops.size())) ||
           (to != m.dminus && m.base_vertex[to] == route.stops[expect] &&
            stat_at[to] < 0)))
        pos = expect++;
      // Arrival point; stationary charging appears as a same-vertex pair.
      plan.steps.push_back({m.base_vertex[to], tau - instance.params.delta *
                                                         (f >= 0
                                                              ? value(m.dtau[k][f])
                                                              : 0.0),
                            rho - drho, seg_r,
                            seg_r > 0 ? value(m.tau[k][arc.from]) : -1.0, pos});
      if (drho > 0)
        plan.steps.push_back(
            {m.base_vertex[to], tau, rho, drho,
             tau - instance.params.delta * value(m.dtau[k][f]), pos});
      cur = to;
    }
    sol.plans.push_back(std::move(plan));
  }
  sol.infrastructure_cost = infrastructure_cost(sol.config, instance);
  sol.operational_cost =
      operational_cost(sol.plans, instance.price_curve, instance.params.p_c);
  for (VehiclePlan& p : sol.plans) {
    p.routing_cost = 0;
    for (std::size_t i = 1; i < p.steps.size(); ++i) {
      const double consumed =
          p.steps[i - 1].soc - p.steps[i].soc + p.steps[i].recharge;
      p.routing_cost += consumed * instance.params.p_c;
      if (p.steps[i].recharge > 0)
        p.routing_cost += p.steps[i].recharge *
                          instance.price_curve.at(p.steps[i].charge_start);
    }
  }
  return sol;
}

}  // namespace induct
