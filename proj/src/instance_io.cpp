#include "induct/instance_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace induct {

std::string format_double(double v) {
  char buf[40];
  // Try increasing precision until the decimal form reads back exactly.
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

namespace {

class LineReader {
 public:
  explicit LineReader(std::istream& is) : is_(is) {}

  // Next non-empty, non-comment line.
  std::string next() {
    std::string line;
    while (std::getline(is_, line)) {
      ++line_no_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::size_t i = line.find_first_not_of(" \t");
      if (i == std::string::npos) continue;
      if (line[i] == '#') continue;
      return line.substr(i);
    }
    fail("unexpected end of file");
    return {};
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("parse error at line " + std::to_string(line_no_) +
                             ": " + msg);
  }

  int line_no() const { return line_no_; }

 private:
  std::istream& is_;
  int line_no_ = 0;
};

struct Fields {
  explicit Fields(const std::string& line) : ss(line) {}

  std::string word() {
    std::string w;
    if (!(ss >> w)) throw std::runtime_error("missing field");
    return w;
  }
  int integer() { return std::stoi(word()); }
  double real() { return std::stod(word()); }

  std::istringstream ss;
};

void expect(LineReader& r, Fields& f, const std::string& keyword) {
  const std::string w = f.word();
  if (w != keyword) r.fail("expected '" + keyword + "', got '" + w + "'");
}

}  // namespace

void write_instance(const Instance& instance, std::ostream& os) {
  os << "induct-instance/1\n";
  os << "params " << format_double(instance.params.q_init) << " "
     << format_double(instance.params.q_min) << " "
     << format_double(instance.params.q_max) << " "
     << format_double(instance.params.p_c) << " "
     << format_double(instance.params.delta) << "\n";
  os << "depot " << instance.depot_start << " " << instance.depot_end << "\n";
  const auto& bp = instance.price_curve.breakpoints();
  os << "price-curve " << bp.size() << "\n";
  for (const auto& [t, p] : bp)
    os << format_double(t) << " " << format_double(p) << "\n";
  os << "vertices " << instance.vertices.size() << "\n";
  for (const Vertex& v : instance.vertices)
    os << format_double(v.x) << " " << format_double(v.y) << "\n";
  os << "arcs " << instance.arcs.size() << "\n";
  for (const NetArc& a : instance.arcs)
    os << a.from << " " << a.to << " " << format_double(a.time) << " "
       << format_double(a.energy) << "\n";
  os << "stationary " << instance.stationary.size() << "\n";
  for (const StationaryStation& s : instance.stationary)
    os << s.id << " " << s.vertex << " " << format_double(s.rate) << " "
       << format_double(s.cost) << "\n";
  os << "dynamic " << instance.dynamic.size() << "\n";
  for (const DynamicStation& d : instance.dynamic) {
    os << d.id << " " << format_double(d.rate) << " "
       << format_double(d.inverter_cost) << " " << d.segments.size() << "\n";
    for (const Segment& s : d.segments)
      os << s.from << " " << s.to << " " << format_double(s.cost) << "\n";
  }
  os << "routes " << instance.routes.size() << "\n";
  for (const VehicleRoute& r : instance.routes) {
    os << r.id << " " << r.stops.size() << "\n";
    for (std::size_t i = 0; i < r.stops.size(); ++i)
      os << r.stops[i] << " " << format_double(r.windows[i].earliest) << " "
         << format_double(r.windows[i].latest) << "\n";
  }
}

Instance read_instance(std::istream& is) {
  LineReader r(is);
  {
    const std::string header = r.next();
    if (header != "induct-instance/1")
      r.fail("unsupported schema '" + header + "'");
  }
  Instance inst;
  {
    Fields f(r.next());
    expect(r, f, "params");
    inst.params.q_init = f.real();
    inst.params.q_min = f.real();
    inst.params.q_max = f.real();
    inst.params.p_c = f.real();
    inst.params.delta = f.real();
  }
  {
    Fields f(r.next());
    expect(r, f, "depot");
    inst.depot_start = f.integer();
    inst.depot_end = f.integer();
  }
  {
    Fields f(r.next());
    expect(r, f, "price-curve");
    const int n = f.integer();
    std::vector<std::pair<double, double>> bp;
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      const double t = g.real();
      const double p = g.real();
      bp.emplace_back(t, p);
    }
    inst.price_curve = PriceCurve(std::move(bp));
  }
  {
    Fields f(r.next());
    expect(r, f, "vertices");
    const int n = f.integer();
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      Vertex v;
      v.x = g.real();
      v.y = g.real();
      inst.vertices.push_back(v);
    }
  }
  {
    Fields f(r.next());
    expect(r, f, "arcs");
    const int n = f.integer();
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      NetArc a;
      a.from = g.integer();
      a.to = g.integer();
      a.time = g.real();
      a.energy = g.real();
      inst.arcs.push_back(a);
    }
  }
  {
    Fields f(r.next());
    expect(r, f, "stationary");
    const int n = f.integer();
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      StationaryStation s;
      s.id = g.word();
      s.vertex = g.integer();
      s.rate = g.real();
      s.cost = g.real();
      inst.stationary.push_back(std::move(s));
    }
  }
  {
    Fields f(r.next());
    expect(r, f, "dynamic");
    const int n = f.integer();
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      DynamicStation d;
      d.id = g.word();
      d.rate = g.real();
      d.inverter_cost = g.real();
      const int m = g.integer();
      for (int s = 0; s < m; ++s) {
        Fields h(r.next());
        Segment seg;
        seg.from = h.integer();
        seg.to = h.integer();
        seg.cost = h.real();
        d.segments.push_back(seg);
      }
      inst.dynamic.push_back(std::move(d));
    }
  }
  {
    Fields f(r.next());
    expect(r, f, "routes");
    const int n = f.integer();
    for (int i = 0; i < n; ++i) {
      Fields g(r.next());
      VehicleRoute route;
      route.id = g.word();
      const int m = g.integer();
      for (int s = 0; s < m; ++s) {
        Fields h(r.next());
        route.stops.push_back(h.integer());
        TimeWindow w;
        w.earliest = h.real();
        w.latest = h.real();
        route.windows.push_back(w);
      }
      inst.routes.push_back(std::move(route));
    }
  }
  inst.build_index();
  inst.check();
  return inst;
}

void write_solution(const Solution& sol, std::ostream& os) {
  os << "induct-solution/1\n";
  const Configuration& c = sol.config;
  os << "stationary " << c.stationary_count();
  for (int f = 0; f < c.stationary_count(); ++f)
    os << " " << (c.stationary_built(f) ? 1 : 0);
  os << "\n";
  os << "dynamic " << c.dynamic_count() << "\n";
  for (int f = 0; f < c.dynamic_count(); ++f) {
    os << (c.inverter_built(f) ? 1 : 0) << " " << c.segment_count(f);
    for (int s = 0; s < c.segment_count(f); ++s)
      os << " " << (c.segment_built(f, s) ? 1 : 0);
    os << "\n";
  }
  os << "costs " << format_double(sol.infrastructure_cost) << " "
     << format_double(sol.operational_cost) << "\n";
  os << "plans " << sol.plans.size() << "\n";
  for (std::size_t k = 0; k < sol.plans.size(); ++k) {
    const VehiclePlan& p = sol.plans[k];
    os << "plan " << k << " " << p.steps.size() << " "
       << format_double(p.routing_cost) << " " << (p.heuristic ? 1 : 0) << "\n";
    for (const Step& s : p.steps)
      os << s.vertex << " " << format_double(s.departure) << " "
         << format_double(s.soc) << " " << format_double(s.recharge) << " "
         << format_double(s.charge_start) << " " << s.route_pos << "\n";
  }
}

Solution read_solution(std::istream& is) {
  LineReader r(is);
  {
    const std::string header = r.next();
    if (header != "induct-solution/1")
      r.fail("unsupported schema '" + header + "'");
  }
  Solution sol;
  int stat_count = 0;
  std::vector<int> stat_bits;
  {
    Fields f(r.next());
    expect(r, f, "stationary");
    stat_count = f.integer();
    for (int i = 0; i < stat_count; ++i) stat_bits.push_back(f.integer());
  }
  int dyn_count = 0;
  std::vector<int> inverter_bits;
  std::vector<std::vector<int>> seg_bits;
  {
    Fields f(r.next());
    expect(r, f, "dynamic");
    dyn_count = f.integer();
    for (int i = 0; i < dyn_count; ++i) {
      Fields g(r.next());
      inverter_bits.push_back(g.integer());
      const int m = g.integer();
      std::vector<int> bits;
      for (int s = 0; s < m; ++s) bits.push_back(g.integer());
      seg_bits.push_back(std::move(bits));
    }
  }
  std::vector<int> seg_counts;
  for (const auto& b : seg_bits) seg_counts.push_back(static_cast<int>(b.size()));
  Configuration config(stat_count, seg_counts);
  for (int f = 0; f < stat_count; ++f)
    config.set_stationary(f, stat_bits[f] != 0);
  for (int f = 0; f < dyn_count; ++f) {
    for (int s = 0; s < static_cast<int>(seg_bits[f].size()); ++s)
      if (seg_bits[f][s] != 0) config.set_segment(f, s, true);
    if (inverter_bits[f] != 0) config.set_inverter(f, true);
  }
  sol.config = std::move(config);
  {
    Fields f(r.next());
    expect(r, f, "costs");
    sol.infrastructure_cost = f.real();
    sol.operational_cost = f.real();
  }
  {
    Fields f(r.next());
    expect(r, f, "plans");
    const int n = f.integer();
    for (int k = 0; k < n; ++k) {
      Fields g(r.next());
      expect(r, g, "plan");
      const int idx = g.integer();
      if (idx != k) r.fail("plan index out of order");
      const int steps = g.integer();
      VehiclePlan plan;
      plan.routing_cost = g.real();
      plan.heuristic = g.integer() != 0;
      for (int s = 0; s < steps; ++s) {
        Fields h(r.next());
        Step st;
        st.vertex = h.integer();
        st.departure = h.real();
        st.soc = h.real();
        st.recharge = h.real();
        st.charge_start = h.real();
        st.route_pos = h.integer();
        plan.steps.push_back(st);
      }
      sol.plans.push_back(std::move(plan));
    }
  }
  return sol;
}

namespace {

template <typename T, typename WriteFn>
void save_to(const T& value, const std::string& path, WriteFn write) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write(value, os);
  if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

void save_instance(const Instance& instance, const std::string& path) {
  save_to(instance, path, [](const Instance& i, std::ostream& os) {
    write_instance(i, os);
  });
}

Instance load_instance(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open instance file: " + path);
  return read_instance(is);
}

void save_solution(const Solution& sol, const std::string& path) {
  save_to(sol, path, [](const Solution& s, std::ostream& os) {
    write_solution(s, os);
  });
}

Solution load_solution(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open solution file: " + path);
  return read_solution(is);
}

}  // namespace induct
