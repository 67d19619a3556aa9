#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace induct {

// Absolute tolerance for cost/SoC comparisons. The ILS acceptance epsilon is a
// separate, much coarser knob (see IlsParams).
inline constexpr double kTol = 1e-9;

struct EnergyParams {
  double q_init = 0;  // SoC at depot departure (kWh)
  double q_min = 0;   // minimum SoC (kWh)
  double q_max = 0;   // maximum SoC (kWh)
  double p_c = 0;     // consumption price (currency/kWh)
  double delta = 1;   // time-step duration

  void check() const;
};

/// Piecewise-constant energy price over right-open intervals [a, b).
class PriceCurve {
 public:
  PriceCurve() : PriceCurve(0.0) {}
  explicit PriceCurve(double constant_price);
  explicit PriceCurve(std::vector<std::pair<double, double>> breakpoints);

  double at(double t) const;
  double min_from(double t) const;  // min over [t, inf)
  double min_upto(double t) const;  // min over [0, t]
  double global_min() const;
  bool is_constant() const { return bp_.size() == 1; }

  const std::vector<std::pair<double, double>>& breakpoints() const {
    return bp_;
  }

 private:
  std::vector<std::pair<double, double>> bp_;  // (start time, price)
  std::vector<double> suffix_min_;
  std::vector<double> prefix_min_;
};

struct Vertex {
  double x = 0;
  double y = 0;
};

struct NetArc {
  int from = -1;
  int to = -1;
  double time = 0;
  double energy = 0;
};

struct StationaryStation {
  std::string id;
  int vertex = -1;
  double rate = 0;  // h_f (kWh per time unit)
  double cost = 0;  // construction cost c_f
};

struct Segment {
  int from = -1;  // alpha
  int to = -1;    // omega
  double cost = 0;
};

struct DynamicStation {
  std::string id;
  double rate = 0;           // h_f
  double inverter_cost = 0;  // fixed cost c_f
  std::vector<Segment> segments;  // chained: segments[i+1].from == segments[i].to
};

struct TimeWindow {
  double earliest = 0;
  double latest = 0;
};

struct VehicleRoute {
  std::string id;
  std::vector<int> stops;          // depot-start, stop 1..n, depot-end
  std::vector<TimeWindow> windows;  // one per entry of stops

  int gaps() const { return static_cast<int>(stops.size()) - 1; }
};

struct Instance {
  std::vector<Vertex> vertices;
  std::vector<NetArc> arcs;
  std::vector<StationaryStation> stationary;
  std::vector<DynamicStation> dynamic;
  std::vector<VehicleRoute> routes;
  EnergyParams params;
  PriceCurve price_curve;
  int depot_start = -1;
  int depot_end = -1;

  void build_index();
  void check() const;

  const NetArc* find_arc(int from, int to) const;
  const NetArc& arc(int from, int to) const;
  int station_count() const {
    return static_cast<int>(stationary.size() + dynamic.size());
  }

 private:
  std::unordered_map<std::int64_t, int> arc_index_;
};

/// Infrastructure decision: y over stationary stations, w over dynamic
/// stations, z over segments grouped by owning station.
class Configuration {
 public:
  Configuration() = default;
  Configuration(int stationary_count, const std::vector<int>& segment_counts);
  static Configuration zeros(const Instance& instance);

  bool stationary_built(int f) const { return y_[f] != 0; }
  bool inverter_built(int f) const { return w_[f] != 0; }
  bool segment_built(int f, int s) const { return z_[f][s] != 0; }

  void set_stationary(int f, bool built) { y_[f] = built ? 1 : 0; }
  // Setting a segment forces the owning inverter on; clearing the inverter
  // clears all of its segments.
  void set_segment(int f, int s, bool built);
  void set_inverter(int f, bool built);
  // z_{f,theta} = 1 for theta <= r (1-based); r == 0 clears the inverter.
  void set_segment_prefix(int f, int r);
  int segment_prefix(int f) const;  // longest all-built prefix length

  int stationary_count() const { return static_cast<int>(y_.size()); }
  int dynamic_count() const { return static_cast<int>(w_.size()); }
  int segment_count(int f) const { return static_cast<int>(z_[f].size()); }
  int active_stationary() const;
  int active_dynamic() const;
  int active_segments() const;
  int active_segments(int f) const;
  int active_stations() const { return active_stationary() + active_dynamic(); }

  std::vector<std::uint64_t> packed() const;
  bool operator==(const Configuration& other) const = default;

 private:
  std::vector<std::uint8_t> y_;
  std::vector<std::uint8_t> w_;
  std::vector<std::vector<std::uint8_t>> z_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const;
};

/// One visited point of a vehicle plan, at base-network granularity.
/// Contracted dynamic arcs are expanded into their segment boundaries so the
/// SoC profile along them is explicit.
struct Step {
  int vertex = -1;
  double departure = 0;     // tau
  double soc = 0;           // rho at departure
  double recharge = 0;      // energy gained since the previous step
  double charge_start = -1; // start time of the charging process the energy
                            // belongs to (valid when recharge > 0)
  int route_pos = -1;       // index into the route's stop sequence, or -1
};

struct VehiclePlan {
  std::vector<Step> steps;
  double routing_cost = 0;
  bool heuristic = false;  // solved in heuristic subproblem mode
};

struct Solution {
  Configuration config;
  std::vector<VehiclePlan> plans;
  double infrastructure_cost = 0;
  double operational_cost = 0;

  double total_cost() const { return infrastructure_cost + operational_cost; }
};

double infrastructure_cost(const Configuration& config,
                           const Instance& instance);
double operational_cost(const std::vector<VehiclePlan>& plans,
                        const PriceCurve& curve, double p_c);

struct Violation {
  std::string code;
  std::string message;
};

/// Returns the first violation found, or nullopt if the solution is feasible
/// and internally consistent with the instance.
std::optional<Violation> validate_solution(const Solution& sol,
                                           const Instance& instance);

}  // namespace induct
