#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "induct/model.hpp"

namespace induct {

struct IlsParams {
  int phi = 2;            // baseline perturbation strength
  int xi_max = 10;        // stagnation threshold
  int zeta = 2;           // neighborhood sample size
  double epsilon = 1e-3;  // acceptance tolerance
  int kappa = 4;          // initialization sample count (2*phi)
  double beta_min = 2.5e5;
  double time_limit = 10.0;   // seconds; 0 stops after the initial local
                              // search, negative disables the wall clock
  long max_iterations = 0;    // 0 = unlimited (time limit only)
  std::uint64_t seed = 1;
  int threads = 1;
  int max_init_draws = 20000;

  void check() const;
};

struct EvalResult {
  bool feasible = false;
  double infra = 0;
  double total = 0;
  std::vector<VehiclePlan> plans;
  // Stations each vehicle actually charges at (combined index: stationary
  // 0..|Fs|-1, dynamic |Fs|..|Fs|+|Fd|-1).
  std::vector<std::vector<int>> used;
};

/// Configuration evaluator with a full-configuration cache, a per-vehicle
/// cache keyed by the projection onto stations reachable by that vehicle,
/// and plan reuse on station removals that the vehicle never charged at.
class Evaluator {
 public:
  Evaluator(const Instance& instance, double beta_min, int threads);

  /// `parent` (optional) is the configuration the query was derived from by
  /// removing stations; cached vehicle plans unaffected by the removal are
  /// reused without solving.
  const EvalResult& evaluate(const Configuration& config,
                             const Configuration* parent = nullptr);
  bool feasible(const Configuration& config,
                const Configuration* parent = nullptr) {
    return evaluate(config, parent).feasible;
  }

  double total_routing_lb() const { return total_routing_lb_; }
  double routing_lb(int vehicle) const { return routing_lb_[vehicle]; }
  long solves() const { return solves_; }
  long cache_hits() const { return full_hits_; }
  long cache_misses() const { return full_misses_; }
  long vehicle_reuses() const { return vehicle_hits_; }
  bool any_heuristic() const { return any_heuristic_; }
  void clear();

  Solution to_solution(const Configuration& config, const EvalResult& eval) const;

 private:
  struct VehicleEntry {
    bool feasible = false;
    VehiclePlan plan;
    std::vector<int> used;
  };

  std::vector<std::uint64_t> project(const Configuration& config,
                                     int vehicle) const;
  VehicleEntry solve_vehicle(const Configuration& config, int vehicle);
  std::vector<int> used_stations(const VehiclePlan& plan) const;

  const Instance& inst_;
  double beta_min_;
  int threads_;
  std::vector<std::vector<double>> stop_bounds_;
  std::vector<double> routing_lb_;
  double total_routing_lb_ = 0;
  std::vector<std::vector<int>> reach_stat_;  // per vehicle, station indices
  std::vector<std::vector<int>> reach_dyn_;
  std::unordered_map<int, std::vector<int>> vertex_station_;  // combined ids

  struct VecHash {
    std::size_t operator()(const std::vector<std::uint64_t>& v) const;
  };
  std::unordered_map<std::vector<std::uint64_t>, EvalResult, VecHash> full_;
  std::vector<std::unordered_map<std::vector<std::uint64_t>, VehicleEntry,
                                 VecHash>>
      per_vehicle_;
  long solves_ = 0;
  long full_hits_ = 0;
  long full_misses_ = 0;
  long vehicle_hits_ = 0;
  bool any_heuristic_ = false;
};

enum class Operator { StripDyn, RemoveStat, SwapToDyn, SwapToStat, AddDyn, AddStat };
constexpr int kOperatorCount = 6;
const char* operator_name(Operator op);

struct OperatorStats {
  long attempts = 0;
  long accepts = 0;
};

struct RunStats {
  long iterations = 0;
  long accepted = 0;
  long init_draws = 0;
  long perturb_fallbacks = 0;
  std::array<OperatorStats, kOperatorCount> ops{};
  std::vector<std::pair<long, double>> trajectory;  // (iteration, incumbent)
  long solves = 0;
  long cache_hits = 0;
  double cache_hit_rate = 0;
  bool any_heuristic = false;
  double wall_seconds = 0;
};

struct RunResult {
  bool feasible = false;
  Solution best;
  RunStats stats;
};

/// The all-stations configuration admits no feasible fleet plan, so no
/// configuration does.
struct InfeasibleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Configuration initialize(const Instance& instance, const IlsParams& params,
                         Evaluator& eval, std::mt19937_64& rng,
                         long* draws = nullptr);

Configuration local_search(const Configuration& start, const Instance& instance,
                           const IlsParams& params, Evaluator& eval,
                           std::mt19937_64& rng, RunStats* stats = nullptr);

Configuration tighten_configuration(const Configuration& config, int dyn_station,
                                    Evaluator& eval);

Configuration apply_operator(Operator op, const Configuration& config,
                             const Instance& instance, const IlsParams& params,
                             Evaluator& eval, std::mt19937_64& rng,
                             OperatorStats* op_stats = nullptr);

Configuration perturb(const Configuration& incumbent, int strength,
                      const Instance& instance, Evaluator& eval,
                      std::mt19937_64& rng, bool* fallback = nullptr);

RunResult run(const Instance& instance, const IlsParams& params);

}  // namespace induct
