#pragma once

#include <iosfwd>

#include "induct/model.hpp"
#include "induct/vehicle_graph.hpp"

namespace induct {

struct SolveOptions {
  double beta_min = 2.5e5;  // pops before heuristic mode may engage
  bool disable_backward = false;
  bool disable_dominance = false;
  std::ostream* trace = nullptr;
};

struct SolveStats {
  long pops = 0;
  long forward_pops = 0;
  long backward_pops = 0;
  bool heuristic_mode = false;   // heuristic mode engaged during the search
  bool heuristic_exhausted = false;  // heuristic phase ran a queue dry
};

struct SolveResult {
  bool feasible = false;
  double cost = 0;
  VehiclePlan plan;
  SolveStats stats;
};

/// Forward dominance: a is at least as cheap, at least as charged, and at
/// least as early as b.
bool dominates_forward(double gamma_a, double rho_a, double tau_a,
                       double gamma_b, double rho_b, double tau_b);
/// Backward dominance: at least as cheap, at most as charged (less still to
/// repay), and at least as late.
bool dominates_backward(double gamma_a, double rho_a, double tau_a,
                        double gamma_b, double rho_b, double tau_b);

/// Cost-sorted label store for one vertex and direction, with prefix resource
/// bounds enabling early rejection of dominance queries.
class DominanceStore {
 public:
  explicit DominanceStore(bool backward) : backward_(backward) {}

  void insert(double gamma, double rho, double tau, int label);
  bool is_dominated(double gamma, double rho, double tau) const;
  bool empty() const { return gamma_.empty(); }
  std::size_t size() const { return gamma_.size(); }
  int label_at(std::size_t i) const { return label_[i]; }

 private:
  bool backward_;
  std::vector<double> gamma_;  // ascending
  std::vector<double> rho_;
  std::vector<double> tau_;
  std::vector<int> label_;
  std::vector<double> bound_rho_;  // prefix max (fwd) / min (bwd)
  std::vector<double> bound_tau_;  // prefix min (fwd) / max (bwd)
};

SolveResult solve_subproblem(const VehicleGraph& graph, const Instance& instance,
                             const SolveOptions& opts = {});

}  // namespace induct
