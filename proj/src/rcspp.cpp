#include "induct/rcspp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <queue>

namespace induct {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

bool dominates_forward(double gamma_a, double rho_a, double tau_a,
                       double gamma_b, double rho_b, double tau_b) {
  return gamma_a <= gamma_b && rho_a >= rho_b && tau_a <= tau_b;
}

bool dominates_backward(double gamma_a, double rho_a, double tau_a,
                        double gamma_b, double rho_b, double tau_b) {
  return gamma_a <= gamma_b && rho_a <= rho_b && tau_a >= tau_b;
}

void DominanceStore::insert(double gamma, double rho, double tau, int label) {
  const std::size_t pos =
      std::upper_bound(gamma_.begin(), gamma_.end(), gamma) - gamma_.begin();
  gamma_.insert(gamma_.begin() + pos, gamma);
  rho_.insert(rho_.begin() + pos, rho);
  tau_.insert(tau_.begin() + pos, tau);
  label_.insert(label_.begin() + pos, label);
  bound_rho_.resize(gamma_.size());
  bound_tau_.resize(gamma_.size());
  for (std::size_t i = pos == 0 ? 0 : pos; i < gamma_.size(); ++i) {
    if (i == 0) {
      bound_rho_[0] = rho_[0];
      bound_tau_[0] = tau_[0];
    } else if (backward_) {
      bound_rho_[i] = std::min(bound_rho_[i - 1], rho_[i]);
      bound_tau_[i] = std::max(bound_tau_[i - 1], tau_[i]);
    } else {
      bound_rho_[i] = std::max(bound_rho_[i - 1], rho_[i]);
      bound_tau_[i] = std::min(bound_tau_[i - 1], tau_[i]);
    }
  }
}

bool DominanceStore::is_dominated(double gamma, double rho, double tau) const {
  const std::size_t n =
      std::upper_bound(gamma_.begin(), gamma_.end(), gamma) - gamma_.begin();
  if (n == 0) return false;  // cheaper than everything stored
  if (backward_) {
    if (bound_rho_[n - 1] > rho) return false;
    if (bound_tau_[n - 1] < tau) return false;
    for (std::size_t i = n; i-- > 0;) {
      if (rho_[i] <= rho && tau_[i] >= tau) return true;
    }
  } else {
    if (bound_rho_[n - 1] < rho) return false;
    if (bound_tau_[n - 1] > tau) return false;
    for (std::size_t i = n; i-- > 0;) {
      if (rho_[i] >= rho && tau_[i] <= tau) return true;
    }
  }
  return false;
}

namespace {

struct Label {
  double gamma = 0;
  double rho = 0;
  double tau = 0;
  double sigma = 0;  // backward only
  int vertex = -1;
  int parent = -1;  // arena index
  int arc = -1;     // graph arc taken to create this label
  bool backward = false;
};

struct QEntry {
  double priority;
  double gamma;
  double tau;
  long seq;
  int label;

  bool operator>(const QEntry& o) const {
    if (priority != o.priority) return priority > o.priority;
    if (gamma != o.gamma) return gamma > o.gamma;
    if (tau != o.tau) return tau > o.tau;
    return seq > o.seq;
  }
};

struct JointEntry {
  double priority;  // exact joint cost
  double tau;
  long seq;
  int fw;
  int bw;

  bool operator>(const JointEntry& o) const {
    if (priority != o.priority) return priority > o.priority;
    if (tau != o.tau) return tau > o.tau;
    return seq > o.seq;
  }
};

template <typename T>
using MinHeap = std::priority_queue<T, std::vector<T>, std::greater<T>>;

class Search {
 public:
  Search(const VehicleGraph& graph, const Instance& instance,
         const SolveOptions& opts)
      : g_(graph),
        inst_(instance),
        opts_(opts),
        curve_(instance.price_curve),
        p_(instance.params) {
    fw_store_.reserve(g_.vertices.size());
    bw_store_.reserve(g_.vertices.size());
    for (std::size_t i = 0; i < g_.vertices.size(); ++i) {
      fw_store_.emplace_back(false);
      bw_store_.emplace_back(true);
    }
  }

  SolveResult run();

 private:
  double estimate(const Label& l) const {
    const double lb = g_.vertices[l.vertex].energy_lb;
    if (l.backward) {
      const double src_lb = g_.vertices[g_.source].energy_lb;
      const double need = std::max(l.rho + src_lb - lb - p_.q_init, 0.0);
      return need * curve_.min_upto(l.tau) + (src_lb - lb) * p_.p_c;
    }
    const double need = std::max(p_.q_min + lb - l.rho, 0.0);
    return need * curve_.min_from(l.tau) + lb * p_.p_c;
  }

  // Urgency key for the heuristic phase: distance to the SoC just
  // sufficient to finish (forward) or to have started with q_init (backward).
  double eta(const Label& l) const {
    const double lb = g_.vertices[l.vertex].energy_lb;
    if (l.backward) {
      const double src_lb = g_.vertices[g_.source].energy_lb;
      return std::abs(p_.q_init - src_lb + lb - l.rho);
    }
    return std::abs(lb + p_.q_min - l.rho);
  }

  bool propagate_forward(const Label& l, int arc_idx, Label& out) const {
    const ExpandedArc& a = g_.arcs[arc_idx];
    const VgVertex& to = g_.vertices[a.to];
    const double rho = l.rho - a.energy + a.recharge;
    if (rho < p_.q_min - kTol || rho > p_.q_max + kTol) return false;
    const double tau = std::max(l.tau + a.time, to.earliest);
    if (tau > to.latest + kTol) return false;
    for (double c : a.checkpoints) {
      const double mid = l.rho + c;
      if (mid < p_.q_min - kTol || mid > p_.q_max + kTol) return false;
    }
    out.gamma = l.gamma + (a.recharge > 0
                               ? curve_.at(l.tau + a.chi) * a.recharge
                               : 0.0) +
                p_.p_c * a.energy;
    out.rho = rho;
    out.tau = tau;
    out.sigma = 0;
    out.vertex = a.to;
    out.arc = arc_idx;
    out.backward = false;
    return true;
  }

  bool propagate_backward(const Label& l, int arc_idx, Label& out) const {
    const ExpandedArc& a = g_.arcs[arc_idx];
    const VgVertex& from = g_.vertices[a.from];
    const double tau = std::min(l.tau - a.time, from.latest);
    if (tau < from.earliest - kTol) return false;
    const double rho = l.rho + a.energy - a.recharge;
    if (rho < p_.q_min - kTol || rho > p_.q_max + kTol) return false;
    double max_cp = 0;
    for (double c : a.checkpoints) {
      const double mid = rho + c;
      if (mid < p_.q_min - kTol || mid > p_.q_max + kTol) return false;
      max_cp = std::max(max_cp, c);
    }
    out.gamma = l.gamma +
                (a.recharge > 0 ? curve_.at(tau + a.chi) * a.recharge : 0.0) +
                p_.p_c * a.energy;
    out.rho = rho;
    out.tau = tau;
    // A later upward SoC shift must clear q_max at this vertex and at every
    // interior checkpoint of the arc just traversed.
    out.sigma = std::min(l.sigma, p_.q_max - rho - max_cp);
    out.vertex = a.from;
    out.arc = arc_idx;
    out.backward = true;
    return true;
  }

  bool try_join(const Label& fw, const Label& bw, double& cost) const {
    const double shift = fw.rho - bw.rho;
    if (shift < -kTol || shift > bw.sigma + kTol) return false;
    if (fw.tau > bw.tau + kTol) return false;
    cost = fw.gamma + bw.gamma;
    return true;
  }

  void push(const Label& l) {
    const int idx = static_cast<int>(arena_.size());
    arena_.push_back(l);
    queue_.push({l.gamma + estimate(l), l.gamma, l.tau, seq_++, idx});
    if (l.backward) {
      ++bw_queued_;
    } else {
      ++fw_queued_;
    }
  }

  // Store an explored label and queue at most one joint against the opposite
  // store at the same vertex.
  void store_and_join(int idx) {
    const Label& l = arena_[idx];
    const bool is_route =
        g_.vertices[l.vertex].kind == VgVertexKind::RoutePoint;
    if (l.backward) {
      if (is_route && !fw_store_[l.vertex].empty()) overlap_ = true;
      bw_store_[l.vertex].insert(l.gamma, l.rho, l.tau, idx);
      const DominanceStore& opp = fw_store_[l.vertex];
      for (std::size_t i = 0; i < opp.size(); ++i) {
        double cost;
        if (try_join(arena_[opp.label_at(i)], l, cost)) {
          joints_.push({cost, arena_[opp.label_at(i)].tau, seq_++,
                        opp.label_at(i), idx});
          break;
        }
      }
    } else {
      if (is_route && !bw_store_[l.vertex].empty()) overlap_ = true;
      fw_store_[l.vertex].insert(l.gamma, l.rho, l.tau, idx);
      const DominanceStore& opp = bw_store_[l.vertex];
      for (std::size_t i = 0; i < opp.size(); ++i) {
        double cost;
        if (try_join(l, arena_[opp.label_at(i)], cost)) {
          joints_.push({cost, l.tau, seq_++, idx, opp.label_at(i)});
          break;
        }
      }
    }
  }

  // Expands a popped label; returns true if at least one extension was valid.
  bool extend(int idx, bool heuristic_phase) {
    const Label l = arena_[idx];
    bool propagated = false;
    const std::vector<int>& arcs = l.backward ? g_.in[l.vertex] : g_.out[l.vertex];
    for (int a : arcs) {
      Label next;
      const bool ok = l.backward ? propagate_backward(l, a, next)
                                 : propagate_forward(l, a, next);
      if (!ok) continue;
      next.parent = idx;
      propagated = true;
      if (heuristic_phase) {
        const int nidx = static_cast<int>(arena_.size());
        arena_.push_back(next);
        eta_queue_.push({eta(next), next.gamma, next.tau, seq_++, nidx});
      } else {
        push(next);
      }
    }
    return propagated;
  }

  void trace_pop(const Label& l, double priority) {
    if (!opts_.trace) return;
    *opts_.trace << "pop " << (l.backward ? "bw" : "fw") << " v=" << l.vertex
                 << " gamma=" << l.gamma << " rho=" << l.rho << " tau=" << l.tau
                 << " prio=" << priority << "\n";
  }

  SolveResult finish_joint(const JointEntry& j);
  SolveResult finish_forward(int idx);
  SolveResult infeasible();
  SolveResult heuristic_phase();
  VehiclePlan construct_plan(int fw_idx, int bw_idx) const;

  const VehicleGraph& g_;
  const Instance& inst_;
  const SolveOptions& opts_;
  const PriceCurve& curve_;
  const EnergyParams& p_;

  std::vector<Label> arena_;
  MinHeap<QEntry> queue_;
  MinHeap<QEntry> eta_queue_;
  MinHeap<JointEntry> joints_;
  std::vector<DominanceStore> fw_store_;
  std::vector<DominanceStore> bw_store_;
  long seq_ = 0;
  long fw_queued_ = 0;
  long bw_queued_ = 0;
  bool overlap_ = false;
  SolveStats stats_;
};

SolveResult Search::run() {
  {
    Label init;
    init.gamma = 0;
    init.rho = p_.q_init;
    init.tau = g_.vertices[g_.source].earliest;
    init.vertex = g_.source;
    push(init);
  }
  if (!opts_.disable_backward) {
    Label init;
    init.gamma = 0;
    init.rho = p_.q_min;
    init.tau = g_.vertices[g_.sink].latest;
    init.sigma = p_.q_max - p_.q_min;
    init.vertex = g_.sink;
    init.backward = true;
    push(init);
  }

  while (fw_queued_ > 0) {
    // A queued joint at the global minimum is a proven optimum.
    if (!joints_.empty()) {
      const JointEntry& j = joints_.top();
      const QEntry& q = queue_.top();
      if (j.priority < q.priority ||
          (j.priority == q.priority &&
           (j.priority < q.gamma ||
            (j.priority == q.gamma &&
             (j.tau < q.tau || (j.tau == q.tau && j.seq < q.seq)))))) {
        return finish_joint(j);
      }
    }
    const QEntry e = queue_.top();
    queue_.pop();
    const Label l = arena_[e.label];  // copy: extend() may grow the arena
    if (l.backward) {
      --bw_queued_;
      ++stats_.backward_pops;
    } else {
      --fw_queued_;
      ++stats_.forward_pops;
    }
    ++stats_.pops;
    trace_pop(l, e.priority);

    if (!l.backward && l.vertex == g_.sink) return finish_forward(e.label);

    if (!opts_.disable_dominance) {
      const DominanceStore& store =
          l.backward ? bw_store_[l.vertex] : fw_store_[l.vertex];
      if (store.is_dominated(l.gamma, l.rho, l.tau)) continue;
    }

    const bool propagated = extend(e.label, false);
    const bool depot_bw =
        l.backward && (l.vertex == g_.source || l.vertex == g_.sink);
    if (propagated || depot_bw) store_and_join(e.label);

    if ((stats_.pops & 1023) == 0 && stats_.pops > opts_.beta_min && overlap_) {
      stats_.heuristic_mode = true;
      if (!joints_.empty()) return finish_joint(joints_.top());
      return heuristic_phase();
    }
  }
  if (!joints_.empty()) return finish_joint(joints_.top());
  return infeasible();
}

SolveResult Search::heuristic_phase() {
  // Drain the cost-ordered queue into an urgency-ordered queue, keeping only
  // the direction with fewer pending labels, and chase the first joint.
  const bool pick_backward = bw_queued_ < fw_queued_;
  while (!queue_.empty()) {
    const QEntry e = queue_.top();
    queue_.pop();
    const Label& l = arena_[e.label];
    if (l.backward != pick_backward) continue;
    eta_queue_.push({eta(l), l.gamma, l.tau, seq_++, e.label});
  }
  while (!eta_queue_.empty()) {
    const QEntry e = eta_queue_.top();
    eta_queue_.pop();
    const Label l = arena_[e.label];  // copy: extend() may grow the arena
    ++stats_.pops;
    if (l.backward) {
      ++stats_.backward_pops;
    } else {
      ++stats_.forward_pops;
    }
    trace_pop(l, e.priority);
    if (!l.backward && l.vertex == g_.sink) return finish_forward(e.label);
    if (!opts_.disable_dominance) {
      const DominanceStore& store =
          l.backward ? bw_store_[l.vertex] : fw_store_[l.vertex];
      if (store.is_dominated(l.gamma, l.rho, l.tau)) continue;
    }
    const bool propagated = extend(e.label, true);
    const bool depot_bw =
        l.backward && (l.vertex == g_.source || l.vertex == g_.sink);
    const std::size_t joints_before = joints_.size();
    if (propagated || depot_bw) store_and_join(e.label);
    if (joints_.size() > joints_before) return finish_joint(joints_.top());
  }
  stats_.heuristic_exhausted = true;
  if (!joints_.empty()) return finish_joint(joints_.top());
  return infeasible();
}

SolveResult Search::infeasible() {
  SolveResult res;
  res.feasible = false;
  res.stats = stats_;
  return res;
}

SolveResult Search::finish_forward(int idx) {
  SolveResult res;
  res.feasible = true;
  res.cost = arena_[idx].gamma;
  res.plan = construct_plan(idx, -1);
  res.plan.routing_cost = res.cost;
  res.plan.heuristic = stats_.heuristic_mode;
  res.stats = stats_;
  return res;
}

SolveResult Search::finish_joint(const JointEntry& j) {
  SolveResult res;
  res.feasible = true;
  res.cost = j.priority;
  res.plan = construct_plan(j.fw, j.bw);
  res.plan.routing_cost = res.cost;
  res.plan.heuristic = stats_.heuristic_mode;
  res.stats = stats_;
  return res;
}

VehiclePlan Search::construct_plan(int fw_idx, int bw_idx) const {
  VehiclePlan plan;
  std::vector<int> chain;
  for (int i = fw_idx; i >= 0; i = arena_[i].parent) chain.push_back(i);
  std::reverse(chain.begin(), chain.end());

  auto vertex_step = [&](const Label& l, double soc_shift) {
    const VgVertex& v = g_.vertices[l.vertex];
    Step s;
    s.vertex = v.base_vertex;
    s.departure = l.tau;
    s.soc = l.rho + soc_shift;
    s.route_pos = v.kind == VgVertexKind::RoutePoint ? v.route_pos : -1;
    return s;
  };

  // Emits the steps induced by traversing `arc` from a state (time, soc) at
  // the arc origin, ending with the step for `at` (label at the arc target).
  auto emit_arc = [&](const ExpandedArc& a, double t0, double soc0,
                      const Label& at, double soc_shift) {
    if (a.kind == ArcKind::DynamicCharge) {
      double t = t0, soc = soc0;
      for (std::size_t h = 0; h + 1 < a.hops.size(); ++h) {
        const Hop& hop = a.hops[h];
        t += hop.time;
        soc += hop.recharge - hop.energy;
        Step s;
        s.vertex = hop.base_vertex;
        s.departure = t;
        s.soc = soc;
        s.recharge = hop.recharge;
        s.charge_start = hop.recharge > 0 ? t0 + a.chi : -1;
        plan.steps.push_back(s);
      }
      Step s = vertex_step(at, soc_shift);
      s.recharge = a.hops.back().recharge;
      s.charge_start = s.recharge > 0 ? t0 + a.chi : -1;
      plan.steps.push_back(s);
    } else {
      Step s = vertex_step(at, soc_shift);
      s.recharge = a.recharge;
      s.charge_start = a.recharge > 0 ? t0 + a.chi : -1;
      plan.steps.push_back(s);
    }
  };

  plan.steps.push_back(vertex_step(arena_[chain[0]], 0));
  for (std::size_t i = 1; i < chain.size(); ++i) {
    const Label& prev = arena_[chain[i - 1]];
    const Label& cur = arena_[chain[i]];
    emit_arc(g_.arcs[cur.arc], prev.tau, prev.rho, cur, 0);
  }

  if (bw_idx >= 0) {
    const Label& fw_join = arena_[fw_idx];
    const Label& bw_join = arena_[bw_idx];
    const double shift = fw_join.rho - bw_join.rho;
    // The vehicle idles at the join vertex between the two halves.
    plan.steps.back().departure = bw_join.tau;
    double t = bw_join.tau;
    double soc = fw_join.rho;
    for (int i = bw_idx; arena_[i].arc >= 0; i = arena_[i].parent) {
      const Label& next = arena_[arena_[i].parent];
      emit_arc(g_.arcs[arena_[i].arc], t, soc, next, shift);
      t = next.tau;
      soc = next.rho + shift;
    }
  }
  return plan;
}

}  // namespace

SolveResult solve_subproblem(const VehicleGraph& graph, const Instance& instance,
                             const SolveOptions& opts) {
  Search s(graph, instance, opts);
  return s.run();
}

}  // namespace induct
