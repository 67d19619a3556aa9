#pragma once

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

#include "induct/model.hpp"

namespace induct {

enum class VarKind { Binary, Continuous, Integer };
enum class RowSense { LE, GE, EQ };

struct MipVar {
  std::string name;
  VarKind kind = VarKind::Continuous;
  double lb = 0;
  double ub = 0;  // +inf encoded as std::numeric_limits<double>::infinity()
  double obj = 0;
};

struct MipRow {
  std::string name;
  std::vector<std::pair<int, double>> terms;  // (variable index, coefficient)
  RowSense sense = RowSense::LE;
  double rhs = 0;
};

/// Arc of the expanded MIP network (depot split into start/end representations,
/// optional zero-cost charger copies inserted to allow repeated visits).
struct MipArc {
  int from = -1;
  int to = -1;
  double time = 0;
  double energy = 0;
  int dyn = -1;  // owning dynamic station (expanded index), or -1
  int seg = -1;  // segment index within the owning station
};

struct MipStationary {
  int vertex = -1;  // expanded-network vertex
  double rate = 0;
  int orig = -1;  // index into instance.stationary
};

struct MipDynamic {
  double rate = 0;
  int orig = -1;  // index into instance.dynamic
  std::vector<int> seg_arcs;  // expanded arc index per segment
};

/// Time-discrete model over the expanded network. Variable blocks: per-line
/// arc selection x, build decisions y/w/z, per-line departure time tau and
/// departure SoC rho per vertex, discrete charging periods dtau and recharge
/// drho per stationary station, and per-segment recharge.
struct MipModel {
  std::vector<MipVar> vars;
  std::vector<MipRow> rows;
  std::unordered_map<std::string, int> index;

  // Expanded network.
  int vertex_count = 0;
  int dplus = -1;
  int dminus = -1;
  std::vector<int> base_vertex;  // expanded vertex -> instance vertex
  std::vector<MipArc> arcs;
  std::vector<MipStationary> stationary;  // originals first, copies after
  std::vector<MipDynamic> dynamic;

  // Variable ids by block.
  std::vector<std::vector<int>> x;         // [line][arc]
  std::vector<int> y;                      // [stationary]
  std::vector<int> w;                      // [dynamic]
  std::vector<std::vector<int>> z;         // [dynamic][segment]
  std::vector<std::vector<int>> tau, rho;  // [line][vertex]
  std::vector<std::vector<int>> dtau, drho;            // [line][stationary]
  std::vector<std::vector<std::vector<int>>> seg_rho;  // [line][dyn][segment]
};

/// Builds the time-discrete model with `copy_count` zero-cost copies per
/// candidate station, each buildable only when its original is built.
/// Requires a constant energy price curve and finite route windows.
MipModel build_mip(const Instance& instance, int copy_count);

/// Deterministic LP-format writer (objective, constraints, bounds, generals,
/// binaries). Byte-stable for identical models.
void write_lp(const MipModel& model, std::ostream& os);

/// Emits a complete variable assignment ("name value" per line) derived from a
/// heuristic/oracle solution, usable as an external solver warm start.
void write_warm_start(const MipModel& model, const Instance& instance,
                      const Solution& solution, std::ostream& os);

/// Parses "name value" / "name=value" lines (blank lines and '#' comments
/// ignored) into an assignment map.
std::unordered_map<std::string, double> parse_assignment(std::istream& is);

/// Objective value of an assignment; missing variables count as zero.
double objective_value(const MipModel& model,
                       const std::unordered_map<std::string, double>& values);

/// Names of all constraint rows violated by more than `tol`.
std::vector<std::string> check_assignment(
    const MipModel& model,
    const std::unordered_map<std::string, double>& values, double tol = 1e-6);

/// Reconstructs a solution (configuration + per-vehicle plans) from a solved
/// assignment by following the selected arcs of every line.
Solution decode_solution(const MipModel& model, const Instance& instance,
                         const std::unordered_map<std::string, double>& values);

}  // namespace induct
