#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "induct/ils.hpp"
#include "induct/instance_gen.hpp"
#include "induct/instance_io.hpp"
#include "induct/mip.hpp"
#include "induct/model.hpp"
#include "induct/oracle.hpp"
#include "induct/vehicle_graph.hpp"

namespace fs = std::filesystem;
using namespace induct;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitInfeasible = 2;

int env_threads() {
  if (const char* v = std::getenv("INDUCT_THREADS")) {
    const int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << content;
}

std::string params_block(const IlsParams& p) {
  std::ostringstream os;
  os << "seed " << p.seed << '\n'
     << "phi " << p.phi << '\n'
     << "xi-max " << p.xi_max << '\n'
     << "zeta " << p.zeta << '\n'
     << "epsilon " << format_double(p.epsilon) << '\n'
     << "kappa " << p.kappa << '\n'
     << "beta-min " << format_double(p.beta_min) << '\n'
     << "time-limit " << format_double(p.time_limit) << '\n'
     << "iterations " << p.max_iterations << '\n'
     << "threads " << p.threads << '\n';
  return os.str();
}

int cmd_solve(const std::vector<std::string>& instances, const fs::path& out,
              IlsParams params, bool trace, const std::string& format) {
  fs::create_directories(out);
  std::ostringstream aggregate;
  aggregate << "instance,feasible,total_cost,infrastructure_cost,"
               "operational_cost,iterations,accepted,solves\n";
  int worst = kExitOk;
  for (const std::string& path : instances) {
    const Instance inst = load_instance(path);
    const std::string stem = fs::path(path).stem().string();
    std::string status = "feasible";
    RunResult result;
    try {
      result = run(inst, params);
    } catch (const InfeasibleError& e) {
      status = "infeasible";
      worst = std::max(worst, kExitInfeasible);
      std::cout << stem << ": " << e.what() << '\n';
      aggregate << stem << ",0,,,,,\n";
      write_file(out / (stem + ".meta.txt"),
                 "schema induct-solution/1\nstatus infeasible\n" +
                     params_block(params));
      continue;
    }

    {
      std::ofstream os(out / (stem + ".solution.txt"));
      write_solution(result.best, os);
    }
    {
      std::ofstream os(out / (stem + ".trajectory.csv"));
      os << "iteration,incumbent_cost\n";
      for (const auto& [it, cost] : result.stats.trajectory)
        os << it << ',' << format_double(cost) << '\n';
    }
    {
      std::ofstream os(out / (stem + ".operators.csv"));
      os << "operator,attempts,accepts\n";
      for (int i = 0; i < kOperatorCount; ++i)
        os << operator_name(static_cast<Operator>(i)) << ','
           << result.stats.ops[i].attempts << ','
           << result.stats.ops[i].accepts << '\n';
    }
    {
      std::ostringstream meta;
      meta << "schema induct-solution/1\n"
           << "instance-schema induct-instance/1\n"
           << "status " << status << '\n'
           << params_block(params) << "iterations-run "
           << result.stats.iterations << '\n'
           << "init-draws " << result.stats.init_draws << '\n'
           << "perturb-fallbacks " << result.stats.perturb_fallbacks << '\n'
           << "subproblem-solves " << result.stats.solves << '\n'
           << "cache-hit-rate " << format_double(result.stats.cache_hit_rate)
           << '\n'
           << "heuristic-mode-used " << (result.stats.any_heuristic ? 1 : 0)
           << '\n'
           << "wall-seconds " << format_double(result.stats.wall_seconds)
           << '\n';
      write_file(out / (stem + ".meta.txt"), meta.str());
    }
    if (format == "csv") {
      std::cout << stem << ',' << format_double(result.best.total_cost())
                << ',' << result.stats.iterations << '\n';
    } else {
      std::cout << stem << ": total " << format_double(result.best.total_cost())
                << " (infrastructure "
                << format_double(result.best.infrastructure_cost)
                << ", operational "
                << format_double(result.best.operational_cost) << ") in "
                << result.stats.iterations << " iterations\n";
    }
    if (trace) {
      for (const auto& [it, cost] : result.stats.trajectory)
        std::cout << "  iteration " << it << " incumbent "
                  << format_double(cost) << '\n';
    }
    aggregate << stem << ",1," << format_double(result.best.total_cost()) << ','
              << format_double(result.best.infrastructure_cost) << ','
              << format_double(result.best.operational_cost) << ','
              << result.stats.iterations << ',' << result.stats.accepted << ','
              << result.stats.solves << '\n';
  }
  write_file(out / "runs.csv", aggregate.str());
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"inductive charging infrastructure planner"};
  app.require_subcommand(1);

  std::vector<std::string> instances;
  std::string out = ".";
  std::string solution_path;
  std::string family;
  std::string config_spec;
  std::string warm_start_from;
  std::string format = "text";
  IlsParams params;
  params.threads = env_threads();
  bool trace = false;
  int vehicle = 0;
  int copies = 1;
  std::uint64_t gen_seed = 1;
  GenSpec gen;

  auto add_instance_opt = [&](CLI::App* cmd, bool many) {
    auto* opt = cmd->add_option("--instance", instances, "instance file(s)");
    opt->required();
    if (!many) opt->expected(1);
  };

  CLI::App* solve = app.add_subcommand("solve", "run the heuristic solver");
  add_instance_opt(solve, true);
  solve->add_option("--out", out, "output directory");
  solve->add_option("--seed", params.seed, "master RNG seed");
  solve->add_option("--time-limit", params.time_limit,
                    "wall-clock limit in seconds (<= 0 disables)");
  solve->add_option("--iterations", params.max_iterations,
                    "iteration cap (0 = unlimited)");
  solve->add_option("--phi", params.phi, "base perturbation strength");
  solve->add_option("--xi-max", params.xi_max, "stagnation threshold");
  solve->add_option("--zeta", params.zeta, "operator sample size");
  solve->add_option("--epsilon", params.epsilon, "acceptance tolerance");
  solve->add_option("--beta-min", params.beta_min,
                    "label pops before the heuristic subproblem mode");
  solve->add_option("--kappa", params.kappa, "initialization sample size");
  solve->add_option("--threads", params.threads, "subproblem solver threads");
  solve->add_flag("--trace", trace, "print the incumbent trajectory");
  solve->add_option("--format", format, "stdout format")
      ->check(CLI::IsMember({"text", "csv"}));

  CLI::App* generate = app.add_subcommand("generate", "write instance files");
  generate->add_option("--out", out, "output directory")->required();
  generate->add_option("--family", family,
                       "'tiny' for the fixed catalog, 'random-tiny' for a "
                       "seeded micro instance, 'synthetic' for the generator");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--stops", gen.stops, "stops (synthetic)");
  generate->add_option("--vehicles", gen.vehicles, "vehicles (synthetic)");
  std::string topology = "random";
  generate->add_option("--topology", topology, "clustered|random|mixed")
      ->check(CLI::IsMember({"clustered", "random", "mixed"}));

  CLI::App* export_mip = app.add_subcommand("export-mip", "write an LP file");
  add_instance_opt(export_mip, false);
  export_mip->add_option("--out", out, "LP output path")->required();
  export_mip->add_option("--copies", copies, "charger copies per station");
  export_mip->add_option("--warm-start-from", warm_start_from,
                         "solution file; also writes <out>.start");

  CLI::App* validate = app.add_subcommand("validate", "check a solution file");
  add_instance_opt(validate, false);
  validate->add_option("--solution", solution_path, "solution file")
      ->required();

  CLI::App* oracle = app.add_subcommand("oracle", "exhaustive optimum");
  add_instance_opt(oracle, false);
  oracle->add_option("--out", out, "solution output path");

  CLI::App* dump = app.add_subcommand("dump-graph", "expanded vehicle graph");
  add_instance_opt(dump, false);
  dump->add_option("--vehicle", vehicle, "route index");
  dump->add_option("--config", config_spec,
                   "'all', 'none', or comma-separated station ids");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    if (solve->parsed()) {
      params.check();
      return cmd_solve(instances, out, params, trace, format);
    }
    if (generate->parsed()) {
      fs::create_directories(out);
      if (family == "tiny" || family.empty()) {
        for (const std::string& name : tiny_family_names())
          save_instance(tiny_family(name), (fs::path(out) / (name + ".txt")).string());
        std::cout << "wrote " << tiny_family_names().size()
                  << " catalog instances to " << out << '\n';
      } else if (family == "random-tiny") {
        const std::string path =
            (fs::path(out) / ("random-tiny-" + std::to_string(gen_seed) + ".txt"))
                .string();
        save_instance(random_tiny(gen_seed), path);
        std::cout << "wrote " << path << '\n';
      } else if (family == "synthetic") {
        gen.seed = gen_seed;
        gen.topology = topology == "clustered" ? Topology::Clustered
                       : topology == "mixed"   ? Topology::Mixed
                                               : Topology::Random;
        const std::string path =
            (fs::path(out) / ("synthetic-" + std::to_string(gen_seed) + ".txt"))
                .string();
        save_instance(induct::generate(gen), path);
        std::cout << "wrote " << path << '\n';
      } else {
        std::cerr << "unknown family: " << family << '\n';
        return kExitError;
      }
      return kExitOk;
    }
    if (export_mip->parsed()) {
      const Instance inst = load_instance(instances.front());
      const MipModel model = build_mip(inst, copies);
      std::ofstream os(out);
      if (!os) throw std::runtime_error("cannot write " + out);
      write_lp(model, os);
      std::cout << "wrote " << out << " (" << model.vars.size()
                << " variables, " << model.rows.size() << " rows)\n";
      if (!warm_start_from.empty()) {
        const Solution sol = load_solution(warm_start_from);
        std::ofstream ws(out + ".start");
        write_warm_start(model, inst, sol, ws);
        std::cout << "wrote " << out << ".start\n";
      }
      return kExitOk;
    }
    if (validate->parsed()) {
      const Instance inst = load_instance(instances.front());
      const Solution sol = load_solution(solution_path);
      if (auto v = validate_solution(sol, inst)) {
        std::cout << "invalid (" << v->code << "): " << v->message << '\n';
        return kExitError;
      }
      std::cout << "valid, total cost " << format_double(sol.total_cost())
                << '\n';
      return kExitOk;
    }
    if (oracle->parsed()) {
      const Instance inst = load_instance(instances.front());
      const OracleResult res = oracle_solve(inst);
      if (!res.feasible) {
        std::cout << "infeasible (" << res.configs_tried
                  << " configurations tried)\n";
        return kExitInfeasible;
      }
      if (out != ".") save_solution(res.solution, out);
      std::cout << "optimum " << format_double(res.solution.total_cost())
                << " (" << res.configs_tried << " configurations tried)\n";
      return kExitOk;
    }
    if (dump->parsed()) {
      const Instance inst = load_instance(instances.front());
      Configuration config = Configuration::zeros(inst);
      if (config_spec == "all") {
        for (int f = 0; f < config.stationary_count(); ++f)
          config.set_stationary(f, true);
        for (int f = 0; f < config.dynamic_count(); ++f)
          config.set_segment_prefix(f, config.segment_count(f));
      } else if (!config_spec.empty() && config_spec != "none") {
        std::istringstream ss(config_spec);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
          const int id = std::stoi(tok);
          if (id < config.stationary_count())
            config.set_stationary(id, true);
          else
            config.set_segment_prefix(id - config.stationary_count(),
                                      config.segment_count(
                                          id - config.stationary_count()));
        }
      }
      if (vehicle < 0 || vehicle >= static_cast<int>(inst.routes.size()))
        throw std::runtime_error("vehicle index out of range");
      const VehicleGraph g = build_vehicle_graph(inst, config, vehicle);
      dump_graph(g, std::cout);
      return kExitOk;
    }
  } catch (const InfeasibleError& e) {
    std::cerr << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
