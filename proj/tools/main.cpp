#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "edgealloc/datasets.hpp"
#include "edgealloc/harness.hpp"
#include "edgealloc/io.hpp"
#include "edgealloc/solver.hpp"
#include "json.hpp"

namespace {

using namespace edgealloc;
using nlohmann::json;

struct Dataset {
  AlgorithmGraph graph;
  MemoryProfile profile;
  LinkClassTable links;
  std::optional<Architecture> arch;  // present when the directory ships one
};

Dataset load_dataset(const std::string& spec) {
  Dataset d;
  if (spec.empty() || spec == "paper") {
    d.graph = paper_graph();
    d.profile = paper_profile();
    d.links = paper_tab2p();
    return d;
  }
  namespace fs = std::filesystem;
  const fs::path dir(spec);
  if (!fs::is_directory(dir))
    fail(Errc::ConfigError, "dataset '" + spec + "' is not a directory");
  d.graph = lift_to_semilattice(load_graph_file((dir / "graph.json").string()));
  d.profile = MemoryProfile::from_graph(d.graph);
  if (fs::exists(dir / "links.json"))
    d.links = load_link_table_file((dir / "links.json").string());
  else
    d.links = paper_tab2p();
  if (fs::exists(dir / "architecture.json"))
    d.arch = load_architecture_file((dir / "architecture.json").string());
  return d;
}

Architecture resolve_architecture(const Dataset& d, const std::string& arch_file,
                                  int n_edge, std::uint64_t seed) {
  if (!arch_file.empty()) return load_architecture_file(arch_file);
  if (d.arch) return *d.arch;
  SeededRng rng = SeededRng(seed).derive(0x617263680aULL);
  return generate_architecture(n_edge, rng, d.links);
}

void write_or_print(const std::string& text, const std::string& out_path) {
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_file(out_path, text);
}

std::string allocation_text(const AlgorithmGraph& g, const Architecture& a,
                            const SolveResult& r) {
  std::string out;
  out += fmt::format("distance: {}\n", r.distance);
  out += fmt::format("normalizers: time={} s, memory={} bytes (anchor={})\n",
                     r.objective.time_norm, r.objective.mem_norm,
                     node_class_name(r.objective.baseline_node_class));
  out += "per-robot final times (s):\n";
  for (const auto& [robot, t] : r.per_robot_times)
    out += fmt::format("  robot {}: {}\n", robot, t);
  out += fmt::format("memory: max={} total={} variance={}\n",
                     r.memory.max_usage, r.memory.total,
                     r.memory.variance_term);
  for (const auto& [robot, mu] : r.memory.per_robot)
    out += fmt::format("  robot {}: {} bytes\n", robot, mu);
  out += "allocation:\n";
  for (const auto& [id, node] : r.best.assignment) {
    const AlgorithmSpec& s = g.spec(id);
    out += fmt::format("  {} ({}) -> {} ({})\n",
                       s.name.empty() ? std::to_string(id) : s.name, id,
                       node_class_name(a.node_class(node)), node);
  }
  out += fmt::format("search: nodes={} pruned={} wall={}s\n", r.nodes_explored,
                     r.pruned, r.wall_time_s);
  return out;
}

json allocation_json(const AlgorithmGraph& g, const Architecture& a,
                     const SolveResult& r) {
  json out;
  out["distance"] = r.distance;
  out["normalizers"] = {{"time_s", r.objective.time_norm},
                        {"memory_bytes", r.objective.mem_norm},
                        {"anchor", node_class_name(r.objective.baseline_node_class)}};
  out["per_robot_final_s"] = json::object();
  for (const auto& [robot, t] : r.per_robot_times)
    out["per_robot_final_s"][std::to_string(robot)] = t;
  out["memory"] = {{"max_bytes", r.memory.max_usage},
                   {"total_bytes", r.memory.total},
                   {"variance_term", r.memory.variance_term}};
  out["allocation"] = json::object();
  for (const auto& [id, node] : r.best.assignment) {
    json e;
    e["node"] = node;
    e["node_class"] = node_class_name(a.node_class(node));
    if (!g.spec(id).name.empty()) e["name"] = g.spec(id).name;
    out["allocation"][std::to_string(id)] = e;
  }
  out["search"] = {{"nodes_explored", r.nodes_explored},
                   {"pruned", r.pruned},
                   {"wall_time_s", r.wall_time_s}};
  return out;
}

int run_solve(const std::string& dataset, const std::string& arch_file,
              int n_edge, const std::string& config, std::uint64_t seed,
              const std::string& format, const std::string& out,
              bool time_only) {
  Dataset d = load_dataset(dataset);
  Architecture a = resolve_architecture(d, arch_file, n_edge, seed);
  ObjectiveConfig cfg;
  if (!config.empty()) cfg = load_objective_config_file(config, cfg);
  if (time_only) cfg.mem_weight = 0;
  SolveResult r = solve(d.graph, a, d.profile, cfg, seed);
  if (format == "json")
    write_or_print(allocation_json(d.graph, a, r).dump(2) + "\n", out);
  else
    write_or_print(allocation_text(d.graph, a, r), out);
  return 0;
}

int run_balance_mem(const std::string& config, const std::string& format,
                    const std::string& out) {
  if (config.empty())
    fail(Errc::ConfigError, "balance-mem requires --config <file>");
  const json j = json::parse(read_file(config), nullptr, false);
  if (j.is_discarded())
    fail(Errc::ConfigError, "invalid JSON in " + config);
  if (!j.contains("values") || !j["values"].is_array())
    fail(Errc::ConfigError, "balance-mem config needs a 'values' array");

  std::vector<double> values = j["values"].get<std::vector<double>>();
  const int robots = j.value("robots", 0);
  if (robots < 1) fail(Errc::ConfigError, "'robots' must be >= 1");
  std::set<int> tr0_idx;
  if (j.contains("tr0")) tr0_idx = j["tr0"].get<std::set<int>>();
  std::set<int> restricted_idx;
  if (j.contains("restricted"))
    restricted_idx = j["restricted"].get<std::set<int>>();
  for (int i : restricted_idx)
    if (i < 0 || i >= static_cast<int>(values.size()))
      fail(Errc::ConfigError, "restricted index out of range");
  for (int r : tr0_idx)
    if (r < 0 || r >= robots) fail(Errc::ConfigError, "tr0 index out of range");
  BalanceMethod method = BalanceMethod::Exact;
  if (j.value("method", std::string("exact")) == "lpt")
    method = BalanceMethod::Lpt;
  const bool enumerate = j.value("enumerate_optima", false);

  // Values become a profile over synthetic ids; robots become bins.
  MemoryProfile profile;
  for (std::size_t i = 0; i < values.size(); ++i)
    profile.per_algorithm[static_cast<AlgorithmId>(2 + i)].processing_bytes =
        values[i];
  RobotPartition part;
  for (int r = 0; r < robots; ++r)
    (tr0_idx.count(r) ? part.tr0 : part.tr_inf).insert(r);
  std::set<AlgorithmId> restricted, unrestricted;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const AlgorithmId id = static_cast<AlgorithmId>(2 + i);
    (restricted_idx.count(static_cast<int>(i)) ? restricted : unrestricted)
        .insert(id);
  }

  const auto assignment =
      balance_restricted(profile, part, restricted, unrestricted, method);
  std::map<NodeId, double> loads;
  for (int r = 0; r < robots; ++r) loads[r] = 0;
  for (const auto& [id, robot] : assignment)
    loads[robot] += profile.placement_bytes(id);
  double max_load = 0, total = 0;
  for (const auto& [_, l] : loads) {
    max_load = std::max(max_load, l);
    total += l;
  }
  const double mean = total / robots;
  double variance = 0;
  for (const auto& [_, l] : loads) variance += (l - mean) * (l - mean);

  json result;
  result["loads"] = json::object();
  for (const auto& [robot, l] : loads)
    result["loads"][std::to_string(robot)] = l;
  result["max_load"] = max_load;
  result["total"] = total;
  result["variance_term"] = variance;
  result["assignment"] = json::object();
  for (const auto& [id, robot] : assignment)
    result["assignment"][std::to_string(id - 2)] = robot;  // back to indices

  if (enumerate) {
    // stage 2 optima on top of the canonical stage-1 placement
    std::vector<double> stage1_loads(robots, 0.0);
    std::vector<AlgorithmId> unres(unrestricted.begin(), unrestricted.end());
    for (const auto& [id, robot] : assignment)
      if (restricted.count(id))
        stage1_loads[static_cast<std::size_t>(robot)] +=
            profile.placement_bytes(id);
    std::vector<double> unres_values;
    for (AlgorithmId id : unres) unres_values.push_back(profile.placement_bytes(id));
    const auto optima = balance_optima(unres_values, robots, stage1_loads);
    result["optima_load_multisets"] = json::array();
    std::set<std::multiset<double>> seen;
    for (const auto& o : optima) {
      std::multiset<double> ms(o.loads.begin(), o.loads.end());
      if (!seen.insert(ms).second) continue;
      result["optima_load_multisets"].push_back(json(ms));
    }
  }

  if (format == "json") {
    write_or_print(result.dump(2) + "\n", out);
  } else {
    std::string text;
    for (const auto& [robot, l] : loads)
      text += fmt::format("robot {}: {}\n", robot, l);
    text += fmt::format("max={} total={} variance={}\n", max_load, total,
                        variance);
    if (enumerate)
      text += fmt::format("{} optimal load multisets\n",
                          result["optima_load_multisets"].size());
    write_or_print(text, out);
  }
  return 0;
}

int run_sweep_cmd(const std::string& dataset, std::vector<int> n_list,
                  int n_max, int archs, int reps, std::uint64_t seed,
                  bool timings, const std::string& config,
                  const std::string& format, const std::string& out) {
  Dataset d = load_dataset(dataset);
  SweepConfig cfg;
  if (n_list.empty()) {
    for (int n = 1; n <= n_max; ++n) cfg.n_range.push_back(n);
  } else {
    cfg.n_range = std::move(n_list);
  }
  cfg.archs_per_n = archs;
  cfg.reps_per_arch = reps;
  cfg.seed = seed;
  cfg.measure_time = timings;
  if (!config.empty()) cfg.objective = load_objective_config_file(config);
  cfg.graph = &d.graph;
  cfg.profile = &d.profile;
  cfg.links = &d.links;
  const auto rows = run_sweep(cfg);
  const TableFormat tf =
      (format == "json") ? TableFormat::Json : TableFormat::Csv;
  write_or_print(format_tables(rows, tf), out);
  return 0;
}

int run_scalability_cmd(int min_alg, int max_alg, int min_nodes, int max_nodes,
                        int reps, std::uint64_t seed, const std::string& config,
                        const std::string& format, const std::string& out) {
  ScalabilityConfig cfg;
  cfg.min_algorithms = min_alg;
  cfg.max_algorithms = max_alg;
  cfg.min_nodes = min_nodes;
  cfg.max_nodes = max_nodes;
  cfg.reps = reps;
  cfg.seed = seed;
  if (!config.empty()) cfg.objective = load_objective_config_file(config);
  const ScalabilityReport report = run_scalability(cfg);

  if (format == "json") {
    json j;
    j["points"] = json::array();
    for (const auto& p : report.points)
      j["points"].push_back({{"n_algorithms", p.n_algorithms},
                             {"n_nodes", p.n_nodes},
                             {"mean_solve_time_s", p.mean_solve_time_s}});
    j["regression_done"] = report.regression_done;
    if (report.regression_done) {
      j["r_squared"] = report.r_squared;
      j["p_value"] = report.p_value;
      j["intercept"] = report.intercept;
      j["coef_algorithms"] = report.coef_algorithms;
      j["coef_nodes"] = report.coef_nodes;
    }
    write_or_print(j.dump(2) + "\n", out);
  } else {
    std::string text = "n_algorithms,n_nodes,mean_solve_time_s\n";
    for (const auto& p : report.points)
      text += fmt::format("{},{},{}\n", p.n_algorithms, p.n_nodes,
                          p.mean_solve_time_s);
    if (report.regression_done)
      text += fmt::format(
          "# log-log fit: R^2={} p={} time ~ exp({}) * alg^{} * nodes^{}\n",
          report.r_squared, report.p_value, report.intercept,
          report.coef_algorithms, report.coef_nodes);
    else
      text += "# regression skipped (degenerate grid)\n";
    write_or_print(text, out);
  }
  return 0;
}

int run_gen_arch(const std::string& dataset, int n_edge, int count,
                 std::uint64_t seed, const std::string& out) {
  Dataset d = load_dataset(dataset);
  SeededRng rng(seed);
  if (count <= 1) {
    Architecture a = generate_architecture(n_edge, rng, d.links);
    write_or_print(architecture_to_json(a), out);
    return 0;
  }
  const auto batch = nonisomorphic_batch(n_edge, rng, d.links, count);
  if (out.empty()) {
    for (const auto& a : batch) std::fputs(architecture_to_json(a).c_str(), stdout);
    return 0;
  }
  namespace fs = std::filesystem;
  fs::create_directories(out);
  for (std::size_t i = 0; i < batch.size(); ++i)
    write_file((fs::path(out) / fmt::format("arch_{}_{:03}.json", n_edge, i))
                   .string(),
               architecture_to_json(batch[i]));
  std::fprintf(stderr, "wrote %zu architectures to %s\n", batch.size(),
               out.c_str());
  return 0;
}

int run_oracle_check(int instances, int max_alg, int max_nodes,
                     std::uint64_t seed, const std::string& config) {
  ObjectiveConfig cfg;
  if (!config.empty()) cfg = load_objective_config_file(config);
  SeededRng rng(seed);
  int mismatches = 0;
  for (int i = 0; i < instances; ++i) {
    const int n_alg = 1 + static_cast<int>(rng.uniform_int(1, max_alg - 1));
    const int n_edge =
        1 + static_cast<int>(rng.uniform_int(0, std::max(0, max_nodes - 3)));
    Instance inst = random_instance(n_alg, n_edge, rng);
    const SolveResult got = solve(inst.graph, inst.arch, inst.profile, cfg);
    const SolveResult want =
        enumerate_oracle(inst.graph, inst.arch, inst.profile, cfg);
    const bool ok = std::abs(got.distance - want.distance) <= 1e-9;
    if (!ok) ++mismatches;
    fmt::print("instance {:3}: algorithms={} robots={} solve={} oracle={} {}\n",
               i, n_alg, n_edge, got.distance, want.distance,
               ok ? "ok" : "MISMATCH");
  }
  fmt::print("{} of {} instances match\n", instances - mismatches, instances);
  return mismatches == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "edgealloc: static allocation of interdependent algorithms onto "
      "edge/fog/cloud networks"};
  app.require_subcommand(1);
  app.fallthrough();  // global options may follow the subcommand

  std::string dataset = "paper";
  std::string config, format = "text", out, arch_file;
  std::uint64_t seed = 0;
  app.add_option("--dataset", dataset,
                 "'paper' or a directory with graph.json/links.json");
  app.add_option("--config", config, "objective config JSON file");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--format", format, "output format: text|csv|json");
  app.add_option("--out", out, "output path (stdout when omitted)");

  auto* cmd_solve = app.add_subcommand("solve", "solve one instance");
  int n_edge = 1;
  cmd_solve->add_option("--arch", arch_file, "architecture JSON file");
  cmd_solve->add_option("--n-edge", n_edge,
                        "robots in the generated architecture");

  auto* cmd_time = app.add_subcommand("time-only",
                                      "solve with the memory term disabled");
  cmd_time->add_option("--arch", arch_file, "architecture JSON file");
  cmd_time->add_option("--n-edge", n_edge,
                       "robots in the generated architecture");

  auto* cmd_balance =
      app.add_subcommand("balance-mem", "two-stage memory balancing");

  auto* cmd_sweep = app.add_subcommand("sweep", "random-architecture sweep");
  std::vector<int> n_list;
  int n_max = 4, archs = 0, reps = 10;
  bool timings = false;
  cmd_sweep->add_option("--n-list", n_list, "robot counts (overrides --n-max)");
  cmd_sweep->add_option("--n-max", n_max, "sweep n = 1..n-max");
  cmd_sweep->add_option("--archs", archs,
                        "architectures per n (0 means n+5)");
  cmd_sweep->add_option("--reps", reps, "repetitions per architecture");
  cmd_sweep->add_flag("--timings", timings,
                      "measure wall times (breaks byte-reproducibility)");

  auto* cmd_scal = app.add_subcommand("scalability",
                                      "solve-time grid and log-log fit");
  int min_alg = 3, max_alg = 8, min_nodes = 3, max_nodes = 6, sreps = 3;
  cmd_scal->add_option("--min-alg", min_alg, "smallest algorithm count");
  cmd_scal->add_option("--max-alg", max_alg, "largest algorithm count");
  cmd_scal->add_option("--min-nodes", min_nodes, "smallest total node count");
  cmd_scal->add_option("--max-nodes", max_nodes, "largest total node count");
  cmd_scal->add_option("--reps", sreps, "instances per grid point");

  auto* cmd_gen = app.add_subcommand("gen-arch", "emit random architectures");
  int gen_n = 1, gen_count = 1;
  cmd_gen->add_option("--n-edge", gen_n, "robot count");
  cmd_gen->add_option("--count", gen_count,
                      "batch size (>1 filters isomorphic candidates)");

  auto* cmd_oracle = app.add_subcommand(
      "oracle-check", "compare the solver against exhaustive enumeration");
  int oc_instances = 50, oc_max_alg = 5, oc_max_nodes = 4;
  cmd_oracle->add_option("--instances", oc_instances, "instance count");
  cmd_oracle->add_option("--max-alg", oc_max_alg, "max algorithms");
  cmd_oracle->add_option("--max-nodes", oc_max_nodes, "max total nodes");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }

  try {
    if (*cmd_solve)
      return run_solve(dataset, arch_file, n_edge, config, seed, format, out,
                       false);
    if (*cmd_time)
      return run_solve(dataset, arch_file, n_edge, config, seed, format, out,
                       true);
    if (*cmd_balance) return run_balance_mem(config, format, out);
    if (*cmd_sweep)
      return run_sweep_cmd(dataset, n_list, n_max, archs, reps, seed, timings,
                           config, format, out);
    if (*cmd_scal)
      return run_scalability_cmd(min_alg, max_alg, min_nodes, max_nodes, sreps,
                                 seed, config, format, out);
    if (*cmd_gen) return run_gen_arch(dataset, gen_n, gen_count, seed, out);
    if (*cmd_oracle)
      return run_oracle_check(oc_instances, oc_max_alg, oc_max_nodes, seed,
                              config);
  } catch (const Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", errc_name(e.code()), e.what());
    switch (e.code()) {
      case Errc::Infeasible:
      case Errc::InfeasibleMemoryPlacement:
      case Errc::ConstraintViolation:
        return 2;
      case Errc::ConfigError:
      case Errc::IoError:
        return 3;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
