// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Run via ctest or directly:
//   ./acceptance [--cli path/to/edgealloc] [--only N]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <future>
#include <set>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "edgealloc/datasets.hpp"
#include "edgealloc/harness.hpp"
#include "edgealloc/io.hpp"
#include "edgealloc/solver.hpp"
#include "support.hpp"

using namespace edgealloc;
using namespace testsupport;

namespace {

struct Criterion {
  int number;
  std::string summary;
  std::function<bool(std::string&)> run;
};

double now_s() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

// ---------------------------------------------------------------- 1
bool appendix_memory_instance(std::string& detail) {
  const double t0 = now_s();
  const std::vector<double> values = {4,  5,  6,  7,  8,  10, 12,
                                      13, 14, 18, 24, 30, 32};
  MemoryProfile profile;
  for (std::size_t i = 0; i < values.size(); ++i)
    profile.per_algorithm[static_cast<AlgorithmId>(2 + i)].processing_bytes =
        values[i];
  RobotPartition part;
  part.tr0 = {0, 1};
  part.tr_inf = {2, 3, 4};
  const std::set<AlgorithmId> restricted = {3, 4, 10, 11, 12};  // 5,6,14,18,24
  std::set<AlgorithmId> unrestricted;
  for (AlgorithmId id = 2; id <= 14; ++id)
    if (!restricted.count(id)) unrestricted.insert(id);

  const auto assignment = balance_restricted(profile, part, restricted,
                                             unrestricted, BalanceMethod::Exact);
  std::vector<double> loads(5, 0.0);
  for (const auto& [id, robot] : assignment)
    loads[static_cast<std::size_t>(robot)] += profile.placement_bytes(id);
  const double max_load = *std::max_element(loads.begin(), loads.end());

  // enumerate the equivalent optima of the unrestricted stage given the
  // canonical restricted placement
  std::vector<double> priors(5, 0.0);
  for (const auto& [id, robot] : assignment)
    if (restricted.count(id))
      priors[static_cast<std::size_t>(robot)] += profile.placement_bytes(id);
  std::vector<double> stage2;
  for (AlgorithmId id : unrestricted) stage2.push_back(profile.placement_bytes(id));
  const auto optima = balance_optima(stage2, 5, priors);
  const std::multiset<double> published = {35, 36, 39, 38, 35};
  bool found = false;
  for (const auto& o : optima) {
    if (std::multiset<double>(o.loads.begin(), o.loads.end()) == published) {
      found = true;
      break;
    }
  }
  const double elapsed = now_s() - t0;
  detail = fmt::format("max={} optima={} published-multiset={} {:.3f}s",
                       max_load, optima.size(), found ? "found" : "MISSING",
                       elapsed);
  return max_load == 39.0 && found && elapsed < 1.0;
}

// ---------------------------------------------------------------- 2
bool memory_algebra_examples(std::string& detail) {
  std::vector<AlgorithmSpec> specs = {simple_algo(2, 1), simple_algo(3, 1),
                                      simple_algo(4, 1), simple_algo(5, 1)};
  AlgorithmGraph g = lift_to_semilattice(
      AlgorithmGraph(std::move(specs), {{2, 3}, {3, 4}, {3, 5}}));
  MemoryProfile p;
  p.per_algorithm[2] = {5, 10, 0, 0};
  p.per_algorithm[3] = {6, 0, 0, 0};
  p.per_algorithm[4] = {7, 0, 0, 0};
  p.per_algorithm[5] = {9, 11, 0, 0};
  const double parallel = memory_algebra(g.induced_subgraph({4, 5}), p);
  const double serial = memory_algebra(g.induced_subgraph({2, 5}), p);
  detail = fmt::format("parallel={} serial={}", parallel, serial);
  return parallel == 27.0 && serial == 30.0;
}

// ---------------------------------------------------------------- 3
bool oracle_equivalence(std::string& detail) {
  const double t0 = now_s();
  SeededRng rng(20260810);
  int matched = 0;
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    const int n_alg = 1 + static_cast<int>(rng.uniform_int(0, 4));
    const int n_edge = 1 + static_cast<int>(rng.uniform_int(0, 1));
    Instance inst = random_instance(n_alg, n_edge, rng);
    ObjectiveConfig cfg;
    const SolveResult got = solve(inst.graph, inst.arch, inst.profile, cfg);
    const SolveResult want =
        enumerate_oracle(inst.graph, inst.arch, inst.profile, cfg);
    const double gap = std::abs(got.distance - want.distance);
    worst = std::max(worst, gap);
    if (gap <= 1e-9) ++matched;
  }
  const double elapsed = now_s() - t0;
  detail = fmt::format("{}/50 matched, worst gap {:.2e}, {:.1f}s", matched,
                       worst, elapsed);
  return matched == 50 && elapsed < 300.0;
}

// ---------------------------------------------------------------- 4
bool normalization_anchor(std::string& detail) {
  SeededRng rng(404);
  double worst = 0;
  auto check_instance = [&](const AlgorithmGraph& g, const Architecture& a,
                            const MemoryProfile& p) {
    ObjectiveConfig cfg;
    const JointObjective obj = make_objective(g, a, p, cfg);
    NodeId anchor = a.cloud_nodes().front();
    Allocation base = all_on(g, anchor);
    TimeReport t = aggregate_time(g, a, base, EvalMode::Expected);
    MemoryReport m = memory_report(p, g, a, base, cfg.combine);
    const double d = joint_distance(cfg, obj, t.per_robot_final, m.max_usage);
    worst = std::max(worst, std::abs(d - std::sqrt(2.0)));
  };
  check_instance(paper_graph(), paper_architecture_n1(), paper_profile());
  for (int i = 0; i < 20; ++i) {
    const int n_alg = 1 + static_cast<int>(rng.uniform_int(0, 5));
    const int n_edge = 1 + static_cast<int>(rng.uniform_int(0, 3));
    Instance inst = random_instance(n_alg, n_edge, rng);
    check_instance(inst.graph, inst.arch, inst.profile);
  }
  detail = fmt::format("worst |d - sqrt(2)| = {:.2e} over 21 instances", worst);
  return worst <= 1e-9;
}

// ---------------------------------------------------------------- 5
bool baseline_dominance_sweep(std::string& detail) {
  const double t0 = now_s();
  const AlgorithmGraph& graph = paper_graph();
  const MemoryProfile& profile = paper_profile();
  const LinkClassTable& links = paper_tab2p();
  const std::uint64_t seed = 5;
  const int reps = 10;

  bool all_cells_dominated = true;
  int cells = 0;
  double n1_ours = 0, n1_base = 0;

  for (int n = 1; n <= 4; ++n) {
    SeededRng batch_rng =
        SeededRng(seed).derive(0x6261746368ULL ^ static_cast<std::uint64_t>(n));
    const auto archs = nonisomorphic_batch(n, batch_rng, links, n + 5);
    struct Cell {
      double ours = 0, base = 0;
      bool dominated = true;
    };
    std::vector<std::future<Cell>> futures;
    for (std::size_t ai = 0; ai < archs.size(); ++ai) {
      futures.push_back(std::async(std::launch::async, [&, ai, n] {
        Cell c;
        for (int rep = 0; rep < reps; ++rep) {
          const std::uint64_t stream = (static_cast<std::uint64_t>(n) << 40) ^
                                       (static_cast<std::uint64_t>(ai) << 20) ^
                                       static_cast<std::uint64_t>(rep);
          SeededRng rep_rng = SeededRng(seed).derive(stream);
          const Architecture frozen = archs[ai].with_frozen_delays(rep_rng);
          const SolveResult ours =
              solve(graph, frozen, profile, ObjectiveConfig{});
          const SolveResult base = solve_baseline_li2018(graph, frozen, profile,
                                                         ObjectiveConfig{});
          if (ours.distance > base.distance + 1e-9) c.dominated = false;
          c.ours += ours.distance / reps;
          c.base += base.distance / reps;
        }
        return c;
      }));
    }
    double n_ours = 0, n_base = 0;
    for (auto& f : futures) {
      Cell c = f.get();
      ++cells;
      if (!c.dominated) all_cells_dominated = false;
      n_ours += c.ours / static_cast<double>(futures.size());
      n_base += c.base / static_cast<double>(futures.size());
    }
    if (n == 1) {
      n1_ours = n_ours;
      n1_base = n_base;
    }
  }

  const bool n1_bracket =
      n1_ours < std::sqrt(2.0) && std::sqrt(2.0) < n1_base;
  const double elapsed = now_s() - t0;
  detail = fmt::format(
      "{} cells dominated={}, n=1 measured (ours={:.3f}, baseline={:.3f}) vs "
      "published (1.083, 2.904), {:.1f}s",
      cells, all_cells_dominated ? "yes" : "NO", n1_ours, n1_base, elapsed);
  return all_cells_dominated && n1_bracket;
}

// ---------------------------------------------------------------- 6
bool zero_communication_reduction(std::string& detail) {
  SeededRng rng(606);
  int exact = 0;
  for (int iter = 0; iter < 20; ++iter) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 3));
    std::vector<AlgorithmSpec> specs;
    for (int i = 0; i < n; ++i)
      specs.push_back(simple_algo(2 + i, rng.uniform_range(0.1, 3.0),
                                  rng.uniform_range(0, 1000),
                                  rng.uniform_range(0, 1000)));
    std::vector<std::pair<AlgorithmId, AlgorithmId>> edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (rng.uniform() < 0.4) edges.emplace_back(2 + i, 2 + j);
    AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(specs, edges));
    Architecture a = star_arch(n + 1, 0.0);
    Allocation alloc;
    for (int i = 0; i < n; ++i) alloc.assignment[2 + i] = 3 + i;
    TimeReport t = aggregate_time(g, a, alloc, EvalMode::Expected);
    const double oracle = critical_path_oracle(g, a, alloc);
    bool ok = true;
    for (const auto& [_, v] : t.per_robot_final)
      if (v != oracle) ok = false;
    if (ok) ++exact;
  }
  detail = fmt::format("{}/20 instances bit-exact against the oracle", exact);
  return exact == 20;
}

// ---------------------------------------------------------------- 7
bool folded_normal_sampler(std::string& detail) {
  SeededRng rng(707);
  const int n = 1000000;
  double sum = 0;
  bool nonneg = true;
  for (int i = 0; i < n; ++i) {
    const double x = rng.folded_normal(0, 1);
    if (x < 0) nonneg = false;
    sum += x;
  }
  const double mean = sum / n;
  const double want = std::sqrt(2.0 / kPi);
  detail = fmt::format("mean={:.5f} target={:.5f} |err|={:.5f} nonneg={}",
                       mean, want, std::abs(mean - want), nonneg);
  return nonneg && std::abs(mean - want) <= 0.01;
}

// ---------------------------------------------------------------- 8
bool lemma1_relay_property(std::string& detail) {
  SeededRng rng(808);
  int holds = 0;
  for (int iter = 0; iter < 20; ++iter) {
    // cloud -- fog -- R1 -- R2 -- R3: only R1 touches the fog
    Architecture a = chain_arch(3, rng.uniform_range(0.1, 2.0));
    const int n = 1 + static_cast<int>(rng.uniform_int(0, 4));
    std::vector<AlgorithmSpec> specs;
    MemoryProfile p;
    for (int i = 0; i < n; ++i) {
      specs.push_back(simple_algo(2 + i, 1));
      p.per_algorithm[2 + i] = {std::floor(rng.uniform_range(1, 50)), 0, 0,
                                std::floor(rng.uniform_range(0, 20))};
    }
    // one externally fed algorithm
    const AlgorithmId fed =
        2 + static_cast<AlgorithmId>(rng.uniform_int(0, n - 1));
    p.per_algorithm[fed].input_external_bytes =
        std::floor(rng.uniform_range(1, 100));
    AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(std::move(specs), {}));

    Allocation near;
    for (int i = 0; i < n; ++i)
      near.assignment[2 + i] =
          static_cast<NodeId>(2 + rng.uniform_int(0, 2));
    near.assignment[fed] = 2;  // tr0 robot
    Allocation far = near;
    far.assignment[fed] = static_cast<NodeId>(3 + rng.uniform_int(0, 1));

    const double smu_near =
        memory_report(p, g, a, near, CombineMode::SimpleSum).total;
    const double smu_far =
        memory_report(p, g, a, far, CombineMode::SimpleSum).total;
    const double ext = p.per_algorithm.at(fed).input_external_bytes;
    if (smu_far >= smu_near + ext) ++holds;
  }
  detail = fmt::format("{}/20 chains satisfy SMU(far) >= SMU(tr0) + ext", holds);
  return holds == 20;
}

// ---------------------------------------------------------------- 9
bool scalability_regression(std::string& detail) {
  const double t0 = now_s();
  ScalabilityConfig cfg;
  cfg.min_algorithms = 3;
  cfg.max_algorithms = 8;
  cfg.min_nodes = 3;
  cfg.max_nodes = 6;
  cfg.reps = 3;
  cfg.seed = 909;
  const ScalabilityReport report = run_scalability(cfg);
  const double elapsed = now_s() - t0;
  detail = fmt::format("{} grid points, R^2={:.4f}, p={:.2e}, {:.1f}s",
                       report.points.size(), report.r_squared, report.p_value,
                       elapsed);
  return report.regression_done && report.r_squared >= 0.90 && elapsed < 900.0;
}

// ---------------------------------------------------------------- 10
std::string g_cli_path;

bool sweep_determinism(std::string& detail) {
  if (!g_cli_path.empty()) {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path();
    const std::string out1 = (dir / "edgealloc_det_1.csv").string();
    const std::string out2 = (dir / "edgealloc_det_2.csv").string();
    const std::string base = fmt::format(
        "\"{}\" sweep --seed 7 --n-list 1 --n-list 2 --reps 3 --format csv",
        g_cli_path);
    const int rc1 = std::system((base + " --out \"" + out1 + "\"").c_str());
    const int rc2 = std::system((base + " --out \"" + out2 + "\"").c_str());
    if (rc1 != 0 || rc2 != 0) {
      detail = "CLI invocation failed";
      return false;
    }
    const std::string a = read_file(out1);
    const std::string b = read_file(out2);
    fs::remove(out1);
    fs::remove(out2);
    detail = fmt::format("two `sweep --seed 7` runs, {} bytes each, {}",
                         a.size(), a == b ? "byte-identical" : "DIFFER");
    return !a.empty() && a == b;
  }
  SweepConfig cfg;
  cfg.n_range = {1, 2};
  cfg.reps_per_arch = 3;
  cfg.seed = 7;
  const std::string a = format_tables(run_sweep(cfg), TableFormat::Csv);
  const std::string b = format_tables(run_sweep(cfg), TableFormat::Csv);
  detail = fmt::format("library-level runs, {} bytes, {}", a.size(),
                       a == b ? "byte-identical" : "DIFFER");
  return !a.empty() && a == b;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--cli" && i + 1 < argc) g_cli_path = argv[++i];
    if (arg == "--only" && i + 1 < argc) only = std::atoi(argv[++i]);
  }

  std::vector<Criterion> criteria = {
      {1, "appendix balancing instance reaches max load 39",
       appendix_memory_instance},
      {2, "memory algebra worked examples (27 and 30)", memory_algebra_examples},
      {3, "solver matches the exhaustive oracle on 50 instances",
       oracle_equivalence},
      {4, "all-on-anchor allocation sits at sqrt(2)", normalization_anchor},
      {5, "sweep n=1..4: optimum dominates the baseline per cell",
       baseline_dominance_sweep},
      {6, "zero links reduce finals to the critical path",
       zero_communication_reduction},
      {7, "folded-normal sampler mean and support", folded_normal_sampler},
      {8, "relay surcharge inequality on 3-robot chains", lemma1_relay_property},
      {9, "log-log scalability fit reaches R^2 >= 0.90", scalability_regression},
      {10, "sweep --seed 7 is byte-reproducible", sweep_determinism},
  };

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (only != 0 && c.number != only) continue;
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    fmt::print("{} criterion {:2}: {} [{}]\n", ok ? "PASS" : "FAIL", c.number,
               c.summary, detail);
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) fmt::print("{} criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
