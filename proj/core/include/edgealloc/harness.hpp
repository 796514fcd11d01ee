#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/memory_model.hpp"
#include "edgealloc/solver.hpp"

namespace edgealloc {

/// One experiment instance: lifted graph, architecture, memory profile.
struct Instance {
  AlgorithmGraph graph;
  Architecture arch;
  MemoryProfile profile;
};

/// Random instance generator used by the oracle campaign and the
/// scalability harness: random DAG, random connected architecture,
/// random execution/link/memory parameters.
Instance random_instance(int n_algorithms, int n_edge, SeededRng& rng);

struct SweepConfig {
  std::vector<int> n_range;
  int archs_per_n = 0;     // 0 -> n+5
  int reps_per_arch = 10;
  std::uint64_t seed = 0;
  ObjectiveConfig objective;
  /// Measured wall times are inherently run-dependent, so the time
  /// column stays at zero unless explicitly requested; only then is the
  /// emitted table exempt from the byte-identical reproducibility
  /// guarantee.
  bool measure_time = false;
  // Dataset; defaults to the bundled measurements when left empty.
  const AlgorithmGraph* graph = nullptr;
  const MemoryProfile* profile = nullptr;
  const LinkClassTable* links = nullptr;
};

struct SweepRow {
  int n = 0;
  std::string method;  // "ours" | "baseline"
  double mean_distance = 0;
  double stddev = 0;
  double ci_999 = 0;  // 99.9% Student-t half-width
  double mean_solve_time_s = 0;
};

/// Random-architecture sweep: per n, a non-isomorphic batch; per
/// architecture, reps_per_arch repetitions with freshly frozen link
/// delays, solved with both methods. Rows aggregate per-architecture
/// means. Fully deterministic in cfg.seed.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

struct ScalabilityConfig {
  int min_algorithms = 3;
  int max_algorithms = 8;
  int min_nodes = 3;   // total node count (robots + fog + cloud)
  int max_nodes = 6;
  int reps = 3;        // random instances per grid point
  std::uint64_t seed = 0;
  ObjectiveConfig objective;
};

struct ScalabilityPoint {
  int n_algorithms = 0;
  int n_nodes = 0;
  double mean_solve_time_s = 0;
};

struct ScalabilityReport {
  std::vector<ScalabilityPoint> points;
  bool regression_done = false;
  // log(time) ~ intercept + c_alg*log(n_algorithms) + c_nodes*log(n_nodes)
  double intercept = 0, coef_algorithms = 0, coef_nodes = 0;
  double r_squared = 0;
  double p_value = 1.0;  // overall F-test
};

ScalabilityReport run_scalability(const ScalabilityConfig& cfg);

enum class TableFormat { Csv, Json };

/// Writes rows with the stable column order
/// (n, method, mean_distance, stddev, ci_999, mean_solve_time_s).
std::string format_tables(const std::vector<SweepRow>& rows, TableFormat f);
void emit_tables(const std::vector<SweepRow>& rows, TableFormat f,
                 const std::string& path);
std::vector<SweepRow> parse_tables(const std::string& text, TableFormat f);

}  // namespace edgealloc
