#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/memory_model.hpp"
#include "edgealloc/time_model.hpp"

namespace edgealloc {

/// Normalizers anchoring the joint objective: the all-on-baseline-node
/// allocation evaluates to distance sqrt(2) by construction.
struct JointObjective {
  double time_norm = 0;  // Euclidean norm of baseline per-robot finals
  double mem_norm = 0;   // max robot memory under the baseline
  NodeClass baseline_node_class = NodeClass::Cloud;
};

struct ObjectiveConfig {
  double time_weight = 1.0;
  double mem_weight = 1.0;
  NodeClass baseline_node_class = NodeClass::Cloud;
  CombineMode combine = CombineMode::SimpleSum;
  bool pruning = true;
  std::size_t oracle_cap = 10'000'000;
  int workers = 1;
  /// Collect every allocation within tie_epsilon of the optimum.
  bool collect_ties = false;
  double tie_epsilon = 1e-9;
};

struct SolveResult {
  Allocation best;
  double distance = 0;
  std::map<NodeId, double> per_robot_times;
  MemoryReport memory;
  JointObjective objective;
  std::uint64_t nodes_explored = 0;
  std::uint64_t pruned = 0;
  double wall_time_s = 0;
  /// Successive incumbent distances (first entry is the initial bound).
  std::vector<double> incumbent_trace;
  std::vector<Allocation> ties;  // filled when collect_ties is set
};

/// Normalizers and the sqrt(2) anchor from the all-on-baseline-node
/// allocation. Throws ConfigError when a weighted normalizer is zero.
JointObjective make_objective(const AlgorithmGraph& g, const Architecture& a,
                              const MemoryProfile& profile,
                              const ObjectiveConfig& cfg);

/// Weighted normalized distance to the origin.
double joint_distance(const ObjectiveConfig& cfg, const JointObjective& obj,
                      const std::map<NodeId, double>& per_robot_times,
                      double max_memory);

/// Branch-and-bound over allocations in descending-height order,
/// pruning partial assignments whose normalized partial distance already
/// exceeds the incumbent. Deterministic; returns the global optimum of
/// the expected-time joint objective.
SolveResult solve(const AlgorithmGraph& g, const Architecture& a,
                  const MemoryProfile& profile, const ObjectiveConfig& cfg,
                  std::uint64_t seed = 0);

/// Same search under the reduced objective (no output-return legs, no
/// memory term); the winning allocation is then re-evaluated under the
/// full objective so results are comparable with solve().
SolveResult solve_baseline_li2018(const AlgorithmGraph& g,
                                  const Architecture& a,
                                  const MemoryProfile& profile,
                                  const ObjectiveConfig& cfg,
                                  std::uint64_t seed = 0);

/// Exhaustive ground-truth enumeration; throws OracleTooLarge when the
/// feasible product space exceeds cfg.oracle_cap.
SolveResult enumerate_oracle(const AlgorithmGraph& g, const Architecture& a,
                             const MemoryProfile& profile,
                             const ObjectiveConfig& cfg);

/// Staged solve for heterogeneous robot classes: algorithms used by
/// exactly one class are allocated over that class (plus fog/cloud)
/// first, then shared algorithms over the unions, in ascending union
/// size. Memory is balanced within each class scope.
SolveResult solve_heterogeneous(
    const AlgorithmGraph& g, const Architecture& a,
    const MemoryProfile& profile, const ObjectiveConfig& cfg,
    const std::vector<std::set<NodeId>>& classes,
    const std::map<AlgorithmId, std::set<int>>& algo_usage,
    std::uint64_t seed = 0);

}  // namespace edgealloc
