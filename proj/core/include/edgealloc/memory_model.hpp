#pragma once

#include <map>
#include <set>
#include <vector>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/time_model.hpp"

namespace edgealloc {

/// Byte-level memory description. Every robot stores the outputs of all
/// algorithms (to_total); tm_overhead is the per-robot bookkeeping share.
struct MemoryProfile {
  struct AlgoMem {
    double processing_bytes = 0;
    double input_external_bytes = 0;  // delivered from fog/cloud
    double input_internal_bytes = 0;
    double output_bytes = 0;
  };

  std::map<AlgorithmId, AlgoMem> per_algorithm;
  std::map<NodeId, double> tm_overhead;

  double to_total() const;            // sum of output_bytes
  double tm(NodeId robot) const;      // 0 unless overridden
  /// processing + all input bytes; the balancing weight of an algorithm.
  double placement_bytes(AlgorithmId id) const;

  /// Derives byte quantities from the graph's specs (payload bits / 8).
  static MemoryProfile from_graph(const AlgorithmGraph& g);
};

enum class CombineMode { SimpleSum, Algebra };

/// Peak memory of executing the induced subgraph on one node: maximum
/// total processing memory over sets of pairwise-parallel algorithms
/// (serial pairs share, parallel pairs add), plus all external inputs.
double memory_algebra(const AlgorithmGraph& g_induced,
                      const MemoryProfile& profile);

/// MU of one robot under the given allocation, including the relay
/// surcharge: an externally fed algorithm hosted on a tr_inf robot adds
/// its external input size to every tr0 robot relaying on the route
/// from fog.
double robot_memory(const MemoryProfile& profile, const AlgorithmGraph& g,
                    const Architecture& a, const Allocation& alloc,
                    NodeId robot, CombineMode combine);

struct MemoryReport {
  std::map<NodeId, double> per_robot;
  double max_usage = 0;
  double total = 0;          // SMU
  double variance_term = 0;  // sum of squared deviations from SMU/k
};

MemoryReport memory_report(const MemoryProfile& profile,
                           const AlgorithmGraph& g, const Architecture& a,
                           const Allocation& alloc, CombineMode combine);

enum class BalanceMethod { Exact, Lpt };

struct BalanceResult {
  std::vector<int> assignment;  // value index -> bin index
  std::vector<double> loads;    // includes initial loads
  double sum_squares = 0;
  double max_load = 0;
  /// Variance-style objective: sum over bins of (load - mean)^2.
  double variance_term = 0;
};

/// Distributes values over bins minimizing the variance of bin loads
/// (exact branch-and-bound) or greedily (LPT: descending values into the
/// least-loaded bin). Ties are broken by max load, then by the
/// lexicographically smallest assignment.
BalanceResult balance(const std::vector<double>& values, int bins,
                      const std::vector<double>& initial_loads,
                      BalanceMethod method);

/// All assignments achieving the optimal (variance, max load) pair, up
/// to max_results.
std::vector<BalanceResult> balance_optima(const std::vector<double>& values,
                                          int bins,
                                          const std::vector<double>& initial_loads,
                                          std::size_t max_results = 10000);

/// Two-stage balancing: restricted algorithms (nonzero external input)
/// over tr0 robots first, then the rest over all robots with the stage-1
/// loads as fixed priors. Throws InfeasibleMemoryPlacement when
/// restricted algorithms exist but tr0 is empty.
std::map<AlgorithmId, NodeId> balance_restricted(
    const MemoryProfile& profile, const RobotPartition& partition,
    const std::set<AlgorithmId>& restricted,
    const std::set<AlgorithmId>& unrestricted,
    BalanceMethod method = BalanceMethod::Exact);

}  // namespace edgealloc
