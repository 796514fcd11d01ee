#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"

namespace edgealloc {

/// Total map from algorithms to hosting nodes. The virtual source and
/// sink are never stored; they are pinned to the initiating robot of
/// each evaluation.
struct Allocation {
  std::map<AlgorithmId, NodeId> assignment;

  NodeId node_for(AlgorithmId id, NodeId initiator) const {
    if (is_virtual(id)) return initiator;
    return assignment.at(id);
  }
  bool contains(AlgorithmId id) const {
    return is_virtual(id) || assignment.count(id) != 0;
  }
  /// Lexicographic comparison by (algorithm id, node id); the canonical
  /// tie-break among equal-distance allocations.
  bool lex_less(const Allocation& other) const;
};

enum class EvalMode { Expected, Sampled };

struct EvalOptions {
  EvalMode mode = EvalMode::Expected;
  /// When false, delivery of an algorithm's output to its successor and
  /// to the requesting robot costs nothing; only the initial request
  /// dispatch is charged. This is the reduced communication model the
  /// comparison baseline optimizes internally.
  bool include_output_legs = true;
  /// The normalizing all-on-one-node reference allocation may violate
  /// placement constraints; it is evaluated with this check off.
  bool enforce_allowed_nodes = true;
};

struct AlgoTimes {
  double start = 0;
  double finish = 0;  // at the hosting node, before any onward transfer
};

/// Response-time evaluation for one initiating robot.
struct RobotTimeReport {
  NodeId initiator = -1;
  double final_s = 0;  // time until the initiator holds the sink's output
  std::map<AlgorithmId, AlgoTimes> per_algorithm;
};

/// Aggregate over all robots: per-robot finals and their Euclidean norm.
struct TimeReport {
  std::map<NodeId, double> per_robot_final;
  double aggregate = 0;
  std::vector<RobotTimeReport> robots;
};

/// Evaluates the recursive response-time model for one initiator.
/// Validates that the allocation is total and respects allowed nodes.
RobotTimeReport response_time(const AlgorithmGraph& g, const Architecture& a,
                              const Allocation& alloc, NodeId initiator,
                              EvalMode mode, std::uint64_t seed = 0);

RobotTimeReport response_time(const AlgorithmGraph& g, const Architecture& a,
                              const Allocation& alloc, NodeId initiator,
                              const EvalOptions& options,
                              std::uint64_t seed = 0);

/// Runs response_time once per robot; aggregate is the Euclidean norm of
/// the per-robot finals. Sampled mode derives one RNG substream per
/// robot from `seed`.
TimeReport aggregate_time(const AlgorithmGraph& g, const Architecture& a,
                          const Allocation& alloc, EvalMode mode,
                          std::uint64_t seed = 0);

TimeReport aggregate_time(const AlgorithmGraph& g, const Architecture& a,
                          const Allocation& alloc, const EvalOptions& options,
                          std::uint64_t seed = 0);

/// Evaluates the same recursion on the height-prefix covered by
/// `partial` (expected mode) and returns the Euclidean aggregate of the
/// per-robot partial values. Extending a partial allocation never
/// decreases the result. Throws InvalidPrefix when `partial` is not
/// height-closed.
double partial_time(const AlgorithmGraph& g, const Architecture& a,
                    const Allocation& partial);

double partial_time(const AlgorithmGraph& g, const Architecture& a,
                    const Allocation& partial, const EvalOptions& options);

/// Validates totality and allowed-node constraints; throws
/// ConstraintViolation / Infeasible accordingly.
void validate_allocation(const AlgorithmGraph& g, const Architecture& a,
                         const Allocation& alloc);

}  // namespace edgealloc
