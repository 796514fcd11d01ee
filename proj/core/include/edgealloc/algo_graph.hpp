#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgealloc/architecture.hpp"
#include "edgealloc/errors.hpp"

namespace edgealloc {

using AlgorithmId = int;

/// Reserved ids of the virtual sink and source added by the semi-lattice
/// lift. User algorithms must use ids >= 2.
inline constexpr AlgorithmId kVirtualSink = 0;
inline constexpr AlgorithmId kVirtualSource = 1;

inline bool is_virtual(AlgorithmId id) {
  return id == kVirtualSink || id == kVirtualSource;
}

/// Static description of one algorithm: execution times per node class
/// (optionally overridden per node), transmission payload sizes in bits,
/// memory footprint in bytes, and the set of nodes it may run on.
struct AlgorithmSpec {
  AlgorithmId id = -1;
  std::string name;

  std::map<NodeClass, double> exec_by_class;  // seconds
  std::map<NodeId, double> exec_by_node;      // per-node override, seconds

  double input_external_bits = 0;  // must come from fog/cloud
  double input_internal_bits = 0;  // carried with the initiating request
  double output_bits = 0;
  double processing_bytes = 0;

  // Empty set means unrestricted. Both filters apply.
  std::set<NodeClass> allowed_classes;
  std::set<NodeId> allowed_nodes;

  double exec_time(NodeId node, NodeClass cls) const;
  bool allowed_on(NodeId node, NodeClass cls) const;

  static AlgorithmSpec virtual_spec(AlgorithmId id);
};

/// A directed path of algorithm ids from the virtual source to the
/// virtual sink.
using ExecutionFlow = std::vector<AlgorithmId>;

inline constexpr std::size_t kDefaultFlowLimit = 1u << 20;

/// Immutable dependency DAG of algorithms. Construction validates
/// acyclicity; flows and heights are computed lazily and cached, so a
/// lifted graph can be shared freely across solver workers.
class AlgorithmGraph {
 public:
  AlgorithmGraph();
  AlgorithmGraph(std::vector<AlgorithmSpec> specs,
                 std::vector<std::pair<AlgorithmId, AlgorithmId>> edges,
                 std::size_t flow_limit = kDefaultFlowLimit);

  const std::vector<AlgorithmSpec>& specs() const { return specs_; }
  const AlgorithmSpec& spec(AlgorithmId id) const;
  bool has_vertex(AlgorithmId id) const { return index_.count(id) != 0; }
  std::vector<AlgorithmId> vertices() const;
  std::vector<AlgorithmId> nonvirtual_vertices() const;
  const std::vector<std::pair<AlgorithmId, AlgorithmId>>& edges() const {
    return edges_;
  }
  const std::vector<AlgorithmId>& preds(AlgorithmId id) const;
  const std::vector<AlgorithmId>& succs(AlgorithmId id) const;

  bool lifted() const;
  std::size_t flow_limit() const { return flow_limit_; }

  /// True iff a directed path from u to v exists (u == v counts).
  bool reachable(AlgorithmId u, AlgorithmId v) const;

  /// Vertices in a deterministic topological order (ascending id among
  /// ready vertices).
  std::vector<AlgorithmId> topo_order() const;

  /// All source-to-sink paths; cached after the first call. Throws
  /// TooManyFlows past the configured limit and ConfigError when the
  /// graph has not been lifted.
  const std::vector<ExecutionFlow>& execution_flows() const;

  /// Number of vertices from v to the sink, inclusive, maximized over
  /// flows containing v. The sink has height 1.
  int height(AlgorithmId v) const;

  /// Non-virtual vertices ordered by descending height (ties by id); the
  /// branching order of the solver.
  std::vector<AlgorithmId> by_descending_height() const;

  /// Keeps exactly `keep`; an edge u->v exists iff some directed path
  /// u->...->v in this graph has all interior vertices outside `keep`.
  AlgorithmGraph induced_subgraph(const std::set<AlgorithmId>& keep) const;

 private:
  struct FlowCache {
    std::once_flag once;
    std::vector<ExecutionFlow> flows;
    std::map<AlgorithmId, int> heights;
    std::string error;
    Errc error_code = Errc::ConfigError;
  };

  void build_adjacency();
  void check_acyclic() const;
  void ensure_flows() const;

  std::vector<AlgorithmSpec> specs_;
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges_;
  std::size_t flow_limit_ = kDefaultFlowLimit;

  std::map<AlgorithmId, std::size_t> index_;
  std::map<AlgorithmId, std::vector<AlgorithmId>> preds_;
  std::map<AlgorithmId, std::vector<AlgorithmId>> succs_;

  // Copies of an immutable graph share the lazily built cache.
  mutable std::shared_ptr<FlowCache> cache_;
};

/// Adds the virtual source/sink and connects them to the original
/// sources/sinks. Idempotent; an empty DAG lifts to the single edge
/// source->sink.
AlgorithmGraph lift_to_semilattice(const AlgorithmGraph& dag);

}  // namespace edgealloc
