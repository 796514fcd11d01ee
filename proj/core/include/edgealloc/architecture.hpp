#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "edgealloc/errors.hpp"
#include "edgealloc/rng.hpp"

namespace edgealloc {

using NodeId = int;

enum class NodeClass { Edge, Fog, Cloud };

const char* node_class_name(NodeClass c);
std::optional<NodeClass> parse_node_class(const std::string& s);

struct Node {
  NodeId id = -1;
  NodeClass cls = NodeClass::Edge;
};

struct FoldedNormalParams {
  double mu = 0;
  double sigma = 0;
  double mean() const { return folded_normal_mean(mu, sigma); }
};

/// Directed point-to-point link. Transmitting `payload` bits takes
/// base_latency + |N(mu, sigma)| + per_bit_cost * payload seconds.
struct LinkModel {
  NodeId src = -1;
  NodeId dst = -1;
  double base_latency_s = 0;
  FoldedNormalParams delay;
  double per_bit_cost_s = 0;

  double expected_time(double payload_bits) const {
    return base_latency_s + delay.mean() + per_bit_cost_s * payload_bits;
  }
  double sample_time(double payload_bits, SeededRng& rng) const {
    return base_latency_s + rng.folded_normal(delay.mu, delay.sigma) +
           per_bit_cost_s * payload_bits;
  }
};

double expected_link_time(const LinkModel& l, double payload_bits);
double sample_link_time(const LinkModel& l, double payload_bits,
                        SeededRng& rng);

/// Edge nodes split by fog reachability: tr0 robots have a direct link
/// to some fog node, tr_inf robots reach fog only through other robots.
struct RobotPartition {
  std::set<NodeId> tr0;
  std::set<NodeId> tr_inf;
};

/// Immutable node/link graph of the cloud system. Construction validates
/// that link endpoints exist and that the undirected graph is connected,
/// then precomputes minimum-expected-latency routes for all node pairs.
class Architecture {
 public:
  Architecture() = default;
  Architecture(std::vector<Node> nodes, std::vector<LinkModel> links);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<LinkModel>& links() const { return links_; }
  bool has_node(NodeId id) const { return class_of_.count(id) != 0; }
  NodeClass node_class(NodeId id) const;
  std::vector<NodeId> node_ids() const;
  std::vector<NodeId> edge_nodes() const;
  std::vector<NodeId> fog_nodes() const;
  std::vector<NodeId> cloud_nodes() const;

  const LinkModel* link(NodeId src, NodeId dst) const;

  /// Minimum-expected-latency path (payload 0), empty for from == to.
  std::vector<const LinkModel*> route(NodeId from, NodeId to) const;
  /// Expected payload-0 cost of route(from, to).
  double route_cost(NodeId from, NodeId to) const;

  double expected_transmission(NodeId from, NodeId to,
                               double payload_bits) const;
  double sample_transmission(NodeId from, NodeId to, double payload_bits,
                             SeededRng& rng) const;

  /// Copy with every link's random delay replaced by one frozen draw
  /// (folded into base latency); used by the sweep's repetition protocol.
  Architecture with_frozen_delays(SeededRng& rng) const;

 private:
  void compute_routes();
  const std::vector<std::size_t>& route_hops(NodeId from, NodeId to) const;

  std::vector<Node> nodes_;
  std::vector<LinkModel> links_;
  std::map<NodeId, NodeClass> class_of_;
  std::map<std::pair<NodeId, NodeId>, std::size_t> link_index_;
  // Routes stored as link indices so default copy/move stay valid.
  std::map<std::pair<NodeId, NodeId>, std::vector<std::size_t>> routes_;
  std::map<std::pair<NodeId, NodeId>, double> route_costs_;
};

RobotPartition partition_robots(const Architecture& a);

/// Per-class-pair link parameters used to instantiate the links of
/// generated architectures.
struct LinkClassParams {
  double base_latency_s = 0;
  FoldedNormalParams delay;
  double per_bit_cost_s = 0;
};

struct LinkClassTable {
  std::map<std::pair<NodeClass, NodeClass>, LinkClassParams> entries;

  const LinkClassParams& at(NodeClass from, NodeClass to) const;
  bool has(NodeClass from, NodeClass to) const {
    return entries.count({from, to}) != 0;
  }
};

inline constexpr int kDefaultGenerationAttempts = 10000;

/// Random connected architecture: one cloud, one fog, n_edge robots.
/// The cloud connects to the fog; the link count among {fog, robots} is
/// drawn uniformly from [m-1, m(m-1)/2] for m = n_edge+1 vertices and
/// resampled until connected.
Architecture generate_architecture(int n_edge, SeededRng& rng,
                                   const LinkClassTable& table,
                                   int max_attempts = kDefaultGenerationAttempts);

/// Class-preserving isomorphism test (robots may only map to robots,
/// fog to fog, cloud to cloud).
bool architectures_isomorphic(const Architecture& a, const Architecture& b);

/// Fast necessary condition: equal sorted in/out-degree lists.
bool degree_sequences_equal(const Architecture& a, const Architecture& b);

/// Up to max_count (default n_edge+5) pairwise non-isomorphic random
/// architectures; after 5 consecutive isomorphic candidates the next one
/// is accepted regardless.
std::vector<Architecture> nonisomorphic_batch(int n_edge, SeededRng& rng,
                                              const LinkClassTable& table,
                                              int max_count = -1);

}  // namespace edgealloc
