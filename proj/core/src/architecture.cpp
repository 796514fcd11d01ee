#include "edgealloc/architecture.hpp"

#include <algorithm>
#include <limits>
#include <queue>

namespace edgealloc {

const char* node_class_name(NodeClass c) {
  switch (c) {
    case NodeClass::Edge: return "edge";
    case NodeClass::Fog: return "fog";
    case NodeClass::Cloud: return "cloud";
  }
  return "?";
}

std::optional<NodeClass> parse_node_class(const std::string& s) {
  if (s == "edge" || s == "Edge" || s == "E") return NodeClass::Edge;
  if (s == "fog" || s == "Fog" || s == "F") return NodeClass::Fog;
  if (s == "cloud" || s == "Cloud" || s == "C") return NodeClass::Cloud;
  return std::nullopt;
}

double expected_link_time(const LinkModel& l, double payload_bits) {
  return l.expected_time(payload_bits);
}

double sample_link_time(const LinkModel& l, double payload_bits,
                        SeededRng& rng) {
  return l.sample_time(payload_bits, rng);
}

Architecture::Architecture(std::vector<Node> nodes, std::vector<LinkModel> links)
    : nodes_(std::move(nodes)), links_(std::move(links)) {
  if (nodes_.empty()) fail(Errc::ConfigError, "architecture has no nodes");
  for (const Node& n : nodes_) {
    if (class_of_.count(n.id))
      fail(Errc::ConfigError, "duplicate node id " + std::to_string(n.id));
    class_of_[n.id] = n.cls;
  }
  for (std::size_t i = 0; i < links_.size(); ++i) {
    const LinkModel& l = links_[i];
    if (!has_node(l.src) || !has_node(l.dst))
      fail(Errc::ConfigError, "link endpoint not declared: " +
                                  std::to_string(l.src) + "->" +
                                  std::to_string(l.dst));
    if (l.src == l.dst)
      fail(Errc::ConfigError, "self-link on node " + std::to_string(l.src));
    if (l.base_latency_s < 0 || l.delay.sigma < 0 || l.per_bit_cost_s < 0)
      fail(Errc::ConfigError, "negative link parameter on " +
                                  std::to_string(l.src) + "->" +
                                  std::to_string(l.dst));
    if (!link_index_.emplace(std::make_pair(l.src, l.dst), i).second)
      fail(Errc::ConfigError, "duplicate link " + std::to_string(l.src) +
                                  "->" + std::to_string(l.dst));
  }

  // Connectivity of the undirected support.
  std::set<NodeId> seen{nodes_.front().id};
  std::vector<NodeId> stack{nodes_.front().id};
  std::map<NodeId, std::vector<NodeId>> und;
  for (const LinkModel& l : links_) {
    und[l.src].push_back(l.dst);
    und[l.dst].push_back(l.src);
  }
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y : und[x])
      if (seen.insert(y).second) stack.push_back(y);
  }
  if (seen.size() != nodes_.size())
    fail(Errc::Unreachable, "architecture graph is not connected");

  compute_routes();
}

NodeClass Architecture::node_class(NodeId id) const {
  auto it = class_of_.find(id);
  if (it == class_of_.end())
    fail(Errc::ConfigError, "unknown node " + std::to_string(id));
  return it->second;
}

std::vector<NodeId> Architecture::node_ids() const {
  std::vector<NodeId> out;
  for (const auto& [id, _] : class_of_) out.push_back(id);
  return out;
}

std::vector<NodeId> Architecture::edge_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, c] : class_of_)
    if (c == NodeClass::Edge) out.push_back(id);
  return out;
}

std::vector<NodeId> Architecture::fog_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, c] : class_of_)
    if (c == NodeClass::Fog) out.push_back(id);
  return out;
}

std::vector<NodeId> Architecture::cloud_nodes() const {
  std::vector<NodeId> out;
  for (const auto& [id, c] : class_of_)
    if (c == NodeClass::Cloud) out.push_back(id);
  return out;
}

const LinkModel* Architecture::link(NodeId src, NodeId dst) const {
  auto it = link_index_.find({src, dst});
  return it == link_index_.end() ? nullptr : &links_[it->second];
}

void Architecture::compute_routes() {
  // Dijkstra from each node over expected payload-0 latencies.
  std::map<NodeId, std::vector<std::size_t>> out_links;
  for (std::size_t i = 0; i < links_.size(); ++i)
    out_links[links_[i].src].push_back(i);

  for (const Node& src : nodes_) {
    std::map<NodeId, double> dist;
    std::map<NodeId, std::size_t> via;  // link used to enter the node
    for (const Node& n : nodes_)
      dist[n.id] = std::numeric_limits<double>::infinity();
    dist[src.id] = 0;
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
    pq.emplace(0.0, src.id);
    while (!pq.empty()) {
      auto [d, u] = pq.top();
      pq.pop();
      if (d > dist[u]) continue;
      for (std::size_t li : out_links[u]) {
        const LinkModel& l = links_[li];
        const double nd = d + l.expected_time(0);
        // strict improvement keeps the lowest-id predecessor, so routes
        // are deterministic
        if (nd < dist[l.dst]) {
          dist[l.dst] = nd;
          via[l.dst] = li;
          pq.emplace(nd, l.dst);
        }
      }
    }
    for (const Node& dst : nodes_) {
      if (dst.id == src.id) {
        routes_[{src.id, dst.id}] = {};
        route_costs_[{src.id, dst.id}] = 0;
        continue;
      }
      if (!std::isfinite(dist[dst.id])) continue;  // caught by connectivity
      std::vector<std::size_t> hops;
      NodeId cur = dst.id;
      while (cur != src.id) {
        const std::size_t li = via.at(cur);
        hops.push_back(li);
        cur = links_[li].src;
      }
      std::reverse(hops.begin(), hops.end());
      routes_[{src.id, dst.id}] = std::move(hops);
      route_costs_[{src.id, dst.id}] = dist[dst.id];
    }
  }
}

const std::vector<std::size_t>& Architecture::route_hops(NodeId from,
                                                         NodeId to) const {
  auto it = routes_.find({from, to});
  if (it == routes_.end())
    fail(Errc::Unreachable, "no route from " + std::to_string(from) + " to " +
                                std::to_string(to));
  return it->second;
}

std::vector<const LinkModel*> Architecture::route(NodeId from, NodeId to) const {
  if (!has_node(from) || !has_node(to))
    fail(Errc::ConfigError, "route endpoint is not a node");
  std::vector<const LinkModel*> out;
  for (std::size_t li : route_hops(from, to)) out.push_back(&links_[li]);
  return out;
}

double Architecture::route_cost(NodeId from, NodeId to) const {
  auto it = route_costs_.find({from, to});
  if (it == route_costs_.end())
    fail(Errc::Unreachable, "no route from " + std::to_string(from) + " to " +
                                std::to_string(to));
  return it->second;
}

double Architecture::expected_transmission(NodeId from, NodeId to,
                                           double payload_bits) const {
  double t = 0;
  for (std::size_t li : route_hops(from, to))
    t += links_[li].expected_time(payload_bits);
  return t;
}

double Architecture::sample_transmission(NodeId from, NodeId to,
                                         double payload_bits,
                                         SeededRng& rng) const {
  double t = 0;
  for (std::size_t li : route_hops(from, to))
    t += links_[li].sample_time(payload_bits, rng);
  return t;
}

Architecture Architecture::with_frozen_delays(SeededRng& rng) const {
  std::vector<LinkModel> frozen = links_;
  for (LinkModel& l : frozen) {
    l.base_latency_s += rng.folded_normal(l.delay.mu, l.delay.sigma);
    l.delay = {};
  }
  return Architecture(nodes_, std::move(frozen));
}

RobotPartition partition_robots(const Architecture& a) {
  RobotPartition p;
  for (NodeId e : a.edge_nodes()) {
    bool direct = false;
    for (NodeId f : a.fog_nodes())
      if (a.link(e, f) != nullptr || a.link(f, e) != nullptr) {
        direct = true;
        break;
      }
    (direct ? p.tr0 : p.tr_inf).insert(e);
  }
  return p;
}

const LinkClassParams& LinkClassTable::at(NodeClass from, NodeClass to) const {
  auto it = entries.find({from, to});
  if (it == entries.end())
    fail(Errc::ConfigError, std::string("no link parameters for ") +
                                node_class_name(from) + "->" +
                                node_class_name(to));
  return it->second;
}

}  // namespace edgealloc
