#include "edgealloc/algo_graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>

namespace edgealloc {

double AlgorithmSpec::exec_time(NodeId node, NodeClass cls) const {
  auto it = exec_by_node.find(node);
  if (it != exec_by_node.end()) return it->second;
  auto ct = exec_by_class.find(cls);
  if (ct != exec_by_class.end()) return ct->second;
  if (is_virtual(id)) return 0.0;
  fail(Errc::ConfigError, "algorithm " + std::to_string(id) +
                              " has no execution time for node " +
                              std::to_string(node));
}

bool AlgorithmSpec::allowed_on(NodeId node, NodeClass cls) const {
  if (!allowed_classes.empty() && allowed_classes.count(cls) == 0) return false;
  if (!allowed_nodes.empty() && allowed_nodes.count(node) == 0) return false;
  return true;
}

AlgorithmSpec AlgorithmSpec::virtual_spec(AlgorithmId id) {
  AlgorithmSpec s;
  s.id = id;
  s.name = (id == kVirtualSource) ? "virtual-source" : "virtual-sink";
  return s;
}

AlgorithmGraph::AlgorithmGraph() : cache_(std::make_shared<FlowCache>()) {}

AlgorithmGraph::AlgorithmGraph(
    std::vector<AlgorithmSpec> specs,
    std::vector<std::pair<AlgorithmId, AlgorithmId>> edges,
    std::size_t flow_limit)
    : specs_(std::move(specs)),
      edges_(std::move(edges)),
      flow_limit_(flow_limit),
      cache_(std::make_shared<FlowCache>()) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const AlgorithmSpec& s = specs_[i];
    if (s.id < 0) fail(Errc::ConfigError, "negative algorithm id");
    if (index_.count(s.id))
      fail(Errc::ConfigError, "duplicate algorithm id " + std::to_string(s.id));
    index_[s.id] = i;
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& [u, v] : edges_) {
    if (!has_vertex(u) || !has_vertex(v))
      fail(Errc::ConfigError, "edge endpoint not declared: " +
                                  std::to_string(u) + "->" + std::to_string(v));
    if (u == v) fail(Errc::CyclicDependency, "self-loop on " + std::to_string(u));
  }
  build_adjacency();
  check_acyclic();
}

void AlgorithmGraph::build_adjacency() {
  for (const AlgorithmSpec& s : specs_) {
    preds_[s.id];
    succs_[s.id];
  }
  for (const auto& [u, v] : edges_) {
    succs_[u].push_back(v);
    preds_[v].push_back(u);
  }
  for (auto& [id, vs] : preds_) std::sort(vs.begin(), vs.end());
  for (auto& [id, vs] : succs_) std::sort(vs.begin(), vs.end());
}

void AlgorithmGraph::check_acyclic() const {
  if (topo_order().size() != specs_.size())
    fail(Errc::CyclicDependency, "algorithm dependencies contain a cycle");
}

std::vector<AlgorithmId> AlgorithmGraph::topo_order() const {
  std::map<AlgorithmId, int> indeg;
  for (const AlgorithmSpec& s : specs_) indeg[s.id] = 0;
  for (const auto& [u, v] : edges_) ++indeg[v];
  std::priority_queue<AlgorithmId, std::vector<AlgorithmId>,
                      std::greater<AlgorithmId>>
      ready;
  for (const auto& [id, d] : indeg)
    if (d == 0) ready.push(id);
  std::vector<AlgorithmId> order;
  while (!ready.empty()) {
    AlgorithmId u = ready.top();
    ready.pop();
    order.push_back(u);
    for (AlgorithmId v : succs(u))
      if (--indeg[v] == 0) ready.push(v);
  }
  return order;
}

const AlgorithmSpec& AlgorithmGraph::spec(AlgorithmId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    fail(Errc::UnknownVertex, "unknown algorithm " + std::to_string(id));
  return specs_[it->second];
}

std::vector<AlgorithmId> AlgorithmGraph::vertices() const {
  std::vector<AlgorithmId> out;
  out.reserve(index_.size());
  for (const auto& [id, _] : index_) out.push_back(id);
  return out;
}

std::vector<AlgorithmId> AlgorithmGraph::nonvirtual_vertices() const {
  std::vector<AlgorithmId> out;
  for (const auto& [id, _] : index_)
    if (!is_virtual(id)) out.push_back(id);
  return out;
}

const std::vector<AlgorithmId>& AlgorithmGraph::preds(AlgorithmId id) const {
  auto it = preds_.find(id);
  if (it == preds_.end())
    fail(Errc::UnknownVertex, "unknown algorithm " + std::to_string(id));
  return it->second;
}

const std::vector<AlgorithmId>& AlgorithmGraph::succs(AlgorithmId id) const {
  auto it = succs_.find(id);
  if (it == succs_.end())
    fail(Errc::UnknownVertex, "unknown algorithm " + std::to_string(id));
  return it->second;
}

bool AlgorithmGraph::lifted() const {
  if (!has_vertex(kVirtualSource) || !has_vertex(kVirtualSink)) return false;
  for (const AlgorithmSpec& s : specs_) {
    if (s.id != kVirtualSource && preds(s.id).empty()) return false;
    if (s.id != kVirtualSink && succs(s.id).empty()) return false;
  }
  return true;
}

bool AlgorithmGraph::reachable(AlgorithmId u, AlgorithmId v) const {
  if (u == v) return has_vertex(u);
  std::set<AlgorithmId> seen{u};
  std::vector<AlgorithmId> stack{u};
  while (!stack.empty()) {
    AlgorithmId x = stack.back();
    stack.pop_back();
    for (AlgorithmId y : succs(x)) {
      if (y == v) return true;
      if (seen.insert(y).second) stack.push_back(y);
    }
  }
  return false;
}

void AlgorithmGraph::ensure_flows() const {
  std::call_once(cache_->once, [this] {
    if (!lifted()) {
      cache_->error = "execution flows require a lifted graph";
      return;
    }
    std::vector<AlgorithmId> path{kVirtualSource};
    std::function<bool(AlgorithmId)> dfs = [&](AlgorithmId v) -> bool {
      if (v == kVirtualSink) {
        if (cache_->flows.size() >= flow_limit_) return false;
        cache_->flows.push_back(path);
        return true;
      }
      for (AlgorithmId s : succs(v)) {
        path.push_back(s);
        const bool ok = dfs(s);
        path.pop_back();
        if (!ok) return false;
      }
      return true;
    };
    if (!dfs(kVirtualSource)) {
      cache_->flows.clear();
      cache_->error = "execution flow count exceeds the limit of " +
                      std::to_string(flow_limit_);
      cache_->error_code = Errc::TooManyFlows;
      return;
    }
    for (const ExecutionFlow& flow : cache_->flows) {
      for (std::size_t i = 0; i < flow.size(); ++i) {
        const int suffix = static_cast<int>(flow.size() - i);
        auto [it, inserted] = cache_->heights.try_emplace(flow[i], suffix);
        if (!inserted && suffix > it->second) it->second = suffix;
      }
    }
  });
  if (!cache_->error.empty()) fail(cache_->error_code, cache_->error);
}

const std::vector<ExecutionFlow>& AlgorithmGraph::execution_flows() const {
  ensure_flows();
  return cache_->flows;
}

int AlgorithmGraph::height(AlgorithmId v) const {
  ensure_flows();
  auto it = cache_->heights.find(v);
  if (it == cache_->heights.end())
    fail(Errc::UnknownVertex,
         "algorithm " + std::to_string(v) + " occurs in no execution flow");
  return it->second;
}

std::vector<AlgorithmId> AlgorithmGraph::by_descending_height() const {
  std::vector<AlgorithmId> order = nonvirtual_vertices();
  std::sort(order.begin(), order.end(), [this](AlgorithmId a, AlgorithmId b) {
    const int ha = height(a), hb = height(b);
    if (ha != hb) return ha > hb;
    return a < b;
  });
  return order;
}

AlgorithmGraph AlgorithmGraph::induced_subgraph(
    const std::set<AlgorithmId>& keep) const {
  std::vector<AlgorithmSpec> specs;
  for (const AlgorithmSpec& s : specs_)
    if (keep.count(s.id)) specs.push_back(s);
  if (specs.size() != keep.size())
    fail(Errc::UnknownVertex, "induced subgraph keeps an unknown vertex");

  // u -> v iff some directed path leaves u and reaches v without touching
  // `keep` in between.
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges;
  for (AlgorithmId u : keep) {
    std::set<AlgorithmId> seen;
    std::vector<AlgorithmId> stack{u};
    while (!stack.empty()) {
      AlgorithmId x = stack.back();
      stack.pop_back();
      for (AlgorithmId y : succs(x)) {
        if (keep.count(y)) {
          if (y != u) edges.emplace_back(u, y);
          continue;
        }
        if (seen.insert(y).second) stack.push_back(y);
      }
    }
  }
  return AlgorithmGraph(std::move(specs), std::move(edges), flow_limit_);
}

AlgorithmGraph lift_to_semilattice(const AlgorithmGraph& dag) {
  std::vector<AlgorithmSpec> specs = dag.specs();
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges = dag.edges();

  const bool has_source = dag.has_vertex(kVirtualSource);
  const bool has_sink = dag.has_vertex(kVirtualSink);
  if (!has_source) specs.push_back(AlgorithmSpec::virtual_spec(kVirtualSource));
  if (!has_sink) specs.push_back(AlgorithmSpec::virtual_spec(kVirtualSink));

  const auto nonvirtual = [](AlgorithmId v) { return !is_virtual(v); };
  bool any_nonvirtual = false;
  for (const AlgorithmSpec& s : dag.specs()) {
    if (is_virtual(s.id)) continue;
    any_nonvirtual = true;
    const auto& preds = dag.preds(s.id);
    if (std::none_of(preds.begin(), preds.end(), nonvirtual))
      edges.emplace_back(kVirtualSource, s.id);
    const auto& succs = dag.succs(s.id);
    if (std::none_of(succs.begin(), succs.end(), nonvirtual))
      edges.emplace_back(s.id, kVirtualSink);
  }
  if (!any_nonvirtual) edges.emplace_back(kVirtualSource, kVirtualSink);
  // the constructor dedupes edges, so re-lifting a lifted graph is a no-op

  return AlgorithmGraph(std::move(specs), std::move(edges), dag.flow_limit());
}

}  // namespace edgealloc
