#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/memory_model.hpp"
#include "edgealloc/rng.hpp"
#include "edgealloc/time_model.hpp"

namespace testsupport {

using namespace edgealloc;

// ---------------------------------------------------------------------
// builders

inline AlgorithmSpec simple_algo(AlgorithmId id, double exec_all,
                                 double out_bits = 0, double in_bits = 0) {
  AlgorithmSpec s;
  s.id = id;
  s.exec_by_class[NodeClass::Edge] = exec_all;
  s.exec_by_class[NodeClass::Fog] = exec_all;
  s.exec_by_class[NodeClass::Cloud] = exec_all;
  s.output_bits = out_bits;
  s.input_internal_bits = in_bits;
  return s;
}

/// The seven-algorithm pipeline shape: A1->A2->{A3,A4}, A4->A5,
/// {A3,A5}->A6->A7, with ids 2..8.
inline AlgorithmGraph pipeline_shape(double exec_all = 1.0) {
  std::vector<AlgorithmSpec> specs;
  for (AlgorithmId id = 2; id <= 8; ++id)
    specs.push_back(simple_algo(id, exec_all));
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges = {
      {2, 3}, {3, 4}, {3, 5}, {5, 6}, {4, 7}, {6, 7}, {7, 8}};
  return AlgorithmGraph(std::move(specs), std::move(edges));
}

inline LinkModel fixed_link(NodeId src, NodeId dst, double base,
                            double mu = 0, double sigma = 0,
                            double per_bit = 0) {
  LinkModel l;
  l.src = src;
  l.dst = dst;
  l.base_latency_s = base;
  l.delay = {mu, sigma};
  l.per_bit_cost_s = per_bit;
  return l;
}

/// cloud(0) -- fog(1) -- edge(2), all links with one flat latency.
inline Architecture chain_efc(double base = 0) {
  std::vector<Node> nodes = {
      {0, NodeClass::Cloud}, {1, NodeClass::Fog}, {2, NodeClass::Edge}};
  std::vector<LinkModel> links = {
      fixed_link(0, 1, base), fixed_link(1, 0, base),
      fixed_link(1, 2, base), fixed_link(2, 1, base)};
  return Architecture(std::move(nodes), std::move(links));
}

/// cloud(0) -- fog(1) -- {edge 2..n+1} star, flat latency.
inline Architecture star_arch(int n_edge, double base = 0) {
  std::vector<Node> nodes = {{0, NodeClass::Cloud}, {1, NodeClass::Fog}};
  std::vector<LinkModel> links = {fixed_link(0, 1, base),
                                  fixed_link(1, 0, base)};
  for (int i = 0; i < n_edge; ++i) {
    const NodeId e = 2 + i;
    nodes.push_back({e, NodeClass::Edge});
    links.push_back(fixed_link(1, e, base));
    links.push_back(fixed_link(e, 1, base));
  }
  return Architecture(std::move(nodes), std::move(links));
}

/// cloud(0) -- fog(1) -- edge(2) -- edge(3) -- ... chain, flat latency.
inline Architecture chain_arch(int n_edge, double base = 0) {
  std::vector<Node> nodes = {{0, NodeClass::Cloud}, {1, NodeClass::Fog}};
  std::vector<LinkModel> links = {fixed_link(0, 1, base),
                                  fixed_link(1, 0, base)};
  NodeId prev = 1;
  for (int i = 0; i < n_edge; ++i) {
    const NodeId e = 2 + i;
    nodes.push_back({e, NodeClass::Edge});
    links.push_back(fixed_link(prev, e, base));
    links.push_back(fixed_link(e, prev, base));
    prev = e;
  }
  return Architecture(std::move(nodes), std::move(links));
}

inline Allocation all_on(const AlgorithmGraph& g, NodeId node) {
  Allocation a;
  for (AlgorithmId id : g.nonvirtual_vertices()) a.assignment[id] = node;
  return a;
}

// ---------------------------------------------------------------------
// independent oracles

/// Longest path by total execution time through the lifted DAG for one
/// node class (critical path with zero communication).
inline double critical_path_oracle(const AlgorithmGraph& g,
                                   const Architecture& a,
                                   const Allocation& alloc) {
  std::map<AlgorithmId, double> dist;
  for (AlgorithmId v : g.topo_order()) {
    double best = 0;
    for (AlgorithmId p : g.preds(v)) best = std::max(best, dist.at(p));
    double exec = 0;
    if (!is_virtual(v)) {
      const NodeId host = alloc.assignment.at(v);
      exec = g.spec(v).exec_time(host, a.node_class(host));
    }
    dist[v] = best + exec;
  }
  double m = 0;
  for (const auto& [_, d] : dist) m = std::max(m, d);
  return m;
}

/// Cheapest simple path between two nodes by exhaustive enumeration over
/// expected payload-0 link times.
inline double brute_force_route_cost(const Architecture& a, NodeId from,
                                     NodeId to) {
  if (from == to) return 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<NodeId> path{from};
  std::set<NodeId> used{from};
  std::function<void(NodeId, double)> dfs = [&](NodeId u, double cost) {
    if (cost >= best) return;
    if (u == to) {
      best = cost;
      return;
    }
    for (NodeId v : a.node_ids()) {
      if (used.count(v)) continue;
      const LinkModel* l = a.link(u, v);
      if (!l) continue;
      used.insert(v);
      dfs(v, cost + l->expected_time(0));
      used.erase(v);
    }
  };
  dfs(from, 0);
  return best;
}

/// All bin-load multisets reachable by exhaustively assigning values to
/// bins; returns the minimal (sum of squares, max) pair.
inline std::pair<double, double> brute_force_balance(
    const std::vector<double>& values, int bins,
    const std::vector<double>& initial) {
  double best_sq = std::numeric_limits<double>::infinity();
  double best_max = std::numeric_limits<double>::infinity();
  std::vector<double> loads =
      initial.empty() ? std::vector<double>(bins, 0.0) : initial;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == values.size()) {
      double sq = 0, mx = 0;
      for (double l : loads) {
        sq += l * l;
        mx = std::max(mx, l);
      }
      if (sq < best_sq - 1e-12 ||
          (std::abs(sq - best_sq) <= 1e-12 && mx < best_max)) {
        best_sq = sq;
        best_max = mx;
      }
      return;
    }
    for (int b = 0; b < bins; ++b) {
      loads[b] += values[i];
      rec(i + 1);
      loads[b] -= values[i];
    }
  };
  rec(0);
  return {best_sq, best_max};
}

/// Max-weight antichain by subset enumeration (n <= 20).
inline double brute_force_antichain(const AlgorithmGraph& g,
                                    const std::map<AlgorithmId, double>& w) {
  const std::vector<AlgorithmId> vs = g.nonvirtual_vertices();
  const std::size_t n = vs.size();
  double best = 0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    double total = 0;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      total += w.count(vs[i]) ? w.at(vs[i]) : 0.0;
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if (!(mask >> j & 1)) continue;
        if (g.reachable(vs[i], vs[j]) || g.reachable(vs[j], vs[i])) ok = false;
      }
    }
    if (ok) best = std::max(best, total);
  }
  return best;
}

/// Every source-to-sink path by a bespoke breadth-first expansion,
/// independent of the production DFS.
inline std::set<std::vector<AlgorithmId>> bfs_flow_oracle(
    const AlgorithmGraph& g) {
  std::set<std::vector<AlgorithmId>> done;
  std::vector<std::vector<AlgorithmId>> frontier{{kVirtualSource}};
  while (!frontier.empty()) {
    std::vector<std::vector<AlgorithmId>> next;
    for (const auto& path : frontier) {
      if (path.back() == kVirtualSink) {
        done.insert(path);
        continue;
      }
      for (AlgorithmId s : g.succs(path.back())) {
        auto p = path;
        p.push_back(s);
        next.push_back(std::move(p));
      }
    }
    frontier = std::move(next);
  }
  return done;
}

}  // namespace testsupport
