#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "edgealloc/architecture.hpp"

namespace edgealloc {
namespace {

struct UndirectedPair {
  NodeId a, b;
  bool operator<(const UndirectedPair& o) const {
    return std::tie(a, b) < std::tie(o.a, o.b);
  }
};

bool pairs_connected(const std::vector<UndirectedPair>& pairs,
                     const std::vector<NodeId>& vertices) {
  if (vertices.empty()) return true;
  std::map<NodeId, std::vector<NodeId>> adj;
  for (const auto& p : pairs) {
    adj[p.a].push_back(p.b);
    adj[p.b].push_back(p.a);
  }
  std::set<NodeId> seen{vertices.front()};
  std::vector<NodeId> stack{vertices.front()};
  while (!stack.empty()) {
    NodeId x = stack.back();
    stack.pop_back();
    for (NodeId y : adj[x])
      if (seen.insert(y).second) stack.push_back(y);
  }
  return seen.size() == vertices.size();
}

LinkModel make_link(NodeId src, NodeId dst, const LinkClassParams& p) {
  LinkModel l;
  l.src = src;
  l.dst = dst;
  l.base_latency_s = p.base_latency_s;
  l.delay = p.delay;
  l.per_bit_cost_s = p.per_bit_cost_s;
  return l;
}

std::set<std::pair<NodeId, NodeId>> link_set(const Architecture& a) {
  std::set<std::pair<NodeId, NodeId>> s;
  for (const LinkModel& l : a.links()) s.insert({l.src, l.dst});
  return s;
}

}  // namespace

Architecture generate_architecture(int n_edge, SeededRng& rng,
                                   const LinkClassTable& table,
                                   int max_attempts) {
  if (n_edge < 1) fail(Errc::ConfigError, "n_edge must be >= 1");

  const NodeId cloud = 0, fog = 1;
  std::vector<Node> nodes;
  nodes.push_back({cloud, NodeClass::Cloud});
  nodes.push_back({fog, NodeClass::Fog});
  std::vector<NodeId> local{fog};  // fog + robots carry the random links
  for (int i = 0; i < n_edge; ++i) {
    nodes.push_back({2 + i, NodeClass::Edge});
    local.push_back(2 + i);
  }

  std::vector<UndirectedPair> candidates;
  for (std::size_t i = 0; i < local.size(); ++i)
    for (std::size_t j = i + 1; j < local.size(); ++j)
      candidates.push_back({local[i], local[j]});

  const int m = static_cast<int>(local.size());
  const int lo = m - 1;
  const int hi = m * (m - 1) / 2;
  auto class_of = [&](NodeId id) {
    return id == cloud ? NodeClass::Cloud
           : id == fog ? NodeClass::Fog
                       : NodeClass::Edge;
  };

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const int want = static_cast<int>(rng.uniform_int(lo, hi));
    std::vector<UndirectedPair> pool = candidates;
    // partial Fisher-Yates: the first `want` entries are a uniform sample
    for (int i = 0; i < want; ++i) {
      const auto j = rng.uniform_int(i, static_cast<int>(pool.size()) - 1);
      std::swap(pool[i], pool[j]);
    }
    pool.resize(want);
    if (!pairs_connected(pool, local)) continue;

    std::vector<LinkModel> links;
    auto add_both = [&](NodeId a, NodeId b) {
      links.push_back(make_link(a, b, table.at(class_of(a), class_of(b))));
      links.push_back(make_link(b, a, table.at(class_of(b), class_of(a))));
    };
    add_both(cloud, fog);
    std::sort(pool.begin(), pool.end());
    for (const auto& p : pool) add_both(p.a, p.b);
    return Architecture(std::move(nodes), std::move(links));
  }
  fail(Errc::GenerationExhausted,
       "no connected architecture found in " + std::to_string(max_attempts) +
           " attempts");
}

bool degree_sequences_equal(const Architecture& a, const Architecture& b) {
  auto degrees = [](const Architecture& x) {
    std::map<NodeId, int> out, in;
    for (NodeId id : x.node_ids()) out[id] = in[id] = 0;
    for (const LinkModel& l : x.links()) {
      ++out[l.src];
      ++in[l.dst];
    }
    std::vector<int> outs, ins;
    for (const auto& [_, d] : out) outs.push_back(d);
    for (const auto& [_, d] : in) ins.push_back(d);
    std::sort(outs.begin(), outs.end());
    std::sort(ins.begin(), ins.end());
    return std::make_pair(outs, ins);
  };
  return degrees(a) == degrees(b);
}

bool architectures_isomorphic(const Architecture& a, const Architecture& b) {
  std::map<NodeClass, std::vector<NodeId>> ca, cb;
  for (const Node& n : a.nodes()) ca[n.cls].push_back(n.id);
  for (const Node& n : b.nodes()) cb[n.cls].push_back(n.id);
  if (ca.size() != cb.size()) return false;
  for (const auto& [cls, ids] : ca) {
    auto it = cb.find(cls);
    if (it == cb.end() || it->second.size() != ids.size()) return false;
  }
  if (a.links().size() != b.links().size()) return false;

  const auto ea = link_set(a);
  const auto eb = link_set(b);
  std::map<NodeId, std::pair<int, int>> deg_a, deg_b;  // (out, in)
  for (NodeId id : a.node_ids()) deg_a[id] = {0, 0};
  for (NodeId id : b.node_ids()) deg_b[id] = {0, 0};
  for (const auto& [s, d] : ea) {
    ++deg_a[s].first;
    ++deg_a[d].second;
  }
  for (const auto& [s, d] : eb) {
    ++deg_b[s].first;
    ++deg_b[d].second;
  }

  // Backtracking over class-preserving bijections; smallest classes are
  // pinned first.
  std::vector<std::pair<NodeId, NodeClass>> order;
  {
    std::vector<std::pair<NodeClass, std::vector<NodeId>>> grp(ca.begin(),
                                                               ca.end());
    std::sort(grp.begin(), grp.end(), [](const auto& l, const auto& r) {
      return l.second.size() < r.second.size();
    });
    for (const auto& [cls, ids] : grp)
      for (NodeId id : ids) order.emplace_back(id, cls);
  }

  std::map<NodeId, NodeId> mapping;
  std::set<NodeId> used;
  std::function<bool(std::size_t)> rec = [&](std::size_t idx) -> bool {
    if (idx == order.size()) return true;
    const auto [u, cls] = order[idx];
    for (NodeId v : cb.at(cls)) {
      if (used.count(v)) continue;
      if (deg_a.at(u) != deg_b.at(v)) continue;
      bool ok = true;
      for (const auto& [x, y] : mapping) {
        if (ea.count({u, x}) != eb.count({v, y}) ||
            ea.count({x, u}) != eb.count({y, v})) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      mapping[u] = v;
      used.insert(v);
      if (rec(idx + 1)) return true;
      mapping.erase(u);
      used.erase(v);
    }
    return false;
  };
  return rec(0);
}

std::vector<Architecture> nonisomorphic_batch(int n_edge, SeededRng& rng,
                                              const LinkClassTable& table,
                                              int max_count) {
  if (max_count < 0) max_count = n_edge + 5;
  std::vector<Architecture> accepted;
  std::vector<std::set<std::pair<NodeId, NodeId>>> accepted_links;
  int consecutive_failures = 0;
  // hard cap so degenerate cases (n_edge = 1 has a single valid
  // architecture) terminate with what exists
  const int total_attempts = std::max(50, 20 * max_count);
  for (int attempt = 0;
       attempt < total_attempts && static_cast<int>(accepted.size()) < max_count;
       ++attempt) {
    Architecture cand = generate_architecture(n_edge, rng, table);
    const auto cand_links = link_set(cand);
    bool duplicate = false;
    bool isomorphic = false;
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      if (accepted_links[i] == cand_links) {
        duplicate = true;
        break;
      }
      if (!degree_sequences_equal(accepted[i], cand)) continue;
      if (architectures_isomorphic(accepted[i], cand)) {
        isomorphic = true;
        break;
      }
    }
    if (duplicate) {
      // identical adjacency never adds a new experiment
      ++consecutive_failures;
      continue;
    }
    if (isomorphic && consecutive_failures < 5) {
      ++consecutive_failures;
      continue;
    }
    accepted.push_back(std::move(cand));
    accepted_links.push_back(cand_links);
    consecutive_failures = 0;
  }
  return accepted;
}

}  // namespace edgealloc
