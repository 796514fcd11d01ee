#include "edgealloc/memory_model.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace edgealloc {

double MemoryProfile::to_total() const {
  double s = 0;
  for (const auto& [_, m] : per_algorithm) s += m.output_bytes;
  return s;
}

double MemoryProfile::tm(NodeId robot) const {
  auto it = tm_overhead.find(robot);
  return it == tm_overhead.end() ? 0.0 : it->second;
}

double MemoryProfile::placement_bytes(AlgorithmId id) const {
  auto it = per_algorithm.find(id);
  if (it == per_algorithm.end()) return 0.0;
  return it->second.processing_bytes + it->second.input_external_bytes +
         it->second.input_internal_bytes;
}

MemoryProfile MemoryProfile::from_graph(const AlgorithmGraph& g) {
  MemoryProfile p;
  for (const AlgorithmSpec& s : g.specs()) {
    if (is_virtual(s.id)) continue;
    AlgoMem m;
    m.processing_bytes = s.processing_bytes;
    m.input_external_bytes = s.input_external_bits / 8.0;
    m.input_internal_bytes = s.input_internal_bits / 8.0;
    m.output_bytes = s.output_bits / 8.0;
    p.per_algorithm[s.id] = m;
  }
  return p;
}

namespace {

double mem_of(const MemoryProfile& p, AlgorithmId id,
              double MemoryProfile::AlgoMem::*field) {
  auto it = p.per_algorithm.find(id);
  return it == p.per_algorithm.end() ? 0.0 : it->second.*field;
}

/// Maximum-weight set of pairwise-incomparable vertices, by branching on
/// include/exclude with a remaining-weight bound. Sizes here are the
/// handful of algorithms co-located on one robot.
double max_weight_antichain(const std::vector<AlgorithmId>& vs,
                            const std::vector<std::vector<bool>>& comparable,
                            const std::vector<double>& w) {
  const std::size_t n = vs.size();
  std::vector<double> suffix(n + 1, 0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + w[i];

  double best = 0;
  std::vector<char> excluded(n, 0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t i,
                                                     double acc) {
    best = std::max(best, acc);
    if (i == n || acc + suffix[i] <= best) return;
    if (!excluded[i]) {
      // include vs[i]; knock out everything comparable with it
      std::vector<std::size_t> knocked;
      for (std::size_t j = i + 1; j < n; ++j)
        if (!excluded[j] && comparable[i][j]) {
          excluded[j] = 1;
          knocked.push_back(j);
        }
      rec(i + 1, acc + w[i]);
      for (std::size_t j : knocked) excluded[j] = 0;
    }
    rec(i + 1, acc);
  };
  rec(0, 0);
  return best;
}

}  // namespace

double memory_algebra(const AlgorithmGraph& g_induced,
                      const MemoryProfile& profile) {
  std::vector<AlgorithmId> vs = g_induced.nonvirtual_vertices();
  const std::size_t n = vs.size();
  std::vector<std::vector<bool>> comparable(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j)
        comparable[i][j] = g_induced.reachable(vs[i], vs[j]) ||
                           g_induced.reachable(vs[j], vs[i]);
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i)
    w[i] = mem_of(profile, vs[i], &MemoryProfile::AlgoMem::processing_bytes);

  double total = max_weight_antichain(vs, comparable, w);
  for (AlgorithmId v : vs)
    total += mem_of(profile, v, &MemoryProfile::AlgoMem::input_external_bytes);
  return total;
}

namespace {

/// External-input bytes relayed through tr0 robots for algorithms hosted
/// on tr_inf robots: each tr0 robot interior to the route from the
/// nearest fog adds the payload to its own usage.
std::map<NodeId, double> relay_surcharges(const MemoryProfile& profile,
                                          const Architecture& a,
                                          const Allocation& alloc,
                                          const RobotPartition& partition) {
  std::map<NodeId, double> extra;
  const std::vector<NodeId> fogs = a.fog_nodes();
  for (const auto& [id, host] : alloc.assignment) {
    if (!partition.tr_inf.count(host)) continue;
    const double ext =
        mem_of(profile, id, &MemoryProfile::AlgoMem::input_external_bytes);
    if (ext <= 0) continue;
    NodeId best_fog = -1;
    double best_cost = std::numeric_limits<double>::infinity();
    for (NodeId f : fogs) {
      const double c = a.route_cost(host, f);
      if (c < best_cost) {
        best_cost = c;
        best_fog = f;
      }
    }
    if (best_fog < 0) continue;
    const auto hops = a.route(host, best_fog);
    for (std::size_t h = 0; h + 1 < hops.size(); ++h) {
      const NodeId via = hops[h]->dst;
      if (partition.tr0.count(via)) extra[via] += ext;
    }
  }
  return extra;
}

double robot_memory_with(const MemoryProfile& profile, const AlgorithmGraph& g,
                         const Allocation& alloc, NodeId robot,
                         CombineMode combine,
                         const std::map<NodeId, double>& surcharges) {
  double mu = profile.to_total() + profile.tm(robot);
  std::set<AlgorithmId> assigned;
  for (const auto& [id, host] : alloc.assignment)
    if (host == robot) assigned.insert(id);
  if (combine == CombineMode::SimpleSum) {
    for (AlgorithmId id : assigned) mu += profile.placement_bytes(id);
  } else if (!assigned.empty()) {
    mu += memory_algebra(g.induced_subgraph(assigned), profile);
  }
  auto it = surcharges.find(robot);
  if (it != surcharges.end()) mu += it->second;
  return mu;
}

}  // namespace

double robot_memory(const MemoryProfile& profile, const AlgorithmGraph& g,
                    const Architecture& a, const Allocation& alloc,
                    NodeId robot, CombineMode combine) {
  const RobotPartition partition = partition_robots(a);
  return robot_memory_with(profile, g, alloc, robot, combine,
                           relay_surcharges(profile, a, alloc, partition));
}

MemoryReport memory_report(const MemoryProfile& profile,
                           const AlgorithmGraph& g, const Architecture& a,
                           const Allocation& alloc, CombineMode combine) {
  MemoryReport r;
  const RobotPartition partition = partition_robots(a);
  const auto surcharges = relay_surcharges(profile, a, alloc, partition);
  const std::vector<NodeId> robots = a.edge_nodes();
  for (NodeId e : robots) {
    const double mu =
        robot_memory_with(profile, g, alloc, e, combine, surcharges);
    r.per_robot[e] = mu;
    r.max_usage = std::max(r.max_usage, mu);
    r.total += mu;
  }
  const double mean = robots.empty() ? 0.0 : r.total / robots.size();
  for (const auto& [_, mu] : r.per_robot)
    r.variance_term += (mu - mean) * (mu - mean);
  return r;
}

}  // namespace edgealloc
