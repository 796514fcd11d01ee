#include "edgealloc/time_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

namespace edgealloc {

bool Allocation::lex_less(const Allocation& other) const {
  return std::lexicographical_compare(
      assignment.begin(), assignment.end(), other.assignment.begin(),
      other.assignment.end());
}

namespace {

void validate_allocation_impl(const AlgorithmGraph& g, const Architecture& a,
                              const Allocation& alloc, bool enforce_allowed) {
  for (const auto& [id, node] : alloc.assignment) {
    if (!g.has_vertex(id))
      fail(Errc::ConstraintViolation,
           "allocation assigns unknown algorithm " + std::to_string(id));
    if (is_virtual(id))
      fail(Errc::ConstraintViolation,
           "virtual algorithms are pinned to the initiator and cannot be "
           "assigned");
    if (!a.has_node(node))
      fail(Errc::ConstraintViolation,
           "allocation uses unknown node " + std::to_string(node));
    if (enforce_allowed && !g.spec(id).allowed_on(node, a.node_class(node)))
      fail(Errc::ConstraintViolation,
           "algorithm " + std::to_string(id) + " is not allowed on node " +
               std::to_string(node));
  }
  for (AlgorithmId id : g.nonvirtual_vertices())
    if (!alloc.assignment.count(id))
      fail(Errc::ConstraintViolation,
           "allocation misses algorithm " + std::to_string(id));
}

}  // namespace

void validate_allocation(const AlgorithmGraph& g, const Architecture& a,
                         const Allocation& alloc) {
  validate_allocation_impl(g, a, alloc, true);
}

namespace {

/// The vertex subset an evaluation runs over. For height-closed subsets
/// the restriction of the edge relation equals the induced subgraph, so
/// predecessor lists are just filtered.
struct EvalView {
  std::vector<AlgorithmId> vertices;
  std::map<AlgorithmId, std::vector<AlgorithmId>> preds;
};

EvalView full_view(const AlgorithmGraph& g) {
  EvalView v;
  v.vertices = g.vertices();
  for (AlgorithmId id : v.vertices) v.preds[id] = g.preds(id);
  return v;
}

EvalView restricted_view(const AlgorithmGraph& g,
                         const std::set<AlgorithmId>& included) {
  EvalView v;
  for (AlgorithmId id : included) {
    v.vertices.push_back(id);
    std::vector<AlgorithmId> ps;
    for (AlgorithmId p : g.preds(id))
      if (included.count(p)) ps.push_back(p);
    v.preds[id] = std::move(ps);
  }
  return v;
}

struct ViewResult {
  std::map<AlgorithmId, AlgoTimes> times;
  double final_s = 0;  // max finish over the view
};

/// List-scheduling simulation of the response-time recursion. Each node
/// serializes its algorithms in readiness order (ties by id); readiness
/// of v is the latest arrival over incoming edges, where an edge (u, v)
/// carries u's output (the initial request payload for source edges) over
/// the fixed minimum-latency route between the hosting nodes.
ViewResult evaluate_view(const AlgorithmGraph& g, const EvalView& view,
                         const Architecture& arch, const Allocation& alloc,
                         NodeId initiator, const EvalOptions& options,
                         SeededRng* rng) {
  struct JobState {
    int pending = 0;
    double ready = 0;
    double exec = 0;
    NodeId host = -1;
  };
  std::map<AlgorithmId, JobState> jobs;
  std::map<AlgorithmId, std::vector<AlgorithmId>> succs_in_view;
  for (AlgorithmId id : view.vertices) {
    JobState s;
    s.pending = static_cast<int>(view.preds.at(id).size());
    s.host = alloc.node_for(id, initiator);
    s.exec = g.spec(id).exec_time(s.host, arch.node_class(s.host));
    jobs[id] = s;
    for (AlgorithmId p : view.preds.at(id)) succs_in_view[p].push_back(id);
  }

  auto edge_cost = [&](AlgorithmId from, AlgorithmId to) -> double {
    const NodeId src = jobs.at(from).host;
    const NodeId dst = jobs.at(to).host;
    if (!options.include_output_legs && from != kVirtualSource) return 0.0;
    const double payload = (from == kVirtualSource)
                               ? g.spec(to).input_internal_bits
                               : g.spec(from).output_bits;
    if (src == dst) return 0.0;
    return options.mode == EvalMode::Expected
               ? arch.expected_transmission(src, dst, payload)
               : arch.sample_transmission(src, dst, payload, *rng);
  };

  // Event kinds order JobReady before NodeFree at equal times; both are
  // further ordered by id, which realizes the (readiness, id) tie-break.
  enum Kind { kJobReady = 0, kNodeFree = 1 };
  using Event = std::tuple<double, int, int>;
  std::priority_queue<Event, std::vector<Event>, std::greater<Event>> events;
  std::map<NodeId, std::set<std::pair<double, AlgorithmId>>> waiting;
  std::map<NodeId, bool> busy;

  ViewResult result;

  auto start_job = [&](AlgorithmId id, double at) {
    JobState& js = jobs.at(id);
    const double finish = at + js.exec;
    result.times[id] = {at, finish};
    busy[js.host] = true;
    events.emplace(finish, kNodeFree, js.host);
    for (AlgorithmId s : succs_in_view[id]) {
      JobState& succ = jobs.at(s);
      succ.ready = std::max(succ.ready, finish + edge_cost(id, s));
      if (--succ.pending == 0) events.emplace(succ.ready, kJobReady, s);
    }
  };

  for (const auto& [id, js] : jobs)
    if (js.pending == 0) events.emplace(0.0, kJobReady, id);

  while (!events.empty()) {
    auto [t, kind, payload] = events.top();
    events.pop();
    if (kind == kJobReady) {
      const AlgorithmId id = payload;
      JobState& js = jobs.at(id);
      if (!busy[js.host]) {
        start_job(id, t);
      } else {
        waiting[js.host].insert({js.ready, id});
      }
    } else {
      const NodeId node = payload;
      auto& q = waiting[node];
      if (q.empty()) {
        busy[node] = false;
      } else {
        const auto [ready, id] = *q.begin();
        q.erase(q.begin());
        busy[node] = false;
        start_job(id, std::max(ready, t));
      }
    }
  }

  for (const auto& [id, times] : result.times)
    result.final_s = std::max(result.final_s, times.finish);
  return result;
}

std::set<AlgorithmId> partial_included(const AlgorithmGraph& g,
                                       const Allocation& partial) {
  std::set<AlgorithmId> included{kVirtualSource};
  int min_height = std::numeric_limits<int>::max();
  for (const auto& [id, node] : partial.assignment) {
    if (!g.has_vertex(id) || is_virtual(id))
      fail(Errc::InvalidPrefix,
           "partial allocation names invalid algorithm " + std::to_string(id));
    (void)node;
    included.insert(id);
    min_height = std::min(min_height, g.height(id));
  }
  std::size_t nonvirtual = 0;
  for (AlgorithmId v : g.nonvirtual_vertices()) {
    ++nonvirtual;
    if (g.height(v) > min_height && !partial.assignment.count(v))
      fail(Errc::InvalidPrefix,
           "partial allocation is not height-closed: missing algorithm " +
               std::to_string(v));
  }
  if (partial.assignment.size() == nonvirtual) included.insert(kVirtualSink);
  return included;
}

double euclidean(const std::map<NodeId, double>& values) {
  double s = 0;
  for (const auto& [_, v] : values) s += v * v;
  return std::sqrt(s);
}

}  // namespace

RobotTimeReport response_time(const AlgorithmGraph& g, const Architecture& a,
                              const Allocation& alloc, NodeId initiator,
                              EvalMode mode, std::uint64_t seed) {
  return response_time(g, a, alloc, initiator, EvalOptions{mode, true}, seed);
}

RobotTimeReport response_time(const AlgorithmGraph& g, const Architecture& a,
                              const Allocation& alloc, NodeId initiator,
                              const EvalOptions& options, std::uint64_t seed) {
  if (!g.lifted())
    fail(Errc::ConfigError, "response time requires a lifted graph");
  if (!a.has_node(initiator) || a.node_class(initiator) != NodeClass::Edge)
    fail(Errc::ConfigError,
         "initiator " + std::to_string(initiator) + " is not an edge node");
  validate_allocation_impl(g, a, alloc, options.enforce_allowed_nodes);

  SeededRng rng(seed);
  ViewResult r = evaluate_view(g, full_view(g), a, alloc, initiator, options,
                               options.mode == EvalMode::Sampled ? &rng : nullptr);
  RobotTimeReport out;
  out.initiator = initiator;
  out.final_s = r.final_s;
  out.per_algorithm = std::move(r.times);
  return out;
}

TimeReport aggregate_time(const AlgorithmGraph& g, const Architecture& a,
                          const Allocation& alloc, EvalMode mode,
                          std::uint64_t seed) {
  return aggregate_time(g, a, alloc, EvalOptions{mode, true}, seed);
}

TimeReport aggregate_time(const AlgorithmGraph& g, const Architecture& a,
                          const Allocation& alloc, const EvalOptions& options,
                          std::uint64_t seed) {
  TimeReport report;
  for (NodeId e : a.edge_nodes()) {
    const std::uint64_t sub = mix_seed(seed, static_cast<std::uint64_t>(e));
    RobotTimeReport r = response_time(g, a, alloc, e, options, sub);
    report.per_robot_final[e] = r.final_s;
    report.robots.push_back(std::move(r));
  }
  report.aggregate = euclidean(report.per_robot_final);
  return report;
}

double partial_time(const AlgorithmGraph& g, const Architecture& a,
                    const Allocation& partial) {
  return partial_time(g, a, partial, EvalOptions{EvalMode::Expected, true});
}

double partial_time(const AlgorithmGraph& g, const Architecture& a,
                    const Allocation& partial, const EvalOptions& options) {
  if (!g.lifted())
    fail(Errc::ConfigError, "partial time requires a lifted graph");
  if (options.mode != EvalMode::Expected)
    fail(Errc::ConfigError, "partial time is defined for expected mode only");
  const std::set<AlgorithmId> included = partial_included(g, partial);
  const EvalView view = restricted_view(g, included);

  std::map<NodeId, double> finals;
  for (NodeId e : a.edge_nodes()) {
    ViewResult r = evaluate_view(g, view, a, partial, e, options, nullptr);
    finals[e] = r.final_s;
  }
  return euclidean(finals);
}

}  // namespace edgealloc
