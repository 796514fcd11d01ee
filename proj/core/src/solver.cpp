#include "edgealloc/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <limits>

namespace edgealloc {
namespace {

constexpr double kBoundSlack = 1e-12;

NodeId baseline_node(const Architecture& a, NodeClass cls) {
  NodeId best = -1;
  for (const Node& n : a.nodes())
    if (n.cls == cls && (best < 0 || n.id < best)) best = n.id;
  if (best < 0)
    fail(Errc::ConfigError, std::string("architecture has no ") +
                                node_class_name(cls) + " node for the "
                                "normalizing allocation");
  return best;
}

Allocation all_on_node(const AlgorithmGraph& g, NodeId node) {
  Allocation alloc;
  for (AlgorithmId id : g.nonvirtual_vertices()) alloc.assignment[id] = node;
  return alloc;
}

struct SearchContext {
  const AlgorithmGraph& g;
  const Architecture& a;
  const MemoryProfile& profile;
  const ObjectiveConfig& cfg;
  EvalOptions eval;
  JointObjective objective;
  std::vector<AlgorithmId> order;                 // descending height
  std::vector<std::vector<NodeId>> candidates;    // per order position
};

double weighted_distance(const ObjectiveConfig& cfg,
                         const JointObjective& obj, double time_aggregate,
                         double max_memory) {
  double s = 0;
  if (cfg.time_weight > 0) {
    const double r = time_aggregate / obj.time_norm;
    s += cfg.time_weight * r * r;
  }
  if (cfg.mem_weight > 0) {
    const double r = max_memory / obj.mem_norm;
    s += cfg.mem_weight * r * r;
  }
  return std::sqrt(s);
}

double full_distance(const SearchContext& ctx, const Allocation& alloc,
                     TimeReport* time_out = nullptr,
                     MemoryReport* mem_out = nullptr) {
  TimeReport t = aggregate_time(ctx.g, ctx.a, alloc, ctx.eval);
  MemoryReport m =
      memory_report(ctx.profile, ctx.g, ctx.a, alloc, ctx.cfg.combine);
  const double d =
      weighted_distance(ctx.cfg, ctx.objective, t.aggregate, m.max_usage);
  if (time_out) *time_out = std::move(t);
  if (mem_out) *mem_out = std::move(m);
  return d;
}

double partial_distance(const SearchContext& ctx, const Allocation& partial) {
  const double t = partial_time(ctx.g, ctx.a, partial, ctx.eval);
  const double m =
      memory_report(ctx.profile, ctx.g, ctx.a, partial, ctx.cfg.combine)
          .max_usage;
  return weighted_distance(ctx.cfg, ctx.objective, t, m);
}

struct SearchState {
  double incumbent = std::numeric_limits<double>::infinity();
  Allocation best;
  bool has_best = false;
  std::uint64_t nodes_explored = 0;
  std::uint64_t pruned = 0;
  std::vector<double> incumbent_trace;
  std::vector<std::pair<double, Allocation>> ties;
};

void search(const SearchContext& ctx, SearchState& st, Allocation& partial,
            std::size_t depth) {
  if (depth == ctx.order.size()) {
    const double d = full_distance(ctx, partial);
    if (ctx.cfg.collect_ties && d <= st.incumbent + ctx.cfg.tie_epsilon)
      st.ties.emplace_back(d, partial);
    const bool better =
        d < st.incumbent - kBoundSlack ||
        (std::abs(d - st.incumbent) <= kBoundSlack &&
         (!st.has_best || partial.lex_less(st.best)));
    if (better) {
      if (d < st.incumbent) st.incumbent = d;
      st.best = partial;
      st.has_best = true;
      st.incumbent_trace.push_back(st.incumbent);
    }
    return;
  }
  const AlgorithmId algo = ctx.order[depth];
  for (NodeId node : ctx.candidates[depth]) {
    partial.assignment[algo] = node;
    ++st.nodes_explored;
    bool pruned = false;
    if (ctx.cfg.pruning) {
      const double bound = partial_distance(ctx, partial);
      const double slack =
          ctx.cfg.collect_ties ? ctx.cfg.tie_epsilon : kBoundSlack;
      if (bound > st.incumbent + slack) {
        ++st.pruned;
        pruned = true;
      }
    }
    if (!pruned) search(ctx, st, partial, depth + 1);
    partial.assignment.erase(algo);
  }
}

SolveResult run_search(const SearchContext& ctx, double anchor_distance,
                       const Allocation* anchor_alloc) {
  const auto t0 = std::chrono::steady_clock::now();
  SolveResult result;
  result.objective = ctx.objective;

  SearchState st;
  st.incumbent = anchor_distance;
  st.incumbent_trace.push_back(anchor_distance);
  if (anchor_alloc) {
    st.best = *anchor_alloc;
    st.has_best = true;
  }

  const int workers =
      std::max(1, std::min<int>(ctx.cfg.workers,
                                static_cast<int>(ctx.candidates.empty()
                                                     ? 1
                                                     : ctx.candidates[0].size())));
  if (workers <= 1 || ctx.order.empty()) {
    Allocation partial;
    search(ctx, st, partial, 0);
  } else {
    // Root children explored concurrently. Each worker owns an
    // independent incumbent so exploration counts stay deterministic;
    // results are merged with the canonical tie-break.
    ctx.g.execution_flows();  // prime the shared cache before forking
    std::vector<std::vector<NodeId>> chunks(workers);
    for (std::size_t i = 0; i < ctx.candidates[0].size(); ++i)
      chunks[i % workers].push_back(ctx.candidates[0][i]);
    std::vector<std::future<SearchState>> futures;
    for (int w = 0; w < workers; ++w) {
      futures.push_back(std::async(std::launch::async, [&, w] {
        SearchContext local = ctx;
        local.candidates[0] = chunks[w];
        SearchState ls;
        ls.incumbent = anchor_distance;
        if (anchor_alloc) {
          ls.best = *anchor_alloc;
          ls.has_best = true;
        }
        Allocation partial;
        search(local, ls, partial, 0);
        return ls;
      }));
    }
    SearchState merged;
    merged.incumbent = anchor_distance;
    if (anchor_alloc) {
      merged.best = *anchor_alloc;
      merged.has_best = true;
    }
    for (auto& f : futures) {
      SearchState ls = f.get();
      merged.nodes_explored += ls.nodes_explored;
      merged.pruned += ls.pruned;
      for (auto& t : ls.ties) merged.ties.push_back(std::move(t));
      const bool better =
          ls.incumbent < merged.incumbent - kBoundSlack ||
          (ls.has_best && std::abs(ls.incumbent - merged.incumbent) <= kBoundSlack &&
           (!merged.has_best || ls.best.lex_less(merged.best)));
      if (better && ls.has_best) {
        merged.incumbent = std::min(merged.incumbent, ls.incumbent);
        merged.best = ls.best;
        merged.has_best = true;
      }
    }
    merged.incumbent_trace = {anchor_distance, merged.incumbent};
    st = std::move(merged);
  }

  if (!st.has_best)
    fail(Errc::Infeasible, "no feasible allocation found");

  result.best = st.best;
  result.nodes_explored = st.nodes_explored;
  result.pruned = st.pruned;
  result.incumbent_trace = std::move(st.incumbent_trace);

  TimeReport t;
  MemoryReport m;
  result.distance = full_distance(ctx, result.best, &t, &m);
  result.per_robot_times = std::move(t.per_robot_final);
  result.memory = std::move(m);

  if (ctx.cfg.collect_ties) {
    std::sort(st.ties.begin(), st.ties.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return a.second.lex_less(b.second);
              });
    for (const auto& [d, alloc] : st.ties) {
      if (d <= result.distance + ctx.cfg.tie_epsilon)
        result.ties.push_back(alloc);
    }
  }

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

std::vector<std::vector<NodeId>> candidate_nodes(
    const AlgorithmGraph& g, const Architecture& a,
    const std::vector<AlgorithmId>& order) {
  std::vector<std::vector<NodeId>> out;
  for (AlgorithmId id : order) {
    std::vector<NodeId> nodes;
    for (NodeId n : a.node_ids())
      if (g.spec(id).allowed_on(n, a.node_class(n))) nodes.push_back(n);
    if (nodes.empty())
      fail(Errc::Infeasible, "algorithm " + std::to_string(id) +
                                 " has no allowed node in this architecture");
    out.push_back(std::move(nodes));
  }
  return out;
}

AlgorithmGraph ensure_lifted(const AlgorithmGraph& g) {
  return g.lifted() ? g : lift_to_semilattice(g);
}

}  // namespace

JointObjective make_objective(const AlgorithmGraph& g, const Architecture& a,
                              const MemoryProfile& profile,
                              const ObjectiveConfig& cfg) {
  const AlgorithmGraph lifted = ensure_lifted(g);
  const NodeId anchor = baseline_node(a, cfg.baseline_node_class);
  const Allocation base = all_on_node(lifted, anchor);
  EvalOptions eval;
  eval.enforce_allowed_nodes = false;
  JointObjective obj;
  obj.baseline_node_class = cfg.baseline_node_class;
  obj.time_norm = aggregate_time(lifted, a, base, eval).aggregate;
  obj.mem_norm =
      memory_report(profile, lifted, a, base, cfg.combine).max_usage;
  if (cfg.time_weight > 0 && obj.time_norm <= 0)
    fail(Errc::ConfigError,
         "time normalizer is zero; the reference allocation finishes "
         "instantly");
  if (cfg.mem_weight > 0 && obj.mem_norm <= 0)
    fail(Errc::ConfigError,
         "memory normalizer is zero; no robot stores any output");
  return obj;
}

double joint_distance(const ObjectiveConfig& cfg, const JointObjective& obj,
                      const std::map<NodeId, double>& per_robot_times,
                      double max_memory) {
  double sq = 0;
  for (const auto& [_, t] : per_robot_times) sq += t * t;
  return weighted_distance(cfg, obj, std::sqrt(sq), max_memory);
}

SolveResult solve(const AlgorithmGraph& g, const Architecture& a,
                  const MemoryProfile& profile, const ObjectiveConfig& cfg,
                  std::uint64_t /*seed*/) {
  const AlgorithmGraph lifted = ensure_lifted(g);
  SearchContext ctx{lifted, a, profile, cfg, EvalOptions{},
                    make_objective(lifted, a, profile, cfg),
                    lifted.by_descending_height(), {}};
  ctx.candidates = candidate_nodes(lifted, a, ctx.order);

  // The all-on-anchor allocation seeds the incumbent at sqrt(weights)
  // when it is itself feasible; otherwise the search starts unbounded.
  const NodeId anchor = baseline_node(a, cfg.baseline_node_class);
  const Allocation base = all_on_node(lifted, anchor);
  bool base_feasible = true;
  for (AlgorithmId id : lifted.nonvirtual_vertices())
    if (!lifted.spec(id).allowed_on(anchor, a.node_class(anchor)))
      base_feasible = false;
  double anchor_distance = std::numeric_limits<double>::infinity();
  if (base_feasible)
    anchor_distance = std::sqrt(cfg.time_weight + cfg.mem_weight);
  return run_search(ctx, anchor_distance, base_feasible ? &base : nullptr);
}

SolveResult solve_baseline_li2018(const AlgorithmGraph& g,
                                  const Architecture& a,
                                  const MemoryProfile& profile,
                                  const ObjectiveConfig& cfg,
                                  std::uint64_t /*seed*/) {
  const AlgorithmGraph lifted = ensure_lifted(g);

  // Internal search: no output-return legs, no memory term.
  ObjectiveConfig internal = cfg;
  internal.mem_weight = 0;
  internal.collect_ties = false;
  EvalOptions reduced;
  reduced.include_output_legs = false;

  const NodeId anchor = baseline_node(a, cfg.baseline_node_class);
  const Allocation base = all_on_node(lifted, anchor);
  EvalOptions reduced_unchecked = reduced;
  reduced_unchecked.enforce_allowed_nodes = false;
  JointObjective internal_obj;
  internal_obj.baseline_node_class = cfg.baseline_node_class;
  internal_obj.time_norm =
      aggregate_time(lifted, a, base, reduced_unchecked).aggregate;
  internal_obj.mem_norm = 1;  // unused at weight 0
  if (internal.time_weight > 0 && internal_obj.time_norm <= 0)
    fail(Errc::ConfigError,
         "time normalizer is zero; the reference allocation finishes "
         "instantly");

  SearchContext ctx{lifted,       a,  profile, internal, reduced,
                    internal_obj, {}, {}};
  ctx.order = lifted.by_descending_height();
  ctx.candidates = candidate_nodes(lifted, a, ctx.order);

  bool base_feasible = true;
  for (AlgorithmId id : lifted.nonvirtual_vertices())
    if (!lifted.spec(id).allowed_on(anchor, a.node_class(anchor)))
      base_feasible = false;
  double anchor_distance = std::numeric_limits<double>::infinity();
  if (base_feasible) anchor_distance = std::sqrt(internal.time_weight);
  SolveResult internal_result =
      run_search(ctx, anchor_distance, base_feasible ? &base : nullptr);

  // Re-evaluate the winning allocation under the full objective so the
  // reported distance is comparable with solve().
  SolveResult result;
  result.best = internal_result.best;
  result.nodes_explored = internal_result.nodes_explored;
  result.pruned = internal_result.pruned;
  result.incumbent_trace = std::move(internal_result.incumbent_trace);
  result.objective = make_objective(lifted, a, profile, cfg);

  SearchContext full_ctx{lifted, a, profile, cfg, EvalOptions{},
                         result.objective, {}, {}};
  TimeReport t;
  MemoryReport m;
  result.distance = full_distance(full_ctx, result.best, &t, &m);
  result.per_robot_times = std::move(t.per_robot_final);
  result.memory = std::move(m);
  result.wall_time_s = internal_result.wall_time_s;
  return result;
}

SolveResult enumerate_oracle(const AlgorithmGraph& g, const Architecture& a,
                             const MemoryProfile& profile,
                             const ObjectiveConfig& cfg) {
  const AlgorithmGraph lifted = ensure_lifted(g);
  SearchContext ctx{lifted, a, profile, cfg, EvalOptions{},
                    make_objective(lifted, a, profile, cfg), {}, {}};
  // Most-significant digit = smallest algorithm id, candidates ascending:
  // the first optimum found is the lexicographically canonical one.
  ctx.order = lifted.nonvirtual_vertices();
  std::sort(ctx.order.begin(), ctx.order.end());
  ctx.candidates = candidate_nodes(lifted, a, ctx.order);

  double space = 1;
  for (const auto& c : ctx.candidates) {
    space *= static_cast<double>(c.size());
    if (space > static_cast<double>(cfg.oracle_cap))
      fail(Errc::OracleTooLarge,
           "exhaustive search space exceeds the cap of " +
               std::to_string(cfg.oracle_cap));
  }

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult result;
  result.objective = ctx.objective;

  Allocation current;
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, Allocation>> ties;
  std::function<void(std::size_t)> rec = [&](std::size_t depth) {
    if (depth == ctx.order.size()) {
      ++result.nodes_explored;
      const double d = full_distance(ctx, current);
      if (cfg.collect_ties && d <= best + cfg.tie_epsilon)
        ties.emplace_back(d, current);
      if (d < best - kBoundSlack) {
        best = d;
        result.best = current;
      }
      return;
    }
    for (NodeId n : ctx.candidates[depth]) {
      current.assignment[ctx.order[depth]] = n;
      rec(depth + 1);
    }
    current.assignment.erase(ctx.order[depth]);
  };
  rec(0);

  if (!std::isfinite(best)) fail(Errc::Infeasible, "empty search space");

  TimeReport t;
  MemoryReport m;
  result.distance = full_distance(ctx, result.best, &t, &m);
  result.per_robot_times = std::move(t.per_robot_final);
  result.memory = std::move(m);
  result.incumbent_trace = {result.distance};
  if (cfg.collect_ties) {
    for (const auto& [d, alloc] : ties)
      if (d <= result.distance + cfg.tie_epsilon) result.ties.push_back(alloc);
  }
  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

namespace {

/// Expectation-preserving restriction of the architecture to a node
/// subset: every ordered pair is joined by one deterministic link whose
/// latency equals the full-architecture route cost, so robots outside
/// the subset still carry traffic implicitly.
Architecture scoped_architecture(const Architecture& a,
                                 const std::set<NodeId>& keep) {
  std::vector<Node> nodes;
  for (const Node& n : a.nodes())
    if (keep.count(n.id)) nodes.push_back(n);
  std::vector<LinkModel> links;
  for (const Node& u : nodes)
    for (const Node& v : nodes) {
      if (u.id == v.id) continue;
      LinkModel l;
      l.src = u.id;
      l.dst = v.id;
      l.base_latency_s = a.route_cost(u.id, v.id);
      double per_bit = 0;
      for (const LinkModel* hop : a.route(u.id, v.id))
        per_bit += hop->per_bit_cost_s;
      l.per_bit_cost_s = per_bit;
      links.push_back(l);
    }
  return Architecture(std::move(nodes), std::move(links));
}

}  // namespace

SolveResult solve_heterogeneous(
    const AlgorithmGraph& g, const Architecture& a,
    const MemoryProfile& profile, const ObjectiveConfig& cfg,
    const std::vector<std::set<NodeId>>& classes,
    const std::map<AlgorithmId, std::set<int>>& algo_usage,
    std::uint64_t seed) {
  const AlgorithmGraph lifted = ensure_lifted(g);
  const auto t0 = std::chrono::steady_clock::now();

  // Classes must partition the edge nodes.
  {
    std::set<NodeId> seen;
    for (const auto& cls : classes)
      for (NodeId n : cls) {
        if (!a.has_node(n) || a.node_class(n) != NodeClass::Edge)
          fail(Errc::ConfigError, "class member " + std::to_string(n) +
                                      " is not an edge node");
        if (!seen.insert(n).second)
          fail(Errc::ConfigError,
               "edge classes overlap on node " + std::to_string(n));
      }
    for (NodeId e : a.edge_nodes())
      if (!seen.count(e))
        fail(Errc::ConfigError, "edge node " + std::to_string(e) +
                                    " belongs to no class");
  }

  const int e = static_cast<int>(classes.size());
  const std::set<int> all_classes = [&] {
    std::set<int> s;
    for (int i = 0; i < e; ++i) s.insert(i);
    return s;
  }();
  auto usage_of = [&](AlgorithmId id) -> std::set<int> {
    auto it = algo_usage.find(id);
    if (it == algo_usage.end() || it->second.empty()) return all_classes;
    return it->second;
  };

  // Group algorithms by the exact class set using them.
  std::map<std::set<int>, std::set<AlgorithmId>> stages;
  for (AlgorithmId id : lifted.nonvirtual_vertices())
    stages[usage_of(id)].insert(id);

  std::vector<std::set<int>> stage_order;
  for (const auto& [s, _] : stages) stage_order.push_back(s);
  std::sort(stage_order.begin(), stage_order.end(),
            [](const std::set<int>& l, const std::set<int>& r) {
              if (l.size() != r.size()) return l.size() < r.size();
              return l < r;
            });

  SolveResult combined;
  Allocation merged;
  for (const auto& stage : stage_order) {
    const std::set<AlgorithmId>& algos = stages[stage];
    std::set<NodeId> scope_edges;
    for (int ci : stage)
      for (NodeId n : classes[static_cast<std::size_t>(ci)])
        scope_edges.insert(n);

    AlgorithmGraph sub = lift_to_semilattice(lifted.induced_subgraph(algos));

    // Restrict edge placements to the stage's robots.
    std::vector<AlgorithmSpec> specs = sub.specs();
    for (AlgorithmSpec& s : specs) {
      if (is_virtual(s.id)) continue;
      std::set<NodeId> allowed;
      for (NodeId n : a.node_ids()) {
        if (!s.allowed_on(n, a.node_class(n))) continue;
        if (a.node_class(n) == NodeClass::Edge && !scope_edges.count(n))
          continue;
        allowed.insert(n);
      }
      if (allowed.empty())
        fail(Errc::Infeasible, "algorithm " + std::to_string(s.id) +
                                   " has no allowed node in its class scope");
      s.allowed_nodes = std::move(allowed);
      s.allowed_classes.clear();
    }
    sub = AlgorithmGraph(std::move(specs), sub.edges(), sub.flow_limit());

    const bool whole_scope =
        scope_edges.size() == a.edge_nodes().size();
    std::set<NodeId> keep = scope_edges;
    for (NodeId f : a.fog_nodes()) keep.insert(f);
    for (NodeId c : a.cloud_nodes()) keep.insert(c);
    const Architecture scoped =
        whole_scope ? a : scoped_architecture(a, keep);

    SolveResult stage_result = solve(sub, scoped, profile, cfg, seed);
    for (const auto& [id, node] : stage_result.best.assignment)
      merged.assignment[id] = node;
    combined.nodes_explored += stage_result.nodes_explored;
    combined.pruned += stage_result.pruned;
  }

  combined.best = merged;
  combined.objective = make_objective(lifted, a, profile, cfg);
  SearchContext ctx{lifted, a, profile, cfg, EvalOptions{},
                    combined.objective, {}, {}};
  TimeReport t;
  MemoryReport m;
  combined.distance = full_distance(ctx, combined.best, &t, &m);
  combined.per_robot_times = std::move(t.per_robot_final);
  combined.memory = std::move(m);
  combined.incumbent_trace = {combined.distance};
  combined.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return combined;
}

}  // namespace edgealloc
