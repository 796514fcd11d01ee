#include <cmath>

#include "doctest.h"
#include "edgealloc/datasets.hpp"
#include "edgealloc/harness.hpp"
#include "edgealloc/solver.hpp"
#include "support.hpp"

using namespace edgealloc;
using namespace testsupport;

TEST_CASE("normalizers anchor the reference allocation at sqrt(2)") {
  const AlgorithmGraph& g = paper_graph();
  Architecture a = paper_architecture_n1();
  const MemoryProfile& p = paper_profile();
  ObjectiveConfig cfg;
  JointObjective obj = make_objective(g, a, p, cfg);
  Allocation base = all_on(g, 0);
  TimeReport t = aggregate_time(g, a, base, EvalMode::Expected);
  MemoryReport m = memory_report(p, g, a, base, cfg.combine);
  CHECK(joint_distance(cfg, obj, t.per_robot_final, m.max_usage) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("the reported distance is recomputable from its components") {
  SeededRng rng(97);
  for (int iter = 0; iter < 5; ++iter) {
    Instance inst = random_instance(3, 2, rng);
    ObjectiveConfig cfg;
    SolveResult r = solve(inst.graph, inst.arch, inst.profile, cfg);
    const double again =
        joint_distance(cfg, r.objective, r.per_robot_times, r.memory.max_usage);
    CHECK(std::abs(again - r.distance) <= 1e-9);
  }
}

TEST_CASE("zero normalizers are rejected") {
  // no outputs anywhere -> the memory normalizer collapses
  std::vector<AlgorithmSpec> specs = {simple_algo(2, 1, 0, 64)};
  AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(std::move(specs), {}));
  Architecture a = chain_efc(0.5);
  MemoryProfile p = MemoryProfile::from_graph(g);
  CHECK_THROWS_WITH_AS(make_objective(g, a, p, ObjectiveConfig{}),
                       doctest::Contains("normalizer"), Error);
  // with the memory term disabled the same instance is fine
  ObjectiveConfig cfg;
  cfg.mem_weight = 0;
  CHECK(make_objective(g, a, p, cfg).time_norm > 0);
}

TEST_CASE("everything pinned to the cloud returns the anchor") {
  std::vector<AlgorithmSpec> specs = paper_graph().specs();
  for (AlgorithmSpec& s : specs)
    if (!is_virtual(s.id)) s.allowed_classes = {NodeClass::Cloud};
  AlgorithmGraph g(std::move(specs), paper_graph().edges());
  Architecture a = paper_architecture_n1();
  SolveResult r = solve(g, a, paper_profile(), ObjectiveConfig{});
  CHECK(r.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  for (const auto& [_, node] : r.best.assignment) CHECK(node == 0);
}

TEST_CASE("chain with free links and a dominant cloud goes to the cloud") {
  std::vector<AlgorithmSpec> specs;
  for (AlgorithmId id = 2; id <= 4; ++id) {
    AlgorithmSpec s;
    s.id = id;
    s.exec_by_class = {{NodeClass::Edge, 3.0},
                       {NodeClass::Fog, 2.0},
                       {NodeClass::Cloud, 1.0}};
    s.output_bits = 64;
    specs.push_back(s);
  }
  AlgorithmGraph g = lift_to_semilattice(
      AlgorithmGraph(std::move(specs), {{2, 3}, {3, 4}}));
  Architecture a = chain_efc(0.0);
  MemoryProfile p = MemoryProfile::from_graph(g);
  ObjectiveConfig cfg;
  cfg.mem_weight = 0;
  SolveResult r = solve(g, a, p, cfg);
  for (const auto& [_, node] : r.best.assignment) CHECK(node == 0);
}

TEST_CASE("solve matches the exhaustive oracle on random instances") {
  SeededRng rng(101);
  for (int iter = 0; iter < 12; ++iter) {
    const int n_alg = 2 + static_cast<int>(rng.uniform_int(0, 3));
    const int n_edge = 1 + static_cast<int>(rng.uniform_int(0, 1));
    Instance inst = random_instance(n_alg, n_edge, rng);
    ObjectiveConfig cfg;
    SolveResult got = solve(inst.graph, inst.arch, inst.profile, cfg);
    SolveResult want = enumerate_oracle(inst.graph, inst.arch, inst.profile, cfg);
    CHECK(got.distance == doctest::Approx(want.distance).epsilon(1e-9));
  }
}

TEST_CASE("pruning never changes the answer") {
  SeededRng rng(103);
  for (int iter = 0; iter < 6; ++iter) {
    Instance inst = random_instance(3, 2, rng);
    ObjectiveConfig on;
    ObjectiveConfig off;
    off.pruning = false;
    SolveResult with = solve(inst.graph, inst.arch, inst.profile, on);
    SolveResult without = solve(inst.graph, inst.arch, inst.profile, off);
    CHECK(with.distance == doctest::Approx(without.distance).epsilon(1e-12));
    CHECK(with.best.assignment == without.best.assignment);
    CHECK(without.pruned == 0);
  }
}

TEST_CASE("incumbent distances start at sqrt(2) and never increase") {
  const AlgorithmGraph& g = paper_graph();
  Architecture a = paper_architecture_n1();
  SolveResult r = solve(g, a, paper_profile(), ObjectiveConfig{});
  REQUIRE(!r.incumbent_trace.empty());
  CHECK(r.incumbent_trace.front() ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (std::size_t i = 1; i < r.incumbent_trace.size(); ++i)
    CHECK(r.incumbent_trace[i] <= r.incumbent_trace[i - 1] + 1e-12);
  CHECK(r.distance <= std::sqrt(2.0) + 1e-9);
}

TEST_CASE("placement restrictions are honored") {
  SeededRng rng(107);
  for (int iter = 0; iter < 8; ++iter) {
    Instance inst = random_instance(3, 2, rng);
    std::vector<AlgorithmSpec> specs = inst.graph.specs();
    for (AlgorithmSpec& s : specs) {
      if (is_virtual(s.id)) continue;
      if (rng.uniform() < 0.4) {
        s.allowed_classes = rng.uniform() < 0.5
                                ? std::set<NodeClass>{NodeClass::Cloud,
                                                      NodeClass::Fog}
                                : std::set<NodeClass>{NodeClass::Edge};
      }
    }
    AlgorithmGraph g(std::move(specs), inst.graph.edges());
    SolveResult r = solve(g, inst.arch, inst.profile, ObjectiveConfig{});
    for (const auto& [id, node] : r.best.assignment)
      CHECK(g.spec(id).allowed_on(node, inst.arch.node_class(node)));
  }
}

TEST_CASE("solver results are deterministic") {
  SeededRng rng(109);
  Instance inst = random_instance(4, 2, rng);
  SolveResult a = solve(inst.graph, inst.arch, inst.profile, ObjectiveConfig{});
  SolveResult b = solve(inst.graph, inst.arch, inst.profile, ObjectiveConfig{});
  CHECK(a.distance == b.distance);
  CHECK(a.best.assignment == b.best.assignment);
  CHECK(a.nodes_explored == b.nodes_explored);
  CHECK(a.pruned == b.pruned);
}

TEST_CASE("parallel workers return the same allocation") {
  SeededRng rng(113);
  Instance inst = random_instance(4, 2, rng);
  ObjectiveConfig serial;
  ObjectiveConfig parallel;
  parallel.workers = 4;
  SolveResult a = solve(inst.graph, inst.arch, inst.profile, serial);
  SolveResult b = solve(inst.graph, inst.arch, inst.profile, parallel);
  CHECK(a.distance == doctest::Approx(b.distance).epsilon(1e-12));
  CHECK(a.best.assignment == b.best.assignment);
}

TEST_CASE("tie collection returns every optimum within epsilon") {
  // two identical nodes by symmetry: cloud vs fog with equal costs
  std::vector<AlgorithmSpec> specs = {simple_algo(2, 1, 64, 64)};
  AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(std::move(specs), {}));
  Architecture a = chain_efc(0.5);
  MemoryProfile p = MemoryProfile::from_graph(g);
  ObjectiveConfig cfg;
  cfg.collect_ties = true;
  cfg.mem_weight = 0;
  SolveResult r = solve(g, a, p, cfg);
  CHECK(!r.ties.empty());
  // the edge host avoids both transfer legs, so it is the unique best
  CHECK(r.ties.size() == 1);
  CHECK(r.best.assignment.at(2) == 2);
}

TEST_CASE("baseline search under free links agrees with the full model") {
  std::vector<AlgorithmSpec> specs;
  for (AlgorithmId id = 2; id <= 4; ++id) {
    AlgorithmSpec s;
    s.id = id;
    s.exec_by_class = {{NodeClass::Edge, 2.0},
                       {NodeClass::Fog, 1.5},
                       {NodeClass::Cloud, 1.0}};
    s.output_bits = 64;
    specs.push_back(s);
  }
  AlgorithmGraph g = lift_to_semilattice(
      AlgorithmGraph(std::move(specs), {{2, 3}, {3, 4}}));
  Architecture a = chain_efc(0.0);
  MemoryProfile p = MemoryProfile::from_graph(g);
  SolveResult ours = solve(g, a, p, ObjectiveConfig{});
  SolveResult base = solve_baseline_li2018(g, a, p, ObjectiveConfig{});
  CHECK(base.distance == doctest::Approx(ours.distance).epsilon(1e-9));
}

TEST_CASE("the baseline ignores a dominating output return") {
  // A -> B with a huge priced output: the reduced model runs to the fast
  // cloud, the full model keeps the chain on the robot.
  std::vector<AlgorithmSpec> specs;
  for (AlgorithmId id : {2, 3}) {
    AlgorithmSpec s;
    s.id = id;
    s.exec_by_class = {{NodeClass::Edge, 1.0},
                       {NodeClass::Fog, 0.3},
                       {NodeClass::Cloud, 0.1}};
    s.output_bits = id == 3 ? 1e6 : 64;
    specs.push_back(s);
  }
  AlgorithmGraph g =
      lift_to_semilattice(AlgorithmGraph(std::move(specs), {{2, 3}}));
  std::vector<Node> nodes = {
      {0, NodeClass::Cloud}, {1, NodeClass::Fog}, {2, NodeClass::Edge}};
  const double per_bit = 1e-4;
  std::vector<LinkModel> links = {fixed_link(0, 1, 0.01, 0, 0, per_bit),
                                  fixed_link(1, 0, 0.01, 0, 0, per_bit),
                                  fixed_link(1, 2, 0.01, 0, 0, per_bit),
                                  fixed_link(2, 1, 0.01, 0, 0, per_bit)};
  Architecture a(std::move(nodes), std::move(links));
  MemoryProfile p = MemoryProfile::from_graph(g);
  ObjectiveConfig cfg;
  cfg.mem_weight = 0;

  SolveResult base = solve_baseline_li2018(g, a, p, cfg);
  SolveResult ours = solve(g, a, p, cfg);
  CHECK(base.best.assignment.at(3) == 0);  // cloud despite the return
  CHECK(ours.best.assignment.at(3) == 2);  // robot avoids it
  CHECK(ours.distance <= base.distance + 1e-12);
}

TEST_CASE("the optimum never loses to the baseline") {
  SeededRng rng(127);
  for (int iter = 0; iter < 8; ++iter) {
    Instance inst = random_instance(3, 2, rng);
    SolveResult ours =
        solve(inst.graph, inst.arch, inst.profile, ObjectiveConfig{});
    SolveResult base = solve_baseline_li2018(inst.graph, inst.arch,
                                             inst.profile, ObjectiveConfig{});
    CHECK(ours.distance <= base.distance + 1e-9);
  }
}

TEST_CASE("oracle beats random allocations") {
  SeededRng rng(131);
  Instance inst = random_instance(3, 2, rng);
  ObjectiveConfig cfg;
  SolveResult oracle = enumerate_oracle(inst.graph, inst.arch, inst.profile, cfg);
  JointObjective obj = oracle.objective;
  const auto nodes = inst.arch.node_ids();
  for (int iter = 0; iter < 30; ++iter) {
    Allocation alloc;
    for (AlgorithmId id : inst.graph.nonvirtual_vertices())
      alloc.assignment[id] = nodes[static_cast<std::size_t>(
          rng.uniform_int(0, static_cast<int>(nodes.size()) - 1))];
    TimeReport t = aggregate_time(inst.graph, inst.arch, alloc,
                                  EvalMode::Expected);
    MemoryReport m = memory_report(inst.profile, inst.graph, inst.arch, alloc,
                                   cfg.combine);
    const double d = joint_distance(cfg, obj, t.per_robot_final, m.max_usage);
    CHECK(oracle.distance <= d + 1e-9);
  }
}

TEST_CASE("the oracle refuses oversized spaces") {
  SeededRng rng(137);
  Instance inst = random_instance(6, 4, rng);
  ObjectiveConfig cfg;
  cfg.oracle_cap = 100;
  CHECK_THROWS_AS(enumerate_oracle(inst.graph, inst.arch, inst.profile, cfg),
                  Error);
}

TEST_CASE("single-algorithm oracle picks the cheaper node") {
  std::vector<AlgorithmSpec> specs;
  AlgorithmSpec s;
  s.id = 2;
  s.exec_by_class = {{NodeClass::Edge, 2.0},
                     {NodeClass::Fog, 0.5},
                     {NodeClass::Cloud, 5.0}};
  s.output_bits = 64;
  s.allowed_classes = {NodeClass::Fog, NodeClass::Cloud};
  specs.push_back(s);
  AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(std::move(specs), {}));
  Architecture a = chain_efc(0.1);
  MemoryProfile p = MemoryProfile::from_graph(g);
  SolveResult r = enumerate_oracle(g, a, p, ObjectiveConfig{});
  CHECK(r.best.assignment.at(2) == 1);
}

TEST_CASE("infeasible restrictions are reported") {
  std::vector<AlgorithmSpec> specs = {simple_algo(2, 1, 64, 64)};
  specs[0].allowed_nodes = {99};  // not a node of the architecture
  AlgorithmGraph g = lift_to_semilattice(AlgorithmGraph(std::move(specs), {}));
  Architecture a = chain_efc(0.1);
  MemoryProfile p = MemoryProfile::from_graph(g);
  CHECK_THROWS_AS(solve(g, a, p, ObjectiveConfig{}), Error);
}

TEST_CASE("staged solve over robot classes") {
  SUBCASE("a single class reduces to the plain solver") {
    const AlgorithmGraph& g = paper_graph();
    Architecture a = paper_architecture_n1();
    std::vector<std::set<NodeId>> classes = {{2}};
    std::map<AlgorithmId, std::set<int>> usage;
    for (AlgorithmId id : g.nonvirtual_vertices()) usage[id] = {0};
    SolveResult staged = solve_heterogeneous(g, a, paper_profile(),
                                             ObjectiveConfig{}, classes, usage);
    SolveResult plain = solve(g, a, paper_profile(), ObjectiveConfig{});
    CHECK(staged.distance == doctest::Approx(plain.distance).epsilon(1e-9));
    CHECK(staged.best.assignment == plain.best.assignment);
  }
  SUBCASE("disjoint usage stays within each class") {
    // two independent chains, one per robot class
    std::vector<AlgorithmSpec> specs;
    for (AlgorithmId id = 2; id <= 5; ++id) {
      AlgorithmSpec s = simple_algo(id, 1.0, 64, 64);
      s.exec_by_class[NodeClass::Fog] = 0.5;
      s.exec_by_class[NodeClass::Cloud] = 0.25;
      specs.push_back(s);
    }
    AlgorithmGraph g = lift_to_semilattice(
        AlgorithmGraph(std::move(specs), {{2, 3}, {4, 5}}));
    Architecture a = star_arch(2, 0.2);
    MemoryProfile p = MemoryProfile::from_graph(g);
    std::vector<std::set<NodeId>> classes = {{2}, {3}};
    std::map<AlgorithmId, std::set<int>> usage = {
        {2, {0}}, {3, {0}}, {4, {1}}, {5, {1}}};
    SolveResult staged =
        solve_heterogeneous(g, a, p, ObjectiveConfig{}, classes, usage);
    // edge placements respect the class scopes
    for (const auto& [id, node] : staged.best.assignment) {
      if (a.node_class(node) != NodeClass::Edge) continue;
      CHECK(node == ((id <= 3) ? 2 : 3));
    }
  }
  SUBCASE("shared algorithms are allocated in the union stage") {
    std::vector<AlgorithmSpec> specs;
    for (AlgorithmId id = 2; id <= 4; ++id)
      specs.push_back(simple_algo(id, 1.0, 64, 64));
    AlgorithmGraph g = lift_to_semilattice(
        AlgorithmGraph(std::move(specs), {{2, 4}, {3, 4}}));
    Architecture a = star_arch(2, 0.2);
    MemoryProfile p = MemoryProfile::from_graph(g);
    std::vector<std::set<NodeId>> classes = {{2}, {3}};
    std::map<AlgorithmId, std::set<int>> usage = {
        {2, {0}}, {3, {1}}, {4, {0, 1}}};
    SolveResult staged =
        solve_heterogeneous(g, a, p, ObjectiveConfig{}, classes, usage);
    CHECK(staged.best.assignment.size() == 3);

    // the staged heuristic may lose to the global optimum; report the gap
    SolveResult oracle = enumerate_oracle(g, a, p, ObjectiveConfig{});
    CHECK(staged.distance >= oracle.distance - 1e-9);
    MESSAGE("staged-vs-oracle gap: ", staged.distance - oracle.distance);
  }
}
