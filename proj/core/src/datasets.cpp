#include "edgealloc/datasets.hpp"

namespace edgealloc {

namespace {

AlgorithmSpec algo(AlgorithmId id, const char* name, double t_edge,
                   double t_fog, double t_cloud, double in_bits,
                   double out_bits, double proc_bytes) {
  AlgorithmSpec s;
  s.id = id;
  s.name = name;
  s.exec_by_class[NodeClass::Edge] = t_edge;
  s.exec_by_class[NodeClass::Fog] = t_fog;
  s.exec_by_class[NodeClass::Cloud] = t_cloud;
  s.input_internal_bits = in_bits;
  s.output_bits = out_bits;
  s.processing_bytes = proc_bytes;
  return s;
}

AlgorithmGraph build_paper_graph() {
  std::vector<AlgorithmSpec> specs = {
      algo(2, "A1", 0.445, 0.153, 0.047, 4718592, 1120, 14619367),
      algo(3, "A2", 4.475, 1.538, 0.470, 47185920, 11200, 11683901),
      algo(4, "A3", 7.2e-4, 4.1e-4, 1.5e-4, 11200, 11200, 11684220),
      algo(5, "A4", 2.0e-4, 7.74e-5, 3.46e-5, 11200, 0, 7799083),
      algo(6, "A5", 6.61e-5, 1.94e-5, 9.96e-6, 11200, 11200, 11253700),
      algo(7, "A6", 2.1e-4, 1.3e-4, 4.75e-5, 11200, 1120, 11261700),
      algo(8, "A7", 1.09e-3, 4.01e-3, 2.7e-4, 4718592, 4718592, 8010779),
  };
  // A1 -> A2 -> {A3, A4}, A4 -> A5, {A3, A5} -> A6 -> A7
  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges = {
      {2, 3}, {3, 4}, {3, 5}, {5, 6}, {4, 7}, {6, 7}, {7, 8},
  };
  return lift_to_semilattice(AlgorithmGraph(std::move(specs), std::move(edges)));
}

LinkClassTable build_tab2p() {
  LinkClassTable t;
  auto set = [&](NodeClass from, NodeClass to, double base, double mu,
                 double sigma) {
    LinkClassParams p;
    p.base_latency_s = base;
    p.delay = {mu, sigma};
    t.entries[{from, to}] = p;
  };
  set(NodeClass::Cloud, NodeClass::Fog, 0.439, 0.109, 0.087);
  set(NodeClass::Fog, NodeClass::Cloud, 0.417, 0.376, 0.365);
  set(NodeClass::Fog, NodeClass::Edge, 0.475, 0.187, 0.397);
  set(NodeClass::Edge, NodeClass::Fog, 0.447, 0.182, 0.111);
  set(NodeClass::Edge, NodeClass::Edge, 0.112, 0.061, 0.023);
  return t;
}

}  // namespace

const AlgorithmGraph& paper_graph() {
  static const AlgorithmGraph g = build_paper_graph();
  return g;
}

const LinkClassTable& paper_tab2p() {
  static const LinkClassTable t = build_tab2p();
  return t;
}

const MemoryProfile& paper_profile() {
  static const MemoryProfile p = MemoryProfile::from_graph(paper_graph());
  return p;
}

Architecture paper_architecture_n1() {
  const LinkClassTable& t = paper_tab2p();
  std::vector<Node> nodes = {
      {0, NodeClass::Cloud}, {1, NodeClass::Fog}, {2, NodeClass::Edge}};
  auto link = [&](NodeId a, NodeId b, NodeClass ca, NodeClass cb) {
    const LinkClassParams& p = t.at(ca, cb);
    LinkModel l;
    l.src = a;
    l.dst = b;
    l.base_latency_s = p.base_latency_s;
    l.delay = p.delay;
    l.per_bit_cost_s = p.per_bit_cost_s;
    return l;
  };
  std::vector<LinkModel> links = {
      link(0, 1, NodeClass::Cloud, NodeClass::Fog),
      link(1, 0, NodeClass::Fog, NodeClass::Cloud),
      link(1, 2, NodeClass::Fog, NodeClass::Edge),
      link(2, 1, NodeClass::Edge, NodeClass::Fog),
  };
  return Architecture(std::move(nodes), std::move(links));
}

}  // namespace edgealloc
