#include "edgealloc/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace edgealloc {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(Errc::ConfigError, "invalid JSON document");
  return j;
}

NodeClass class_from_string(const std::string& s) {
  auto c = parse_node_class(s);
  if (!c) fail(Errc::ConfigError, "unknown node class '" + s + "'");
  return *c;
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    fail(Errc::ConfigError, std::string("field '") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::IoError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::IoError, "cannot write " + path);
  out << contents;
  if (!out) fail(Errc::IoError, "write to " + path + " failed");
}

AlgorithmGraph load_graph_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("algorithms") || !j["algorithms"].is_array())
    fail(Errc::ConfigError, "graph document needs an 'algorithms' array");

  std::vector<AlgorithmSpec> specs;
  for (const json& a : j["algorithms"]) {
    AlgorithmSpec s;
    if (!a.contains("id") || !a["id"].is_number_integer())
      fail(Errc::ConfigError, "algorithm entry needs an integer 'id'");
    s.id = a["id"].get<int>();
    if (is_virtual(s.id))
      fail(Errc::ConfigError,
           "algorithm ids 0 and 1 are reserved for the virtual sink/source");
    if (a.contains("name")) s.name = a["name"].get<std::string>();
    if (a.contains("exec_time_s")) {
      if (!a["exec_time_s"].is_object())
        fail(Errc::ConfigError, "'exec_time_s' must map class/node to seconds");
      for (const auto& [key, value] : a["exec_time_s"].items()) {
        if (!value.is_number())
          fail(Errc::ConfigError, "execution time must be a number");
        if (auto cls = parse_node_class(key)) {
          s.exec_by_class[*cls] = value.get<double>();
        } else {
          try {
            s.exec_by_node[std::stoi(key)] = value.get<double>();
          } catch (const std::exception&) {
            fail(Errc::ConfigError,
                 "exec_time_s key '" + key + "' is neither a class nor a node id");
          }
        }
      }
    }
    s.input_external_bits = number_or(a, "input_external_bits", 0);
    s.input_internal_bits = number_or(a, "input_internal_bits", 0);
    s.output_bits = number_or(a, "output_bits", 0);
    s.processing_bytes = number_or(a, "processing_bytes", 0);
    if (s.input_external_bits < 0 || s.input_internal_bits < 0 ||
        s.output_bits < 0 || s.processing_bytes < 0)
      fail(Errc::ConfigError, "sizes must be non-negative");
    if (a.contains("allowed_classes"))
      for (const json& c : a["allowed_classes"])
        s.allowed_classes.insert(class_from_string(c.get<std::string>()));
    if (a.contains("allowed_nodes"))
      for (const json& n : a["allowed_nodes"])
        s.allowed_nodes.insert(n.get<int>());
    specs.push_back(std::move(s));
  }

  std::vector<std::pair<AlgorithmId, AlgorithmId>> edges;
  if (j.contains("edges")) {
    for (const json& e : j["edges"]) {
      if (!e.is_array() || e.size() != 2)
        fail(Errc::ConfigError, "each edge must be a [pred, succ] pair");
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
  }
  return AlgorithmGraph(std::move(specs), std::move(edges));
}

AlgorithmGraph load_graph_file(const std::string& path) {
  return load_graph_json(read_file(path));
}

std::string graph_to_json(const AlgorithmGraph& g) {
  json out;
  out["algorithms"] = json::array();
  for (const AlgorithmSpec& s : g.specs()) {
    if (is_virtual(s.id)) continue;
    json a;
    a["id"] = s.id;
    if (!s.name.empty()) a["name"] = s.name;
    json exec;
    for (const auto& [cls, t] : s.exec_by_class) exec[node_class_name(cls)] = t;
    for (const auto& [node, t] : s.exec_by_node) exec[std::to_string(node)] = t;
    a["exec_time_s"] = exec;
    a["input_external_bits"] = s.input_external_bits;
    a["input_internal_bits"] = s.input_internal_bits;
    a["output_bits"] = s.output_bits;
    a["processing_bytes"] = s.processing_bytes;
    if (!s.allowed_classes.empty()) {
      json cls = json::array();
      for (NodeClass c : s.allowed_classes) cls.push_back(node_class_name(c));
      a["allowed_classes"] = cls;
    }
    if (!s.allowed_nodes.empty()) {
      json ns = json::array();
      for (NodeId n : s.allowed_nodes) ns.push_back(n);
      a["allowed_nodes"] = ns;
    }
    out["algorithms"].push_back(a);
  }
  out["edges"] = json::array();
  for (const auto& [u, v] : g.edges()) {
    if (is_virtual(u) || is_virtual(v)) continue;
    out["edges"].push_back(json::array({u, v}));
  }
  return out.dump(2) + "\n";
}

Architecture load_architecture_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("nodes") || !j["nodes"].is_array())
    fail(Errc::ConfigError, "architecture document needs a 'nodes' array");
  std::vector<Node> nodes;
  for (const json& n : j["nodes"]) {
    Node node;
    node.id = n.at("id").get<int>();
    node.cls = class_from_string(n.at("class").get<std::string>());
    nodes.push_back(node);
  }
  std::vector<LinkModel> links;
  if (j.contains("links")) {
    for (const json& l : j["links"]) {
      LinkModel link;
      link.src = l.at("src").get<int>();
      link.dst = l.at("dst").get<int>();
      link.base_latency_s = number_or(l, "base_latency_s", 0);
      link.delay.mu = number_or(l, "fn_mu", 0);
      link.delay.sigma = number_or(l, "fn_sigma", 0);
      link.per_bit_cost_s = number_or(l, "per_bit_cost_s", 0);
      links.push_back(link);
    }
  }
  try {
    return Architecture(std::move(nodes), std::move(links));
  } catch (const Error& e) {
    if (e.code() == Errc::Unreachable)
      fail(Errc::ConfigError, std::string("architecture file invalid: ") +
                                  e.what());
    throw;
  }
}

Architecture load_architecture_file(const std::string& path) {
  return load_architecture_json(read_file(path));
}

std::string architecture_to_json(const Architecture& a) {
  json out;
  out["nodes"] = json::array();
  for (const Node& n : a.nodes()) {
    json node;
    node["id"] = n.id;
    node["class"] = node_class_name(n.cls);
    out["nodes"].push_back(node);
  }
  out["links"] = json::array();
  for (const LinkModel& l : a.links()) {
    json link;
    link["src"] = l.src;
    link["dst"] = l.dst;
    link["base_latency_s"] = l.base_latency_s;
    link["fn_mu"] = l.delay.mu;
    link["fn_sigma"] = l.delay.sigma;
    link["per_bit_cost_s"] = l.per_bit_cost_s;
    out["links"].push_back(link);
  }
  return out.dump(2) + "\n";
}

LinkClassTable load_link_table_json(const std::string& text) {
  const json j = parse(text);
  if (!j.contains("class_links") || !j["class_links"].is_array())
    fail(Errc::ConfigError, "link table needs a 'class_links' array");
  LinkClassTable table;
  for (const json& e : j["class_links"]) {
    const NodeClass from = class_from_string(e.at("from").get<std::string>());
    const NodeClass to = class_from_string(e.at("to").get<std::string>());
    LinkClassParams p;
    p.base_latency_s = number_or(e, "base_latency_s", 0);
    p.delay.mu = number_or(e, "fn_mu", 0);
    p.delay.sigma = number_or(e, "fn_sigma", 0);
    p.per_bit_cost_s = number_or(e, "per_bit_cost_s", 0);
    table.entries[{from, to}] = p;
  }
  return table;
}

LinkClassTable load_link_table_file(const std::string& path) {
  return load_link_table_json(read_file(path));
}

ObjectiveConfig load_objective_config_json(const std::string& text,
                                           ObjectiveConfig cfg) {
  const json j = parse(text);
  cfg.time_weight = number_or(j, "time_weight", cfg.time_weight);
  cfg.mem_weight = number_or(j, "mem_weight", cfg.mem_weight);
  if (cfg.time_weight < 0 || cfg.mem_weight < 0)
    fail(Errc::ConfigError, "objective weights must be non-negative");
  if (j.contains("baseline_node_class"))
    cfg.baseline_node_class =
        class_from_string(j["baseline_node_class"].get<std::string>());
  if (j.contains("combine")) {
    const std::string c = j["combine"].get<std::string>();
    if (c == "simple_sum")
      cfg.combine = CombineMode::SimpleSum;
    else if (c == "algebra")
      cfg.combine = CombineMode::Algebra;
    else
      fail(Errc::ConfigError, "combine must be 'simple_sum' or 'algebra'");
  }
  if (j.contains("pruning")) cfg.pruning = j["pruning"].get<bool>();
  if (j.contains("oracle_cap"))
    cfg.oracle_cap = j["oracle_cap"].get<std::size_t>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("collect_ties")) cfg.collect_ties = j["collect_ties"].get<bool>();
  cfg.tie_epsilon = number_or(j, "tie_epsilon", cfg.tie_epsilon);
  return cfg;
}

ObjectiveConfig load_objective_config_file(const std::string& path,
                                           ObjectiveConfig cfg) {
  return load_objective_config_json(read_file(path), cfg);
}

}  // namespace edgealloc
