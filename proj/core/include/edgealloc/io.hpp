#pragma once

#include <string>

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/memory_model.hpp"
#include "edgealloc/solver.hpp"

namespace edgealloc {

/// JSON loaders for the documented on-disk schemas. All throw
/// Error(IoError) for unreadable files and Error(ConfigError) for
/// schema violations.

AlgorithmGraph load_graph_json(const std::string& text);
AlgorithmGraph load_graph_file(const std::string& path);
std::string graph_to_json(const AlgorithmGraph& g);

Architecture load_architecture_json(const std::string& text);
Architecture load_architecture_file(const std::string& path);
std::string architecture_to_json(const Architecture& a);

LinkClassTable load_link_table_json(const std::string& text);
LinkClassTable load_link_table_file(const std::string& path);

/// Overrides present keys of `cfg`; absent keys keep their defaults.
ObjectiveConfig load_objective_config_json(const std::string& text,
                                           ObjectiveConfig cfg = {});
ObjectiveConfig load_objective_config_file(const std::string& path,
                                           ObjectiveConfig cfg = {});

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace edgealloc
