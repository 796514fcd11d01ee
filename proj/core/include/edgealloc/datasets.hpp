#pragma once

#include "edgealloc/algo_graph.hpp"
#include "edgealloc/architecture.hpp"
#include "edgealloc/memory_model.hpp"

namespace edgealloc {

/// Bundled measurements from the face-recognition pipeline deployment:
/// seven algorithms (feature extraction, database store/load, image
/// decompression, matching, identification) with execution times,
/// payload sizes and memory footprints per node class.
const AlgorithmGraph& paper_graph();

/// Measured 32-byte transmission times between node classes
/// (cloud<->fog, fog<->edge, edge<->edge), with folded-normal delay
/// parameters.
const LinkClassTable& paper_tab2p();

/// Memory profile derived from the bundled graph.
const MemoryProfile& paper_profile();

/// The unique single-robot architecture (edge -- fog -- cloud) under the
/// bundled link table.
Architecture paper_architecture_n1();

}  // namespace edgealloc
