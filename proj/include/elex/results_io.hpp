#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "elex/hetero_graph.hpp"
#include "elex/scoring.hpp"

namespace elex {

// Best synthesized graph kept with an emitted candidate, for inspection and
// edge ablation.
struct EvidenceGraph {
  HeteroGraph graph;
  NodeId root = 0;
  double output = 0;  // f_label on (graph, root)
};

// One emitted search result: the scored candidate plus post-hoc metrics.
struct ResultEntry {
  ScoredCandidate candidate;
  std::optional<double> explanation_accuracy;
  std::optional<double> test_fidelity;  // fidelity on the held-out test file
  std::optional<EvidenceGraph> evidence;
};

struct ResultsFile {
  nlohmann::json config;
  std::vector<ResultEntry> entries;
};

void save_results(const std::string& path, const ResultsFile& results);
ResultsFile load_results(const std::string& path);

// Table-style CSV summary: ce, fidelity, ea, gnn.
void write_results_csv(const std::string& path, const ResultsFile& results);

// Ablation CSV: edge_types, in_motif, gnn_output.
void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows);

}  // namespace elex
