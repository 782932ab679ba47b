#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elex/class_expr.hpp"
#include "elex/dataset.hpp"
#include "elex/gnn.hpp"
#include "elex/graph_synth.hpp"

namespace elex {

enum class Aggregation { kMean, kMax };

Aggregation aggregation_from_string(const std::string& name);
std::string to_string(Aggregation aggregation);

struct ScoreConfig {
  double lambda = 0.5;      // length-regularization weight
  int graphs_per_ce = 100;  // m
  Aggregation aggregation = Aggregation::kMax;
  int label = 1;            // the explained label l
};

struct ScoredCandidate {
  CE ce;
  double score = 0;
  double gamma = 0;                      // aggregated GNN output (gnn scorer)
  bool has_gamma = false;
  double fidelity = 0;                   // agreement with the GNN (fidelity scorer)
  bool has_fidelity = false;
  std::vector<double> per_graph_outputs; // f_l per synthesized graph
  int best_graph_index = -1;             // argmax of per_graph_outputs
  std::uint64_t seed = 0;                // synthesis seed provenance
  std::uint64_t order = 0;               // insertion order, used for tie-breaks
};

// Synthesizes m graphs from the CE, evaluates f_label at each root,
// aggregates to gamma, and scores gamma - lambda * length(ce).
ScoredCandidate score_ce_gnn(const CE& ce, const NodeScorer& scorer,
                             const GraphSynthesizer& synth, const ScoreConfig& config,
                             std::uint64_t seed);

// Cached GNN predictions over a dataset's labeled nodes, shared by all
// fidelity evaluations against that dataset.
struct FidelityContext {
  const LabeledDataset* dataset = nullptr;
  std::vector<NodeId> eval_nodes;
  std::vector<std::int8_t> gnn_label;  // argmax prediction per eval node
};

FidelityContext make_fidelity_context(const LabeledDataset& dataset,
                                      const NodeScorer& scorer);

// Fraction of eval nodes where (node fulfills ce) agrees with the GNN's
// predicted label.
double fidelity_of(const FidelityContext& context, const CE& ce);

// score = fidelity; no length penalty.
ScoredCandidate score_ce_fidelity(const CE& ce, const FidelityContext& context);
ScoredCandidate score_ce_fidelity(const CE& ce, const NodeScorer& scorer,
                                  const LabeledDataset& validation);

struct AblationRow {
  std::string type_a;  // empty for the original-graph row
  std::string type_b;
  bool in_motif = false;
  double logit = 0;
  bool original = false;
};

// One row per unordered node-type pair of the graph's universe (types sorted,
// pairs with repetition), each scoring the graph with that pair's edges
// removed, plus the unmodified-graph row first. `motif_pairs` marks pairs
// that occur inside the ground-truth motif.
std::vector<AblationRow> edge_type_ablation(
    const HeteroGraph& graph, NodeId node, const NodeScorer& scorer, int label,
    const std::vector<std::pair<std::string, std::string>>& motif_pairs);

}  // namespace elex
