#include "elex/scoring.hpp"

#include <algorithm>

namespace elex {

Aggregation aggregation_from_string(const std::string& name) {
  if (name == "mean") return Aggregation::kMean;
  if (name == "max") return Aggregation::kMax;
  throw Error("unknown aggregation '" + name + "' (expected mean or max)");
}

std::string to_string(Aggregation aggregation) {
  return aggregation == Aggregation::kMean ? "mean" : "max";
}

ScoredCandidate score_ce_gnn(const CE& ce, const NodeScorer& scorer,
                             const GraphSynthesizer& synth, const ScoreConfig& config,
                             std::uint64_t seed) {
  if (config.graphs_per_ce < 1) throw Error("score_ce_gnn: graphs_per_ce must be >= 1");
  if (config.lambda < 0) throw Error("score_ce_gnn: lambda must be >= 0");

  ScoredCandidate cand;
  cand.ce = ce;
  cand.seed = seed;

  const std::vector<SynthesisOutcome> outcomes =
      synth.create_batch(ce, config.graphs_per_ce, seed);
  cand.per_graph_outputs.reserve(outcomes.size());
  for (const SynthesisOutcome& outcome : outcomes) {
    const Eigen::VectorXd logits = scorer.score(outcome.graph, outcome.root);
    if (config.label < 0 || config.label >= logits.size()) {
      throw Error("score_ce_gnn: label " + std::to_string(config.label) +
                  " out of range for scorer output");
    }
    cand.per_graph_outputs.push_back(logits(config.label));
  }

  double gamma = cand.per_graph_outputs.front();
  cand.best_graph_index = 0;
  if (config.aggregation == Aggregation::kMax) {
    for (std::size_t i = 1; i < cand.per_graph_outputs.size(); ++i) {
      if (cand.per_graph_outputs[i] > gamma) {
        gamma = cand.per_graph_outputs[i];
        cand.best_graph_index = static_cast<int>(i);
      }
    }
  } else {
    double sum = 0;
    double best = cand.per_graph_outputs.front();
    for (std::size_t i = 0; i < cand.per_graph_outputs.size(); ++i) {
      sum += cand.per_graph_outputs[i];
      if (cand.per_graph_outputs[i] > best) {
        best = cand.per_graph_outputs[i];
        cand.best_graph_index = static_cast<int>(i);
      }
    }
    gamma = sum / static_cast<double>(cand.per_graph_outputs.size());
  }

  cand.gamma = gamma;
  cand.has_gamma = true;
  cand.score = gamma - config.lambda * static_cast<double>(length(ce));
  return cand;
}

FidelityContext make_fidelity_context(const LabeledDataset& dataset,
                                      const NodeScorer& scorer) {
  FidelityContext context;
  context.dataset = &dataset;
  context.eval_nodes = dataset.labeled_nodes();
  if (context.eval_nodes.empty()) {
    throw Error("fidelity: dataset has no labeled evaluation nodes");
  }
  const Eigen::MatrixXd logits = scorer.score_all(dataset.graph);
  context.gnn_label.reserve(context.eval_nodes.size());
  for (NodeId v : context.eval_nodes) {
    Eigen::Index pred = 0;
    logits.row(v).maxCoeff(&pred);
    context.gnn_label.push_back(static_cast<std::int8_t>(pred));
  }
  return context;
}

double fidelity_of(const FidelityContext& context, const CE& ce) {
  const std::vector<char> fulfilled = denotation(context.dataset->graph, ce);
  int agree = 0;
  for (std::size_t i = 0; i < context.eval_nodes.size(); ++i) {
    const int y_ce = fulfilled[static_cast<std::size_t>(context.eval_nodes[i])] ? 1 : 0;
    if (y_ce == context.gnn_label[i]) ++agree;
  }
  return static_cast<double>(agree) / static_cast<double>(context.eval_nodes.size());
}

ScoredCandidate score_ce_fidelity(const CE& ce, const FidelityContext& context) {
  ScoredCandidate cand;
  cand.ce = ce;
  cand.fidelity = fidelity_of(context, ce);
  cand.has_fidelity = true;
  cand.score = cand.fidelity;
  return cand;
}

ScoredCandidate score_ce_fidelity(const CE& ce, const NodeScorer& scorer,
                                  const LabeledDataset& validation) {
  return score_ce_fidelity(ce, make_fidelity_context(validation, scorer));
}

std::vector<AblationRow> edge_type_ablation(
    const HeteroGraph& graph, NodeId node, const NodeScorer& scorer, int label,
    const std::vector<std::pair<std::string, std::string>>& motif_pairs) {
  if (!graph.has_node(node)) throw Error("edge_type_ablation: unknown node id");

  std::vector<AblationRow> rows;
  AblationRow original;
  original.original = true;
  original.logit = scorer.score(graph, node)(label);
  rows.push_back(original);

  std::vector<std::string> names = graph.node_type_names();
  std::sort(names.begin(), names.end());
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i; j < names.size(); ++j) {
      AblationRow row;
      row.type_a = names[i];
      row.type_b = names[j];
      row.in_motif = std::find(motif_pairs.begin(), motif_pairs.end(),
                               std::make_pair(names[i], names[j])) != motif_pairs.end();
      const HeteroGraph ablated = remove_edges_between_types(
          graph, *graph.find_node_type(names[i]), *graph.find_node_type(names[j]));
      row.logit = scorer.score(ablated, node)(label);
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace elex
