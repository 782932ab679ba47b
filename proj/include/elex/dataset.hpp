#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "elex/hetero_graph.hpp"
#include "elex/rng.hpp"

namespace elex {

inline constexpr int kSplitTrain = 0;
inline constexpr int kSplitVal = 1;
inline constexpr int kSplitTest = 2;

// Hetero-BA-Shapes: BA base graph plus typed house motifs. Type-B nodes are
// labeled 1 iff they belong to a motif; every node carries the constant
// feature 1.
struct LabeledDataset {
  HeteroGraph graph;
  std::vector<std::int8_t> label;      // per node; -1 = unlabeled
  std::vector<std::int8_t> split;      // per node; -1 = none
  std::vector<std::int32_t> motif_of;  // per node; -1 = not in a motif
  std::vector<std::vector<NodeId>> motifs;

  std::vector<NodeId> labeled_nodes() const;
  std::vector<NodeId> nodes_in_split(int split_id) const;
};

struct DatasetConfig {
  int num_nodes = 10000;      // BA base size
  int num_motifs = 1000;
  int edges_per_node = 3;     // BA attachment count
  double train_frac = 0.40;
  double val_frac = 0.24;
  double test_frac = 0.36;
};

// Preferential-attachment multigraph: a fully connected seed of
// edges_per_node+1 nodes, then each node attaches to edges_per_node distinct
// existing nodes with probability proportional to degree. Every logical edge
// is stored in both directions with edge type "to".
HeteroGraph generate_ba(int num_nodes, int edges_per_node, Rng& rng);

struct MotifAttachment {
  std::vector<std::int32_t> motif_of;
  std::vector<std::vector<NodeId>> motifs;
};

// Appends `count` typed houses (top A, middles B, bottoms C; six undirected
// motif edges), each tied to the base graph by a single attachment edge from
// a uniform motif node to a uniform base node. All edges stored both ways.
MotifAttachment attach_house_motifs(HeteroGraph& graph, int count, Rng& rng);

// Types base nodes A/B/C with probability 0.2 each and D with 0.4, labels
// type-B nodes by motif membership.
LabeledDataset assign_types_and_labels(HeteroGraph graph, MotifAttachment attachment,
                                       Rng& rng);

// Uniform random partition of the labeled nodes, stratified by label.
void make_splits(LabeledDataset& dataset, double train_frac, double val_frac,
                 double test_frac, Rng& rng);

LabeledDataset generate_dataset(const DatasetConfig& config, std::uint64_t seed);

nlohmann::json dataset_to_json(const LabeledDataset& dataset);
LabeledDataset dataset_from_json(const nlohmann::json& doc);
void save_dataset(const std::string& path, const LabeledDataset& dataset,
                  const nlohmann::json* config = nullptr);
LabeledDataset load_dataset(const std::string& path);

}  // namespace elex
