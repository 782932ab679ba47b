#include "elex/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "elex/graph_io.hpp"

namespace elex {

std::vector<NodeId> LabeledDataset::labeled_nodes() const {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (label[static_cast<std::size_t>(v)] >= 0) nodes.push_back(v);
  }
  return nodes;
}

std::vector<NodeId> LabeledDataset::nodes_in_split(int split_id) const {
  std::vector<NodeId> nodes;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (split[static_cast<std::size_t>(v)] == split_id) nodes.push_back(v);
  }
  return nodes;
}

HeteroGraph generate_ba(int num_nodes, int edges_per_node, Rng& rng) {
  if (edges_per_node < 1 || num_nodes <= edges_per_node) {
    throw Error("generate_ba: need num_nodes > edges_per_node >= 1");
  }
  HeteroGraph graph;
  graph.register_node_type("A");
  graph.register_node_type("B");
  graph.register_node_type("C");
  const NodeTypeId d = graph.register_node_type("D");
  const EdgeTypeId to = graph.register_edge_type("to");

  auto link = [&](NodeId u, NodeId v) {
    graph.add_edge(u, to, v);
    graph.add_edge(v, to, u);
  };

  // Base nodes start as D; assign_types_and_labels redraws them.
  // `chances` holds each node id once per unit of degree.
  std::vector<NodeId> chances;
  const int seed_size = edges_per_node + 1;
  for (int i = 0; i < seed_size; ++i) graph.add_node(d);
  for (NodeId u = 0; u < seed_size; ++u) {
    for (NodeId v = u + 1; v < seed_size; ++v) {
      link(u, v);
      chances.push_back(u);
      chances.push_back(v);
    }
  }

  std::vector<NodeId> targets;
  for (int i = seed_size; i < num_nodes; ++i) {
    const NodeId node = graph.add_node(d);
    targets.clear();
    while (static_cast<int>(targets.size()) < edges_per_node) {
      const NodeId candidate = chances[rng.uniform_index(chances.size())];
      if (std::find(targets.begin(), targets.end(), candidate) == targets.end()) {
        targets.push_back(candidate);
      }
    }
    for (NodeId t : targets) {
      link(node, t);
      chances.push_back(node);
      chances.push_back(t);
    }
  }
  return graph;
}

MotifAttachment attach_house_motifs(HeteroGraph& graph, int count, Rng& rng) {
  if (graph.node_count() == 0) throw Error("attach_house_motifs: empty base graph");
  const NodeTypeId a = graph.register_node_type("A");
  const NodeTypeId b = graph.register_node_type("B");
  const NodeTypeId c = graph.register_node_type("C");
  const EdgeTypeId to = graph.register_edge_type("to");
  const NodeId base_count = graph.node_count();

  MotifAttachment attachment;
  attachment.motif_of.assign(static_cast<std::size_t>(base_count), -1);

  auto link = [&](NodeId u, NodeId v) {
    graph.add_edge(u, to, v);
    graph.add_edge(v, to, u);
  };

  for (int m = 0; m < count; ++m) {
    const NodeId top = graph.add_node(a);
    const NodeId mid1 = graph.add_node(b);
    const NodeId mid2 = graph.add_node(b);
    const NodeId bot1 = graph.add_node(c);
    const NodeId bot2 = graph.add_node(c);
    const std::vector<NodeId> members{top, mid1, mid2, bot1, bot2};

    link(bot1, bot2);   // floor
    link(bot1, mid1);   // walls
    link(bot2, mid2);
    link(mid1, mid2);   // ceiling
    link(mid1, top);    // roof
    link(mid2, top);

    const NodeId anchor = members[rng.uniform_index(members.size())];
    const NodeId base = static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(base_count)));
    link(anchor, base);

    attachment.motif_of.insert(attachment.motif_of.end(), 5, m);
    attachment.motifs.push_back(members);
  }
  return attachment;
}

LabeledDataset assign_types_and_labels(HeteroGraph graph, MotifAttachment attachment,
                                       Rng& rng) {
  const auto a = graph.find_node_type("A");
  const auto b = graph.find_node_type("B");
  const auto c = graph.find_node_type("C");
  const auto d = graph.find_node_type("D");
  if (!a || !b || !c || !d) {
    throw Error("assign_types_and_labels: graph lacks the A/B/C/D type universe");
  }

  LabeledDataset dataset;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (attachment.motif_of[static_cast<std::size_t>(v)] >= 0) continue;
    const double u = rng.uniform_real();
    NodeTypeId type = *d;
    if (u < 0.2) {
      type = *a;
    } else if (u < 0.4) {
      type = *b;
    } else if (u < 0.6) {
      type = *c;
    }
    graph.set_node_type(v, type);
  }

  dataset.label.assign(static_cast<std::size_t>(graph.node_count()), -1);
  dataset.split.assign(static_cast<std::size_t>(graph.node_count()), -1);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    if (graph.node_type(v) == *b) {
      const bool in_motif = attachment.motif_of[static_cast<std::size_t>(v)] >= 0;
      dataset.label[static_cast<std::size_t>(v)] = in_motif ? 1 : 0;
    }
  }
  dataset.graph = std::move(graph);
  dataset.motif_of = std::move(attachment.motif_of);
  dataset.motifs = std::move(attachment.motifs);
  return dataset;
}

void make_splits(LabeledDataset& dataset, double train_frac, double val_frac,
                 double test_frac, Rng& rng) {
  const double sum = train_frac + val_frac + test_frac;
  if (train_frac < 0 || val_frac < 0 || test_frac < 0 || std::abs(sum - 1.0) > 1e-9) {
    throw Error("make_splits: fractions must be non-negative and sum to 1");
  }

  std::fill(dataset.split.begin(), dataset.split.end(), static_cast<std::int8_t>(-1));
  for (int lbl = 0; lbl <= 1; ++lbl) {
    std::vector<NodeId> group;
    for (NodeId v : dataset.labeled_nodes()) {
      if (dataset.label[static_cast<std::size_t>(v)] == lbl) group.push_back(v);
    }
    rng.shuffle(group);

    const std::size_t n = group.size();
    std::size_t counts[3] = {static_cast<std::size_t>(train_frac * static_cast<double>(n)),
                             static_cast<std::size_t>(val_frac * static_cast<double>(n)), 0};
    counts[2] = static_cast<std::size_t>(test_frac * static_cast<double>(n));
    std::size_t assigned = counts[0] + counts[1] + counts[2];
    for (int s = 0; assigned < n; s = (s + 1) % 3) {
      ++counts[s];
      ++assigned;
    }

    std::size_t index = 0;
    for (int s = 0; s < 3; ++s) {
      for (std::size_t i = 0; i < counts[s]; ++i, ++index) {
        dataset.split[static_cast<std::size_t>(group[index])] = static_cast<std::int8_t>(s);
      }
    }
  }
}

LabeledDataset generate_dataset(const DatasetConfig& config, std::uint64_t seed) {
  Rng rng(seed);
  HeteroGraph graph = generate_ba(config.num_nodes, config.edges_per_node, rng);
  MotifAttachment attachment = attach_house_motifs(graph, config.num_motifs, rng);
  LabeledDataset dataset = assign_types_and_labels(std::move(graph), std::move(attachment), rng);
  make_splits(dataset, config.train_frac, config.val_frac, config.test_frac, rng);
  return dataset;
}

nlohmann::json dataset_to_json(const LabeledDataset& dataset) {
  NodeAnnotations notes;
  for (NodeId v = 0; v < dataset.graph.node_count(); ++v) {
    if (dataset.label[static_cast<std::size_t>(v)] >= 0) {
      notes.labels[v] = dataset.label[static_cast<std::size_t>(v)];
    }
    notes.features[v] = 1.0;
  }
  nlohmann::json doc = graph_to_json(dataset.graph, &notes);

  nlohmann::json splits;
  splits["train"] = dataset.nodes_in_split(kSplitTrain);
  splits["val"] = dataset.nodes_in_split(kSplitVal);
  splits["test"] = dataset.nodes_in_split(kSplitTest);
  doc["splits"] = std::move(splits);
  doc["motifs"] = dataset.motifs;
  return doc;
}

LabeledDataset dataset_from_json(const nlohmann::json& doc) {
  LabeledDataset dataset;
  NodeAnnotations notes;
  dataset.graph = graph_from_json(doc, &notes);

  const std::size_t n = static_cast<std::size_t>(dataset.graph.node_count());
  dataset.label.assign(n, -1);
  dataset.split.assign(n, -1);
  dataset.motif_of.assign(n, -1);
  for (const auto& [node, lbl] : notes.labels) {
    dataset.label[static_cast<std::size_t>(node)] = static_cast<std::int8_t>(lbl);
  }
  if (doc.contains("splits")) {
    const auto& splits = doc.at("splits");
    const std::pair<const char*, int> names[] = {
        {"train", kSplitTrain}, {"val", kSplitVal}, {"test", kSplitTest}};
    for (const auto& [name, id] : names) {
      if (!splits.contains(name)) continue;
      for (const auto& v : splits.at(name)) {
        dataset.split[v.get<std::size_t>()] = static_cast<std::int8_t>(id);
      }
    }
  }
  if (doc.contains("motifs")) {
    dataset.motifs = doc.at("motifs").get<std::vector<std::vector<NodeId>>>();
    for (std::size_t m = 0; m < dataset.motifs.size(); ++m) {
      for (NodeId v : dataset.motifs[m]) {
        dataset.motif_of[static_cast<std::size_t>(v)] = static_cast<std::int32_t>(m);
      }
    }
  }
  return dataset;
}

void save_dataset(const std::string& path, const LabeledDataset& dataset,
                  const nlohmann::json* config) {
  nlohmann::json doc = dataset_to_json(dataset);
  if (config != nullptr) doc["config"] = *config;
  write_json_file(path, doc);
}

LabeledDataset load_dataset(const std::string& path) {
  return dataset_from_json(read_json_file(path));
}

}  // namespace elex
