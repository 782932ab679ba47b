#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <queue>

#include "elex/class_expr.hpp"
#include "elex/dataset.hpp"
#include "elex/graph_io.hpp"

using namespace elex;

TEST_CASE("BA construction counts") {
  Rng rng(1);
  SUBCASE("seed clique only") {
    const HeteroGraph g = generate_ba(4, 3, rng);
    CHECK(g.node_count() == 4);
    CHECK(g.edge_count() == 12);  // complete graph, both directions
  }
  SUBCASE("closed-form directed edge count") {
    const HeteroGraph g = generate_ba(2000, 3, rng);
    CHECK(g.node_count() == 2000);
    CHECK(g.edge_count() == 2 * (6 + 3 * 1996));
  }
  SUBCASE("invalid sizes") {
    CHECK_THROWS_AS(generate_ba(3, 3, rng), Error);
    CHECK_THROWS_AS(generate_ba(10, 0, rng), Error);
  }
}

TEST_CASE("BA degree distribution is heavy-tailed") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    const HeteroGraph g = generate_ba(10000, 3, rng);
    std::vector<int> degree(static_cast<std::size_t>(g.node_count()), 0);
    for (const Edge& e : g.edges()) ++degree[static_cast<std::size_t>(e.dst)];
    std::vector<int> sorted = degree;
    std::sort(sorted.begin(), sorted.end());
    const int median = sorted[sorted.size() / 2];
    const int max = sorted.back();
    CHECK(max > 10 * median);
  }
}

TEST_CASE("attaching one motif adds 5 nodes and 14 directed edges") {
  Rng rng(3);
  HeteroGraph g = generate_ba(50, 3, rng);
  const int nodes_before = g.node_count();
  const int edges_before = g.edge_count();
  const MotifAttachment attachment = attach_house_motifs(g, 1, rng);
  CHECK(g.node_count() == nodes_before + 5);
  CHECK(g.edge_count() == edges_before + 2 * 7);  // 6 motif edges + 1 attachment
  REQUIRE(attachment.motifs.size() == 1);
  CHECK(attachment.motifs[0].size() == 5);
}

TEST_CASE("paper-scale node count and motif structure") {
  const LabeledDataset data = generate_dataset({.num_nodes = 10000, .num_motifs = 1000}, 5);
  CHECK(data.graph.node_count() == 15000);
  CHECK(data.motifs.size() == 1000);

  // every middle node fulfills B and (to some A) and (to some C) and (to some B)
  const CE middle_ce = parse("B and (to some A) and (to some C) and (to some B)");
  const std::vector<char> holds = denotation(data.graph, middle_ce);
  const auto b_type = data.graph.find_node_type("B");
  REQUIRE(b_type.has_value());
  int middles = 0;
  for (const auto& motif : data.motifs) {
    for (NodeId v : motif) {
      if (data.graph.node_type(v) == *b_type) {
        CHECK(holds[static_cast<std::size_t>(v)]);
        ++middles;
      }
    }
  }
  CHECK(middles == 2000);

  // motif tops are always type A
  int tops = 0;
  const auto a_type = data.graph.find_node_type("A");
  for (const auto& motif : data.motifs) {
    for (NodeId v : motif) {
      if (data.graph.node_type(v) == *a_type) ++tops;
    }
  }
  CHECK(tops == 1000);
}

TEST_CASE("type frequencies and label balance") {
  const LabeledDataset data = generate_dataset({.num_nodes = 10000, .num_motifs = 1000}, 11);
  int counts[4] = {0, 0, 0, 0};
  const std::string names[4] = {"A", "B", "C", "D"};
  for (NodeId v = 0; v < data.graph.node_count(); ++v) {
    if (data.motif_of[static_cast<std::size_t>(v)] >= 0) continue;
    const std::string& t = data.graph.node_type_name(data.graph.node_type(v));
    for (int i = 0; i < 4; ++i) {
      if (names[i] == t) ++counts[i];
    }
  }
  // base nodes: multinomial (0.2, 0.2, 0.2, 0.4) over 10000, 3 sigma
  const double expected[4] = {2000, 2000, 2000, 4000};
  const double sigma[4] = {40.0, 40.0, 40.0, 48.99};
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(counts[i] - expected[i]) <= 3 * sigma[i]);
  }

  // labels: 2000 motif B vs roughly 2000 base B
  int label1 = 0, label0 = 0;
  for (NodeId v : data.labeled_nodes()) {
    if (data.label[static_cast<std::size_t>(v)] == 1) {
      ++label1;
      CHECK(data.motif_of[static_cast<std::size_t>(v)] >= 0);
    } else {
      ++label0;
      CHECK(data.motif_of[static_cast<std::size_t>(v)] < 0);
    }
  }
  CHECK(label1 == 2000);
  const double ratio = static_cast<double>(label1) / static_cast<double>(label0 + label1);
  CHECK(ratio > 0.45);
  CHECK(ratio < 0.55);
}

TEST_CASE("splits are stratified and sized by the fractions") {
  LabeledDataset data = generate_dataset({.num_nodes = 2000, .num_motifs = 200}, 13);
  const std::size_t labeled = data.labeled_nodes().size();
  const std::size_t n_train = data.nodes_in_split(kSplitTrain).size();
  const std::size_t n_val = data.nodes_in_split(kSplitVal).size();
  const std::size_t n_test = data.nodes_in_split(kSplitTest).size();
  CHECK(n_train + n_val + n_test == labeled);
  CHECK(std::abs(static_cast<double>(n_train) - 0.40 * static_cast<double>(labeled)) <= 2);
  CHECK(std::abs(static_cast<double>(n_val) - 0.24 * static_cast<double>(labeled)) <= 2);
  CHECK(std::abs(static_cast<double>(n_test) - 0.36 * static_cast<double>(labeled)) <= 2);

  double global_ratio = 0;
  for (NodeId v : data.labeled_nodes()) {
    global_ratio += data.label[static_cast<std::size_t>(v)];
  }
  global_ratio /= static_cast<double>(labeled);
  for (int split : {kSplitTrain, kSplitVal, kSplitTest}) {
    const auto nodes = data.nodes_in_split(split);
    double ratio = 0;
    for (NodeId v : nodes) ratio += data.label[static_cast<std::size_t>(v)];
    ratio /= static_cast<double>(nodes.size());
    CHECK(std::abs(ratio - global_ratio) < 0.02);
  }

  SUBCASE("degenerate all-train fractions") {
    Rng rng(1);
    make_splits(data, 1.0, 0.0, 0.0, rng);
    CHECK(data.nodes_in_split(kSplitTrain).size() == labeled);
    CHECK(data.nodes_in_split(kSplitVal).empty());
  }
  SUBCASE("fractions must sum to one") {
    Rng rng(1);
    CHECK_THROWS_AS(make_splits(data, 0.5, 0.1, 0.1, rng), Error);
  }
}

TEST_CASE("generation is deterministic under a fixed seed") {
  const LabeledDataset a = generate_dataset({.num_nodes = 500, .num_motifs = 50}, 21);
  const LabeledDataset b = generate_dataset({.num_nodes = 500, .num_motifs = 50}, 21);
  CHECK(dataset_to_json(a).dump() == dataset_to_json(b).dump());
  const LabeledDataset c = generate_dataset({.num_nodes = 500, .num_motifs = 50}, 22);
  CHECK(dataset_to_json(a).dump() != dataset_to_json(c).dump());
}

TEST_CASE("dataset json round-trip") {
  const LabeledDataset a = generate_dataset({.num_nodes = 300, .num_motifs = 30}, 2);
  const LabeledDataset b = dataset_from_json(dataset_to_json(a));
  CHECK(dataset_to_json(b).dump() == dataset_to_json(a).dump());
  CHECK(b.labeled_nodes() == a.labeled_nodes());
  CHECK(b.motifs == a.motifs);
}

TEST_CASE("the dataset graph is connected") {
  const LabeledDataset data = generate_dataset({.num_nodes = 1000, .num_motifs = 100}, 9);
  std::vector<char> seen(static_cast<std::size_t>(data.graph.node_count()), 0);
  std::queue<NodeId> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const NodeId v = frontier.front();
    frontier.pop();
    for (EdgeId e : data.graph.out_edges(v)) {
      const NodeId u = data.graph.edge(e).dst;
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        ++visited;
        frontier.push(u);
      }
    }
  }
  CHECK(visited == data.graph.node_count());
}
