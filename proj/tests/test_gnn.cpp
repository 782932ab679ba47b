#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "elex/dataset.hpp"
#include "elex/gnn.hpp"
#include "elex/graph_io.hpp"
#include "oracles.hpp"

using namespace elex;

namespace {

HeteroGraph build_house() {
  HeteroGraph g;
  const NodeTypeId a = g.register_node_type("A");
  const NodeTypeId b = g.register_node_type("B");
  const NodeTypeId c = g.register_node_type("C");
  const EdgeTypeId to = g.register_edge_type("to");
  g.add_node(a);
  g.add_node(b);
  g.add_node(b);
  g.add_node(c);
  g.add_node(c);
  auto link = [&](NodeId u, NodeId v) {
    g.add_edge(u, to, v);
    g.add_edge(v, to, u);
  };
  link(3, 4);
  link(3, 1);
  link(4, 2);
  link(1, 2);
  link(1, 0);
  link(2, 0);
  return g;
}

const std::vector<std::string> kTypes = {"A", "B", "C"};
const std::vector<std::string> kEdges = {"to"};

std::filesystem::path temp_file(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "elex_gnn_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

double max_param_delta(HeteroSageModel& a, HeteroSageModel& b) {
  std::vector<std::pair<double*, Eigen::Index>> pa, pb;
  a.for_each_param([&](auto& p) { pa.emplace_back(p.data(), p.size()); });
  b.for_each_param([&](auto& p) { pb.emplace_back(p.data(), p.size()); });
  double delta = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (Eigen::Index j = 0; j < pa[i].second; ++j) {
      delta = std::max(delta, std::abs(pa[i].first[j] - pb[i].first[j]));
    }
  }
  return delta;
}

}  // namespace

TEST_CASE("all-zero weights yield zero logits") {
  HeteroSageModel model = init_model(kTypes, kEdges, 8, 1);
  model.for_each_param([](auto& p) { p.setZero(); });
  const HeteroGraph house = build_house();
  for (NodeId v = 0; v < house.node_count(); ++v) {
    CHECK(forward(model, house, v).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("isolated node matches the closed-form self path") {
  HeteroSageModel model = init_model({"A"}, {"to"}, 4, 9);
  HeteroGraph g;
  g.register_node_type("A");
  g.register_edge_type("to");
  g.add_node(0);

  const auto& l1 = model.layers[0].triples[0];
  const auto& l2 = model.layers[1].triples[0];
  const Eigen::VectorXd h1 =
      (l1.self_w * Eigen::VectorXd::Ones(1) + l1.bias).cwiseMax(0.0);
  const Eigen::VectorXd h2 = l2.self_w * h1 + l2.bias;
  const Eigen::VectorXd expected = model.head_w * h2 + model.head_b;

  const Eigen::VectorXd actual = forward(model, g, 0);
  CHECK((actual - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("forward matches the plain-loop reimplementation") {
  const HeteroGraph house = build_house();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const HeteroSageModel model = init_model(kTypes, kEdges, 16, seed);
    for (NodeId v = 0; v < house.node_count(); ++v) {
      const Eigen::VectorXd fast = forward(model, house, v);
      const std::vector<double> slow = oracle::naive_forward(model, house, v);
      for (int l = 0; l < model.num_labels; ++l) {
        const double scale = std::max({1.0, std::abs(fast(l)), std::abs(slow[l])});
        CHECK(std::abs(fast(l) - slow[static_cast<std::size_t>(l)]) / scale < 1e-6);
      }
    }
  }

  Rng rng(33);
  for (int trial = 0; trial < 10; ++trial) {
    const HeteroGraph g = oracle::random_graph(3 + static_cast<int>(rng.uniform_below(10)),
                                               static_cast<int>(rng.uniform_below(25)), 3, rng);
    const HeteroSageModel model = init_model(kTypes, kEdges, 8, rng.next_u64());
    const Eigen::MatrixXd all = forward_all(model, g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      const std::vector<double> slow = oracle::naive_forward(model, g, v);
      for (int l = 0; l < model.num_labels; ++l) {
        const double scale = std::max({1.0, std::abs(all(v, l)), std::abs(slow[l])});
        CHECK(std::abs(all(v, l) - slow[static_cast<std::size_t>(l)]) / scale < 1e-6);
      }
    }
  }
}

TEST_CASE("forward is invariant under node relabeling") {
  Rng rng(17);
  const HeteroGraph g = oracle::random_graph(12, 30, 3, rng);
  const HeteroSageModel model = init_model(kTypes, kEdges, 8, 5);
  const Eigen::MatrixXd before = forward_all(model, g);

  std::vector<NodeId> perm(static_cast<std::size_t>(g.node_count()));
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<NodeId>(i);
  rng.shuffle(perm);

  HeteroGraph relabeled;
  for (const std::string& name : g.node_type_names()) relabeled.register_node_type(name);
  for (const std::string& name : g.edge_type_names()) relabeled.register_edge_type(name);
  std::vector<NodeId> new_id(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    new_id[static_cast<std::size_t>(perm[i])] = static_cast<NodeId>(i);
  }
  for (std::size_t i = 0; i < perm.size(); ++i) relabeled.add_node(g.node_type(perm[i]));
  for (const Edge& e : g.edges()) {
    relabeled.add_edge(new_id[static_cast<std::size_t>(e.src)], e.etype,
                       new_id[static_cast<std::size_t>(e.dst)]);
  }

  const Eigen::MatrixXd after = forward_all(model, relabeled);
  for (NodeId v = 0; v < g.node_count(); ++v) {
    CHECK((before.row(v) - after.row(new_id[static_cast<std::size_t>(v)]))
              .cwiseAbs()
              .maxCoeff() < 1e-9);
  }
}

TEST_CASE("logits depend only on the 2-hop in-neighborhood") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const HeteroGraph g = oracle::random_graph(14, 20, 3, rng);
    const HeteroSageModel model = init_model(kTypes, kEdges, 8, rng.next_u64());
    const NodeId target = 0;

    // nodes with a directed path of length <= 2 into the target
    std::vector<char> influences(static_cast<std::size_t>(g.node_count()), 0);
    influences[0] = 1;
    for (const Edge& e : g.edges()) {
      if (e.dst == target) influences[static_cast<std::size_t>(e.src)] = 1;
    }
    for (const Edge& e : g.edges()) {
      if (influences[static_cast<std::size_t>(e.dst)] && e.dst != target) {
        influences[static_cast<std::size_t>(e.src)] = 1;
      }
    }
    NodeId removable = -1;
    for (NodeId v = g.node_count() - 1; v > 0; --v) {
      if (!influences[static_cast<std::size_t>(v)]) {
        removable = v;
        break;
      }
    }
    if (removable < 0) continue;

    HeteroGraph smaller;
    for (const std::string& name : g.node_type_names()) smaller.register_node_type(name);
    for (const std::string& name : g.edge_type_names()) smaller.register_edge_type(name);
    std::vector<NodeId> new_id(static_cast<std::size_t>(g.node_count()), -1);
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (v == removable) continue;
      new_id[static_cast<std::size_t>(v)] = smaller.add_node(g.node_type(v));
    }
    for (const Edge& e : g.edges()) {
      if (e.src == removable || e.dst == removable) continue;
      smaller.add_edge(new_id[static_cast<std::size_t>(e.src)], e.etype,
                       new_id[static_cast<std::size_t>(e.dst)]);
    }

    const Eigen::VectorXd before = forward(model, g, target);
    const Eigen::VectorXd after = forward(model, smaller, target);
    CHECK((before - after).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("type-universe mismatches are reported") {
  const HeteroSageModel model = init_model({"A", "B"}, {"to"}, 4, 2);
  HeteroGraph g;
  g.add_node(g.register_node_type("Z"));
  g.register_edge_type("to");
  CHECK_THROWS_AS(forward_all(model, g), Error);
}

TEST_CASE("training improves a tiny dataset and respects lr=0 / epochs=0") {
  const LabeledDataset data = generate_dataset({.num_nodes = 300, .num_motifs = 30}, 7);

  SUBCASE("learning") {
    HeteroSageModel model =
        init_model(data.graph.node_type_names(), data.graph.edge_type_names(), 16, 1);
    TrainConfig config;
    config.epochs = 120;
    const TrainResult result = train(model, data, config);
    CHECK(result.test_accuracy >= 0.9);
    CHECK(result.history.front().train_loss > result.history.back().train_loss);
    CHECK(result.best_epoch >= 0);
    CHECK(static_cast<int>(result.history.size()) == config.epochs + 1);
  }

  SUBCASE("lr = 0 leaves parameters unchanged") {
    HeteroSageModel model =
        init_model(data.graph.node_type_names(), data.graph.edge_type_names(), 8, 1);
    HeteroSageModel reference = model;
    TrainConfig config;
    config.epochs = 5;
    config.learning_rate = 0.0;
    train(model, data, config);
    CHECK(max_param_delta(model, reference) == 0.0);
  }

  SUBCASE("epochs = 0 returns the initialization") {
    HeteroSageModel model =
        init_model(data.graph.node_type_names(), data.graph.edge_type_names(), 8, 1);
    HeteroSageModel reference = model;
    TrainConfig config;
    config.epochs = 0;
    const TrainResult result = train(model, data, config);
    CHECK(max_param_delta(model, reference) == 0.0);
    CHECK(result.history.size() == 1);
  }
}

TEST_CASE("analytic gradients match central differences") {
  const HeteroGraph house = build_house();
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const HeteroSageModel model = init_model(kTypes, kEdges, 4, seed);
    CHECK(gradient_check(model, house, 1, 1) < 1e-4);
  }
}

TEST_CASE("a corrupted gradient is caught by the finite-difference comparison") {
  const HeteroGraph house = build_house();
  const HeteroSageModel model = init_model(kTypes, kEdges, 4, 3);
  HeteroSageModel corrupted = loss_gradients(model, house, 1, 1);
  corrupted.for_each_param([](auto& p) { p = -p; });  // sign flip

  // finite differences, same recipe as gradient_check
  HeteroSageModel probe = model;
  std::vector<std::pair<double*, Eigen::Index>> p_blocks, a_blocks;
  probe.for_each_param([&](auto& p) { p_blocks.emplace_back(p.data(), p.size()); });
  corrupted.for_each_param([&](auto& p) { a_blocks.emplace_back(p.data(), p.size()); });
  double max_rel = 0;
  const double h = 1e-4;
  auto loss_at = [&]() {
    const Eigen::VectorXd logits = forward(probe, house, 1);
    const double m = logits.maxCoeff();
    const Eigen::VectorXd p = (logits.array() - m).exp();
    return -std::log(p(1) / p.sum());
  };
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    for (Eigen::Index i = 0; i < p_blocks[b].second; ++i) {
      double& p = p_blocks[b].first[i];
      const double saved = p;
      p = saved + h;
      const double up = loss_at();
      p = saved - h;
      const double down = loss_at();
      p = saved;
      const double numeric = (up - down) / (2 * h);
      const double a = a_blocks[b].first[i];
      max_rel = std::max(max_rel,
                         std::abs(a - numeric) / std::max({1e-2, std::abs(a), std::abs(numeric)}));
    }
  }
  CHECK(max_rel > 0.5);
}

TEST_CASE("model json round-trip preserves forward outputs") {
  const HeteroSageModel model = init_model(kTypes, kEdges, 8, 11);
  const auto path = temp_file("model_roundtrip.json");
  save_model(path.string(), model);
  const HeteroSageModel loaded = load_model(path.string());

  const HeteroGraph house = build_house();
  const Eigen::MatrixXd a = forward_all(model, house);
  const Eigen::MatrixXd b = forward_all(loaded, house);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
  CHECK(loaded.hidden_dim == model.hidden_dim);
  CHECK(loaded.node_types == model.node_types);
}

TEST_CASE("model json validates triples and ignores unknown fields") {
  const HeteroSageModel model = init_model(kTypes, kEdges, 4, 12);
  const auto path = temp_file("model_tamper.json");
  save_model(path.string(), model);
  nlohmann::json doc = read_json_file(path.string());

  SUBCASE("missing triple") {
    doc["layers"][0]["triples"].erase(0);
    write_json_file(path.string(), doc);
    CHECK_THROWS_AS(load_model(path.string()), Error);
  }
  SUBCASE("unknown extra field is ignored") {
    doc["future_extension"] = {{"x", 1}};
    write_json_file(path.string(), doc);
    const HeteroSageModel loaded = load_model(path.string());
    const HeteroGraph house = build_house();
    CHECK((forward_all(loaded, house) - forward_all(model, house)).cwiseAbs().maxCoeff() ==
          0.0);
  }
  SUBCASE("bad shape") {
    doc["layers"][1]["triples"][0]["bias"] = {1.0};
    write_json_file(path.string(), doc);
    CHECK_THROWS_AS(load_model(path.string()), Error);
  }
}
