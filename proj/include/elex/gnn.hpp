#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "elex/dataset.hpp"
#include "elex/hetero_graph.hpp"

namespace elex {

// Black-box scoring contract used by the explainer: per-label raw logits for
// one node. Implementations must be deterministic and safe for concurrent
// read-only use.
class NodeScorer {
 public:
  virtual ~NodeScorer() = default;
  virtual Eigen::VectorXd score(const HeteroGraph& graph, NodeId node) const = 0;
  // One row of logits per node; the default just loops.
  virtual Eigen::MatrixXd score_all(const HeteroGraph& graph) const;
};

struct TripleWeights {
  Eigen::MatrixXd self_w;   // d_out x d_in
  Eigen::MatrixXd neigh_w;  // d_out x d_in
  Eigen::VectorXd bias;     // d_out
};

// Two GraphSAGE-style layers with one weight set per
// (source type, edge type, destination type) triple, ReLU after layer 1,
// and a shared linear head to the label logits. Node input is the constant
// feature 1.
struct HeteroSageModel {
  int hidden_dim = 16;
  int num_labels = 2;
  std::vector<std::string> node_types;
  std::vector<std::string> edge_types;

  struct Layer {
    std::vector<TripleWeights> triples;  // indexed by triple_index()
  };
  std::vector<Layer> layers;
  Eigen::MatrixXd head_w;  // num_labels x hidden_dim
  Eigen::VectorXd head_b;  // num_labels

  int triple_count() const {
    return static_cast<int>(node_types.size() * edge_types.size() * node_types.size());
  }
  int triple_index(int src_type, int edge_type, int dst_type) const {
    return (src_type * static_cast<int>(edge_types.size()) + edge_type) *
               static_cast<int>(node_types.size()) +
           dst_type;
  }

  // Applies fn to every parameter matrix/vector in a pinned order.
  template <typename Fn>
  void for_each_param(Fn&& fn) {
    for (auto& layer : layers) {
      for (auto& tw : layer.triples) {
        fn(tw.self_w);
        fn(tw.neigh_w);
        fn(tw.bias);
      }
    }
    fn(head_w);
    fn(head_b);
  }
};

// Glorot-uniform initialization over the full (src, edge, dst) cross product.
HeteroSageModel init_model(std::vector<std::string> node_types,
                           std::vector<std::string> edge_types, int hidden_dim,
                           std::uint64_t seed);

// Full-graph forward: one logits row per node. Graph types are matched to
// model types by name; an unknown name signals a train/score universe
// mismatch and throws.
Eigen::MatrixXd forward_all(const HeteroSageModel& model, const HeteroGraph& graph);
Eigen::VectorXd forward(const HeteroSageModel& model, const HeteroGraph& graph,
                        NodeId node);

class ModelScorer final : public NodeScorer {
 public:
  explicit ModelScorer(const HeteroSageModel& model) : model_(&model) {}
  Eigen::VectorXd score(const HeteroGraph& graph, NodeId node) const override {
    return forward(*model_, graph, node);
  }
  Eigen::MatrixXd score_all(const HeteroGraph& graph) const override {
    return forward_all(*model_, graph);
  }

 private:
  const HeteroSageModel* model_;
};

struct TrainConfig {
  int epochs = 1000;
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct EpochMetrics {
  int epoch = 0;
  double train_loss = 0;
  double train_accuracy = 0;
  double val_accuracy = 0;
};

struct TrainResult {
  std::vector<EpochMetrics> history;
  int best_epoch = -1;
  double best_val_accuracy = 0;
  double test_accuracy = 0;
};

// Full-batch Adam on the cross-entropy over labeled training nodes. The
// model is left at the parameters of the epoch with the best validation
// accuracy (earliest on ties). Throws on a non-finite loss.
TrainResult train(HeteroSageModel& model, const LabeledDataset& dataset,
                  const TrainConfig& config);

// Mean cross-entropy loss and label-accuracy of the model over `nodes`.
std::pair<double, double> evaluate(const HeteroSageModel& model,
                                   const LabeledDataset& dataset,
                                   const std::vector<NodeId>& nodes);

// Analytic gradients of the single-node cross-entropy loss, in a
// model-shaped container.
HeteroSageModel loss_gradients(const HeteroSageModel& model, const HeteroGraph& graph,
                               NodeId node, int label);

// Max relative error between analytic and central finite-difference
// gradients of the single-node loss.
double gradient_check(const HeteroSageModel& model, const HeteroGraph& graph,
                      NodeId node, int label, double step = 1e-4);

void save_model(const std::string& path, const HeteroSageModel& model,
                const nlohmann::json* config = nullptr);
HeteroSageModel load_model(const std::string& path);

}  // namespace elex
