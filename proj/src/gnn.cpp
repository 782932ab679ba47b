#include "elex/gnn.hpp"

#include <cmath>
#include <utility>

#include "elex/graph_io.hpp"
#include "elex/rng.hpp"

namespace elex {

Eigen::MatrixXd NodeScorer::score_all(const HeteroGraph& graph) const {
  Eigen::MatrixXd out;
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    Eigen::VectorXd row = score(graph, v);
    if (out.size() == 0) out.resize(graph.node_count(), row.size());
    out.row(v) = row.transpose();
  }
  return out;
}

namespace {

// Graph compiled against the model's type universe: per-triple edge lists
// with mean normalizers, plus per-type node groups for compact GEMMs.
struct TypedView {
  int n = 0;
  std::vector<int> mtype;                        // node -> model type index
  std::vector<std::vector<int>> nodes_of_type;   // model type -> global ids
  std::vector<int> local_index;                  // global id -> index in its group
  struct TripleEdges {
    std::vector<std::pair<int, int>> edges;      // (global src, local dst)
    std::vector<double> inv_indeg;               // per local dst
  };
  std::vector<TripleEdges> triples;
};

TypedView build_view(const HeteroSageModel& model, const HeteroGraph& graph) {
  TypedView view;
  view.n = graph.node_count();

  std::vector<int> ntype_map(static_cast<std::size_t>(graph.node_type_count()), -1);
  for (NodeTypeId t = 0; t < graph.node_type_count(); ++t) {
    const std::string& name = graph.node_type_name(t);
    for (std::size_t i = 0; i < model.node_types.size(); ++i) {
      if (model.node_types[i] == name) {
        ntype_map[static_cast<std::size_t>(t)] = static_cast<int>(i);
        break;
      }
    }
  }
  std::vector<int> etype_map(static_cast<std::size_t>(graph.edge_type_count()), -1);
  for (EdgeTypeId t = 0; t < graph.edge_type_count(); ++t) {
    const std::string& name = graph.edge_type_name(t);
    for (std::size_t i = 0; i < model.edge_types.size(); ++i) {
      if (model.edge_types[i] == name) {
        etype_map[static_cast<std::size_t>(t)] = static_cast<int>(i);
        break;
      }
    }
  }

  view.mtype.resize(static_cast<std::size_t>(view.n));
  view.local_index.resize(static_cast<std::size_t>(view.n));
  view.nodes_of_type.resize(model.node_types.size());
  for (NodeId v = 0; v < view.n; ++v) {
    const NodeTypeId t = graph.node_type(v);
    if (t == kUntypedNode || ntype_map[static_cast<std::size_t>(t)] < 0) {
      throw Error("gnn: node type '" +
                  (t == kUntypedNode ? std::string("<untyped>") : graph.node_type_name(t)) +
                  "' is not registered with the model (type-universe mismatch)");
    }
    const int mt = ntype_map[static_cast<std::size_t>(t)];
    view.mtype[static_cast<std::size_t>(v)] = mt;
    view.local_index[static_cast<std::size_t>(v)] =
        static_cast<int>(view.nodes_of_type[static_cast<std::size_t>(mt)].size());
    view.nodes_of_type[static_cast<std::size_t>(mt)].push_back(v);
  }

  view.triples.resize(static_cast<std::size_t>(model.triple_count()));
  std::vector<std::vector<int>> indeg(view.triples.size());
  for (const Edge& e : graph.edges()) {
    const int me = etype_map[static_cast<std::size_t>(e.etype)];
    if (me < 0) {
      throw Error("gnn: edge type '" + graph.edge_type_name(e.etype) +
                  "' is not registered with the model (type-universe mismatch)");
    }
    const int s = view.mtype[static_cast<std::size_t>(e.src)];
    const int d = view.mtype[static_cast<std::size_t>(e.dst)];
    const int t = model.triple_index(s, me, d);
    auto& te = view.triples[static_cast<std::size_t>(t)];
    const int local_dst = view.local_index[static_cast<std::size_t>(e.dst)];
    te.edges.emplace_back(e.src, local_dst);
    auto& deg = indeg[static_cast<std::size_t>(t)];
    if (deg.empty()) {
      deg.assign(view.nodes_of_type[static_cast<std::size_t>(d)].size(), 0);
    }
    ++deg[static_cast<std::size_t>(local_dst)];
  }
  for (std::size_t t = 0; t < view.triples.size(); ++t) {
    auto& te = view.triples[t];
    te.inv_indeg.assign(indeg[t].size(), 0.0);
    for (std::size_t i = 0; i < indeg[t].size(); ++i) {
      if (indeg[t][i] > 0) te.inv_indeg[i] = 1.0 / static_cast<double>(indeg[t][i]);
    }
  }
  return view;
}

struct ForwardTrace {
  Eigen::MatrixXd X0;
  std::vector<std::vector<Eigen::MatrixXd>> M;  // [layer][triple], |dst|-local rows
  std::vector<Eigen::MatrixXd> Z;               // [layer] pre-activation, full rows
  Eigen::MatrixXd X1;                           // relu(Z[0])
  Eigen::MatrixXd logits;
};

// Sum over triples of self/neighbor transforms; the mean over an empty
// neighborhood is the zero vector.
Eigen::MatrixXd layer_forward(const HeteroSageModel& model,
                              const HeteroSageModel::Layer& layer,
                              const TypedView& view, const Eigen::MatrixXd& X,
                              std::vector<Eigen::MatrixXd>* M_out) {
  const int n_types = static_cast<int>(model.node_types.size());
  const int n_etypes = static_cast<int>(model.edge_types.size());
  const int d_out = static_cast<int>(layer.triples.front().bias.size());

  // Per-type gathered inputs and accumulated outputs.
  std::vector<Eigen::MatrixXd> X_of_type(static_cast<std::size_t>(n_types));
  std::vector<Eigen::MatrixXd> Z_of_type(static_cast<std::size_t>(n_types));
  for (int ty = 0; ty < n_types; ++ty) {
    const auto& nodes = view.nodes_of_type[static_cast<std::size_t>(ty)];
    Eigen::MatrixXd& Xt = X_of_type[static_cast<std::size_t>(ty)];
    Xt.resize(static_cast<Eigen::Index>(nodes.size()), X.cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Xt.row(static_cast<Eigen::Index>(i)) = X.row(nodes[i]);
    }
    Z_of_type[static_cast<std::size_t>(ty)] =
        Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nodes.size()), d_out);
  }

  for (int s = 0; s < n_types; ++s) {
    for (int e = 0; e < n_etypes; ++e) {
      for (int d = 0; d < n_types; ++d) {
        const int t = model.triple_index(s, e, d);
        const auto& nodes_d = view.nodes_of_type[static_cast<std::size_t>(d)];
        if (M_out) (*M_out)[static_cast<std::size_t>(t)] = Eigen::MatrixXd();
        if (nodes_d.empty()) continue;

        const auto& te = view.triples[static_cast<std::size_t>(t)];
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(
            static_cast<Eigen::Index>(nodes_d.size()), X.cols());
        for (const auto& [u, lv] : te.edges) M.row(lv) += X.row(u);
        for (std::size_t i = 0; i < te.inv_indeg.size(); ++i) {
          if (te.inv_indeg[i] > 0) M.row(static_cast<Eigen::Index>(i)) *= te.inv_indeg[i];
        }

        const TripleWeights& tw = layer.triples[static_cast<std::size_t>(t)];
        Eigen::MatrixXd& Zd = Z_of_type[static_cast<std::size_t>(d)];
        Zd.noalias() += X_of_type[static_cast<std::size_t>(d)] * tw.self_w.transpose();
        Zd.noalias() += M * tw.neigh_w.transpose();
        Zd.rowwise() += tw.bias.transpose();
        if (M_out) (*M_out)[static_cast<std::size_t>(t)] = std::move(M);
      }
    }
  }

  Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(view.n, d_out);
  for (int ty = 0; ty < n_types; ++ty) {
    const auto& nodes = view.nodes_of_type[static_cast<std::size_t>(ty)];
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Z.row(nodes[i]) = Z_of_type[static_cast<std::size_t>(ty)].row(static_cast<Eigen::Index>(i));
    }
  }
  return Z;
}

ForwardTrace run_forward(const HeteroSageModel& model, const TypedView& view,
                         bool keep_aggregates) {
  ForwardTrace trace;
  trace.X0 = Eigen::MatrixXd::Ones(view.n, 1);
  trace.M.resize(model.layers.size());
  trace.Z.resize(model.layers.size());
  Eigen::MatrixXd X = trace.X0;
  for (std::size_t l = 0; l < model.layers.size(); ++l) {
    trace.M[l].resize(static_cast<std::size_t>(model.triple_count()));
    trace.Z[l] = layer_forward(model, model.layers[l], view, X,
                               keep_aggregates ? &trace.M[l] : nullptr);
    if (l == 0) {
      trace.X1 = trace.Z[l].cwiseMax(0.0);
      X = trace.X1;
    } else {
      X = trace.Z[l];
    }
  }
  trace.logits = X * model.head_w.transpose();
  trace.logits.rowwise() += model.head_b.transpose();
  return trace;
}

HeteroSageModel zeros_like(const HeteroSageModel& model) {
  HeteroSageModel zero = model;
  zero.for_each_param([](auto& p) { p.setZero(); });
  return zero;
}

// dZ -> (gradients into `grad_layer`, returns dX); mirrors layer_forward.
Eigen::MatrixXd layer_backward(const HeteroSageModel& model,
                               const HeteroSageModel::Layer& layer,
                               HeteroSageModel::Layer& grad_layer,
                               const TypedView& view, const Eigen::MatrixXd& X,
                               const std::vector<Eigen::MatrixXd>& M,
                               const Eigen::MatrixXd& dZ, bool want_dx) {
  const int n_types = static_cast<int>(model.node_types.size());
  const int n_etypes = static_cast<int>(model.edge_types.size());

  std::vector<Eigen::MatrixXd> X_of_type(static_cast<std::size_t>(n_types));
  std::vector<Eigen::MatrixXd> dZ_of_type(static_cast<std::size_t>(n_types));
  for (int ty = 0; ty < n_types; ++ty) {
    const auto& nodes = view.nodes_of_type[static_cast<std::size_t>(ty)];
    auto& Xt = X_of_type[static_cast<std::size_t>(ty)];
    auto& dZt = dZ_of_type[static_cast<std::size_t>(ty)];
    Xt.resize(static_cast<Eigen::Index>(nodes.size()), X.cols());
    dZt.resize(static_cast<Eigen::Index>(nodes.size()), dZ.cols());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      Xt.row(static_cast<Eigen::Index>(i)) = X.row(nodes[i]);
      dZt.row(static_cast<Eigen::Index>(i)) = dZ.row(nodes[i]);
    }
  }

  Eigen::MatrixXd dX;
  if (want_dx) dX = Eigen::MatrixXd::Zero(view.n, X.cols());

  for (int s = 0; s < n_types; ++s) {
    for (int e = 0; e < n_etypes; ++e) {
      for (int d = 0; d < n_types; ++d) {
        const int t = model.triple_index(s, e, d);
        const auto& nodes_d = view.nodes_of_type[static_cast<std::size_t>(d)];
        if (nodes_d.empty()) continue;

        const auto& te = view.triples[static_cast<std::size_t>(t)];
        const TripleWeights& tw = layer.triples[static_cast<std::size_t>(t)];
        TripleWeights& gw = grad_layer.triples[static_cast<std::size_t>(t)];
        const Eigen::MatrixXd& dZd = dZ_of_type[static_cast<std::size_t>(d)];

        gw.self_w.noalias() += dZd.transpose() * X_of_type[static_cast<std::size_t>(d)];
        gw.neigh_w.noalias() += dZd.transpose() * M[static_cast<std::size_t>(t)];
        gw.bias.noalias() += dZd.colwise().sum().transpose();

        if (want_dx) {
          Eigen::MatrixXd dXd = dZd * tw.self_w;
          for (std::size_t i = 0; i < nodes_d.size(); ++i) {
            dX.row(nodes_d[i]) += dXd.row(static_cast<Eigen::Index>(i));
          }
          Eigen::MatrixXd dM = dZd * tw.neigh_w;
          for (const auto& [u, lv] : te.edges) {
            dX.row(u) += dM.row(lv) * te.inv_indeg[static_cast<std::size_t>(lv)];
          }
        } else {
          // Layer 1 feeds from the constant input; dX is not needed.
        }
      }
    }
  }
  return dX;
}

double softmax_loss(const Eigen::MatrixXd& logits, const std::vector<NodeId>& nodes,
                    const std::vector<std::int8_t>& labels, Eigen::MatrixXd* dlogits) {
  if (nodes.empty()) throw Error("gnn: empty node set for loss evaluation");
  const double inv_n = 1.0 / static_cast<double>(nodes.size());
  double loss = 0;
  if (dlogits) *dlogits = Eigen::MatrixXd::Zero(logits.rows(), logits.cols());
  for (NodeId v : nodes) {
    const Eigen::VectorXd row = logits.row(v).transpose();
    const double m = row.maxCoeff();
    Eigen::VectorXd p = (row.array() - m).exp();
    p /= p.sum();
    const int y = labels[static_cast<std::size_t>(v)];
    loss -= std::log(std::max(p(y), 1e-300)) * inv_n;
    if (dlogits) {
      Eigen::VectorXd g = p;
      g(y) -= 1.0;
      dlogits->row(v) = g.transpose() * inv_n;
    }
  }
  return loss;
}

double accuracy_of(const Eigen::MatrixXd& logits, const std::vector<NodeId>& nodes,
                   const std::vector<std::int8_t>& labels) {
  if (nodes.empty()) return 0.0;
  int correct = 0;
  for (NodeId v : nodes) {
    Eigen::Index pred = 0;
    logits.row(v).maxCoeff(&pred);
    if (static_cast<int>(pred) == labels[static_cast<std::size_t>(v)]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(nodes.size());
}

HeteroSageModel run_backward(const HeteroSageModel& model, const TypedView& view,
                             const ForwardTrace& trace, const Eigen::MatrixXd& dlogits) {
  HeteroSageModel grads = zeros_like(model);
  grads.head_w.noalias() += dlogits.transpose() * trace.Z[1];
  grads.head_b.noalias() += dlogits.colwise().sum().transpose();

  const Eigen::MatrixXd dX2 = dlogits * model.head_w;
  const Eigen::MatrixXd dX1 = layer_backward(model, model.layers[1], grads.layers[1],
                                             view, trace.X1, trace.M[1], dX2, true);
  const Eigen::MatrixXd dZ1 =
      dX1.cwiseProduct((trace.Z[0].array() > 0.0).cast<double>().matrix());
  layer_backward(model, model.layers[0], grads.layers[0], view, trace.X0, trace.M[0],
                 dZ1, false);
  return grads;
}

struct ParamBlock {
  double* data;
  Eigen::Index size;
};

std::vector<ParamBlock> collect_params(HeteroSageModel& model) {
  std::vector<ParamBlock> blocks;
  model.for_each_param([&](auto& p) { blocks.push_back({p.data(), p.size()}); });
  return blocks;
}

}  // namespace

HeteroSageModel init_model(std::vector<std::string> node_types,
                           std::vector<std::string> edge_types, int hidden_dim,
                           std::uint64_t seed) {
  if (hidden_dim < 1) throw Error("init_model: hidden_dim must be >= 1");
  if (node_types.empty() || edge_types.empty()) {
    throw Error("init_model: empty type universe");
  }
  HeteroSageModel model;
  model.hidden_dim = hidden_dim;
  model.node_types = std::move(node_types);
  model.edge_types = std::move(edge_types);

  Rng rng(seed);
  auto glorot = [&rng](Eigen::MatrixXd& m, int rows, int cols) {
    m.resize(rows, cols);
    const double s = std::sqrt(6.0 / static_cast<double>(rows + cols));
    for (int r = 0; r < rows; ++r) {
      for (int c = 0; c < cols; ++c) m(r, c) = rng.uniform_real(-s, s);
    }
  };

  model.layers.resize(2);
  for (int l = 0; l < 2; ++l) {
    const int d_in = l == 0 ? 1 : hidden_dim;
    model.layers[static_cast<std::size_t>(l)].triples.resize(
        static_cast<std::size_t>(model.triple_count()));
    for (auto& tw : model.layers[static_cast<std::size_t>(l)].triples) {
      glorot(tw.self_w, hidden_dim, d_in);
      glorot(tw.neigh_w, hidden_dim, d_in);
      tw.bias = Eigen::VectorXd::Zero(hidden_dim);
    }
  }
  glorot(model.head_w, model.num_labels, hidden_dim);
  model.head_b = Eigen::VectorXd::Zero(model.num_labels);
  return model;
}

Eigen::MatrixXd forward_all(const HeteroSageModel& model, const HeteroGraph& graph) {
  const TypedView view = build_view(model, graph);
  return run_forward(model, view, false).logits;
}

Eigen::VectorXd forward(const HeteroSageModel& model, const HeteroGraph& graph,
                        NodeId node) {
  if (!graph.has_node(node)) throw Error("forward: unknown node id");
  return forward_all(model, graph).row(node).transpose();
}

std::pair<double, double> evaluate(const HeteroSageModel& model,
                                   const LabeledDataset& dataset,
                                   const std::vector<NodeId>& nodes) {
  const Eigen::MatrixXd logits = forward_all(model, dataset.graph);
  const double loss = softmax_loss(logits, nodes, dataset.label, nullptr);
  return {loss, accuracy_of(logits, nodes, dataset.label)};
}

TrainResult train(HeteroSageModel& model, const LabeledDataset& dataset,
                  const TrainConfig& config) {
  const std::vector<NodeId> train_nodes = dataset.nodes_in_split(kSplitTrain);
  const std::vector<NodeId> val_nodes = dataset.nodes_in_split(kSplitVal);
  const std::vector<NodeId> test_nodes = dataset.nodes_in_split(kSplitTest);
  if (train_nodes.empty()) throw Error("train: empty training split");
  if (val_nodes.empty()) throw Error("train: empty validation split");

  const TypedView view = build_view(model, dataset.graph);

  HeteroSageModel adam_m = zeros_like(model);
  HeteroSageModel adam_v = zeros_like(model);
  const auto params = collect_params(model);
  const auto m_blocks = collect_params(adam_m);
  const auto v_blocks = collect_params(adam_v);

  TrainResult result;
  HeteroSageModel best = model;

  // Epoch e metrics reflect the parameters after e updates; the final
  // parameter state is evaluated as the last row.
  for (int epoch = 0; epoch <= config.epochs; ++epoch) {
    const ForwardTrace trace = run_forward(model, view, true);

    Eigen::MatrixXd dlogits;
    EpochMetrics metrics;
    metrics.epoch = epoch;
    metrics.train_loss = softmax_loss(trace.logits, train_nodes, dataset.label,
                                      epoch < config.epochs ? &dlogits : nullptr);
    metrics.train_accuracy = accuracy_of(trace.logits, train_nodes, dataset.label);
    metrics.val_accuracy = accuracy_of(trace.logits, val_nodes, dataset.label);
    if (!std::isfinite(metrics.train_loss)) {
      throw Error("train: loss diverged to a non-finite value at epoch " +
                  std::to_string(epoch));
    }
    result.history.push_back(metrics);
    if (metrics.val_accuracy > result.best_val_accuracy || result.best_epoch < 0) {
      result.best_val_accuracy = metrics.val_accuracy;
      result.best_epoch = epoch;
      best = model;
    }
    if (epoch == config.epochs) break;

    HeteroSageModel grads = run_backward(model, view, trace, dlogits);
    const auto g_blocks = collect_params(grads);

    const double t = static_cast<double>(epoch + 1);
    const double bc1 = 1.0 - std::pow(config.beta1, t);
    const double bc2 = 1.0 - std::pow(config.beta2, t);
    for (std::size_t b = 0; b < params.size(); ++b) {
      double* p = params[b].data;
      double* m = m_blocks[b].data;
      double* v = v_blocks[b].data;
      const double* g = g_blocks[b].data;
      for (Eigen::Index i = 0; i < params[b].size; ++i) {
        m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
        v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
        const double m_hat = m[i] / bc1;
        const double v_hat = v[i] / bc2;
        p[i] -= config.learning_rate * m_hat / (std::sqrt(v_hat) + config.epsilon);
        if (!std::isfinite(p[i])) {
          throw Error("train: non-finite parameter after update at epoch " +
                      std::to_string(epoch));
        }
      }
    }
  }

  model = std::move(best);
  if (!test_nodes.empty()) {
    const Eigen::MatrixXd logits = forward_all(model, dataset.graph);
    result.test_accuracy = accuracy_of(logits, test_nodes, dataset.label);
  }
  return result;
}

HeteroSageModel loss_gradients(const HeteroSageModel& model, const HeteroGraph& graph,
                               NodeId node, int label) {
  const TypedView view = build_view(model, graph);
  const ForwardTrace trace = run_forward(model, view, true);
  std::vector<std::int8_t> labels(static_cast<std::size_t>(graph.node_count()), 0);
  labels[static_cast<std::size_t>(node)] = static_cast<std::int8_t>(label);
  Eigen::MatrixXd dlogits;
  softmax_loss(trace.logits, {node}, labels, &dlogits);
  return run_backward(model, view, trace, dlogits);
}

double gradient_check(const HeteroSageModel& model, const HeteroGraph& graph,
                      NodeId node, int label, double step) {
  HeteroSageModel analytic = loss_gradients(model, graph, node, label);
  HeteroSageModel probe = model;
  const auto a_blocks = collect_params(analytic);
  const auto p_blocks = collect_params(probe);

  std::vector<std::int8_t> labels(static_cast<std::size_t>(graph.node_count()), 0);
  labels[static_cast<std::size_t>(node)] = static_cast<std::int8_t>(label);
  auto loss_at = [&]() {
    const Eigen::MatrixXd logits = forward_all(probe, graph);
    return softmax_loss(logits, {node}, labels, nullptr);
  };

  double max_rel = 0;
  for (std::size_t b = 0; b < p_blocks.size(); ++b) {
    for (Eigen::Index i = 0; i < p_blocks[b].size; ++i) {
      double& p = p_blocks[b].data[i];
      const double saved = p;
      p = saved + step;
      const double up = loss_at();
      p = saved - step;
      const double down = loss_at();
      p = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = a_blocks[b].data[i];
      const double rel =
          std::abs(a - numeric) / std::max({1e-2, std::abs(a), std::abs(numeric)});
      max_rel = std::max(max_rel, rel);
    }
  }
  return max_rel;
}

// --- serialization ----------------------------------------------------------

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const nlohmann::json& doc, Eigen::Index rows,
                                 Eigen::Index cols, const std::string& what) {
  if (!doc.is_array() || static_cast<Eigen::Index>(doc.size()) != rows) {
    throw Error("model json: bad shape for " + what);
  }
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = doc[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error("model json: bad shape for " + what);
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vector_from_json(const nlohmann::json& doc, Eigen::Index size,
                                 const std::string& what) {
  if (!doc.is_array() || static_cast<Eigen::Index>(doc.size()) != size) {
    throw Error("model json: bad shape for " + what);
  }
  Eigen::VectorXd v(size);
  for (Eigen::Index i = 0; i < size; ++i) v(i) = doc[static_cast<std::size_t>(i)].get<double>();
  return v;
}

}  // namespace

void save_model(const std::string& path, const HeteroSageModel& model,
                const nlohmann::json* config) {
  nlohmann::json doc;
  doc["hidden_dim"] = model.hidden_dim;
  doc["node_types"] = model.node_types;
  doc["edge_types"] = model.edge_types;

  nlohmann::json layers = nlohmann::json::array();
  for (const auto& layer : model.layers) {
    nlohmann::json triples = nlohmann::json::array();
    for (std::size_t s = 0; s < model.node_types.size(); ++s) {
      for (std::size_t e = 0; e < model.edge_types.size(); ++e) {
        for (std::size_t d = 0; d < model.node_types.size(); ++d) {
          const int t = model.triple_index(static_cast<int>(s), static_cast<int>(e),
                                           static_cast<int>(d));
          const TripleWeights& tw = layer.triples[static_cast<std::size_t>(t)];
          nlohmann::json entry;
          entry["src"] = model.node_types[s];
          entry["etype"] = model.edge_types[e];
          entry["dst"] = model.node_types[d];
          entry["self_w"] = matrix_to_json(tw.self_w);
          entry["neigh_w"] = matrix_to_json(tw.neigh_w);
          entry["bias"] = vector_to_json(tw.bias);
          triples.push_back(std::move(entry));
        }
      }
    }
    nlohmann::json layer_doc;
    layer_doc["triples"] = std::move(triples);
    layers.push_back(std::move(layer_doc));
  }
  doc["layers"] = std::move(layers);
  doc["head"] = {{"w", matrix_to_json(model.head_w)}, {"bias", vector_to_json(model.head_b)}};
  if (config != nullptr) doc["config"] = *config;
  write_json_file(path, doc);
}

HeteroSageModel load_model(const std::string& path) {
  const nlohmann::json doc = read_json_file(path);
  HeteroSageModel model;
  try {
    model.hidden_dim = doc.at("hidden_dim").get<int>();
    model.node_types = doc.at("node_types").get<std::vector<std::string>>();
    model.edge_types = doc.at("edge_types").get<std::vector<std::string>>();

    const auto& layers = doc.at("layers");
    model.layers.resize(layers.size());
    for (std::size_t l = 0; l < layers.size(); ++l) {
      const Eigen::Index d_in = l == 0 ? 1 : model.hidden_dim;
      auto& layer = model.layers[l];
      layer.triples.resize(static_cast<std::size_t>(model.triple_count()));
      std::vector<char> seen(layer.triples.size(), 0);
      for (const auto& entry : layers[l].at("triples")) {
        const std::string src = entry.at("src").get<std::string>();
        const std::string etype = entry.at("etype").get<std::string>();
        const std::string dst = entry.at("dst").get<std::string>();
        int si = -1, ei = -1, di = -1;
        for (std::size_t i = 0; i < model.node_types.size(); ++i) {
          if (model.node_types[i] == src) si = static_cast<int>(i);
          if (model.node_types[i] == dst) di = static_cast<int>(i);
        }
        for (std::size_t i = 0; i < model.edge_types.size(); ++i) {
          if (model.edge_types[i] == etype) ei = static_cast<int>(i);
        }
        if (si < 0 || ei < 0 || di < 0) {
          throw Error("model json: triple references unknown type (" + src + "," +
                      etype + "," + dst + ")");
        }
        const int t = model.triple_index(si, ei, di);
        if (seen[static_cast<std::size_t>(t)]) {
          throw Error("model json: duplicate triple (" + src + "," + etype + "," + dst + ")");
        }
        seen[static_cast<std::size_t>(t)] = 1;
        TripleWeights& tw = layer.triples[static_cast<std::size_t>(t)];
        const std::string what = "triple (" + src + "," + etype + "," + dst + ")";
        tw.self_w = matrix_from_json(entry.at("self_w"), model.hidden_dim, d_in, what);
        tw.neigh_w = matrix_from_json(entry.at("neigh_w"), model.hidden_dim, d_in, what);
        tw.bias = vector_from_json(entry.at("bias"), model.hidden_dim, what);
      }
      for (std::size_t t = 0; t < seen.size(); ++t) {
        if (!seen[t]) throw Error("model json: missing triple in layer " + std::to_string(l));
      }
    }

    const auto& head = doc.at("head");
    const auto& w = head.at("w");
    model.num_labels = static_cast<int>(w.size());
    model.head_w = matrix_from_json(w, model.num_labels, model.hidden_dim, "head");
    model.head_b = vector_from_json(head.at("bias"), model.num_labels, "head bias");
  } catch (const nlohmann::json::exception& e) {
    throw Error("model json: " + std::string(e.what()));
  }
  if (model.layers.size() != 2) throw Error("model json: expected 2 layers");
  return model;
}

}  // namespace elex
