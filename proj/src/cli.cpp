#include "elex/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

#include "elex/beam_search.hpp"
#include "elex/dataset.hpp"
#include "elex/gnn.hpp"
#include "elex/graph_io.hpp"
#include "elex/metrics.hpp"
#include "elex/results_io.hpp"

namespace elex {

namespace {

constexpr std::uint64_t kEmissionStream = 0x9e11;

std::string csv_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

}  // namespace

void cmd_gen_dataset(const GenDatasetArgs& args) {
  if (args.out.empty()) throw Error("gen-dataset: --out is required");
  DatasetConfig config;
  config.num_nodes = args.nodes;
  config.num_motifs = args.motifs;
  config.edges_per_node = args.m_attach;

  const LabeledDataset dataset = generate_dataset(config, args.seed);

  nlohmann::json config_doc;
  config_doc["command"] = "gen-dataset";
  config_doc["nodes"] = args.nodes;
  config_doc["motifs"] = args.motifs;
  config_doc["m_attach"] = args.m_attach;
  config_doc["seed"] = args.seed;
  save_dataset(args.out, dataset, &config_doc);
  std::cerr << "gen-dataset: wrote " << dataset.graph.node_count() << " nodes, "
            << dataset.graph.edge_count() << " edges to " << args.out << "\n";
}

void cmd_train(const TrainArgs& args) {
  if (args.dataset.empty()) throw Error("train: --dataset is required");
  if (args.out.empty()) throw Error("train: --out is required");
  const std::string metrics_path =
      args.metrics_out.empty() ? args.out + ".metrics.csv" : args.metrics_out;

  const LabeledDataset dataset = load_dataset(args.dataset);
  HeteroSageModel model = init_model(dataset.graph.node_type_names(),
                                     dataset.graph.edge_type_names(), args.hidden,
                                     args.seed);
  TrainConfig config;
  config.epochs = args.epochs;
  config.learning_rate = args.lr;
  const TrainResult result = train(model, dataset, config);

  std::ofstream metrics(metrics_path, std::ios::binary);
  if (!metrics) throw Error("cannot open '" + metrics_path + "' for writing");
  metrics << "epoch,train_loss,train_accuracy,val_accuracy\n";
  for (const EpochMetrics& row : result.history) {
    metrics << row.epoch << ',' << csv_number(row.train_loss) << ','
            << csv_number(row.train_accuracy) << ',' << csv_number(row.val_accuracy)
            << '\n';
  }
  metrics.close();

  nlohmann::json config_doc;
  config_doc["command"] = "train";
  config_doc["dataset"] = args.dataset;
  config_doc["epochs"] = args.epochs;
  config_doc["lr"] = args.lr;
  config_doc["hidden"] = args.hidden;
  config_doc["seed"] = args.seed;
  config_doc["best_epoch"] = result.best_epoch;
  config_doc["best_val_accuracy"] = result.best_val_accuracy;
  config_doc["test_accuracy"] = result.test_accuracy;
  save_model(args.out, model, &config_doc);

  std::cerr << "train: best val accuracy " << result.best_val_accuracy << " at epoch "
            << result.best_epoch << ", test accuracy " << result.test_accuracy << "\n";
}

void cmd_explain(const ExplainArgs& args) {
  if (args.model.empty()) throw Error("explain: --model is required");
  if (args.out.empty()) throw Error("explain: --out is required");
  if (args.scorer != "gnn" && args.scorer != "fidelity") {
    throw Error("explain: --scorer must be gnn or fidelity");
  }
  if (args.scorer == "fidelity" && args.validation.empty()) {
    throw Error("explain: the fidelity scorer needs --validation");
  }

  const HeteroSageModel model = load_model(args.model);
  const ModelScorer scorer(model);
  const GraphSynthesizer synth(model.node_types, model.edge_types);

  ScoreConfig score_config;
  score_config.lambda = args.lambda;
  score_config.graphs_per_ce = args.graphs_per_ce;
  score_config.aggregation = aggregation_from_string(args.aggr);
  score_config.label = args.label;

  BeamConfig beam_config;
  beam_config.iterations = args.iterations;
  beam_config.beam_width = args.beam_width;
  beam_config.classes = model.node_types;
  beam_config.edge_types = model.edge_types;
  beam_config.class_to_explain = args.root_class;
  beam_config.workers = args.workers;
  beam_config.seed = args.seed;

  LabeledDataset validation;
  FidelityContext validation_context;
  ScoreFn score;
  if (args.scorer == "gnn") {
    score = [&](const CE& ce, std::uint64_t seed) {
      return score_ce_gnn(ce, scorer, synth, score_config, seed);
    };
  } else {
    validation = load_dataset(args.validation);
    validation_context = make_fidelity_context(validation, scorer);
    score = [&](const CE& ce, std::uint64_t seed) {
      ScoredCandidate cand = score_ce_fidelity(ce, validation_context);
      cand.seed = seed;
      return cand;
    };
  }

  std::vector<ScoredCandidate> beam = beam_search(beam_config, score);

  LabeledDataset test;
  FidelityContext test_context;
  const bool have_test = !args.test.empty();
  if (have_test) {
    test = load_dataset(args.test);
    test_context = make_fidelity_context(test, scorer);
  }
  const MotifSpec house = house_motif();

  ResultsFile results;
  results.config["command"] = "explain";
  results.config["model"] = args.model;
  results.config["validation"] = args.validation;
  results.config["test"] = args.test;
  results.config["scorer"] = args.scorer;
  results.config["beam_width"] = args.beam_width;
  results.config["iterations"] = args.iterations;
  results.config["graphs_per_ce"] = args.graphs_per_ce;
  results.config["lambda"] = args.lambda;
  results.config["aggr"] = args.aggr;
  results.config["label"] = args.label;
  results.config["root_class"] = args.root_class;
  results.config["top"] = args.top;
  results.config["seed"] = args.seed;

  const std::size_t emit = std::min<std::size_t>(beam.size(),
                                                 static_cast<std::size_t>(std::max(args.top, 0)));
  for (std::size_t i = 0; i < emit; ++i) {
    ResultEntry entry;
    entry.candidate = beam[i];

    ScoredCandidate synth_info;
    if (entry.candidate.has_gamma) {
      synth_info = entry.candidate;  // re-synthesis below reproduces the batch
    } else {
      synth_info = score_ce_gnn(entry.candidate.ce, scorer, synth, score_config,
                                derive_seed(args.seed, kEmissionStream, i));
      entry.candidate.gamma = synth_info.gamma;
      entry.candidate.has_gamma = true;
      entry.candidate.per_graph_outputs = synth_info.per_graph_outputs;
      entry.candidate.seed = synth_info.seed;
    }
    const std::vector<SynthesisOutcome> batch =
        synth.create_batch(entry.candidate.ce, score_config.graphs_per_ce, synth_info.seed);
    EvidenceGraph evidence;
    evidence.graph = batch[static_cast<std::size_t>(synth_info.best_graph_index)].graph;
    evidence.root = batch[static_cast<std::size_t>(synth_info.best_graph_index)].root;
    evidence.output =
        synth_info.per_graph_outputs[static_cast<std::size_t>(synth_info.best_graph_index)];
    entry.evidence = std::move(evidence);

    if (args.root_class == house.anchor_type) {
      entry.explanation_accuracy = explanation_accuracy(entry.candidate.ce, house);
    }
    if (have_test) {
      entry.test_fidelity = fidelity_of(test_context, entry.candidate.ce);
    }
    results.entries.push_back(std::move(entry));
  }

  save_results(args.out, results);
  if (!args.csv.empty()) write_results_csv(args.csv, results);
  std::cerr << "explain: emitted " << results.entries.size() << " of " << beam.size()
            << " candidates to " << args.out << "\n";
}

void cmd_eval(const EvalArgs& args) {
  if (args.ce.empty()) throw Error("eval: --ce is required");
  if (args.dataset.empty()) throw Error("eval: --dataset is required");
  if (args.out.empty()) throw Error("eval: --out is required");

  const CE ce = parse(args.ce);
  const LabeledDataset dataset = load_dataset(args.dataset);

  nlohmann::json doc;
  doc["ce"] = render(ce);
  doc["length"] = length(ce);

  nlohmann::json config_doc;
  config_doc["command"] = "eval";
  config_doc["ce"] = args.ce;
  config_doc["dataset"] = args.dataset;
  config_doc["model"] = args.model;
  config_doc["graphs_per_ce"] = args.graphs_per_ce;
  config_doc["lambda"] = args.lambda;
  config_doc["aggr"] = args.aggr;
  config_doc["label"] = args.label;
  config_doc["seed"] = args.seed;
  doc["config"] = std::move(config_doc);

  const MotifSpec house = house_motif();
  try {
    doc["ea"] = explanation_accuracy(ce, house);
    doc["is_ground_truth"] = is_ground_truth_ce(ce, house);
  } catch (const Error&) {
    // CE is not anchored at the motif's root class; EA does not apply.
  }

  if (!args.model.empty()) {
    const HeteroSageModel model = load_model(args.model);
    const ModelScorer scorer(model);
    const FidelityContext context = make_fidelity_context(dataset, scorer);
    doc["fidelity"] = fidelity_of(context, ce);

    ScoreConfig score_config;
    score_config.lambda = args.lambda;
    score_config.graphs_per_ce = args.graphs_per_ce;
    score_config.aggregation = aggregation_from_string(args.aggr);
    score_config.label = args.label;
    const GraphSynthesizer synth(model.node_types, model.edge_types);
    const ScoredCandidate cand = score_ce_gnn(ce, scorer, synth, score_config, args.seed);
    doc["gamma"] = cand.gamma;
    doc["score"] = cand.score;
  }

  write_json_file(args.out, doc);
  std::cerr << "eval: wrote metrics for '" << render(ce) << "' to " << args.out << "\n";
}

void cmd_ablate(const AblateArgs& args) {
  if (args.results.empty()) throw Error("ablate: --results is required");
  if (args.model.empty()) throw Error("ablate: --model is required");
  if (args.out.empty()) throw Error("ablate: --out is required");

  const ResultsFile results = load_results(args.results);
  const ResultEntry* top = nullptr;
  for (const ResultEntry& entry : results.entries) {
    if (entry.evidence) {
      top = &entry;
      break;
    }
  }
  if (top == nullptr) {
    throw Error("ablate: results file contains no synthesized evidence graphs");
  }

  const HeteroSageModel model = load_model(args.model);
  const ModelScorer scorer(model);
  const std::vector<AblationRow> rows =
      edge_type_ablation(top->evidence->graph, top->evidence->root, scorer, args.label,
                         motif_type_pairs(house_motif()));
  write_ablation_csv(args.out, rows);
  std::cerr << "ablate: wrote " << rows.size() << " rows to " << args.out << "\n";
}

}  // namespace elex
