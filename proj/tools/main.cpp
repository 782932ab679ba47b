#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "elex/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Global GNN explanations via EL class expressions"};
  app.require_subcommand(1);

  elex::GenDatasetArgs gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-dataset", "Generate a Hetero-BA-Shapes dataset");
  gen_cmd->add_option("--nodes", gen.nodes, "BA base graph size");
  gen_cmd->add_option("--motifs", gen.motifs, "Number of house motifs");
  gen_cmd->add_option("--m-attach", gen.m_attach, "BA edges per new node");
  gen_cmd->add_option("--seed", gen.seed, "Master seed");
  gen_cmd->add_option("--out", gen.out, "Output dataset JSON")->required();

  elex::TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train", "Train the hetero GraphSAGE model");
  train_cmd->add_option("--dataset", train.dataset, "Dataset JSON")->required();
  train_cmd->add_option("--epochs", train.epochs, "Training epochs");
  train_cmd->add_option("--lr", train.lr, "Adam learning rate");
  train_cmd->add_option("--hidden", train.hidden, "Hidden dimension");
  train_cmd->add_option("--seed", train.seed, "Master seed");
  train_cmd->add_option("--out", train.out, "Output model JSON")->required();
  train_cmd->add_option("--metrics-out", train.metrics_out,
                        "Per-epoch metrics CSV (default <out>.metrics.csv)");

  elex::ExplainArgs explain;
  CLI::App* explain_cmd = app.add_subcommand("explain", "Beam-search for explanatory CEs");
  explain_cmd->add_option("--model", explain.model, "Trained model JSON")->required();
  explain_cmd->add_option("--scorer", explain.scorer, "Scoring function: gnn | fidelity");
  explain_cmd->add_option("--validation", explain.validation,
                          "Validation dataset (fidelity scorer)");
  explain_cmd->add_option("--test", explain.test, "Test dataset for fidelity reporting");
  explain_cmd->add_option("--beam-width", explain.beam_width, "Beam width k");
  explain_cmd->add_option("--iterations", explain.iterations, "Iterations n");
  explain_cmd->add_option("--graphs-per-ce", explain.graphs_per_ce, "Graphs per CE m");
  explain_cmd->add_option("--lambda", explain.lambda, "Length regularization weight");
  explain_cmd->add_option("--aggr", explain.aggr, "Aggregation: mean | max");
  explain_cmd->add_option("--label", explain.label, "Label to explain");
  explain_cmd->add_option("--root-class", explain.root_class, "Class to explain");
  explain_cmd->add_option("--workers", explain.workers, "Scoring worker threads");
  explain_cmd->add_option("--top", explain.top, "Candidates emitted with full metrics");
  explain_cmd->add_option("--seed", explain.seed, "Master seed");
  explain_cmd->add_option("--out", explain.out, "Output results JSON")->required();
  explain_cmd->add_option("--csv", explain.csv, "Optional summary CSV");

  elex::EvalArgs eval;
  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a user-supplied CE");
  eval_cmd->add_option("--ce", eval.ce, "CE text, e.g. \"B and (to some A)\"")->required();
  eval_cmd->add_option("--dataset", eval.dataset, "Dataset JSON")->required();
  eval_cmd->add_option("--model", eval.model, "Model JSON (enables fidelity and gamma)");
  eval_cmd->add_option("--graphs-per-ce", eval.graphs_per_ce, "Graphs per CE m");
  eval_cmd->add_option("--lambda", eval.lambda, "Length regularization weight");
  eval_cmd->add_option("--aggr", eval.aggr, "Aggregation: mean | max");
  eval_cmd->add_option("--label", eval.label, "Label to explain");
  eval_cmd->add_option("--seed", eval.seed, "Master seed");
  eval_cmd->add_option("--out", eval.out, "Output metrics JSON")->required();

  elex::AblateArgs ablate;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "Edge-type ablation table");
  ablate_cmd->add_option("--results", ablate.results, "Results JSON from explain")->required();
  ablate_cmd->add_option("--model", ablate.model, "Trained model JSON")->required();
  ablate_cmd->add_option("--label", ablate.label, "Label to score");
  ablate_cmd->add_option("--out", ablate.out, "Output CSV")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_cmd->parsed()) elex::cmd_gen_dataset(gen);
    if (train_cmd->parsed()) elex::cmd_train(train);
    if (explain_cmd->parsed()) elex::cmd_explain(explain);
    if (eval_cmd->parsed()) elex::cmd_eval(eval);
    if (ablate_cmd->parsed()) elex::cmd_ablate(ablate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
