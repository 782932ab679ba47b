#pragma once

#include <cstdint>
#include <string>

namespace elex {

// Batch subcommands; every output file embeds the configuration and seed
// that produced it, and identical arguments yield byte-identical outputs.

struct GenDatasetArgs {
  int nodes = 10000;
  int motifs = 1000;
  int m_attach = 3;
  std::uint64_t seed = 0;
  std::string out;
};
void cmd_gen_dataset(const GenDatasetArgs& args);

struct TrainArgs {
  std::string dataset;
  std::string out;
  std::string metrics_out;  // defaults to <out>.metrics.csv
  int epochs = 1000;
  double lr = 0.01;
  int hidden = 16;
  std::uint64_t seed = 0;
};
void cmd_train(const TrainArgs& args);

struct ExplainArgs {
  std::string model;
  std::string validation;  // dataset scored against (fidelity scorer)
  std::string test;        // dataset for fidelity reporting of emitted CEs
  std::string out;
  std::string csv;
  std::string scorer = "gnn";  // gnn | fidelity
  int beam_width = 10000;
  int iterations = 10;
  int graphs_per_ce = 100;
  double lambda = 0.5;
  std::string aggr = "max";
  int label = 1;
  std::string root_class = "B";
  int workers = 1;
  int top = 10;  // emitted candidates receiving full metrics
  std::uint64_t seed = 0;
};
void cmd_explain(const ExplainArgs& args);

struct EvalArgs {
  std::string ce;
  std::string dataset;
  std::string model;  // optional; enables fidelity and gamma
  std::string out;
  int graphs_per_ce = 100;
  double lambda = 0.5;
  std::string aggr = "max";
  int label = 1;
  std::uint64_t seed = 0;
};
void cmd_eval(const EvalArgs& args);

struct AblateArgs {
  std::string results;
  std::string model;
  std::string out;
  int label = 1;
};
void cmd_ablate(const AblateArgs& args);

}  // namespace elex
