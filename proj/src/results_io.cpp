#include "elex/results_io.hpp"

#include <cstdio>
#include <fstream>

#include "elex/graph_io.hpp"

namespace elex {

namespace {

std::string format_number(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.10g", value);
  return buffer;
}

}  // namespace

void save_results(const std::string& path, const ResultsFile& results) {
  nlohmann::json doc;
  doc["config"] = results.config;
  nlohmann::json entries = nlohmann::json::array();
  for (const ResultEntry& entry : results.entries) {
    const ScoredCandidate& cand = entry.candidate;
    nlohmann::json e;
    e["ce"] = render(cand.ce);
    e["score"] = cand.score;
    e["length"] = length(cand.ce);
    e["seed"] = cand.seed;
    if (cand.has_gamma) {
      e["gamma"] = cand.gamma;
      e["per_graph_outputs"] = cand.per_graph_outputs;
    }
    if (cand.has_fidelity) e["val_fidelity"] = cand.fidelity;
    if (entry.test_fidelity) e["fidelity"] = *entry.test_fidelity;
    if (entry.explanation_accuracy) e["ea"] = *entry.explanation_accuracy;
    if (entry.evidence) {
      nlohmann::json ev;
      ev["graph"] = graph_to_json(entry.evidence->graph);
      ev["root"] = entry.evidence->root;
      ev["output"] = entry.evidence->output;
      e["evidence"] = std::move(ev);
    }
    entries.push_back(std::move(e));
  }
  doc["results"] = std::move(entries);
  write_json_file(path, doc);
}

ResultsFile load_results(const std::string& path) {
  const nlohmann::json doc = read_json_file(path);
  ResultsFile results;
  if (doc.contains("config")) results.config = doc.at("config");
  for (const auto& e : doc.at("results")) {
    ResultEntry entry;
    entry.candidate.ce = parse(e.at("ce").get<std::string>());
    entry.candidate.score = e.at("score").get<double>();
    if (e.contains("seed")) entry.candidate.seed = e.at("seed").get<std::uint64_t>();
    if (e.contains("gamma")) {
      entry.candidate.gamma = e.at("gamma").get<double>();
      entry.candidate.has_gamma = true;
    }
    if (e.contains("per_graph_outputs")) {
      entry.candidate.per_graph_outputs =
          e.at("per_graph_outputs").get<std::vector<double>>();
    }
    if (e.contains("val_fidelity")) {
      entry.candidate.fidelity = e.at("val_fidelity").get<double>();
      entry.candidate.has_fidelity = true;
    }
    if (e.contains("fidelity")) entry.test_fidelity = e.at("fidelity").get<double>();
    if (e.contains("ea")) entry.explanation_accuracy = e.at("ea").get<double>();
    if (e.contains("evidence")) {
      EvidenceGraph evidence;
      evidence.graph = graph_from_json(e.at("evidence").at("graph"));
      evidence.root = e.at("evidence").at("root").get<NodeId>();
      evidence.output = e.at("evidence").at("output").get<double>();
      entry.evidence = std::move(evidence);
    }
    results.entries.push_back(std::move(entry));
  }
  return results;
}

void write_results_csv(const std::string& path, const ResultsFile& results) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "ce,fidelity,ea,gnn\n";
  for (const ResultEntry& entry : results.entries) {
    out << render(entry.candidate.ce) << ',';
    if (entry.test_fidelity) out << format_number(*entry.test_fidelity);
    out << ',';
    if (entry.explanation_accuracy) out << format_number(*entry.explanation_accuracy);
    out << ',';
    if (entry.candidate.has_gamma) out << format_number(entry.candidate.gamma);
    out << '\n';
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

void write_ablation_csv(const std::string& path, const std::vector<AblationRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "edge_types,in_motif,gnn_output\n";
  for (const AblationRow& row : rows) {
    if (row.original) {
      out << "original,," << format_number(row.logit) << '\n';
    } else {
      out << row.type_a << '-' << row.type_b << ',' << (row.in_motif ? "yes" : "no")
          << ',' << format_number(row.logit) << '\n';
    }
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace elex
