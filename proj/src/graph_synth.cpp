#include "elex/graph_synth.hpp"

#include <algorithm>
#include <set>

namespace elex {

namespace {

void collect_names(const CE& ce, std::set<std::string>& classes,
                   std::set<std::string>& properties) {
  if (ce->kind() == ClassExpr::Kind::kClass) {
    classes.insert(ce->name());
  } else if (ce->kind() == ClassExpr::Kind::kExists) {
    properties.insert(ce->name());
  }
  for (const CE& op : ce->operands()) collect_names(op, classes, properties);
}

}  // namespace

GraphSynthesizer::GraphSynthesizer(std::vector<std::string> class_names,
                                   std::vector<std::string> edge_type_names)
    : class_names_(std::move(class_names)),
      edge_type_names_(std::move(edge_type_names)) {}

SynthesisOutcome GraphSynthesizer::create(const CE& ce, Rng& rng) const {
  if (!is_normalized(ce)) {
    throw Error("create_graph: CE is not normalized (the root and every filler "
                "need a named class)");
  }
  std::set<std::string> classes, properties;
  collect_names(ce, classes, properties);

  SynthesisOutcome outcome;
  HeteroGraph& canvas = outcome.graph;
  for (const std::string& name : class_names_) canvas.register_node_type(name);
  for (const std::string& name : edge_type_names_) canvas.register_edge_type(name);
  for (const std::string& name : classes) {
    if (!canvas.find_node_type(name)) {
      throw Error("create_graph: class '" + name + "' not in the synthesizer universe");
    }
  }
  for (const std::string& name : properties) {
    if (!canvas.find_edge_type(name)) {
      throw Error("create_graph: property '" + name + "' not in the synthesizer universe");
    }
  }

  outcome.root = synthesize(canvas, ce, rng, outcome.reuse_events);

  for (NodeId v = 0; v < canvas.node_count(); ++v) {
    if (canvas.node_type(v) == kUntypedNode) {
      throw Error("create_graph: internal error, untyped node survived synthesis");
    }
  }
  return outcome;
}

NodeId GraphSynthesizer::synthesize(HeteroGraph& canvas, const CE& ce, Rng& rng,
                                    int& reuse_events) const {
  switch (ce->kind()) {
    case ClassExpr::Kind::kClass:
      return canvas.add_node(*canvas.find_node_type(ce->name()));

    case ClassExpr::Kind::kIntersection: {
      const NodeId node = canvas.add_node(*canvas.find_node_type(find_root_class(ce)));
      for (const CE& op : ce->operands()) {
        if (op->kind() == ClassExpr::Kind::kClass) continue;
        const NodeId operand_root = synthesize(canvas, op, rng, reuse_events);
        // The operand root is the placeholder created last; folding it onto
        // `node` keeps ids dense and resolves its type.
        if (operand_root != canvas.node_count() - 1) {
          throw Error("create_graph: internal error, operand root is not the last node");
        }
        canvas.merge_last_node_into(node);
      }
      return node;
    }

    case ClassExpr::Kind::kExists: {
      NodeId filler_node = -1;
      if (rng.coin()) {
        // Reuse scope is everything built so far; placeholders never qualify
        // because they match no named class.
        const std::vector<char> fulfilled = denotation(canvas, ce->filler());
        std::vector<NodeId> candidates;
        for (NodeId v = 0; v < canvas.node_count(); ++v) {
          if (fulfilled[static_cast<std::size_t>(v)] &&
              canvas.node_type(v) != kUntypedNode) {
            candidates.push_back(v);
          }
        }
        if (!candidates.empty()) {
          filler_node = candidates[rng.uniform_index(candidates.size())];
          ++reuse_events;
        }
      }
      if (filler_node < 0) {
        filler_node = synthesize(canvas, ce->filler(), rng, reuse_events);
      }
      const NodeId source = canvas.add_node(kUntypedNode);
      const EdgeTypeId etype = *canvas.find_edge_type(ce->name());
      canvas.add_edge(source, etype, filler_node);
      canvas.add_edge(filler_node, etype, source);
      return source;
    }
  }
  throw Error("create_graph: unreachable");
}

std::vector<SynthesisOutcome> GraphSynthesizer::create_batch(const CE& ce, int count,
                                                             std::uint64_t seed) const {
  if (count < 1) throw Error("create_batch: count must be >= 1");
  std::vector<SynthesisOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
    outcomes.push_back(create(ce, rng));
  }
  return outcomes;
}

SynthesisOutcome create_graph(const CE& ce, Rng& rng) {
  std::set<std::string> classes, properties;
  collect_names(ce, classes, properties);
  GraphSynthesizer synth(std::vector<std::string>(classes.begin(), classes.end()),
                         std::vector<std::string>(properties.begin(), properties.end()));
  return synth.create(ce, rng);
}

}  // namespace elex
