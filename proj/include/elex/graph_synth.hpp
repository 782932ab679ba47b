#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elex/class_expr.hpp"
#include "elex/hetero_graph.hpp"
#include "elex/rng.hpp"

namespace elex {

struct SynthesisOutcome {
  HeteroGraph graph;
  NodeId root = 0;
  int reuse_events = 0;
};

// Synthesizes random graphs whose root node fulfills a CE. The synthesizer
// carries the type universe so generated graphs are type-compatible with a
// model trained on the same universe.
class GraphSynthesizer {
 public:
  GraphSynthesizer(std::vector<std::string> class_names,
                   std::vector<std::string> edge_type_names);

  // Recursive construction on one growing canvas: a named class adds a node;
  // an intersection adds its root-class node and merges each operand's root
  // onto it; an existential flips a coin to reuse any existing node that
  // already fulfills the filler (uniform among candidates), otherwise
  // synthesizes the filler fresh, then connects it (edge in both
  // directions, matching the dataset convention).
  SynthesisOutcome create(const CE& ce, Rng& rng) const;

  // count independent outcomes; item i uses a generator derived from
  // (seed, i), so batches are reproducible and order-independent.
  std::vector<SynthesisOutcome> create_batch(const CE& ce, int count,
                                             std::uint64_t seed) const;

  const std::vector<std::string>& class_names() const { return class_names_; }
  const std::vector<std::string>& edge_type_names() const { return edge_type_names_; }

 private:
  NodeId synthesize(HeteroGraph& canvas, const CE& ce, Rng& rng, int& reuse_events) const;

  std::vector<std::string> class_names_;
  std::vector<std::string> edge_type_names_;
};

// Convenience entry point with the type universe taken from the CE itself.
SynthesisOutcome create_graph(const CE& ce, Rng& rng);

}  // namespace elex
