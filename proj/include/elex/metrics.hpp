#pragma once

#include <string>
#include <utility>
#include <vector>

#include "elex/class_expr.hpp"
#include "elex/hetero_graph.hpp"

namespace elex {

// Ground-truth motif extended with one catch-all node of type "abstract"
// connected to every motif node via every edge type, in both directions.
struct MotifSpec {
  HeteroGraph graph;                 // motif nodes plus the abstract node
  std::vector<NodeId> motif_nodes;   // the real motif nodes
  NodeId abstract_node = -1;
  std::string anchor_type;           // root classes must map onto this type
};

// Extends `motif` (real nodes only) with the abstract node.
MotifSpec make_motif_spec(const HeteroGraph& motif, std::string anchor_type);

// The 5-node typed house: one A top, two B middles, two C bottoms, six
// undirected edges stored in both directions, anchored at B.
MotifSpec house_motif();

// tp/(tp+fp+fn) maximized over all mappings of the CE's class occurrences
// onto motif-or-abstract nodes: the root class lands on an anchor-typed motif
// node, each existential step follows an edge of the extended motif, and any
// class may fall back to the abstract node (one fp per occurrence there).
// tp counts distinct motif nodes covered; fn the uncovered ones.
double explanation_accuracy(const CE& ce, const MotifSpec& motif);

// True iff some mapping avoids the abstract node entirely and covers every
// motif node (a surjective homomorphism onto the motif).
bool is_ground_truth_ce(const CE& ce, const MotifSpec& motif);

// Unordered node-type name pairs joined by an edge inside the motif
// (abstract excluded), sorted; e.g. {A,B},{B,B},{B,C},{C,C} for the house.
std::vector<std::pair<std::string, std::string>> motif_type_pairs(const MotifSpec& motif);

}  // namespace elex
