#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "elex/error.hpp"
#include "elex/hetero_graph.hpp"
#include "elex/rng.hpp"

namespace elex {

class ClassExpr;

// CE trees are immutable and shared; mutation rebuilds the path to the
// mutated site.
using CE = std::shared_ptr<const ClassExpr>;

// EL class expression: a named class, an intersection, or an existential
// restriction. Intersections are kept in normalized form by construction:
// exactly one named-class operand, at least one existential operand, and no
// directly nested intersection.
class ClassExpr {
 public:
  enum class Kind { kClass, kIntersection, kExists };

  Kind kind() const { return kind_; }

  // kClass: the type name. kExists: the property (edge type) name.
  const std::string& name() const { return name_; }

  // kIntersection: the operands. kExists: exactly one element, the filler.
  const std::vector<CE>& operands() const { return operands_; }
  const CE& filler() const { return operands_.front(); }

  static CE make_class(std::string name);
  static CE make_exists(std::string property, CE filler);
  // Flattens directly nested intersections, then enforces normalized form.
  static CE make_intersection(std::vector<CE> operands);

 private:
  ClassExpr(Kind kind, std::string name, std::vector<CE> operands)
      : kind_(kind), name_(std::move(name)), operands_(std::move(operands)) {}

  Kind kind_;
  std::string name_;
  std::vector<CE> operands_;
};

// Number of named-class occurrences in the tree (the CE's length).
int length(const CE& ce);

// The unique top-level named class: the CE itself if bare, otherwise the
// named-class operand of the root intersection. Errors on a bare existential.
const std::string& find_root_class(const CE& ce);

// True when every intersection is normalized and every subtree that maps to
// a graph node (the root and every filler) carries a named class.
bool is_normalized(const CE& ce);

// Manchester-style text form, e.g. "B and (to some A)".
std::string render(const CE& ce);
// Inverse of render; flattens conjunction lists and rejects un-normalizable
// input. Throws ParseError with a character offset.
CE parse(std::string_view text);

bool structurally_equal(const CE& a, const CE& b);
// Order-insensitive comparison (intersection operands as a multiset).
bool equivalent(const CE& a, const CE& b);

// True iff a homomorphism maps the CE into the graph with the root class on
// `node`: named class matches the node's type, intersections hold at the
// node, existentials follow outgoing edges. Memoized over
// (node, CE subtree) pairs. Throws on type names missing from the graph.
bool fulfills(const HeteroGraph& graph, NodeId node, const CE& ce);

// Per-node fulfillment for the whole graph in one bottom-up sweep;
// result[v] != 0 iff fulfills(graph, v, ce).
std::vector<char> denotation(const HeteroGraph& graph, const CE& ce);

// `class_to_explain ⊓ ∃r.class_new` with class_new uniform over `classes`
// and r uniform over `edge_types`.
CE random_ce(const std::vector<std::string>& classes,
             const std::vector<std::string>& edge_types,
             const std::string& class_to_explain, Rng& rng);

// Grows the CE by one class: an ∃r.class_new is either appended to a uniform
// intersection or wrapped around a uniform named class (50/50); a branch with
// no candidate site falls through to the other. Input is untouched.
CE mutate_ce(const CE& ce, const std::vector<std::string>& classes,
             const std::vector<std::string>& edge_types, Rng& rng);

}  // namespace elex
