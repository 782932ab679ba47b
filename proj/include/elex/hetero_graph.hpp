#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "elex/error.hpp"

namespace elex {

using NodeId = std::int32_t;
using EdgeId = std::int32_t;
using NodeTypeId = std::int32_t;
using EdgeTypeId = std::int32_t;

// Sentinel node type for synthesis intermediates. Never registered in the
// name table and never allowed in a finished graph.
inline constexpr NodeTypeId kUntypedNode = -1;

struct Edge {
  NodeId src;
  EdgeTypeId etype;
  NodeId dst;
};

// Directed typed multigraph. Node and edge ids are dense (0..count-1) and
// append-only; parallel edges are allowed. Values are immutable once
// construction finishes, so const graphs can be shared across threads.
class HeteroGraph {
 public:
  // Type registration is lookup-or-add; names must be unique per kind.
  NodeTypeId register_node_type(std::string_view name);
  EdgeTypeId register_edge_type(std::string_view name);

  std::optional<NodeTypeId> find_node_type(std::string_view name) const;
  std::optional<EdgeTypeId> find_edge_type(std::string_view name) const;

  NodeId add_node(NodeTypeId type);
  EdgeId add_edge(NodeId src, EdgeTypeId etype, NodeId dst);

  // Re-types an existing node; used by the dataset generator and merges.
  void set_node_type(NodeId node, NodeTypeId type);

  int node_count() const { return static_cast<int>(node_type_of_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  int node_type_count() const { return static_cast<int>(node_type_names_.size()); }
  int edge_type_count() const { return static_cast<int>(edge_type_names_.size()); }

  NodeTypeId node_type(NodeId node) const;
  const std::string& node_type_name(NodeTypeId type) const;
  const std::string& edge_type_name(EdgeTypeId type) const;
  const std::vector<std::string>& node_type_names() const { return node_type_names_; }
  const std::vector<std::string>& edge_type_names() const { return edge_type_names_; }

  const Edge& edge(EdgeId id) const;
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(NodeId node) const;

  // Targets of all outgoing edges of the given type, in edge order,
  // duplicates preserved.
  std::vector<NodeId> out_neighbors(NodeId node, EdgeTypeId etype) const;

  bool has_node(NodeId node) const {
    return node >= 0 && node < node_count();
  }

  // Identifies the most recently added node with `keep` and removes it,
  // re-targeting its edges. Restricting the absorbed side to the last node
  // keeps ids dense without remapping. The defined type survives; two
  // distinct defined types conflict.
  void merge_last_node_into(NodeId keep);

 private:
  void check_node(NodeId node) const;

  std::vector<NodeTypeId> node_type_of_;
  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> out_edges_;
  std::vector<std::string> node_type_names_;
  std::vector<std::string> edge_type_names_;
  std::unordered_map<std::string, NodeTypeId> node_type_ids_;
  std::unordered_map<std::string, EdgeTypeId> edge_type_ids_;
};

// Disjoint union of `graph` and `other` except that `node_in_graph` and
// `node_in_other` become one node (id = node_in_graph). Type registries are
// unioned by name. Edge count is preserved; node count is |V1|+|V2|-1.
std::pair<HeteroGraph, NodeId> merge_on_nodes(const HeteroGraph& graph,
                                              const HeteroGraph& other,
                                              NodeId node_in_graph,
                                              NodeId node_in_other);

// Copy of `graph` without any edge whose endpoint node types are
// {type_a, type_b} in either direction.
HeteroGraph remove_edges_between_types(const HeteroGraph& graph,
                                       NodeTypeId type_a, NodeTypeId type_b);

}  // namespace elex
