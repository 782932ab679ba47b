#include "elex/hetero_graph.hpp"

#include <algorithm>

namespace elex {

NodeTypeId HeteroGraph::register_node_type(std::string_view name) {
  auto it = node_type_ids_.find(std::string(name));
  if (it != node_type_ids_.end()) return it->second;
  NodeTypeId id = static_cast<NodeTypeId>(node_type_names_.size());
  node_type_names_.emplace_back(name);
  node_type_ids_.emplace(std::string(name), id);
  return id;
}

EdgeTypeId HeteroGraph::register_edge_type(std::string_view name) {
  auto it = edge_type_ids_.find(std::string(name));
  if (it != edge_type_ids_.end()) return it->second;
  EdgeTypeId id = static_cast<EdgeTypeId>(edge_type_names_.size());
  edge_type_names_.emplace_back(name);
  edge_type_ids_.emplace(std::string(name), id);
  return id;
}

std::optional<NodeTypeId> HeteroGraph::find_node_type(std::string_view name) const {
  auto it = node_type_ids_.find(std::string(name));
  if (it == node_type_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeTypeId> HeteroGraph::find_edge_type(std::string_view name) const {
  auto it = edge_type_ids_.find(std::string(name));
  if (it == edge_type_ids_.end()) return std::nullopt;
  return it->second;
}

NodeId HeteroGraph::add_node(NodeTypeId type) {
  if (type != kUntypedNode &&
      (type < 0 || type >= static_cast<NodeTypeId>(node_type_names_.size()))) {
    throw Error("add_node: unknown node type id " + std::to_string(type));
  }
  NodeId id = static_cast<NodeId>(node_type_of_.size());
  node_type_of_.push_back(type);
  out_edges_.emplace_back();
  return id;
}

EdgeId HeteroGraph::add_edge(NodeId src, EdgeTypeId etype, NodeId dst) {
  check_node(src);
  check_node(dst);
  if (etype < 0 || etype >= static_cast<EdgeTypeId>(edge_type_names_.size())) {
    throw Error("add_edge: unknown edge type id " + std::to_string(etype));
  }
  EdgeId id = static_cast<EdgeId>(edges_.size());
  edges_.push_back(Edge{src, etype, dst});
  out_edges_[static_cast<std::size_t>(src)].push_back(id);
  return id;
}

void HeteroGraph::set_node_type(NodeId node, NodeTypeId type) {
  check_node(node);
  if (type != kUntypedNode &&
      (type < 0 || type >= static_cast<NodeTypeId>(node_type_names_.size()))) {
    throw Error("set_node_type: unknown node type id " + std::to_string(type));
  }
  node_type_of_[static_cast<std::size_t>(node)] = type;
}

NodeTypeId HeteroGraph::node_type(NodeId node) const {
  check_node(node);
  return node_type_of_[static_cast<std::size_t>(node)];
}

const std::string& HeteroGraph::node_type_name(NodeTypeId type) const {
  if (type < 0 || type >= static_cast<NodeTypeId>(node_type_names_.size())) {
    throw Error("node_type_name: unknown node type id " + std::to_string(type));
  }
  return node_type_names_[static_cast<std::size_t>(type)];
}

const std::string& HeteroGraph::edge_type_name(EdgeTypeId type) const {
  if (type < 0 || type >= static_cast<EdgeTypeId>(edge_type_names_.size())) {
    throw Error("edge_type_name: unknown edge type id " + std::to_string(type));
  }
  return edge_type_names_[static_cast<std::size_t>(type)];
}

const Edge& HeteroGraph::edge(EdgeId id) const {
  if (id < 0 || id >= edge_count()) {
    throw Error("edge: unknown edge id " + std::to_string(id));
  }
  return edges_[static_cast<std::size_t>(id)];
}

const std::vector<EdgeId>& HeteroGraph::out_edges(NodeId node) const {
  check_node(node);
  return out_edges_[static_cast<std::size_t>(node)];
}

std::vector<NodeId> HeteroGraph::out_neighbors(NodeId node, EdgeTypeId etype) const {
  check_node(node);
  std::vector<NodeId> result;
  for (EdgeId e : out_edges_[static_cast<std::size_t>(node)]) {
    const Edge& edge = edges_[static_cast<std::size_t>(e)];
    if (edge.etype == etype) result.push_back(edge.dst);
  }
  return result;
}

void HeteroGraph::merge_last_node_into(NodeId keep) {
  check_node(keep);
  const NodeId absorb = node_count() - 1;
  if (absorb == keep) throw Error("merge_last_node_into: node merged with itself");

  const NodeTypeId keep_type = node_type_of_[static_cast<std::size_t>(keep)];
  const NodeTypeId absorb_type = node_type_of_[static_cast<std::size_t>(absorb)];
  if (keep_type != kUntypedNode && absorb_type != kUntypedNode &&
      keep_type != absorb_type) {
    throw Error("merge: conflicting node types '" + node_type_name(keep_type) +
                "' and '" + node_type_name(absorb_type) + "'");
  }
  if (keep_type == kUntypedNode) {
    node_type_of_[static_cast<std::size_t>(keep)] = absorb_type;
  }

  for (EdgeId e : out_edges_[static_cast<std::size_t>(absorb)]) {
    edges_[static_cast<std::size_t>(e)].src = keep;
    out_edges_[static_cast<std::size_t>(keep)].push_back(e);
  }
  for (Edge& e : edges_) {
    if (e.dst == absorb) e.dst = keep;
  }
  out_edges_.pop_back();
  node_type_of_.pop_back();
}

void HeteroGraph::check_node(NodeId node) const {
  if (!has_node(node)) {
    throw Error("unknown node id " + std::to_string(node));
  }
}

std::pair<HeteroGraph, NodeId> merge_on_nodes(const HeteroGraph& graph,
                                              const HeteroGraph& other,
                                              NodeId node_in_graph,
                                              NodeId node_in_other) {
  if (!graph.has_node(node_in_graph)) {
    throw Error("merge_on_nodes: unknown node id in first graph");
  }
  if (!other.has_node(node_in_other)) {
    throw Error("merge_on_nodes: unknown node id in second graph");
  }

  HeteroGraph merged = graph;

  // Union the type registries by name and remember other's id remapping.
  std::vector<NodeTypeId> ntype_map(static_cast<std::size_t>(other.node_type_count()));
  for (NodeTypeId t = 0; t < other.node_type_count(); ++t) {
    ntype_map[static_cast<std::size_t>(t)] =
        merged.register_node_type(other.node_type_name(t));
  }
  std::vector<EdgeTypeId> etype_map(static_cast<std::size_t>(other.edge_type_count()));
  for (EdgeTypeId t = 0; t < other.edge_type_count(); ++t) {
    etype_map[static_cast<std::size_t>(t)] =
        merged.register_edge_type(other.edge_type_name(t));
  }

  auto map_type = [&](NodeTypeId t) {
    return t == kUntypedNode ? kUntypedNode : ntype_map[static_cast<std::size_t>(t)];
  };

  const NodeTypeId kept = merged.node_type(node_in_graph);
  const NodeTypeId absorbed = map_type(other.node_type(node_in_other));
  if (kept != kUntypedNode && absorbed != kUntypedNode && kept != absorbed) {
    throw Error("merge_on_nodes: conflicting node types '" +
                merged.node_type_name(kept) + "' and '" +
                merged.node_type_name(absorbed) + "'");
  }
  if (kept == kUntypedNode && absorbed != kUntypedNode) {
    merged.set_node_type(node_in_graph, absorbed);
  }

  // Dense remapping of other's nodes: the identified node folds onto
  // node_in_graph, the rest append in order.
  std::vector<NodeId> node_map(static_cast<std::size_t>(other.node_count()));
  for (NodeId v = 0; v < other.node_count(); ++v) {
    if (v == node_in_other) {
      node_map[static_cast<std::size_t>(v)] = node_in_graph;
    } else {
      node_map[static_cast<std::size_t>(v)] =
          merged.add_node(map_type(other.node_type(v)));
    }
  }
  for (const Edge& e : other.edges()) {
    merged.add_edge(node_map[static_cast<std::size_t>(e.src)],
                    etype_map[static_cast<std::size_t>(e.etype)],
                    node_map[static_cast<std::size_t>(e.dst)]);
  }
  return {std::move(merged), node_in_graph};
}

HeteroGraph remove_edges_between_types(const HeteroGraph& graph,
                                       NodeTypeId type_a, NodeTypeId type_b) {
  if (type_a < 0 || type_a >= graph.node_type_count() ||
      type_b < 0 || type_b >= graph.node_type_count()) {
    throw Error("remove_edges_between_types: unknown node type id");
  }
  HeteroGraph result;
  for (const std::string& name : graph.node_type_names()) result.register_node_type(name);
  for (const std::string& name : graph.edge_type_names()) result.register_edge_type(name);
  for (NodeId v = 0; v < graph.node_count(); ++v) result.add_node(graph.node_type(v));
  for (const Edge& e : graph.edges()) {
    const NodeTypeId s = graph.node_type(e.src);
    const NodeTypeId d = graph.node_type(e.dst);
    const bool drop = (s == type_a && d == type_b) || (s == type_b && d == type_a);
    if (!drop) result.add_edge(e.src, e.etype, e.dst);
  }
  return result;
}

}  // namespace elex
