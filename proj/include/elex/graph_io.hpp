#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "elex/hetero_graph.hpp"

namespace elex {

using Json = nlohmann::json;

// Optional per-node annotations carried by the graph file format.
struct NodeAnnotations {
  std::map<NodeId, int> labels;
  std::map<NodeId, double> features;
};

// Graph JSON: {node_types, edge_types, nodes:[{id,type,label?,feature?}],
// edges:[{src,etype,dst}]}. Types appear as name strings. Graphs containing
// synthesis placeholders cannot be serialized.
Json graph_to_json(const HeteroGraph& graph,
                   const NodeAnnotations* annotations = nullptr);
HeteroGraph graph_from_json(const Json& doc, NodeAnnotations* annotations = nullptr);

void write_graph_file(const std::string& path, const HeteroGraph& graph,
                      const NodeAnnotations* annotations = nullptr);
HeteroGraph read_graph_file(const std::string& path,
                            NodeAnnotations* annotations = nullptr);

// Shared helpers for the other file formats.
void write_json_file(const std::string& path, const Json& doc);
Json read_json_file(const std::string& path);

}  // namespace elex
