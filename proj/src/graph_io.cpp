#include "elex/graph_io.hpp"

#include <fstream>

namespace elex {

Json graph_to_json(const HeteroGraph& graph, const NodeAnnotations* annotations) {
  Json doc;
  doc["node_types"] = graph.node_type_names();
  doc["edge_types"] = graph.edge_type_names();

  Json nodes = Json::array();
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    const NodeTypeId t = graph.node_type(v);
    if (t == kUntypedNode) {
      throw Error("graph_to_json: node " + std::to_string(v) + " is untyped");
    }
    Json n;
    n["id"] = v;
    n["type"] = graph.node_type_name(t);
    if (annotations != nullptr) {
      if (auto it = annotations->labels.find(v); it != annotations->labels.end()) {
        n["label"] = it->second;
      }
      if (auto it = annotations->features.find(v); it != annotations->features.end()) {
        n["feature"] = it->second;
      }
    }
    nodes.push_back(std::move(n));
  }
  doc["nodes"] = std::move(nodes);

  Json edges = Json::array();
  for (const Edge& e : graph.edges()) {
    Json j;
    j["src"] = e.src;
    j["etype"] = graph.edge_type_name(e.etype);
    j["dst"] = e.dst;
    edges.push_back(std::move(j));
  }
  doc["edges"] = std::move(edges);
  return doc;
}

HeteroGraph graph_from_json(const Json& doc, NodeAnnotations* annotations) {
  HeteroGraph graph;
  if (!doc.contains("node_types") || !doc.contains("edge_types") ||
      !doc.contains("nodes") || !doc.contains("edges")) {
    throw Error("graph json: missing one of node_types/edge_types/nodes/edges");
  }
  for (const auto& name : doc.at("node_types")) {
    graph.register_node_type(name.get<std::string>());
  }
  for (const auto& name : doc.at("edge_types")) {
    graph.register_edge_type(name.get<std::string>());
  }

  const auto& nodes = doc.at("nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    const NodeId id = n.at("id").get<NodeId>();
    if (id != static_cast<NodeId>(i)) {
      throw Error("graph json: node ids must be dense and in order");
    }
    const std::string type_name = n.at("type").get<std::string>();
    auto type = graph.find_node_type(type_name);
    if (!type) throw Error("graph json: node type '" + type_name + "' not declared");
    graph.add_node(*type);
    if (annotations != nullptr) {
      if (n.contains("label")) annotations->labels[id] = n.at("label").get<int>();
      if (n.contains("feature")) annotations->features[id] = n.at("feature").get<double>();
    }
  }

  for (const auto& e : doc.at("edges")) {
    const std::string etype_name = e.at("etype").get<std::string>();
    auto etype = graph.find_edge_type(etype_name);
    if (!etype) throw Error("graph json: edge type '" + etype_name + "' not declared");
    graph.add_edge(e.at("src").get<NodeId>(), *etype, e.at("dst").get<NodeId>());
  }
  return graph;
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << doc.dump(2) << '\n';
  if (!out) throw Error("write failed for '" + path + "'");
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  Json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw Error("invalid json in '" + path + "': " + e.what());
  }
  return doc;
}

void write_graph_file(const std::string& path, const HeteroGraph& graph,
                      const NodeAnnotations* annotations) {
  write_json_file(path, graph_to_json(graph, annotations));
}

HeteroGraph read_graph_file(const std::string& path, NodeAnnotations* annotations) {
  return graph_from_json(read_json_file(path), annotations);
}

}  // namespace elex
