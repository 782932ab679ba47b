#include "elex/metrics.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

namespace elex {

MotifSpec make_motif_spec(const HeteroGraph& motif, std::string anchor_type) {
  if (motif.node_count() > 31) {
    throw Error("make_motif_spec: motif too large for the coverage bitmask");
  }
  MotifSpec spec;
  spec.graph = motif;
  spec.anchor_type = std::move(anchor_type);
  for (NodeId v = 0; v < motif.node_count(); ++v) spec.motif_nodes.push_back(v);

  const NodeTypeId abstract_type = spec.graph.register_node_type("abstract");
  spec.abstract_node = spec.graph.add_node(abstract_type);
  for (NodeId v : spec.motif_nodes) {
    for (EdgeTypeId e = 0; e < spec.graph.edge_type_count(); ++e) {
      spec.graph.add_edge(spec.abstract_node, e, v);
      spec.graph.add_edge(v, e, spec.abstract_node);
    }
  }
  return spec;
}

MotifSpec house_motif() {
  HeteroGraph house;
  const NodeTypeId a = house.register_node_type("A");
  const NodeTypeId b = house.register_node_type("B");
  const NodeTypeId c = house.register_node_type("C");
  const EdgeTypeId to = house.register_edge_type("to");

  const NodeId top = house.add_node(a);
  const NodeId mid1 = house.add_node(b);
  const NodeId mid2 = house.add_node(b);
  const NodeId bot1 = house.add_node(c);
  const NodeId bot2 = house.add_node(c);

  auto link = [&](NodeId u, NodeId v) {
    house.add_edge(u, to, v);
    house.add_edge(v, to, u);
  };
  link(bot1, bot2);   // floor
  link(bot1, mid1);   // walls
  link(bot2, mid2);
  link(mid1, mid2);   // ceiling
  link(mid1, top);    // roof
  link(mid2, top);

  return make_motif_spec(house, "B");
}

namespace {

// Site tree: one node per class occurrence, edges labelled with the
// property of the existential step that reaches the child.
struct Site {
  std::string class_name;
  std::vector<std::pair<std::string, int>> children;  // (property, site index)
};

int build_sites(const CE& ce, std::vector<Site>& sites) {
  if (ce->kind() == ClassExpr::Kind::kExists) {
    throw Error("explanation_accuracy: CE is not normalized (existential without "
                "enclosing class)");
  }
  const int index = static_cast<int>(sites.size());
  sites.emplace_back();
  if (ce->kind() == ClassExpr::Kind::kClass) {
    sites[static_cast<std::size_t>(index)].class_name = ce->name();
    return index;
  }
  sites[static_cast<std::size_t>(index)].class_name = find_root_class(ce);
  for (const CE& op : ce->operands()) {
    if (op->kind() != ClassExpr::Kind::kExists) continue;
    const int child = build_sites(op->filler(), sites);
    sites[static_cast<std::size_t>(index)].children.emplace_back(op->name(), child);
  }
  return index;
}

// Achievable (covered-motif-nodes mask -> minimal abstract-mapping count)
// for one subtree given the node its root is mapped to.
using Outcomes = std::map<std::uint32_t, int>;

void merge_outcome(Outcomes& into, std::uint32_t mask, int fp) {
  auto it = into.find(mask);
  if (it == into.end()) {
    into.emplace(mask, fp);
  } else if (fp < it->second) {
    it->second = fp;
  }
}

class AccuracyMapper {
 public:
  AccuracyMapper(const MotifSpec& motif, const std::vector<Site>& sites)
      : motif_(motif), sites_(sites) {
    const int n = motif_.graph.node_count();
    type_of_.resize(static_cast<std::size_t>(n));
    for (NodeId v = 0; v < n; ++v) {
      type_of_[static_cast<std::size_t>(v)] = motif_.graph.node_type(v);
    }
    memo_.assign(sites_.size() * static_cast<std::size_t>(n), Outcomes{});
    computed_.assign(sites_.size() * static_cast<std::size_t>(n), false);
  }

  // All (mask, fp) pairs achievable for the subtree at `site` when its class
  // occurrence is mapped to `node`; empty if the type does not match.
  const Outcomes& solve(int site, NodeId node) {
    const std::size_t key = static_cast<std::size_t>(site) *
                                static_cast<std::size_t>(motif_.graph.node_count()) +
                            static_cast<std::size_t>(node);
    if (computed_[key]) return memo_[key];
    computed_[key] = true;
    Outcomes& result = memo_[key];

    const Site& s = sites_[static_cast<std::size_t>(site)];
    const bool on_abstract = node == motif_.abstract_node;
    if (!on_abstract) {
      const std::string& type_name =
          motif_.graph.node_type_name(type_of_[static_cast<std::size_t>(node)]);
      if (type_name != s.class_name) return result;  // no valid mapping here
    }

    Outcomes acc;
    if (on_abstract) {
      acc.emplace(0u, 1);
    } else {
      acc.emplace(1u << node, 0);
    }

    for (const auto& [property, child] : s.children) {
      // The child maps to the abstract node (always allowed) or to a motif
      // node reached from `node` by an edge of the property's type.
      Outcomes child_options = solve(child, motif_.abstract_node);
      const auto etype = motif_.graph.find_edge_type(property);
      if (etype) {
        std::set<NodeId> reachable;
        for (EdgeId eid : motif_.graph.out_edges(node)) {
          const Edge& e = motif_.graph.edge(eid);
          if (e.etype == *etype && e.dst != motif_.abstract_node) reachable.insert(e.dst);
        }
        for (NodeId next : reachable) {
          for (const auto& [mask, fp] : solve(child, next)) {
            merge_outcome(child_options, mask, fp);
          }
        }
      }
      if (child_options.empty()) {  // cannot happen: abstract always works
        acc.clear();
        break;
      }
      Outcomes combined;
      for (const auto& [m1, f1] : acc) {
        for (const auto& [m2, f2] : child_options) {
          merge_outcome(combined, m1 | m2, f1 + f2);
        }
      }
      acc = std::move(combined);
    }
    result = std::move(acc);
    return result;
  }

 private:
  const MotifSpec& motif_;
  const std::vector<Site>& sites_;
  std::vector<NodeTypeId> type_of_;
  std::vector<Outcomes> memo_;
  std::vector<char> computed_;
};

std::vector<Site> sites_for(const CE& ce, const MotifSpec& motif) {
  if (!ce) throw Error("explanation_accuracy: null class expression");
  const std::string& root = find_root_class(ce);
  if (root != motif.anchor_type) {
    throw Error("explanation_accuracy: root class '" + root +
                "' does not match the motif anchor type '" + motif.anchor_type + "'");
  }
  std::vector<Site> sites;
  build_sites(ce, sites);
  return sites;
}

}  // namespace

double explanation_accuracy(const CE& ce, const MotifSpec& motif) {
  const std::vector<Site> sites = sites_for(ce, motif);
  AccuracyMapper mapper(motif, sites);

  const double motif_size = static_cast<double>(motif.motif_nodes.size());
  double best = 0.0;
  for (NodeId v : motif.motif_nodes) {
    if (motif.graph.node_type_name(motif.graph.node_type(v)) != motif.anchor_type) continue;
    for (const auto& [mask, fp] : mapper.solve(0, v)) {
      const double tp = static_cast<double>(std::popcount(mask));
      best = std::max(best, tp / (motif_size + static_cast<double>(fp)));
    }
  }
  return best;
}

bool is_ground_truth_ce(const CE& ce, const MotifSpec& motif) {
  const std::vector<Site> sites = sites_for(ce, motif);
  AccuracyMapper mapper(motif, sites);

  std::uint32_t full = 0;
  for (NodeId v : motif.motif_nodes) full |= 1u << v;
  for (NodeId v : motif.motif_nodes) {
    if (motif.graph.node_type_name(motif.graph.node_type(v)) != motif.anchor_type) continue;
    for (const auto& [mask, fp] : mapper.solve(0, v)) {
      if (mask == full && fp == 0) return true;
    }
  }
  return false;
}

std::vector<std::pair<std::string, std::string>> motif_type_pairs(const MotifSpec& motif) {
  std::set<std::pair<std::string, std::string>> pairs;
  for (const Edge& e : motif.graph.edges()) {
    if (e.src == motif.abstract_node || e.dst == motif.abstract_node) continue;
    std::string a = motif.graph.node_type_name(motif.graph.node_type(e.src));
    std::string b = motif.graph.node_type_name(motif.graph.node_type(e.dst));
    if (b < a) std::swap(a, b);
    pairs.emplace(std::move(a), std::move(b));
  }
  return {pairs.begin(), pairs.end()};
}

}  // namespace elex
