#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "elex/class_expr.hpp"
#include "elex/dataset.hpp"
#include "oracles.hpp"

using namespace elex;

namespace {

CE cls(const std::string& name) { return ClassExpr::make_class(name); }
CE ex(const std::string& prop, CE filler) {
  return ClassExpr::make_exists(prop, std::move(filler));
}

const std::vector<std::string> kClasses = {"A", "B", "C"};
const std::vector<std::string> kEdges = {"r"};

HeteroGraph build_house() {
  HeteroGraph g;
  const NodeTypeId a = g.register_node_type("A");
  const NodeTypeId b = g.register_node_type("B");
  const NodeTypeId c = g.register_node_type("C");
  const EdgeTypeId to = g.register_edge_type("to");
  g.add_node(a);   // 0 top
  g.add_node(b);   // 1, 2 middles
  g.add_node(b);
  g.add_node(c);   // 3, 4 bottoms
  g.add_node(c);
  auto link = [&](NodeId u, NodeId v) {
    g.add_edge(u, to, v);
    g.add_edge(v, to, u);
  };
  link(3, 4);
  link(3, 1);
  link(4, 2);
  link(1, 2);
  link(1, 0);
  link(2, 0);
  return g;
}

// Removing one existential-over-bare-class operand (undoing a single
// mutation step) from anywhere in the tree; used for the
// "mutation adds, never removes" property.
void removal_variants(const CE& ce, std::vector<CE>& out) {
  if (ce->kind() == ClassExpr::Kind::kIntersection) {
    const auto& ops = ce->operands();
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (ops[i]->kind() == ClassExpr::Kind::kExists &&
          ops[i]->filler()->kind() == ClassExpr::Kind::kClass) {
        std::vector<CE> rest;
        for (std::size_t j = 0; j < ops.size(); ++j) {
          if (j != i) rest.push_back(ops[j]);
        }
        out.push_back(ClassExpr::make_intersection(std::move(rest)));
      }
      std::vector<CE> inner;
      removal_variants(ops[i], inner);
      for (CE& variant : inner) {
        std::vector<CE> rebuilt;
        for (std::size_t j = 0; j < ops.size(); ++j) {
          rebuilt.push_back(j == i ? variant : ops[j]);
        }
        out.push_back(ClassExpr::make_intersection(std::move(rebuilt)));
      }
    }
  } else if (ce->kind() == ClassExpr::Kind::kExists) {
    std::vector<CE> inner;
    removal_variants(ce->filler(), inner);
    for (CE& variant : inner) out.push_back(ClassExpr::make_exists(ce->name(), variant));
  }
}

}  // namespace

TEST_CASE("length counts named-class occurrences") {
  CHECK(length(cls("B")) == 1);
  CHECK(length(ClassExpr::make_intersection({cls("B"), ex("to", cls("A"))})) == 2);
  CHECK(length(ClassExpr::make_intersection(
            {cls("B"), ex("to", ClassExpr::make_intersection(
                                    {cls("A"), ex("to", cls("C"))}))})) == 3);
}

TEST_CASE("normalized-form construction rules") {
  CHECK_THROWS_AS(ClassExpr::make_intersection({cls("A"), cls("B")}), Error);
  CHECK_THROWS_AS(ClassExpr::make_intersection({ex("r", cls("A")), ex("r", cls("B"))}),
                  Error);
  // nested intersections flatten
  const CE inner = ClassExpr::make_intersection({cls("A"), ex("r", cls("B"))});
  const CE outer = ClassExpr::make_intersection({inner, ex("r", cls("C"))});
  CHECK(outer->operands().size() == 3);
  CHECK(is_normalized(outer));
  CHECK_FALSE(is_normalized(ex("r", cls("A"))));
  CHECK_FALSE(is_normalized(ex("r", ex("r", cls("A")))));
}

TEST_CASE("render matches the documented grammar") {
  const CE ce = ClassExpr::make_intersection({cls("B"), ex("to", cls("A"))});
  CHECK(render(ce) == "B and (to some A)");
  CHECK(render(cls("C")) == "C");
  CHECK(render(ex("to", cls("A"))) == "to some A");
  const CE nested = ClassExpr::make_intersection(
      {cls("B"), ex("to", ClassExpr::make_intersection({cls("A"), ex("to", cls("C"))}))});
  CHECK(render(nested) == "B and (to some (A and (to some C)))");
}

TEST_CASE("parse handles conjunction lists and normalizes") {
  const CE ce = parse("B and (to some A) and (to some C)");
  REQUIRE(ce->kind() == ClassExpr::Kind::kIntersection);
  CHECK(ce->operands().size() == 3);
  CHECK(find_root_class(ce) == "B");
  CHECK(equivalent(ce, parse("B and (to some C) and (to some A)")));
  CHECK(structurally_equal(parse("((B))"), cls("B")));
  CHECK(structurally_equal(parse("B  and(to some A)"), parse("B and (to some A)")));
}

TEST_CASE("parse rejects bad input with positions") {
  CHECK_THROWS_AS(parse("A and B"), ParseError);
  CHECK_THROWS_AS(parse("A and"), ParseError);
  CHECK_THROWS_AS(parse("(A and (to some B)"), ParseError);
  CHECK_THROWS_AS(parse("A ⊓ B"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
  try {
    parse("B and @");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 6);
  }
}

TEST_CASE("parse(render(ce)) is the identity on normalized CEs") {
  Rng rng(123);
  for (int trial = 0; trial < 300; ++trial) {
    const CE ce = oracle::random_normalized_ce(kClasses, kEdges, "A", 7, rng);
    CHECK(structurally_equal(parse(render(ce)), ce));
  }
}

TEST_CASE("fulfills on the house motif") {
  const HeteroGraph house = build_house();
  const NodeId middle = 1;
  CHECK(fulfills(house, middle, parse("B and (to some A)")));
  CHECK_FALSE(fulfills(house, middle, parse("B and (to some (A and (to some C)))")));
  for (NodeId v = 0; v < house.node_count(); ++v) {
    CHECK(fulfills(house, v, cls(house.node_type_name(house.node_type(v)))));
  }
  CHECK(fulfills(house, middle, parse("B and (to some A) and (to some C) and (to some B)")));
  CHECK_THROWS_AS(fulfills(house, middle, parse("Z and (to some A)")), Error);
  CHECK_THROWS_AS(fulfills(house, middle, parse("B and (unknown_edge some A)")), Error);
}

TEST_CASE("fulfills agrees with the brute-force homomorphism enumerator") {
  Rng rng(2024);
  int total = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform_below(12));
    const HeteroGraph g = oracle::random_graph(n, static_cast<int>(rng.uniform_below(30)), 3, rng);
    for (int c = 0; c < 8; ++c) {
      const std::string root = kClasses[rng.uniform_index(kClasses.size())];
      const CE ce = oracle::random_normalized_ce(kClasses, {"to"}, root, 5, rng);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        const bool expected = oracle::fulfills(g, v, ce);
        CHECK(fulfills(g, v, ce) == expected);
        ++total;
      }
      const std::vector<char> denot = denotation(g, ce);
      for (NodeId v = 0; v < g.node_count(); ++v) {
        CHECK((denot[static_cast<std::size_t>(v)] != 0) == fulfills(g, v, ce));
      }
    }
  }
  CHECK(total > 1000);
}

TEST_CASE("fulfillment is monotone under graph growth") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    HeteroGraph g = oracle::random_graph(3 + static_cast<int>(rng.uniform_below(8)),
                                         static_cast<int>(rng.uniform_below(20)), 3, rng);
    const CE ce = oracle::random_normalized_ce(kClasses, {"to"}, "A", 5, rng);
    std::vector<NodeId> holding;
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (fulfills(g, v, ce)) holding.push_back(v);
    }
    const NodeId extra = g.add_node(*g.find_node_type("B"));
    g.add_edge(extra, *g.find_edge_type("to"),
               static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(extra))));
    g.add_edge(static_cast<NodeId>(rng.uniform_index(static_cast<std::size_t>(extra))),
               *g.find_edge_type("to"), extra);
    for (NodeId v : holding) CHECK(fulfills(g, v, ce));
  }
}

TEST_CASE("random_ce draws the new class uniformly") {
  Rng rng(5);
  int counts[3] = {0, 0, 0};
  for (int i = 0; i < 3000; ++i) {
    const CE ce = random_ce(kClasses, kEdges, "A", rng);
    REQUIRE(ce->kind() == ClassExpr::Kind::kIntersection);
    CHECK(find_root_class(ce) == "A");
    CHECK(length(ce) == 2);
    const CE& restriction = ce->operands()[1];
    REQUIRE(restriction->kind() == ClassExpr::Kind::kExists);
    const std::string& picked = restriction->filler()->name();
    for (int c = 0; c < 3; ++c) {
      if (kClasses[static_cast<std::size_t>(c)] == picked) ++counts[c];
    }
  }
  // 3 sigma around 1000 for a binomial(3000, 1/3)
  for (int c = 0; c < 3; ++c) {
    CHECK(counts[c] > 1000 - 78);
    CHECK(counts[c] < 1000 + 78);
  }
  CHECK(counts[0] + counts[1] + counts[2] == 3000);

  Rng rng2(6);
  const CE singleton = random_ce({"A"}, kEdges, "B", rng2);
  CHECK(render(singleton) == "B and (r some A)");
  CHECK_THROWS_AS(random_ce({}, kEdges, "B", rng2), Error);
}

TEST_CASE("mutate_ce produces exactly the two documented shapes") {
  const CE base = parse("A and (r some B)");
  const CE intersection_shape = parse("A and (r some B) and (r some C)");
  const CE class_shape = parse("A and (r some (B and (r some C)))");

  Rng rng(31);
  int seen_intersection = 0;
  int seen_class = 0;
  for (int i = 0; i < 400; ++i) {
    const CE mutated = mutate_ce(base, {"C"}, {"r"}, rng);
    CHECK(length(mutated) == 3);
    CHECK(is_normalized(mutated));
    if (equivalent(mutated, intersection_shape)) {
      ++seen_intersection;
    } else if (equivalent(mutated, class_shape)) {
      ++seen_class;
    } else {
      FAIL("unexpected mutation: ", render(mutated));
    }
  }
  // intersection branch (1/2) plus class branch on A (1/4) both flatten to
  // the operand-append shape; class branch on B (1/4) nests.
  CHECK(seen_intersection + seen_class == 400);
  CHECK(seen_intersection > 200);
  CHECK(seen_class > 50);

  // input untouched
  CHECK(render(base) == "A and (r some B)");
}

TEST_CASE("mutation on a bare named class falls through to the class branch") {
  Rng rng(8);
  for (int i = 0; i < 50; ++i) {
    const CE mutated = mutate_ce(cls("A"), {"B"}, {"r"}, rng);
    CHECK(equivalent(mutated, parse("A and (r some B)")));
  }
}

TEST_CASE("mutation grows length by one and never removes subtrees") {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const CE ce = oracle::random_normalized_ce(kClasses, kEdges, "B", 6, rng);
    const std::string before = render(ce);
    const CE mutated = mutate_ce(ce, kClasses, kEdges, rng);
    CHECK(length(mutated) == length(ce) + 1);
    CHECK(is_normalized(mutated));
    CHECK(render(ce) == before);

    // undoing exactly one added restriction restores the input
    std::vector<CE> variants;
    removal_variants(mutated, variants);
    bool restored = false;
    for (const CE& variant : variants) {
      if (equivalent(variant, ce)) {
        restored = true;
        break;
      }
    }
    CHECK(restored);
  }
}

TEST_CASE("find_root_class") {
  CHECK(find_root_class(parse("A and (r some B)")) == "A");
  CHECK(find_root_class(cls("C")) == "C");
  CHECK_THROWS_AS(find_root_class(ex("r", cls("B"))), Error);
}

TEST_CASE("equivalent is order-insensitive, structural equality is not") {
  const CE a = parse("B and (to some A) and (to some C)");
  const CE b = parse("B and (to some C) and (to some A)");
  CHECK(equivalent(a, b));
  CHECK_FALSE(structurally_equal(a, b));
  CHECK_FALSE(equivalent(a, parse("B and (to some A)")));
}
