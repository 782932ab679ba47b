#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "elex/graph_io.hpp"
#include "elex/graph_synth.hpp"
#include "oracles.hpp"

using namespace elex;

namespace {

const std::vector<std::string> kClasses = {"A", "B", "C", "D"};
const std::vector<std::string> kEdges = {"r"};

int count_existentials(const CE& ce) {
  int n = ce->kind() == ClassExpr::Kind::kExists ? 1 : 0;
  for (const CE& op : ce->operands()) n += count_existentials(op);
  return n;
}

}  // namespace

TEST_CASE("a bare named class synthesizes a single node") {
  const GraphSynthesizer synth(kClasses, kEdges);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const SynthesisOutcome outcome = synth.create(parse("A"), rng);
    CHECK(outcome.graph.node_count() == 1);
    CHECK(outcome.graph.edge_count() == 0);
    CHECK(outcome.root == 0);
    CHECK(outcome.reuse_events == 0);
    CHECK(outcome.graph.node_type_name(outcome.graph.node_type(0)) == "A");
  }
}

TEST_CASE("chain-or-triangle outcomes for the nested reuse example") {
  // A and (r some (B and (r some (B and (r some A)))))
  const CE ce = parse("A and (r some (B and (r some (B and (r some A)))))");
  const GraphSynthesizer synth(kClasses, kEdges);

  std::set<int> node_counts;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const SynthesisOutcome outcome = synth.create(ce, rng);
    node_counts.insert(outcome.graph.node_count());
    CHECK(fulfills(outcome.graph, outcome.root, ce));
    CHECK(outcome.graph.node_type_name(outcome.graph.node_type(outcome.root)) == "A");
  }
  // fresh chain A-B-B-A and the triangle that reuses the root A
  CHECK(node_counts.count(4) == 1);
  CHECK(node_counts.count(3) == 1);
}

TEST_CASE("every outcome's root fulfills the CE") {
  Rng rng(1234);
  const GraphSynthesizer synth(kClasses, {"to"});
  for (int trial = 0; trial < 200; ++trial) {
    const std::string root = kClasses[rng.uniform_index(kClasses.size())];
    const CE ce = oracle::random_normalized_ce(kClasses, {"to"}, root, 8, rng);
    const std::vector<SynthesisOutcome> batch = synth.create_batch(ce, 5, rng.next_u64());
    for (const SynthesisOutcome& outcome : batch) {
      CHECK(fulfills(outcome.graph, outcome.root, ce));
      for (NodeId v = 0; v < outcome.graph.node_count(); ++v) {
        CHECK(outcome.graph.node_type(v) != kUntypedNode);
      }
    }
  }
}

TEST_CASE("node count is bounded by 1 + number of existentials") {
  Rng rng(555);
  const GraphSynthesizer synth(kClasses, kEdges);
  for (int trial = 0; trial < 300; ++trial) {
    const CE ce = oracle::random_normalized_ce(kClasses, kEdges, "A", 8, rng);
    Rng item(rng.next_u64());
    const SynthesisOutcome outcome = synth.create(ce, item);
    CHECK(outcome.graph.node_count() <= 1 + count_existentials(ce));
    CHECK(outcome.graph.node_count() >= 1);
  }
}

TEST_CASE("reuse fires with probability one half") {
  // A and (r some A): the root always qualifies for reuse, so half of the
  // outcomes collapse to a single node.
  const CE ce = parse("A and (r some A)");
  const GraphSynthesizer synth(kClasses, kEdges);
  const int runs = 2000;
  int reused = 0;
  for (std::uint64_t seed = 0; seed < runs; ++seed) {
    Rng rng(derive_seed(987, seed));
    const SynthesisOutcome outcome = synth.create(ce, rng);
    if (outcome.reuse_events > 0) {
      ++reused;
      CHECK(outcome.graph.node_count() == 1);
    } else {
      CHECK(outcome.graph.node_count() == 2);
    }
    CHECK(fulfills(outcome.graph, outcome.root, ce));
  }
  // 3 sigma for binomial(2000, 1/2) is about 67
  CHECK(reused > 1000 - 68);
  CHECK(reused < 1000 + 68);
}

TEST_CASE("batches are reproducible under a fixed seed") {
  const CE ce = parse("B and (r some A) and (r some (C and (r some B)))");
  const GraphSynthesizer synth(kClasses, kEdges);
  const auto batch1 = synth.create_batch(ce, 20, 71);
  const auto batch2 = synth.create_batch(ce, 20, 71);
  REQUIRE(batch1.size() == batch2.size());
  bool any_difference_between_items = false;
  for (std::size_t i = 0; i < batch1.size(); ++i) {
    CHECK(batch1[i].root == batch2[i].root);
    CHECK(batch1[i].reuse_events == batch2[i].reuse_events);
    CHECK(graph_to_json(batch1[i].graph) == graph_to_json(batch2[i].graph));
    if (i > 0 && graph_to_json(batch1[i].graph) != graph_to_json(batch1[0].graph)) {
      any_difference_between_items = true;
    }
  }
  CHECK(any_difference_between_items);  // items use independent generators
}

TEST_CASE("count=1 with a constant CE is deterministic regardless of seed") {
  const GraphSynthesizer synth(kClasses, kEdges);
  const auto a = synth.create_batch(parse("A"), 1, 1);
  const auto b = synth.create_batch(parse("A"), 1, 999);
  CHECK(graph_to_json(a[0].graph) == graph_to_json(b[0].graph));
  CHECK_THROWS_AS(synth.create_batch(parse("A"), 0, 1), Error);
}

TEST_CASE("synthesis rejects non-normalized or out-of-universe CEs") {
  const GraphSynthesizer synth(kClasses, kEdges);
  Rng rng(1);
  CHECK_THROWS_AS(synth.create(ClassExpr::make_exists("r", parse("A")), rng), Error);
  CHECK_THROWS_AS(synth.create(parse("Z and (r some A)"), rng), Error);
  CHECK_THROWS_AS(synth.create(parse("A and (q some B)"), rng), Error);
}

TEST_CASE("create_graph derives the universe from the CE") {
  Rng rng(3);
  const SynthesisOutcome outcome = create_graph(parse("B and (to some A)"), rng);
  CHECK(fulfills(outcome.graph, outcome.root, parse("B and (to some A)")));
  CHECK(outcome.graph.find_node_type("A").has_value());
  CHECK(outcome.graph.find_node_type("B").has_value());
}
