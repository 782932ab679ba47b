#include "elex/class_expr.hpp"

#include <algorithm>
#include <cctype>
#include <utility>

namespace elex {

namespace {

using Kind = ClassExpr::Kind;

int count_intersections(const CE& ce) {
  int n = ce->kind() == Kind::kIntersection ? 1 : 0;
  for (const CE& op : ce->operands()) n += count_intersections(op);
  return n;
}

}  // namespace

CE ClassExpr::make_class(std::string name) {
  if (name.empty()) throw Error("class expression: empty class name");
  return CE(new ClassExpr(Kind::kClass, std::move(name), {}));
}

CE ClassExpr::make_exists(std::string property, CE filler) {
  if (property.empty()) throw Error("class expression: empty property name");
  if (!filler) throw Error("class expression: existential without filler");
  return CE(new ClassExpr(Kind::kExists, std::move(property), {std::move(filler)}));
}

CE ClassExpr::make_intersection(std::vector<CE> operands) {
  // Flatten directly nested intersections (conjunction is associative).
  std::vector<CE> flat;
  for (CE& op : operands) {
    if (!op) throw Error("class expression: null intersection operand");
    if (op->kind() == Kind::kIntersection) {
      flat.insert(flat.end(), op->operands().begin(), op->operands().end());
    } else {
      flat.push_back(std::move(op));
    }
  }
  if (flat.empty()) throw Error("intersection: no operands");
  if (flat.size() == 1) return flat.front();

  int named = 0;
  for (const CE& op : flat) {
    if (op->kind() == Kind::kClass) ++named;
  }
  if (named == 0) {
    throw Error("intersection: requires exactly one named class, found none");
  }
  if (named > 1) {
    throw Error("intersection: requires exactly one named class, found " +
                std::to_string(named));
  }
  return CE(new ClassExpr(Kind::kIntersection, "", std::move(flat)));
}

int length(const CE& ce) {
  if (!ce) throw Error("length: null class expression");
  if (ce->kind() == Kind::kClass) return 1;
  int n = 0;
  for (const CE& op : ce->operands()) n += length(op);
  return n;
}

const std::string& find_root_class(const CE& ce) {
  if (!ce) throw Error("find_root_class: null class expression");
  if (ce->kind() == Kind::kClass) return ce->name();
  if (ce->kind() == Kind::kIntersection) {
    for (const CE& op : ce->operands()) {
      if (op->kind() == Kind::kClass) return op->name();
    }
    throw Error("find_root_class: intersection without named class");
  }
  throw Error("find_root_class: existential restriction has no root class");
}

bool is_normalized(const CE& ce) {
  if (!ce) return false;
  switch (ce->kind()) {
    case Kind::kClass:
      return true;
    case Kind::kIntersection:
      for (const CE& op : ce->operands()) {
        if (op->kind() == Kind::kExists && !is_normalized(op->filler())) return false;
      }
      return true;
    case Kind::kExists:
      // A bare existential has no root class to map onto a node.
      return false;
  }
  return false;
}

// --- render / parse -------------------------------------------------------

namespace {

void render_to(const CE& ce, std::string& out, bool parenthesize_exists) {
  switch (ce->kind()) {
    case Kind::kClass:
      out += ce->name();
      return;
    case Kind::kExists: {
      if (parenthesize_exists) out += '(';
      out += ce->name();
      out += " some ";
      const CE& f = ce->filler();
      if (f->kind() == Kind::kClass) {
        out += f->name();
      } else {
        out += '(';
        render_to(f, out, false);
        out += ')';
      }
      if (parenthesize_exists) out += ')';
      return;
    }
    case Kind::kIntersection: {
      bool first = true;
      for (const CE& op : ce->operands()) {
        if (!first) out += " and ";
        first = false;
        render_to(op, out, true);
      }
      return;
    }
  }
}

struct Token {
  enum Type { kIdent, kAnd, kSome, kLParen, kRParen, kEnd } type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '(') {
      tokens.push_back({Token::kLParen, "(", i});
      ++i;
    } else if (c == ')') {
      tokens.push_back({Token::kRParen, ")", i});
      ++i;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = i;
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) ||
                                 text[i] == '_')) {
        ++i;
      }
      std::string word(text.substr(start, i - start));
      if (word == "and") {
        tokens.push_back({Token::kAnd, std::move(word), start});
      } else if (word == "some") {
        tokens.push_back({Token::kSome, std::move(word), start});
      } else {
        tokens.push_back({Token::kIdent, std::move(word), start});
      }
    } else {
      throw ParseError("unexpected character '" + std::string(1, c) + "'", i);
    }
  }
  tokens.push_back({Token::kEnd, "", text.size()});
  return tokens;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : tokens_(tokenize(text)) {}

  CE parse_all() {
    CE ce = parse_conjunction();
    expect(Token::kEnd, "end of input");
    return ce;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& advance() { return tokens_[index_++]; }

  void expect(Token::Type type, const std::string& what) {
    if (peek().type != type) {
      throw ParseError("expected " + what + ", got '" + peek().text + "'", peek().pos);
    }
    advance();
  }

  // conjunction := term ('and' term)*
  CE parse_conjunction() {
    const std::size_t start = peek().pos;
    std::vector<CE> terms;
    terms.push_back(parse_term());
    while (peek().type == Token::kAnd) {
      advance();
      terms.push_back(parse_term());
    }
    if (terms.size() == 1) return terms.front();
    try {
      return ClassExpr::make_intersection(std::move(terms));
    } catch (const Error& e) {
      throw ParseError(e.what(), start);
    }
  }

  // term := '(' conjunction ')' | IDENT | IDENT 'some' term
  // The filler binds tightly; parenthesize to extend it over 'and'.
  CE parse_term() {
    if (peek().type == Token::kLParen) {
      advance();
      CE inner = parse_conjunction();
      expect(Token::kRParen, "')'");
      return inner;
    }
    if (peek().type != Token::kIdent) {
      throw ParseError("expected a type name or '('" +
                           (peek().type == Token::kEnd ? std::string(", got end of input")
                                                       : ", got '" + peek().text + "'"),
                       peek().pos);
    }
    const Token ident = advance();
    if (peek().type == Token::kSome) {
      advance();
      CE filler = parse_term();
      return ClassExpr::make_exists(ident.text, std::move(filler));
    }
    return ClassExpr::make_class(ident.text);
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace

std::string render(const CE& ce) {
  if (!ce) throw Error("render: null class expression");
  std::string out;
  render_to(ce, out, false);
  return out;
}

CE parse(std::string_view text) {
  return Parser(text).parse_all();
}

// --- comparison -----------------------------------------------------------

namespace {

std::string canonical_key(const CE& ce) {
  switch (ce->kind()) {
    case Kind::kClass:
      return "c:" + ce->name();
    case Kind::kExists:
      return "e:" + ce->name() + "(" + canonical_key(ce->filler()) + ")";
    case Kind::kIntersection: {
      std::vector<std::string> keys;
      keys.reserve(ce->operands().size());
      for (const CE& op : ce->operands()) keys.push_back(canonical_key(op));
      std::sort(keys.begin(), keys.end());
      std::string out = "i:(";
      for (const std::string& k : keys) {
        out += k;
        out += ';';
      }
      out += ')';
      return out;
    }
  }
  return {};
}

}  // namespace

bool structurally_equal(const CE& a, const CE& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind() != b->kind() || a->name() != b->name() ||
      a->operands().size() != b->operands().size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->operands().size(); ++i) {
    if (!structurally_equal(a->operands()[i], b->operands()[i])) return false;
  }
  return true;
}

bool equivalent(const CE& a, const CE& b) {
  if (!a || !b) return false;
  return canonical_key(a) == canonical_key(b);
}

// --- fulfillment ----------------------------------------------------------

namespace {

// CE compiled against a graph's type universe: preorder-flattened nodes with
// resolved type ids, so evaluation can memoize on (entry, node) pairs.
struct CompiledCE {
  struct Entry {
    Kind kind;
    std::int32_t type = 0;  // NodeTypeId (kClass) or EdgeTypeId (kExists)
    std::vector<int> children;
  };
  std::vector<Entry> entries;
};

int compile_into(const HeteroGraph& graph, const CE& ce, CompiledCE& out) {
  const int index = static_cast<int>(out.entries.size());
  out.entries.emplace_back();
  out.entries[index].kind = ce->kind();
  switch (ce->kind()) {
    case Kind::kClass: {
      auto type = graph.find_node_type(ce->name());
      if (!type) throw Error("fulfills: class '" + ce->name() + "' not a node type of the graph");
      out.entries[index].type = *type;
      break;
    }
    case Kind::kExists: {
      auto type = graph.find_edge_type(ce->name());
      if (!type) throw Error("fulfills: property '" + ce->name() + "' not an edge type of the graph");
      out.entries[index].type = *type;
      break;
    }
    case Kind::kIntersection:
      break;
  }
  for (const CE& op : ce->operands()) {
    int child = compile_into(graph, op, out);
    out.entries[index].children.push_back(child);
  }
  return index;
}

CompiledCE compile(const HeteroGraph& graph, const CE& ce) {
  if (!ce) throw Error("fulfills: null class expression");
  CompiledCE out;
  compile_into(graph, ce, out);
  return out;
}

class FulfillEvaluator {
 public:
  FulfillEvaluator(const HeteroGraph& graph, const CompiledCE& ce)
      : graph_(graph),
        ce_(ce),
        memo_(ce.entries.size() * static_cast<std::size_t>(graph.node_count()), -1) {}

  bool eval(int entry, NodeId node) {
    std::int8_t& slot =
        memo_[static_cast<std::size_t>(entry) * static_cast<std::size_t>(graph_.node_count()) +
              static_cast<std::size_t>(node)];
    if (slot >= 0) return slot != 0;
    const CompiledCE::Entry& e = ce_.entries[static_cast<std::size_t>(entry)];
    bool result = false;
    switch (e.kind) {
      case Kind::kClass:
        result = graph_.node_type(node) == e.type;
        break;
      case Kind::kIntersection: {
        result = true;
        for (int child : e.children) {
          if (!eval(child, node)) {
            result = false;
            break;
          }
        }
        break;
      }
      case Kind::kExists: {
        for (EdgeId eid : graph_.out_edges(node)) {
          const Edge& edge = graph_.edge(eid);
          if (edge.etype == e.type && eval(e.children.front(), edge.dst)) {
            result = true;
            break;
          }
        }
        break;
      }
    }
    slot = result ? 1 : 0;
    return result;
  }

 private:
  const HeteroGraph& graph_;
  const CompiledCE& ce_;
  std::vector<std::int8_t> memo_;
};

}  // namespace

bool fulfills(const HeteroGraph& graph, NodeId node, const CE& ce) {
  if (!graph.has_node(node)) throw Error("fulfills: unknown node id " + std::to_string(node));
  CompiledCE compiled = compile(graph, ce);
  FulfillEvaluator eval(graph, compiled);
  return eval.eval(0, node);
}

std::vector<char> denotation(const HeteroGraph& graph, const CE& ce) {
  CompiledCE compiled = compile(graph, ce);
  const std::size_t n = static_cast<std::size_t>(graph.node_count());
  std::vector<std::vector<char>> values(compiled.entries.size());

  // Children precede parents when iterating preorder entries backwards.
  for (int i = static_cast<int>(compiled.entries.size()) - 1; i >= 0; --i) {
    const CompiledCE::Entry& e = compiled.entries[static_cast<std::size_t>(i)];
    std::vector<char> v(n, 0);
    switch (e.kind) {
      case Kind::kClass:
        for (NodeId u = 0; u < graph.node_count(); ++u) {
          v[static_cast<std::size_t>(u)] = graph.node_type(u) == e.type ? 1 : 0;
        }
        break;
      case Kind::kIntersection: {
        v.assign(n, 1);
        for (int child : e.children) {
          const std::vector<char>& cv = values[static_cast<std::size_t>(child)];
          for (std::size_t u = 0; u < n; ++u) v[u] = static_cast<char>(v[u] & cv[u]);
        }
        break;
      }
      case Kind::kExists: {
        const std::vector<char>& fv = values[static_cast<std::size_t>(e.children.front())];
        for (const Edge& edge : graph.edges()) {
          if (edge.etype == e.type && fv[static_cast<std::size_t>(edge.dst)]) {
            v[static_cast<std::size_t>(edge.src)] = 1;
          }
        }
        break;
      }
    }
    values[static_cast<std::size_t>(i)] = std::move(v);
  }
  return values.front();
}

// --- creation and mutation ------------------------------------------------

CE random_ce(const std::vector<std::string>& classes,
             const std::vector<std::string>& edge_types,
             const std::string& class_to_explain, Rng& rng) {
  if (classes.empty()) throw Error("random_ce: empty class list");
  if (edge_types.empty()) throw Error("random_ce: empty edge type list");
  const std::string& class_new = rng.pick(classes);
  const std::string& property = rng.pick(edge_types);
  return ClassExpr::make_intersection(
      {ClassExpr::make_class(class_to_explain),
       ClassExpr::make_exists(property, ClassExpr::make_class(class_new))});
}

namespace {

// Appends `extra` to the pos-th intersection (preorder). pos counts down and
// goes negative once the site is consumed.
CE add_operand_at(const CE& ce, int& pos, const CE& extra) {
  if (pos < 0 || ce->kind() == Kind::kClass) return ce;
  if (ce->kind() == Kind::kIntersection) {
    if (pos == 0) {
      pos = -1;
      std::vector<CE> ops = ce->operands();
      ops.push_back(extra);
      return ClassExpr::make_intersection(std::move(ops));
    }
    --pos;
    std::vector<CE> ops;
    ops.reserve(ce->operands().size());
    bool changed = false;
    for (const CE& op : ce->operands()) {
      CE rebuilt = add_operand_at(op, pos, extra);
      changed |= rebuilt.get() != op.get();
      ops.push_back(std::move(rebuilt));
    }
    return changed ? ClassExpr::make_intersection(std::move(ops)) : ce;
  }
  CE filler = add_operand_at(ce->filler(), pos, extra);
  return filler.get() == ce->filler().get() ? ce
                                            : ClassExpr::make_exists(ce->name(), filler);
}

// Replaces the pos-th named class (preorder) with Intersection(class, extra);
// flattening in make_intersection keeps the result normalized when the class
// was already an intersection operand.
CE replace_class_at(const CE& ce, int& pos, const CE& extra) {
  if (pos < 0) return ce;
  if (ce->kind() == Kind::kClass) {
    if (pos == 0) {
      pos = -1;
      return ClassExpr::make_intersection({ce, extra});
    }
    --pos;
    return ce;
  }
  if (ce->kind() == Kind::kIntersection) {
    std::vector<CE> ops;
    ops.reserve(ce->operands().size());
    bool changed = false;
    for (const CE& op : ce->operands()) {
      CE rebuilt = replace_class_at(op, pos, extra);
      changed |= rebuilt.get() != op.get();
      ops.push_back(std::move(rebuilt));
    }
    return changed ? ClassExpr::make_intersection(std::move(ops)) : ce;
  }
  CE filler = replace_class_at(ce->filler(), pos, extra);
  return filler.get() == ce->filler().get() ? ce
                                            : ClassExpr::make_exists(ce->name(), filler);
}

}  // namespace

CE mutate_ce(const CE& ce, const std::vector<std::string>& classes,
             const std::vector<std::string>& edge_types, Rng& rng) {
  if (!ce) throw Error("mutate_ce: null class expression");
  if (classes.empty()) throw Error("mutate_ce: empty class list");
  if (edge_types.empty()) throw Error("mutate_ce: empty edge type list");

  // Draw order is pinned: new class, property, branch, site.
  const std::string& class_new = rng.pick(classes);
  const std::string& property = rng.pick(edge_types);
  CE extra = ClassExpr::make_exists(property, ClassExpr::make_class(class_new));

  bool intersection_branch = rng.uniform_below(2) == 0;
  const int n_intersections = count_intersections(ce);
  if (intersection_branch && n_intersections == 0) intersection_branch = false;

  if (intersection_branch) {
    int pos = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n_intersections)));
    return add_operand_at(ce, pos, extra);
  }
  int pos = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(length(ce))));
  return replace_class_at(ce, pos, extra);
}

}  // namespace elex
