#include "cdt/compress.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>

namespace cdt {

// ---------------------------------------------------------------------------
// GTree / Grammar

GTree GTree::d(GTree major, GTree minor) {
  GTree t;
  t.kind = Kind::D;
  t.children.push_back(std::move(major));
  t.children.push_back(std::move(minor));
  return t;
}

GTree GTree::leaf(AxiomId id) {
  GTree t;
  t.kind = Kind::Axiom;
  t.axiom = id;
  return t;
}

GTree GTree::wildcard() {
  GTree t;
  t.kind = Kind::Wildcard;
  return t;
}

GTree GTree::param(std::string name) {
  GTree t;
  t.kind = Kind::Param;
  t.name = std::move(name);
  return t;
}

GTree GTree::call(std::string name, std::vector<GTree> args) {
  GTree t;
  t.kind = Kind::Call;
  t.name = std::move(name);
  t.children = std::move(args);
  return t;
}

void Grammar::add(Production p) {
  auto it = index_.find(p.name);
  if (it != index_.end()) {
    productions_[it->second] = std::move(p);
    return;
  }
  index_.emplace(p.name, productions_.size());
  productions_.push_back(std::move(p));
}

const Production* Grammar::find(std::string_view name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : &productions_[it->second];
}

std::string Grammar::start_name() const {
  if (productions_.empty()) throw GrammarError(GrammarError::Kind::Undefined, "grammar has no productions");
  return find("Start") ? "Start" : productions_.back().name;
}

const Production& Grammar::start() const { return *find(start_name()); }

namespace {

void collect_params(const GTree& t, std::multiset<std::string>& out) {
  if (t.kind == GTree::Kind::Param) out.insert(t.name);
  for (const auto& c : t.children) collect_params(c, out);
}

void collect_calls(const GTree& t, std::vector<const GTree*>& out) {
  if (t.kind == GTree::Kind::Call) out.push_back(&t);
  for (const auto& c : t.children) collect_calls(c, out);
}

}  // namespace

void Grammar::validate() const {
  start_name();
  for (const auto& p : productions_) {
    const std::set<std::string> declared(p.params.begin(), p.params.end());
    if (declared.size() != p.params.size())
      throw GrammarError(GrammarError::Kind::Parameters, "duplicate parameter in " + p.name);
    std::multiset<std::string> used;
    collect_params(p.rhs, used);
    for (const auto& u : used)
      if (!declared.contains(u))
        throw GrammarError(GrammarError::Kind::Parameters, "undeclared parameter " + u + " in " + p.name);
    for (const auto& d : declared)
      if (!used.contains(d))
        throw GrammarError(GrammarError::Kind::Parameters, "unused parameter " + d + " in " + p.name);
    std::vector<const GTree*> calls;
    collect_calls(p.rhs, calls);
    for (const GTree* c : calls) {
      const Production* callee = find(c->name);
      if (!callee) throw GrammarError(GrammarError::Kind::Undefined, "undefined nonterminal " + c->name);
      if (callee->params.size() != c->children.size())
        throw GrammarError(GrammarError::Kind::Arity, c->name + " expects " + std::to_string(callee->params.size()) +
                                                          " arguments, got " + std::to_string(c->children.size()));
    }
  }
  dependency_order();
}

std::vector<const Production*> Grammar::dependency_order() const {
  std::vector<const Production*> out;
  std::map<std::string, int, std::less<>> state;  // 1 visiting, 2 done
  std::function<void(const Production&)> visit = [&](const Production& p) {
    int& s = state[p.name];
    if (s == 2) return;
    if (s == 1) throw GrammarError(GrammarError::Kind::Cycle, "cyclic dependency through " + p.name);
    s = 1;
    std::vector<const GTree*> calls;
    collect_calls(p.rhs, calls);
    for (const GTree* c : calls) {
      const Production* callee = find(c->name);
      if (!callee) throw GrammarError(GrammarError::Kind::Undefined, "undefined nonterminal " + c->name);
      visit(*callee);
    }
    state[p.name] = 2;
    out.push_back(&p);
  };
  for (const auto& p : productions_) visit(p);
  return out;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class GrammarParser {
 public:
  GrammarParser(std::string_view text, std::size_t line) : s_(text), line_(line) {}

  Production production() {
    Production p;
    p.name = identifier();
    if (p.name.empty() || !std::isupper(static_cast<unsigned char>(p.name[0])) || p.name == "D")
      fail("expected a nonterminal name");
    skip();
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        std::string v = identifier();
        if (v.empty() || !std::islower(static_cast<unsigned char>(v[0]))) fail("expected a parameter name");
        p.params.push_back(v);
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    skip();
    if (s_.substr(pos_, 2) != "->") fail("expected '->'");
    pos_ += 2;
    params_ = p.params;
    p.rhs = tree();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw GrammarError(GrammarError::Kind::Syntax,
                       "line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + what);
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void expect(char c) {
    skip();
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string identifier() {
    skip();
    const std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(b, pos_ - b));
  }

  GTree tree() {
    skip();
    const char c = peek();
    if (c == '\0') fail("premature end of tree");
    if (std::isdigit(static_cast<unsigned char>(c))) {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return GTree::leaf(std::stoi(std::string(s_.substr(b, pos_ - b))));
    }
    const std::string name = identifier();
    if (name.empty()) fail(std::string("unexpected '") + c + "'");
    if (name == "D") {
      expect('(');
      GTree a = tree();
      expect(',');
      GTree b = tree();
      expect(')');
      return GTree::d(std::move(a), std::move(b));
    }
    if (std::islower(static_cast<unsigned char>(name[0]))) {
      if (std::find(params_.begin(), params_.end(), name) != params_.end()) return GTree::param(name);
      if (name == "n") return GTree::wildcard();
      fail("undeclared parameter " + name);
    }
    std::vector<GTree> args;
    skip();
    if (peek() == '(') {
      ++pos_;
      for (;;) {
        args.push_back(tree());
        skip();
        if (peek() == ',') {
          ++pos_;
          continue;
        }
        expect(')');
        break;
      }
    }
    return GTree::call(name, std::move(args));
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
  std::vector<std::string> params_;
};

void print_tree(const GTree& t, std::string& out) {
  switch (t.kind) {
    case GTree::Kind::D:
      out += "D(";
      print_tree(t.children[0], out);
      out += ',';
      print_tree(t.children[1], out);
      out += ')';
      break;
    case GTree::Kind::Axiom: out += std::to_string(t.axiom); break;
    case GTree::Kind::Wildcard: out += 'n'; break;
    case GTree::Kind::Param: out += t.name; break;
    case GTree::Kind::Call:
      out += t.name;
      if (!t.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < t.children.size(); ++i) {
          if (i) out += ',';
          print_tree(t.children[i], out);
        }
        out += ')';
      }
      break;
  }
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
  Grammar g;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    if (line.back() == '\r') line.remove_suffix(1);
    g.add(GrammarParser(line, line_no).production());
  }
  g.validate();
  return g;
}

std::string print_grammar(const Grammar& g) {
  std::string out;
  for (const auto& p : g.productions()) {
    out += p.name;
    if (!p.params.empty()) {
      out += '(';
      for (std::size_t i = 0; i < p.params.size(); ++i) out += (i ? "," : "") + p.params[i];
      out += ')';
    }
    out += " -> ";
    print_tree(p.rhs, out);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expansion and size

DTerm grammar_expand(const Grammar& g) {
  g.validate();
  std::map<std::string, DTerm, std::less<>> constants;
  std::function<DTerm(const GTree&, const std::map<std::string, DTerm>&)> expand =
      [&](const GTree& t, const std::map<std::string, DTerm>& env) -> DTerm {
    switch (t.kind) {
      case GTree::Kind::D: return DTerm::node(expand(t.children[0], env), expand(t.children[1], env));
      case GTree::Kind::Axiom: return DTerm::leaf(t.axiom);
      case GTree::Kind::Wildcard: return DTerm::wildcard();
      case GTree::Kind::Param: return env.at(t.name);
      case GTree::Kind::Call: {
        const Production& p = *g.find(t.name);
        if (p.params.empty()) {
          auto it = constants.find(p.name);
          if (it != constants.end()) return it->second;
          DTerm d = expand(p.rhs, {});
          constants.emplace(p.name, d);
          return d;
        }
        std::map<std::string, DTerm> inner;
        for (std::size_t i = 0; i < p.params.size(); ++i) inner.emplace(p.params[i], expand(t.children[i], env));
        return expand(p.rhs, inner);
      }
    }
    throw Error("internal: bad grammar node");
  };
  return expand(g.start().rhs, {});
}

namespace {

std::uint64_t edges(const GTree& t) {
  std::uint64_t e = t.children.size();
  for (const auto& c : t.children) e += edges(c);
  return e;
}

}  // namespace

std::uint64_t grammar_size(const Grammar& g) {
  std::uint64_t total = 0;
  for (const auto& p : g.productions()) total += edges(p.rhs);
  return total;
}

Grammar dag_grammar(const DTerm& d) {
  const DTerm roots[] = {d};
  const DTermDag dag = compact(roots);
  const auto& entries = dag.entries();
  const auto refs = dag.reference_counts();
  const auto root = static_cast<std::size_t>(dag.roots().front());
  std::vector<std::string> names(entries.size());
  std::size_t next = 1;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (entries[i].kind == DTerm::Kind::Node && refs[i] > 1 && i != root) names[i] = "A" + std::to_string(next++);
  std::function<GTree(std::size_t, bool)> tree = [&](std::size_t i, bool define) -> GTree {
    const auto& e = entries[i];
    if (e.kind == DTerm::Kind::Leaf) return GTree::leaf(e.axiom);
    if (e.kind == DTerm::Kind::Wildcard) return GTree::wildcard();
    if (!define && !names[i].empty()) return GTree::call(names[i]);
    return GTree::d(tree(static_cast<std::size_t>(e.major), false), tree(static_cast<std::size_t>(e.minor), false));
  };
  Grammar g;
  for (std::size_t i = 0; i < entries.size(); ++i)
    if (!names[i].empty()) g.add({names[i], {}, tree(i, true)});
  g.add({"Start", {}, tree(root, true)});
  return g;
}

// ---------------------------------------------------------------------------
// Digram compression

namespace {

std::string symbol_key(const GTree& t) {
  switch (t.kind) {
    case GTree::Kind::D: return "D";
    case GTree::Kind::Axiom: return "#" + std::to_string(t.axiom);
    case GTree::Kind::Wildcard: return "n";
    case GTree::Kind::Param: return "$" + t.name;
    case GTree::Kind::Call: return "@" + t.name;
  }
  return "?";
}

struct Digram {
  std::string parent;
  std::size_t index;
  std::string child;
  auto operator<=>(const Digram&) const = default;
};

struct DigramStats {
  std::size_t count = 0;
  std::size_t first = 0;
  std::size_t parent_arity = 0;
  std::size_t child_arity = 0;
};

// Counts non-overlapping occurrences in pre-order: an occurrence is skipped
// when its parent node was already consumed as the child of an earlier one.
void count_digrams(const GTree& t, std::map<Digram, DigramStats>& stats, std::map<Digram, std::set<const GTree*>>& used,
                   std::size_t& order) {
  if (t.kind == GTree::Kind::D || t.kind == GTree::Kind::Call) {
    for (std::size_t i = 0; i < t.children.size(); ++i) {
      const GTree& c = t.children[i];
      if (c.kind == GTree::Kind::Param) continue;
      Digram key{symbol_key(t), i, symbol_key(c)};
      auto& u = used[key];
      if (u.contains(&t)) continue;
      auto [it, inserted] = stats.try_emplace(key);
      if (inserted) {
        it->second.first = order++;
        it->second.parent_arity = t.children.size();
        it->second.child_arity = c.children.size();
      }
      ++it->second.count;
      u.insert(&c);
    }
  }
  for (const auto& c : t.children) count_digrams(c, stats, used, order);
}

bool matches(const GTree& t, const Digram& d) {
  return (t.kind == GTree::Kind::D || t.kind == GTree::Kind::Call) && d.index < t.children.size() &&
         symbol_key(t) == d.parent && t.children[d.index].kind != GTree::Kind::Param &&
         symbol_key(t.children[d.index]) == d.child;
}

void replace_digram(GTree& t, const Digram& d, const std::string& name) {
  if (matches(t, d)) {
    GTree child = std::move(t.children[d.index]);
    std::vector<GTree> args;
    for (std::size_t j = 0; j < t.children.size(); ++j) {
      if (j == d.index)
        for (auto& cc : child.children) args.push_back(std::move(cc));
      else
        args.push_back(std::move(t.children[j]));
    }
    t = GTree::call(name, std::move(args));
  }
  for (auto& c : t.children) replace_digram(c, d, name);
}

GTree digram_rhs(const GTree& parent_shape, const GTree& child_shape, std::size_t index,
                 const std::vector<std::string>& params) {
  std::size_t next = 0;
  GTree child = child_shape;
  child.children.clear();
  for (std::size_t k = 0; k < child_shape.children.size(); ++k) child.children.push_back(GTree::param(""));
  GTree parent = parent_shape;
  parent.children.clear();
  for (std::size_t j = 0; j < parent_shape.children.size(); ++j)
    parent.children.push_back(j == index ? child : GTree::param(""));
  // Number parameters left to right, the child's slots in place.
  std::function<void(GTree&)> number = [&](GTree& t) {
    if (t.kind == GTree::Kind::Param) {
      t.name = params[next++];
      return;
    }
    for (auto& c : t.children) number(c);
  };
  number(parent);
  return parent;
}

const GTree* find_occurrence(const GTree& t, const Digram& d) {
  if (matches(t, d)) return &t;
  for (const auto& c : t.children)
    if (const GTree* r = find_occurrence(c, d)) return r;
  return nullptr;
}

std::size_t count_calls(const GTree& t, const std::string& name) {
  std::size_t n = t.kind == GTree::Kind::Call && t.name == name ? 1 : 0;
  for (const auto& c : t.children) n += count_calls(c, name);
  return n;
}

GTree substitute(const GTree& t, const std::map<std::string, const GTree*>& env) {
  if (t.kind == GTree::Kind::Param) return *env.at(t.name);
  GTree out = t;
  for (auto& c : out.children) c = substitute(c, env);
  return out;
}

bool inline_call(GTree& t, const Production& p) {
  if (t.kind == GTree::Kind::Call && t.name == p.name) {
    std::map<std::string, const GTree*> env;
    for (std::size_t i = 0; i < p.params.size(); ++i) env.emplace(p.params[i], &t.children[i]);
    t = substitute(p.rhs, env);
    return true;
  }
  for (auto& c : t.children)
    if (inline_call(c, p)) return true;
  return false;
}

}  // namespace

Grammar grammar_compress(const DTerm& d, std::size_t budget) {
  const Grammar base = dag_grammar(d);
  std::vector<Production> prods = base.productions();
  std::size_t next_name = prods.size();  // A1..A(k) are taken by the DAG grammar
  for (std::size_t round = 0; round < budget; ++round) {
    std::map<Digram, DigramStats> stats;
    std::map<Digram, std::set<const GTree*>> used;
    std::size_t order = 0;
    for (const auto& p : prods) count_digrams(p.rhs, stats, used, order);
    const Digram* best = nullptr;
    const DigramStats* best_stats = nullptr;
    for (const auto& [key, s] : stats) {
      // Replacing f occurrences saves f edges and costs the new production.
      if (s.count <= s.parent_arity + s.child_arity) continue;
      if (!best || s.count > best_stats->count || (s.count == best_stats->count && s.first < best_stats->first)) {
        best = &key;
        best_stats = &s;
      }
    }
    if (!best) break;
    const Digram key = *best;
    const std::size_t arity = best_stats->parent_arity - 1 + best_stats->child_arity;
    std::vector<std::string> params;
    if (arity == 1)
      params.push_back("v");
    else
      for (std::size_t i = 1; i <= arity; ++i) params.push_back("v" + std::to_string(i));
    const GTree* shape = nullptr;
    for (const auto& p : prods)
      if ((shape = find_occurrence(p.rhs, key))) break;
    const GTree rhs = digram_rhs(*shape, shape->children[key.index], key.index, params);
    std::string name;
    do name = "A" + std::to_string(++next_name);
    while (std::any_of(prods.begin(), prods.end(), [&](const Production& p) { return p.name == name; }));
    for (auto& p : prods) replace_digram(p.rhs, key, name);
    prods.insert(prods.end() - 1, Production{name, params, rhs});  // Start stays last
  }
  // Inline nonterminals used at most once; each parameter occurs once, so
  // this never grows the grammar.
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t i = 0; i + 1 < prods.size(); ++i) {
      std::size_t uses = 0;
      for (const auto& q : prods) uses += count_calls(q.rhs, prods[i].name);
      if (uses > 1) continue;
      const Production p = prods[i];
      prods.erase(prods.begin() + static_cast<std::ptrdiff_t>(i));
      if (uses == 1)
        for (auto& q : prods)
          if (inline_call(q.rhs, p)) break;
      changed = true;
      break;
    }
  }
  Grammar g;
  for (auto& p : prods) g.add(std::move(p));
  // Renumber A1, A2, ... so that callees come first.
  std::map<std::string, std::string> rename;
  for (const Production* p : g.dependency_order())
    if (p->name != "Start") rename.emplace(p->name, "A" + std::to_string(rename.size() + 1));
  std::function<void(GTree&)> relabel = [&](GTree& t) {
    if (t.kind == GTree::Kind::Call) t.name = rename.at(t.name);
    for (auto& c : t.children) relabel(c);
  };
  Grammar ordered;
  for (const Production* p : g.dependency_order()) {
    Production q = *p;
    if (q.name != "Start") q.name = rename.at(q.name);
    relabel(q.rhs);
    ordered.add(std::move(q));
  }
  return ordered;
}

// ---------------------------------------------------------------------------
// CombTerm

CombTerm CombTerm::axiom(AxiomId id) {
  return CombTerm(std::make_shared<const Node>(Node{Kind::Axiom, id, false, nullptr}));
}

CombTerm CombTerm::wildcard() {
  static const CombTerm w(std::make_shared<const Node>(Node{Kind::Wildcard, 0, false, nullptr}));
  return w;
}

CombTerm CombTerm::iprime() {
  static const CombTerm i(std::make_shared<const Node>(Node{Kind::IPrime, 0, true, nullptr}));
  return i;
}

CombTerm CombTerm::b(int n) {
  if (n < 2) throw Error("B<n> needs n >= 2");
  return CombTerm(std::make_shared<const Node>(Node{Kind::B, n, true, nullptr}));
}

CombTerm CombTerm::node(CombTerm major, CombTerm minor) {
  const bool comb = major.has_combinators() || minor.has_combinators();
  return CombTerm(std::make_shared<const Node>(
      Node{Kind::Node, 0, comb, std::make_unique<std::pair<CombTerm, CombTerm>>(std::move(major), std::move(minor))}));
}

CombTerm CombTerm::from_dterm(const DTerm& d) {
  std::unordered_map<const void*, CombTerm> memo;
  std::function<CombTerm(const DTerm&)> go = [&](const DTerm& t) -> CombTerm {
    auto it = memo.find(t.identity());
    if (it != memo.end()) return it->second;
    CombTerm r = t.is_leaf() ? axiom(t.axiom()) : t.is_wildcard() ? wildcard() : node(go(t.major()), go(t.minor()));
    memo.emplace(t.identity(), r);
    return r;
  };
  return go(d);
}

DTerm CombTerm::to_dterm() const {
  std::unordered_map<const void*, DTerm> memo;
  std::function<DTerm(const CombTerm&)> go = [&](const CombTerm& t) -> DTerm {
    auto it = memo.find(t.identity());
    if (it != memo.end()) return it->second;
    DTerm r;
    switch (t.kind()) {
      case Kind::Axiom: r = DTerm::leaf(t.axiom_id()); break;
      case Kind::Wildcard: r = DTerm::wildcard(); break;
      case Kind::IPrime:
      case Kind::B: throw StuckTerm("combinator " + print_comb(t) + " remains in the term");
      case Kind::Node: r = DTerm::node(go(t.major()), go(t.minor())); break;
    }
    memo.emplace(t.identity(), r);
    return r;
  };
  return go(*this);
}

bool operator==(const CombTerm& a, const CombTerm& b) {
  if (a.identity() == b.identity()) return true;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case CombTerm::Kind::Axiom: return a.axiom_id() == b.axiom_id();
    case CombTerm::Kind::Wildcard:
    case CombTerm::Kind::IPrime: return true;
    case CombTerm::Kind::B: return a.arity() == b.arity();
    case CombTerm::Kind::Node: return a.major() == b.major() && a.minor() == b.minor();
  }
  return false;
}

std::string print_comb(const CombTerm& t) {
  switch (t.kind()) {
    case CombTerm::Kind::Axiom: return std::to_string(t.axiom_id());
    case CombTerm::Kind::Wildcard: return "n";
    case CombTerm::Kind::IPrime: return "I'";
    case CombTerm::Kind::B: return t.arity() == 3 ? "B" : "B" + std::to_string(t.arity());
    case CombTerm::Kind::Node: return "D(" + print_comb(t.major()) + "," + print_comb(t.minor()) + ")";
  }
  return "?";
}

CombTerm parse_comb(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& what) -> void { throw ParseError(what, pos); };
  std::function<CombTerm()> term = [&]() -> CombTerm {
    skip();
    if (pos >= text.size()) fail("premature end of combinator term");
    const char c = text[pos];
    auto number = [&] {
      const std::size_t b = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      return std::stoi(std::string(text.substr(b, pos - b)));
    };
    if (std::isdigit(static_cast<unsigned char>(c))) return CombTerm::axiom(number());
    ++pos;
    if (c == 'n') return CombTerm::wildcard();
    if (c == 'I') {
      if (pos >= text.size() || text[pos] != '\'') fail("expected I'");
      ++pos;
      return CombTerm::iprime();
    }
    if (c == 'B') {
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) return CombTerm::b(number());
      return CombTerm::b(3);
    }
    if (c == 'D') {
      skip();
      if (pos >= text.size() || text[pos] != '(') fail("expected '('");
      ++pos;
      CombTerm a = term();
      skip();
      if (pos >= text.size() || text[pos] != ',') fail("expected ','");
      ++pos;
      CombTerm b = term();
      skip();
      if (pos >= text.size() || text[pos] != ')') fail("expected ')'");
      ++pos;
      return CombTerm::node(std::move(a), std::move(b));
    }
    --pos;
    fail(std::string("unexpected '") + c + "'");
    return CombTerm::wildcard();
  };
  CombTerm t = term();
  skip();
  if (pos != text.size()) throw ParseError("trailing input after combinator term", pos);
  return t;
}

Dimensions comb_dims(const CombTerm& t) {
  // Structural sharing: identical subterms are one DAG node.
  std::map<std::tuple<int, std::int64_t, std::int64_t>, std::int64_t> ids;
  struct Info {
    std::int64_t id;
    std::uint64_t tree;
    std::uint64_t height;
  };
  std::unordered_map<const void*, Info> memo;
  std::vector<CombTerm> keep;
  std::function<Info(const CombTerm&)> go = [&](const CombTerm& x) -> Info {
    auto it = memo.find(x.identity());
    if (it != memo.end()) return it->second;
    Info info{};
    if (x.is_node()) {
      const Info a = go(x.major());
      const Info b = go(x.minor());
      auto [pos, inserted] = ids.try_emplace({4, a.id, b.id}, static_cast<std::int64_t>(ids.size()));
      info = {pos->second, a.tree + b.tree + 1, std::max(a.height, b.height) + 1};
    } else {
      const std::int64_t v = x.kind() == CombTerm::Kind::Axiom ? x.axiom_id() : x.kind() == CombTerm::Kind::B ? x.arity() : 0;
      auto [pos, inserted] = ids.try_emplace({static_cast<int>(x.kind()), v, -1}, static_cast<std::int64_t>(ids.size()));
      info = {pos->second, 0, 0};
    }
    keep.push_back(x);
    memo.emplace(x.identity(), info);
    return info;
  };
  const Info root = go(t);
  std::uint64_t inner = 0;
  for (const auto& [key, id] : ids)
    if (std::get<0>(key) == 4) ++inner;
  return {inner, root.tree, root.height};
}

// ---------------------------------------------------------------------------
// Bracket abstraction

namespace {

bool mentions(const GTree& t, const std::string& v) {
  if (t.kind == GTree::Kind::Param) return t.name == v;
  return std::any_of(t.children.begin(), t.children.end(), [&](const GTree& c) { return mentions(c, v); });
}

// Head and arguments of an application spine, first argument first.
std::pair<CombTerm, std::vector<CombTerm>> unwind(const CombTerm& t) {
  std::vector<CombTerm> args;
  CombTerm head = t;
  while (head.is_node()) {
    args.push_back(head.minor());
    CombTerm next = head.major();
    head = next;
  }
  std::reverse(args.begin(), args.end());
  return {head, args};
}

CombTerm apply_all(CombTerm head, const std::vector<CombTerm>& args, std::size_t from = 0) {
  for (std::size_t i = from; i < args.size(); ++i) head = CombTerm::node(std::move(head), args[i]);
  return head;
}

// A term T with D(T, t) reducing to D(f, D(g, t)); B chains are folded
// into a single B<n>.
CombTerm compose(const CombTerm& f, const CombTerm& g) {
  auto [head, args] = unwind(g);
  if (head.kind() == CombTerm::Kind::B && static_cast<int>(args.size()) == head.arity() - 1) {
    std::vector<CombTerm> all{f};
    all.insert(all.end(), args.begin(), args.end());
    return apply_all(CombTerm::b(head.arity() + 1), all);
  }
  return CombTerm::node(CombTerm::node(CombTerm::b(3), f), g);
}

class Converter {
 public:
  explicit Converter(const Grammar& g) : g_(g) {}

  CombTerm run() {
    g_.validate();
    for (const Production* p : g_.dependency_order()) {
      if (p->params.empty()) {
        terms_.emplace(p->name, convert(p->rhs, *p));
        continue;
      }
      if (p->params.size() > 1) throw Unconvertible(p->name, "more than one parameter");
      std::multiset<std::string> uses;
      collect_params(p->rhs, uses);
      if (uses.count(p->params[0]) != 1) throw Unconvertible(p->name, "parameter must occur exactly once");
      if (p->rhs.kind == GTree::Kind::Param) throw Unconvertible(p->name, "identity production");
      terms_.emplace(p->name, abstract(p->rhs, p->params[0], *p));
    }
    return terms_.at(g_.start_name());
  }

 private:
  CombTerm convert(const GTree& t, const Production& in) {
    switch (t.kind) {
      case GTree::Kind::D: return CombTerm::node(convert(t.children[0], in), convert(t.children[1], in));
      case GTree::Kind::Axiom: return CombTerm::axiom(t.axiom);
      case GTree::Kind::Wildcard: return CombTerm::wildcard();
      case GTree::Kind::Param: throw Unconvertible(in.name, "unexpected parameter");
      case GTree::Kind::Call: {
        const CombTerm& callee = terms_.at(t.name);
        if (t.children.empty()) return callee;
        return CombTerm::node(callee, convert(t.children[0], in));
      }
    }
    throw Error("internal: bad grammar node");
  }

  // T such that D(T, x) reduces to t with v := x; v occurs once in t.
  CombTerm abstract(const GTree& t, const std::string& v, const Production& in) {
    const GTree* fun = nullptr;  // t read as an application D(fun, arg)
    CombTerm fun_term = CombTerm::wildcard();
    const GTree* arg = nullptr;
    if (t.kind == GTree::Kind::Call) {
      fun_term = terms_.at(t.name);
      arg = &t.children.at(0);
    } else if (t.kind == GTree::Kind::D) {
      fun = &t.children[0];
      arg = &t.children[1];
    } else {
      throw Unconvertible(in.name, "parameter in an unsupported position");
    }
    if (fun && mentions(*fun, v)) {
      // v in the major premise: swap with I' and abstract over the major.
      const CombTerm swapped = CombTerm::node(CombTerm::iprime(), convert(*arg, in));
      if (fun->kind == GTree::Kind::Param) return swapped;
      return compose(swapped, abstract(*fun, v, in));
    }
    const CombTerm f = fun ? convert(*fun, in) : fun_term;
    if (arg->kind == GTree::Kind::Param) return f;
    return compose(f, abstract(*arg, v, in));
  }

  const Grammar& g_;
  std::map<std::string, CombTerm, std::less<>> terms_;
};

}  // namespace

CombTerm to_combinators(const Grammar& g) { return Converter(g).run(); }

// ---------------------------------------------------------------------------
// Reduction

namespace {

class Reducer {
 public:
  Reducer(std::uint64_t cap, ReductionOrder order) : cap_(cap), order_(order) {}

  CombTerm normalize(const CombTerm& t) {
    auto it = memo_.find(t.identity());
    if (it != memo_.end()) return it->second.second;
    CombTerm r = order_ == ReductionOrder::LeftmostOutermost ? outermost(t) : innermost(t);
    memo_.emplace(t.identity(), std::pair(t, r));
    return r;
  }

  std::uint64_t steps() const { return steps_; }

 private:
  // Contracts the redex at the head of the spine, if there is one.
  bool contract(CombTerm& t) {
    auto [head, args] = unwind(t);
    if (!head.is_combinator() || static_cast<int>(args.size()) < head.arity()) return false;
    const auto k = static_cast<std::size_t>(head.arity());
    CombTerm r = CombTerm::wildcard();
    if (head.kind() == CombTerm::Kind::IPrime) {
      r = CombTerm::node(args[1], args[0]);
    } else {
      r = args[k - 1];
      for (std::size_t i = k - 1; i-- > 0;) r = CombTerm::node(args[i], r);
    }
    t = apply_all(r, args, k);
    if (++steps_ > cap_) throw StepCapExceeded("combinator reduction exceeded " + std::to_string(cap_) + " steps");
    return true;
  }

  CombTerm outermost(CombTerm t) {
    if (!t.has_combinators()) return t;
    while (contract(t)) {
    }
    auto [head, args] = unwind(t);
    if (head.is_combinator()) throw StuckTerm("under-applied combinator " + print_comb(head));
    CombTerm r = head;
    for (const auto& a : args) r = CombTerm::node(r, normalize(a));
    return r;
  }

  CombTerm innermost(const CombTerm& t) {
    if (!t.has_combinators()) return t;
    if (!t.is_node()) return t;
    CombTerm r = CombTerm::node(normalize(t.major()), normalize(t.minor()));
    // Partial applications are left alone; to_dterm reports them if they
    // survive to the top.
    if (contract(r)) return normalize(r);
    return r;
  }

  std::uint64_t cap_;
  ReductionOrder order_;
  std::uint64_t steps_ = 0;
  std::unordered_map<const void*, std::pair<CombTerm, CombTerm>> memo_;
};

}  // namespace

ReductionResult combinator_reduce(const CombTerm& t, std::uint64_t step_cap, ReductionOrder order) {
  Reducer r(step_cap, order);
  const CombTerm nf = r.normalize(t);
  return {nf.to_dterm(), r.steps()};
}

}  // namespace cdt
