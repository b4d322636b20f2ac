#include "cdt/dterm.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <unordered_map>
#include <unordered_set>

#include "cdt/error.hpp"

namespace cdt {

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  return h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
}

}  // namespace

DTerm DTerm::leaf(AxiomId id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Leaf;
  n->axiom = id;
  n->height = 0;
  n->tree_size = 0;
  n->hash = mix(0x51ed27, static_cast<std::size_t>(id));
  return DTerm(std::move(n));
}

DTerm DTerm::wildcard() {
  static const DTerm w = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Wildcard;
    n->axiom = 0;
    n->height = 0;
    n->tree_size = 0;
    n->hash = 0x6e6e6e;
    return DTerm(std::move(n));
  }();
  return w;
}

DTerm DTerm::node(DTerm major, DTerm minor) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Node;
  n->axiom = 0;
  n->height = std::max(major.height(), minor.height()) + 1;
  n->tree_size = major.tree_size() + minor.tree_size() + 1;
  n->hash = mix(mix(0xd0d0, major.hash()), minor.hash());
  n->children = std::make_unique<Children>(Children{std::move(major), std::move(minor)});
  return DTerm(std::move(n));
}

bool operator==(const DTerm& a, const DTerm& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.tree_size() != b.tree_size()) return false;
  switch (a.kind()) {
    case DTerm::Kind::Leaf: return a.axiom() == b.axiom();
    case DTerm::Kind::Wildcard: return true;
    case DTerm::Kind::Node: return a.major() == b.major() && a.minor() == b.minor();
  }
  return false;
}

namespace {

int compare_structure(const DTerm& a, const DTerm& b) {
  if (a.identity() == b.identity()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case DTerm::Kind::Leaf: return a.axiom() == b.axiom() ? 0 : (a.axiom() < b.axiom() ? -1 : 1);
    case DTerm::Kind::Wildcard: return 0;
    case DTerm::Kind::Node: {
      if (a.major().tree_size() != b.major().tree_size()) return a.major().tree_size() < b.major().tree_size() ? -1 : 1;
      if (int c = compare_structure(a.major(), b.major())) return c;
      return compare_structure(a.minor(), b.minor());
    }
  }
  return 0;
}

}  // namespace

bool operator<(const DTerm& a, const DTerm& b) {
  if (a.tree_size() != b.tree_size()) return a.tree_size() < b.tree_size();
  return compare_structure(a, b) < 0;
}

std::string to_string(const Dimensions& d) {
  return "<" + std::to_string(d.compacted) + "," + std::to_string(d.tree) + "," + std::to_string(d.height) + ">";
}

// ---------------------------------------------------------------------------
// DAG compaction

DTermDag compact(std::span<const DTerm> ds) {
  DTermDag dag;
  // Exact structural keys: leaves by (kind, axiom), inner nodes by child ids.
  std::map<std::pair<int, AxiomId>, DTermDag::Id> leaf_ids;
  std::unordered_map<std::uint64_t, DTermDag::Id> node_ids;
  std::unordered_map<const void*, DTermDag::Id> visited;

  auto key = [](DTermDag::Id a, DTermDag::Id b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  };

  struct Frame {
    const DTerm* term;
    bool expanded;
  };
  for (const DTerm& root : ds) {
    std::vector<Frame> stack{{&root, false}};
    while (!stack.empty()) {
      Frame f = stack.back();
      stack.pop_back();
      const DTerm& t = *f.term;
      if (visited.contains(t.identity())) continue;
      if (!t.is_node()) {
        const std::pair<int, AxiomId> k{static_cast<int>(t.kind()), t.is_leaf() ? t.axiom() : 0};
        auto [it, inserted] = leaf_ids.try_emplace(k, static_cast<DTermDag::Id>(dag.entries_.size()));
        if (inserted) dag.entries_.push_back({t.kind(), k.second, -1, -1});
        visited.emplace(t.identity(), it->second);
        continue;
      }
      if (!f.expanded) {
        stack.push_back({&t, true});
        stack.push_back({&t.minor(), false});
        stack.push_back({&t.major(), false});
        continue;
      }
      const auto a = visited.at(t.major().identity());
      const auto b = visited.at(t.minor().identity());
      auto [it, inserted] = node_ids.try_emplace(key(a, b), static_cast<DTermDag::Id>(dag.entries_.size()));
      if (inserted) {
        dag.entries_.push_back({DTerm::Kind::Node, 0, a, b});
        ++dag.inner_;
      }
      visited.emplace(t.identity(), it->second);
    }
    dag.roots_.push_back(visited.at(root.identity()));
  }
  return dag;
}

std::vector<std::uint64_t> DTermDag::reference_counts() const {
  std::vector<std::uint64_t> refs(entries_.size(), 0);
  for (const auto& e : entries_) {
    if (e.kind != DTerm::Kind::Node) continue;
    ++refs[static_cast<std::size_t>(e.major)];
    ++refs[static_cast<std::size_t>(e.minor)];
  }
  for (auto r : roots_) ++refs[static_cast<std::size_t>(r)];
  return refs;
}

DTerm DTermDag::expand(Id id) const {
  std::vector<DTerm> built;
  built.reserve(static_cast<std::size_t>(id) + 1);
  for (Id i = 0; i <= id; ++i) {
    const auto& e = entries_[static_cast<std::size_t>(i)];
    switch (e.kind) {
      case DTerm::Kind::Leaf: built.push_back(DTerm::leaf(e.axiom)); break;
      case DTerm::Kind::Wildcard: built.push_back(DTerm::wildcard()); break;
      case DTerm::Kind::Node:
        built.push_back(DTerm::node(built[static_cast<std::size_t>(e.major)], built[static_cast<std::size_t>(e.minor)]));
        break;
    }
  }
  return built.back();
}

std::vector<DTerm> DTermDag::expand_roots() const {
  std::vector<DTerm> out;
  if (entries_.empty()) return out;
  std::vector<DTerm> built;
  built.reserve(entries_.size());
  for (const auto& e : entries_) {
    switch (e.kind) {
      case DTerm::Kind::Leaf: built.push_back(DTerm::leaf(e.axiom)); break;
      case DTerm::Kind::Wildcard: built.push_back(DTerm::wildcard()); break;
      case DTerm::Kind::Node:
        built.push_back(DTerm::node(built[static_cast<std::size_t>(e.major)], built[static_cast<std::size_t>(e.minor)]));
        break;
    }
  }
  for (auto r : roots_) out.push_back(built[static_cast<std::size_t>(r)]);
  return out;
}

Dimensions dims(std::span<const DTerm> ds) {
  Dimensions d;
  d.compacted = compact(ds).inner_count();
  for (const auto& t : ds) {
    d.tree += t.tree_size();
    d.height = std::max<std::uint64_t>(d.height, t.height());
  }
  return d;
}

Dimensions dims(const DTerm& d) { return dims(std::span<const DTerm>(&d, 1)); }

std::vector<DTerm> subterms(const DTerm& d) {
  std::vector<DTerm> out;
  std::unordered_set<DTerm, DTermHash> seen;
  std::unordered_set<const void*> visited;
  struct Frame {
    const DTerm* term;
    bool expanded;
  };
  std::vector<Frame> stack{{&d, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const DTerm& t = *f.term;
    if (!f.expanded) {
      if (visited.contains(t.identity())) continue;
      if (t.is_node()) {
        stack.push_back({&t, true});
        stack.push_back({&t.minor(), false});
        stack.push_back({&t.major(), false});
        continue;
      }
    }
    visited.insert(t.identity());
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

namespace {

// Rebuilds `d` bottom-up, mapping leaves through `leaf_fn`; shared nodes are
// rebuilt once.
template <typename LeafFn>
DTerm map_leaves(const DTerm& d, LeafFn&& leaf_fn) {
  std::unordered_map<const void*, DTerm> done;
  struct Frame {
    const DTerm* term;
    bool expanded;
  };
  std::vector<Frame> stack{{&d, false}};
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const DTerm& t = *f.term;
    if (done.contains(t.identity())) continue;
    if (!t.is_node()) {
      done.emplace(t.identity(), leaf_fn(t));
      continue;
    }
    if (!f.expanded) {
      stack.push_back({&t, true});
      stack.push_back({&t.minor(), false});
      stack.push_back({&t.major(), false});
      continue;
    }
    const DTerm& a = done.at(t.major().identity());
    const DTerm& b = done.at(t.minor().identity());
    if (a.identity() == t.major().identity() && b.identity() == t.minor().identity())
      done.emplace(t.identity(), t);
    else
      done.emplace(t.identity(), DTerm::node(a, b));
  }
  return done.at(d.identity());
}

}  // namespace

DTerm replace_wildcards(const DTerm& d, AxiomId id) {
  const DTerm replacement = DTerm::leaf(id);
  return map_leaves(d, [&](const DTerm& t) { return t.is_wildcard() ? replacement : t; });
}

bool has_wildcards(const DTerm& d) {
  for (const auto& t : subterms(d))
    if (t.is_wildcard()) return true;
  return false;
}

std::vector<AxiomId> axioms_used(const DTerm& d) {
  std::vector<AxiomId> ids;
  for (const auto& t : subterms(d))
    if (t.is_leaf()) ids.push_back(t.axiom());
  std::sort(ids.begin(), ids.end());
  return ids;
}

// ---------------------------------------------------------------------------
// Paths

Path parse_path(std::string_view text) {
  Path p;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1')
      p.push_back(Branch::Major);
    else if (text[i] == '2')
      p.push_back(Branch::Minor);
    else
      throw ParseError("path steps must be '1' (major) or '2' (minor)", i);
  }
  return p;
}

std::string print_path(const Path& p) {
  std::string s;
  for (auto b : p) s += b == Branch::Major ? '1' : '2';
  return s;
}

const DTerm& subterm_at(const DTerm& d, const Path& p) {
  const DTerm* t = &d;
  for (auto b : p) {
    if (!t->is_node()) throw Error("path " + print_path(p) + " leaves the D-term");
    t = b == Branch::Major ? &t->major() : &t->minor();
  }
  return *t;
}

DTerm replace_at(const DTerm& d, const Path& p, DTerm replacement) {
  std::vector<const DTerm*> chain{&d};
  for (auto b : p) {
    const DTerm* t = chain.back();
    if (!t->is_node()) throw Error("path " + print_path(p) + " leaves the D-term");
    chain.push_back(b == Branch::Major ? &t->major() : &t->minor());
  }
  DTerm cur = std::move(replacement);
  for (std::size_t i = p.size(); i-- > 0;) {
    const DTerm& parent = *chain[i];
    cur = p[i] == Branch::Major ? DTerm::node(std::move(cur), parent.minor()) : DTerm::node(parent.major(), std::move(cur));
  }
  return cur;
}

// ---------------------------------------------------------------------------
// D-notation

DTerm parse_dnotation(std::string_view text) {
  // Pending inner nodes waiting for arguments; each holds its completed args.
  struct Pending {
    std::vector<DTerm> args;
  };
  std::vector<Pending> stack;
  std::optional<DTerm> result;
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto complete = [&](DTerm t) {
    while (true) {
      if (stack.empty()) {
        result = std::move(t);
        return;
      }
      stack.back().args.push_back(std::move(t));
      if (stack.back().args.size() < 2) return;
      t = DTerm::node(std::move(stack.back().args[0]), std::move(stack.back().args[1]));
      stack.pop_back();
    }
  };
  skip_ws();
  while (!result) {
    if (i >= text.size())
      throw ParseError(stack.empty() ? "empty D-term" : "premature end of D-term (missing argument)", i);
    const char ch = text[i];
    if (ch == 'D') {
      stack.push_back({});
      ++i;
    } else if (ch == 'n') {
      ++i;
      complete(DTerm::wildcard());
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      ++i;
      complete(DTerm::leaf(ch - '0'));
    } else if (ch == '[') {
      const auto close = text.find(']', i);
      if (close == std::string_view::npos) throw ParseError("unterminated '['", i);
      const auto body = text.substr(i + 1, close - i - 1);
      if (body.empty() || !std::all_of(body.begin(), body.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("bracketed axiom id must be a number", i);
      complete(DTerm::leaf(static_cast<AxiomId>(std::stol(std::string(body)))));
      i = close + 1;
    } else {
      throw ParseError(std::string("unknown token '") + ch + "' in D-term", i);
    }
    skip_ws();
  }
  if (i != text.size()) throw ParseError("trailing input after D-term", i);
  return *result;
}

std::string print_dnotation(const DTerm& d) {
  std::string out;
  std::vector<const DTerm*> stack{&d};
  while (!stack.empty()) {
    const DTerm* t = stack.back();
    stack.pop_back();
    switch (t->kind()) {
      case DTerm::Kind::Node:
        out += 'D';
        stack.push_back(&t->minor());
        stack.push_back(&t->major());
        break;
      case DTerm::Kind::Wildcard: out += 'n'; break;
      case DTerm::Kind::Leaf:
        if (t->axiom() >= 0 && t->axiom() <= 9)
          out += static_cast<char>('0' + t->axiom());
        else
          out += "[" + std::to_string(t->axiom()) + "]";
        break;
    }
  }
  return out;
}

}  // namespace cdt
