#include "cdt/unify.hpp"

#include <algorithm>

namespace cdt {

const char* to_string(UnifyFailure f) {
  switch (f) {
    case UnifyFailure::None: return "none";
    case UnifyFailure::Clash: return "clash";
    case UnifyFailure::Occurs: return "occurs-check";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Workspace

Workspace::Ref Workspace::fresh_var() {
  nodes_.push_back({-1, 0, -1});
  return static_cast<Ref>(nodes_.size() - 1);
}

Workspace::Ref Workspace::app(SymbolId symbol, std::span<const Ref> args) {
  const auto first = static_cast<std::int32_t>(args_.size());
  args_.insert(args_.end(), args.begin(), args.end());
  nodes_.push_back({symbol, static_cast<std::int32_t>(args.size()), first});
  return static_cast<Ref>(nodes_.size() - 1);
}

Workspace::Ref Workspace::imp(Ref antecedent, Ref consequent) {
  const Ref args[] = {antecedent, consequent};
  return app(kImp, args);
}

Workspace::Ref Workspace::load(const Formula& f) {
  std::vector<Ref> var_map(static_cast<std::size_t>(f.var_bound()), -1);
  return load(f, var_map);
}

Workspace::Ref Workspace::load(const Formula& f, std::vector<Ref>& var_map) {
  const auto cells = f.cells();
  auto& stack = scratch_;
  stack.clear();
  // Prefix order read backwards: arguments are complete before their parent.
  for (std::size_t i = cells.size(); i-- > 0;) {
    const auto& c = cells[i];
    if (c.is_var()) {
      const auto v = static_cast<std::size_t>(c.var());
      if (v >= var_map.size()) var_map.resize(v + 1, -1);
      if (var_map[v] < 0) var_map[v] = fresh_var();
      stack.push_back(var_map[v]);
    } else {
      const auto first = static_cast<std::int32_t>(args_.size());
      for (int k = 0; k < c.arity; ++k) {
        args_.push_back(stack.back());
        stack.pop_back();
      }
      nodes_.push_back({c.symbol(), c.arity, first});
      stack.push_back(static_cast<Ref>(nodes_.size() - 1));
    }
  }
  return stack.back();
}

Workspace::Ref Workspace::deref(Ref r) const {
  while (nodes_[static_cast<std::size_t>(r)].symbol < 0 && nodes_[static_cast<std::size_t>(r)].ref >= 0)
    r = nodes_[static_cast<std::size_t>(r)].ref;
  return r;
}

bool Workspace::is_unbound_var(Ref r) const {
  r = deref(r);
  return nodes_[static_cast<std::size_t>(r)].symbol < 0;
}

void Workspace::bind(Ref var, Ref value) {
  nodes_[static_cast<std::size_t>(var)].ref = value;
  trail_.push_back(var);
}

bool Workspace::occurs(Ref var, Ref term) const {
  auto& stack = scratch_;
  stack.clear();
  stack.push_back(term);
  while (!stack.empty()) {
    const Ref r = deref(stack.back());
    stack.pop_back();
    if (r == var) return true;
    const Node& n = nodes_[static_cast<std::size_t>(r)];
    if (n.symbol >= 0)
      for (int k = 0; k < n.arity; ++k) stack.push_back(args_[static_cast<std::size_t>(n.ref + k)]);
  }
  return false;
}

bool Workspace::is_ground(Ref term) const {
  auto& stack = scratch_;
  stack.clear();
  stack.push_back(term);
  while (!stack.empty()) {
    const Ref r = deref(stack.back());
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(r)];
    if (n.symbol < 0) return false;
    for (int k = 0; k < n.arity; ++k) stack.push_back(args_[static_cast<std::size_t>(n.ref + k)]);
  }
  return true;
}

bool Workspace::unify(Ref a, Ref b, UnifyFailure* why) {
  auto& stack = pair_stack_;
  stack.clear();
  stack.emplace_back(a, b);
  while (!stack.empty()) {
    auto [x, y] = stack.back();
    stack.pop_back();
    x = deref(x);
    y = deref(y);
    if (x == y) continue;
    const Node& nx = nodes_[static_cast<std::size_t>(x)];
    const Node& ny = nodes_[static_cast<std::size_t>(y)];
    if (nx.symbol < 0 && ny.symbol < 0) {
      // Bind the younger variable to the older one.
      if (x > y)
        bind(x, y);
      else
        bind(y, x);
      continue;
    }
    if (nx.symbol < 0 || ny.symbol < 0) {
      const Ref var = nx.symbol < 0 ? x : y;
      const Ref val = nx.symbol < 0 ? y : x;
      if (occurs(var, val)) {
        if (why) *why = UnifyFailure::Occurs;
        return false;
      }
      bind(var, val);
      continue;
    }
    if (nx.symbol != ny.symbol || nx.arity != ny.arity) {
      if (why) *why = UnifyFailure::Clash;
      return false;
    }
    for (int k = nx.arity; k-- > 0;)
      stack.emplace_back(args_[static_cast<std::size_t>(nx.ref + k)], args_[static_cast<std::size_t>(ny.ref + k)]);
  }
  if (why) *why = UnifyFailure::None;
  return true;
}

Formula Workspace::extract(Ref r) const {
  Names names;
  return extract(r, names);
}

Formula Workspace::extract(Ref r, Names& names) const {
  std::vector<Formula::Cell> cells;
  std::vector<Ref> stack{r};
  while (!stack.empty()) {
    const Ref x = deref(stack.back());
    stack.pop_back();
    const Node& n = nodes_[static_cast<std::size_t>(x)];
    if (n.symbol < 0) {
      auto [it, inserted] = names.ids.try_emplace(x, names.next);
      if (inserted) ++names.next;
      cells.push_back({~it->second, 0});
    } else {
      cells.push_back({n.symbol, n.arity});
      for (int k = n.arity; k-- > 0;) stack.push_back(args_[static_cast<std::size_t>(n.ref + k)]);
    }
  }
  return Formula::from_cells(std::move(cells));
}

void Workspace::undo(const Mark& m) {
  while (trail_.size() > m.trail) {
    const Ref v = trail_.back();
    trail_.pop_back();
    if (static_cast<std::size_t>(v) < nodes_.size()) nodes_[static_cast<std::size_t>(v)].ref = -1;
  }
  nodes_.resize(m.nodes);
  args_.resize(m.args);
}

void Workspace::clear() {
  nodes_.clear();
  args_.clear();
  trail_.clear();
}

// ---------------------------------------------------------------------------
// Formula-level operations

UnifyOutcome unify(const Formula& a, const Formula& b) {
  Workspace ws;
  std::vector<Workspace::Ref> var_map;
  const auto ra = ws.load(a, var_map);
  const auto rb = ws.load(b, var_map);
  UnifyOutcome out;
  if (!ws.unify(ra, rb, &out.failure)) return out;

  // Unbound representatives keep the name of the first original variable
  // mapped onto them so the substitution stays over the input namespace.
  Workspace::Names names;
  for (std::size_t v = 0; v < var_map.size(); ++v) {
    if (var_map[v] < 0) continue;
    const auto rep = ws.deref(var_map[v]);
    if (ws.is_unbound_var(rep)) names.ids.try_emplace(rep, static_cast<VarId>(v));
  }
  // Variables never named above cannot appear: every heap variable comes from var_map.
  names.next = static_cast<VarId>(var_map.size());
  Substitution sigma;
  for (std::size_t v = 0; v < var_map.size(); ++v) {
    if (var_map[v] < 0) continue;
    Formula image = ws.extract(var_map[v], names);
    if (image.is_var() && image.var() == static_cast<VarId>(v)) continue;
    sigma.bind(static_cast<VarId>(v), std::move(image));
  }
  out.sigma = std::move(sigma);
  return out;
}

namespace {

// Binding of a general-side variable to a span of the specific formula.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
};

template <typename OnBind>
bool match_cells(std::span<const Formula::Cell> g, std::span<const Formula::Cell> s, std::vector<Span>& bound,
                 OnBind&& on_bind) {
  if (g.size() > s.size()) return false;
  std::size_t j = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (j >= s.size()) return false;
    const auto& gc = g[i];
    if (gc.is_var()) {
      const auto v = static_cast<std::size_t>(gc.var());
      const std::size_t end = subterm_end(s, j);
      if (v >= bound.size()) bound.resize(v + 1);
      Span& b = bound[v];
      if (b.end == 0) {
        b = {j, end};
        on_bind(gc.var(), b);
      } else {
        const std::size_t len = b.end - b.begin;
        if (end - j != len || !std::equal(s.begin() + static_cast<std::ptrdiff_t>(b.begin),
                                          s.begin() + static_cast<std::ptrdiff_t>(b.end),
                                          s.begin() + static_cast<std::ptrdiff_t>(j)))
          return false;
      }
      j = end;
    } else {
      if (gc != s[j]) return false;
      ++j;
    }
  }
  return j == s.size();
}

}  // namespace

std::optional<Substitution> match(const Formula& general, const Formula& specific) {
  std::vector<Span> bound;
  std::vector<std::pair<VarId, Span>> order;
  if (!match_cells(general.cells(), specific.cells(), bound,
                   [&](VarId v, const Span& sp) { order.emplace_back(v, sp); }))
    return std::nullopt;
  Substitution sigma;
  const auto cells = specific.cells();
  for (const auto& [v, sp] : order)
    sigma.bind(v, Formula::from_cells(std::vector<Formula::Cell>(cells.begin() + static_cast<std::ptrdiff_t>(sp.begin),
                                                                 cells.begin() + static_cast<std::ptrdiff_t>(sp.end))));
  return sigma;
}

bool subsumes(const Formula& general, const Formula& specific) {
  thread_local std::vector<Span> bound;
  bound.assign(static_cast<std::size_t>(general.var_bound()), Span{});
  return match_cells(general.cells(), specific.cells(), bound, [](VarId, const Span&) {});
}

Formula rename_apart(const Formula& f, const std::set<VarId>& reserved) {
  std::vector<std::pair<VarId, VarId>> mapping;
  VarId next = 0;
  return f.map_vars([&](VarId v) {
    auto it = std::find_if(mapping.begin(), mapping.end(), [v](const auto& p) { return p.first == v; });
    if (it != mapping.end()) return it->second;
    while (reserved.contains(next)) ++next;
    mapping.emplace_back(v, next);
    return next++;
  });
}

Formula rename_apart(const Formula& b, const Formula& a) {
  const auto vars = a.variables();
  return rename_apart(b, std::set<VarId>(vars.begin(), vars.end()));
}

}  // namespace cdt
