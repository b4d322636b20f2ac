#include "cdt/kernel.hpp"

#include <map>
#include <memory>
#include <algorithm>

namespace cdt::kernel {

namespace {

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  bool is_var;
  long id;  // variable number or symbol id
  std::vector<TermPtr> args;
};

TermPtr mk_var(long v) { return std::make_shared<Term>(Term{true, v, {}}); }
TermPtr mk_app(long f, std::vector<TermPtr> args) { return std::make_shared<Term>(Term{false, f, std::move(args)}); }

TermPtr from_formula(const Formula& f, long var_offset) {
  if (f.is_var()) return mk_var(f.var() + var_offset);
  std::vector<TermPtr> args;
  for (const auto& a : f.args()) args.push_back(from_formula(a, var_offset));
  return mk_app(f.symbol(), std::move(args));
}

using Bindings = std::map<long, TermPtr>;

TermPtr walk(TermPtr t, const Bindings& b) {
  while (t->is_var) {
    auto it = b.find(t->id);
    if (it == b.end()) break;
    t = it->second;
  }
  return t;
}

TermPtr resolve(const TermPtr& t, const Bindings& b) {
  TermPtr w = walk(t, b);
  if (w->is_var) return w;
  std::vector<TermPtr> args;
  for (const auto& a : w->args) args.push_back(resolve(a, b));
  return mk_app(w->id, std::move(args));
}

bool occurs_in(long v, const TermPtr& t, const Bindings& b) {
  TermPtr w = walk(t, b);
  if (w->is_var) return w->id == v;
  for (const auto& a : w->args)
    if (occurs_in(v, a, b)) return true;
  return false;
}

bool unify_terms(const TermPtr& x, const TermPtr& y, Bindings& b) {
  TermPtr a = walk(x, b);
  TermPtr c = walk(y, b);
  if (a->is_var && c->is_var && a->id == c->id) return true;
  if (a->is_var) {
    if (occurs_in(a->id, c, b)) return false;
    b[a->id] = c;
    return true;
  }
  if (c->is_var) return unify_terms(c, a, b);
  if (a->id != c->id || a->args.size() != c->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!unify_terms(a->args[i], c->args[i], b)) return false;
  return true;
}

bool same(const TermPtr& a, const TermPtr& b) {
  if (a->is_var != b->is_var || a->id != b->id || a->args.size() != b->args.size()) return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!same(a->args[i], b->args[i])) return false;
  return true;
}

// One-sided: binds only variables of `pattern`; `instance` is rigid.
bool instance_of(const TermPtr& pattern, const TermPtr& instance, std::map<long, TermPtr>& b) {
  if (pattern->is_var) {
    auto it = b.find(pattern->id);
    if (it == b.end()) {
      b.emplace(pattern->id, instance);
      return true;
    }
    return same(it->second, instance);
  }
  if (instance->is_var || pattern->id != instance->id || pattern->args.size() != instance->args.size()) return false;
  for (std::size_t i = 0; i < pattern->args.size(); ++i)
    if (!instance_of(pattern->args[i], instance->args[i], b)) return false;
  return true;
}

long max_var(const TermPtr& t) {
  if (t->is_var) return t->id;
  long m = -1;
  for (const auto& a : t->args) m = std::max(m, max_var(a));
  return m;
}

std::string to_polish(const TermPtr& t, const SymbolTable& symbols, std::map<long, std::size_t>& names) {
  if (t->is_var) {
    auto [it, inserted] = names.try_emplace(t->id, names.size());
    return SymbolTable::variable_name(it->second);
  }
  const auto& e = symbols.entry(static_cast<SymbolId>(t->id));
  std::string s = e.letter ? std::string(1, e.letter) : "{" + e.name + "}";
  for (const auto& a : t->args) s += to_polish(a, symbols, names);
  return s;
}

}  // namespace

ReplayResult replay(const DTerm& d, const AxiomBase& axioms, const Formula& goal, const SymbolTable& symbols) {
  ReplayResult result;
  const DTerm closed = replace_wildcards(d, axioms.designated());
  // Derived facts per visited node, computed in post-order. Each fact uses
  // its own variable range so premises are apart by construction.
  long next_var = 0;
  struct Frame {
    const DTerm* term;
    bool expanded;
  };
  std::vector<Frame> stack{{&closed, false}};
  std::vector<TermPtr> values;
  while (!stack.empty()) {
    Frame f = stack.back();
    stack.pop_back();
    const DTerm& t = *f.term;
    if (t.is_leaf()) {
      if (!axioms.contains(t.axiom())) {
        result.message = "unknown axiom " + std::to_string(t.axiom());
        return result;
      }
      TermPtr fact = from_formula(axioms.at(t.axiom()), next_var);
      next_var = std::max(next_var, max_var(fact) + 1);
      values.push_back(fact);
      continue;
    }
    if (!f.expanded) {
      stack.push_back({&t, true});
      stack.push_back({&t.minor(), false});
      stack.push_back({&t.major(), false});
      continue;
    }
    TermPtr minor = values.back();
    values.pop_back();
    TermPtr major = values.back();
    values.pop_back();
    // Hyperresolution with P(y) <- P(x=>y) & P(x) using a fresh clause copy.
    const TermPtr x = mk_var(next_var++);
    const TermPtr y = mk_var(next_var++);
    Bindings b;
    if (!unify_terms(mk_app(kImp, {x, y}), major, b) || !unify_terms(x, minor, b)) {
      result.message = "hyperresolution step fails";
      return result;
    }
    TermPtr derived = resolve(y, b);
    values.push_back(derived);
  }
  const TermPtr fact = values.back();
  std::map<long, std::size_t> names;
  result.derived = to_polish(fact, symbols, names);
  std::map<long, TermPtr> sigma;
  // The goal's variables are rigid: shift them out of the fact's range.
  const TermPtr goal_term = from_formula(goal, next_var + 1);
  result.ok = instance_of(fact, goal_term, sigma);
  result.message = result.ok ? "goal is an instance of the derived fact" : "goal is not an instance of the derived fact";
  return result;
}

bool variants(const Formula& a, const Formula& b) {
  const TermPtr ta = from_formula(a, 0);
  const TermPtr tb = from_formula(b, max_var(ta) + 1);
  std::map<long, TermPtr> s1, s2;
  return instance_of(ta, tb, s1) && instance_of(tb, ta, s2);
}

}  // namespace cdt::kernel
