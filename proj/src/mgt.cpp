#include "cdt/mgt.hpp"

#include <algorithm>

#include "cdt/error.hpp"

namespace cdt {

// ---------------------------------------------------------------------------
// AxiomBase

void AxiomBase::add(AxiomId id, Formula f) {
  if (f.empty()) throw Error("empty axiom formula for id " + std::to_string(id));
  axioms_[id] = f.normalized();
}

const Formula& AxiomBase::at(AxiomId id) const {
  auto it = axioms_.find(id);
  if (it == axioms_.end()) throw UnknownAxiom(id);
  return it->second;
}

std::vector<AxiomId> AxiomBase::ids() const {
  std::vector<AxiomId> out;
  for (const auto& [id, f] : axioms_) out.push_back(id);
  return out;
}

AxiomId AxiomBase::designated() const {
  if (axioms_.empty()) throw Error("empty axiom base has no designated axiom");
  return axioms_.begin()->first;
}

AxiomBase AxiomBase::from_polish(const std::vector<std::string>& polish, const SymbolTable& symbols) {
  AxiomBase base;
  AxiomId id = 1;
  for (const auto& p : polish) base.add(id++, parse_polish(p, symbols));
  return base;
}

// ---------------------------------------------------------------------------
// MGT over the shared DAG

MgtOutcome mgt_detailed(const DTerm& d, const AxiomBase& axioms) {
  const DTerm roots[] = {d};
  const DTermDag dag = compact(roots);
  const auto& entries = dag.entries();
  std::vector<Formula> formulas(entries.size());
  Workspace ws;
  MgtOutcome out;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    switch (e.kind) {
      case DTerm::Kind::Leaf: formulas[i] = axioms.at(e.axiom); break;
      case DTerm::Kind::Wildcard: formulas[i] = Formula::var(0); break;
      case DTerm::Kind::Node: {
        ws.clear();
        const auto major = ws.load(formulas[static_cast<std::size_t>(e.major)]);
        const auto minor = ws.load(formulas[static_cast<std::size_t>(e.minor)]);
        const auto conclusion = ws.fresh_var();
        if (!ws.unify(major, ws.imp(minor, conclusion), &out.failure)) return out;
        formulas[i] = ws.extract(conclusion);
        break;
      }
    }
  }
  out.conclusion = std::move(formulas[static_cast<std::size_t>(dag.roots().front())]);
  return out;
}

std::optional<Formula> mgt(const DTerm& d, const AxiomBase& axioms) { return mgt_detailed(d, axioms).conclusion; }

VerifyReport verify(const DTerm& d, const AxiomBase& axioms, const Formula& goal) {
  VerifyReport report;
  const DTerm closed = axioms.empty() ? d : replace_wildcards(d, axioms.designated());
  auto outcome = mgt_detailed(closed, axioms);
  if (!outcome.conclusion) {
    report.message = std::string("no MGT (") + to_string(outcome.failure) + ")";
    return report;
  }
  report.mgt = outcome.conclusion;
  report.sigma = match(*outcome.conclusion, goal);
  report.passed = report.sigma.has_value();
  report.message = report.passed ? "MGT subsumes goal" : "MGT does not subsume goal";
  return report;
}

// ---------------------------------------------------------------------------
// Whole-proof constraint solving over the tree

namespace {

// Solves all detachment constraints of `d` in `ws`. Each node gets a slot
// variable; `visit(path, slot)` is called for every node in pre-order.
// Returns the root slot, or nullopt if the constraints are unsatisfiable.
template <typename Visit>
std::optional<Workspace::Ref> solve_tree(Workspace& ws, const DTerm& d, const AxiomBase& axioms, Visit&& visit) {
  struct Frame {
    const DTerm* term;
    Workspace::Ref slot;
    std::size_t depth;
    Branch branch;
  };
  const auto root = ws.fresh_var();
  std::vector<Frame> stack{{&d, root, 0, Branch::Major}};
  Path path;
  while (!stack.empty()) {
    const Frame f = stack.back();
    stack.pop_back();
    path.resize(f.depth);
    if (f.depth > 0) path.back() = f.branch;
    visit(static_cast<const Path&>(path), f.slot);
    switch (f.term->kind()) {
      case DTerm::Kind::Leaf:
        if (!ws.unify(f.slot, ws.load(axioms.at(f.term->axiom())))) return std::nullopt;
        break;
      case DTerm::Kind::Wildcard: break;
      case DTerm::Kind::Node: {
        const auto major = ws.fresh_var();
        const auto minor = ws.fresh_var();
        if (!ws.unify(major, ws.imp(minor, f.slot))) return std::nullopt;
        stack.push_back({&f.term->minor(), minor, f.depth + 1, Branch::Minor});
        stack.push_back({&f.term->major(), major, f.depth + 1, Branch::Major});
        break;
      }
    }
  }
  return root;
}

}  // namespace

std::optional<Formula> ipt(const DTerm& d, const Path& p, const AxiomBase& axioms) {
  subterm_at(d, p);  // validates the path
  Workspace ws;
  Workspace::Ref target = -1;
  auto root = solve_tree(ws, d, axioms, [&](const Path& at, Workspace::Ref slot) {
    if (target < 0 && at == p) target = slot;
  });
  if (!root) return std::nullopt;
  return ws.extract(target);
}

std::vector<ProofNodeFormula> solve_proof(const DTerm& d, const AxiomBase& axioms) {
  Workspace ws;
  std::vector<std::pair<Path, Workspace::Ref>> slots;
  auto root = solve_tree(ws, d, axioms, [&](const Path& at, Workspace::Ref slot) { slots.emplace_back(at, slot); });
  std::vector<ProofNodeFormula> out;
  if (!root) return out;
  Workspace::Names names;
  for (auto& [path, slot] : slots) out.push_back({std::move(path), ws.extract(slot, names)});
  return out;
}

bool minor_is_irrelevant(const DTerm& d, const Path& minor_path, const AxiomBase& axioms) {
  if (minor_path.empty() || minor_path.back() != Branch::Minor) return false;
  const DTerm without = replace_at(d, minor_path, DTerm::wildcard());
  Workspace ws;
  Workspace::Ref slot = -1;
  auto root = solve_tree(ws, without, axioms, [&](const Path& at, Workspace::Ref s) {
    if (slot < 0 && at == minor_path) slot = s;
  });
  if (!root) return false;
  if (!ws.is_unbound_var(slot)) return false;
  return !ws.occurs(ws.deref(slot), *root);
}

DTerm n_simplify(const DTerm& d, const AxiomBase& axioms) {
  if (!mgt(d, axioms)) throw Error("n-simplification requires a D-term with an MGT");
  const DTerm primitive = DTerm::leaf(axioms.designated());
  DTerm current = d;
  bool changed = true;
  while (changed) {
    changed = false;
    // Pre-order positions of inner nodes in the current term.
    std::vector<Path> positions;
    {
      std::vector<std::pair<const DTerm*, Path>> stack{{&current, {}}};
      while (!stack.empty()) {
        auto [t, p] = std::move(stack.back());
        stack.pop_back();
        if (!t->is_node()) continue;
        positions.push_back(p);
        Path minor = p;
        minor.push_back(Branch::Minor);
        Path major = p;
        major.push_back(Branch::Major);
        stack.emplace_back(&t->minor(), std::move(minor));
        stack.emplace_back(&t->major(), std::move(major));
      }
    }
    std::vector<Path> replaced;
    for (const Path& p : positions) {
      bool inside_replaced = false;
      for (const Path& r : replaced)
        if (p.size() >= r.size() && std::equal(r.begin(), r.end(), p.begin())) inside_replaced = true;
      if (inside_replaced) continue;
      Path minor = p;
      minor.push_back(Branch::Minor);
      if (!subterm_at(current, minor).is_node()) continue;
      if (!minor_is_irrelevant(current, minor, axioms)) continue;
      current = replace_at(current, minor, primitive);
      replaced.push_back(std::move(minor));
      changed = true;
    }
  }
  return current;
}

}  // namespace cdt
