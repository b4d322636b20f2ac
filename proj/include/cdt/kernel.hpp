#pragma once

// Independent proof checker. Replays a D-term as positive hyperresolution
// steps with the clause P(y) <- P(x=>y) & P(x) using its own term
// representation and a textbook recursive unification, sharing no code with
// the workspace-based MGT computation.

#include <string>

#include "cdt/dterm.hpp"
#include "cdt/mgt.hpp"

namespace cdt::kernel {

struct ReplayResult {
  bool ok = false;
  std::string derived;  // derived fact in Polish notation, if any
  std::string message;
};

/// Derives the fact proved by `d` bottom-up (wildcards replaced by the
/// designated axiom) and checks that `goal` is an instance of it.
ReplayResult replay(const DTerm& d, const AxiomBase& axioms, const Formula& goal, const SymbolTable& symbols);

/// True if `a` and `b` are equal up to a bijective variable renaming,
/// decided with the kernel's own term code.
bool variants(const Formula& a, const Formula& b);

}  // namespace cdt::kernel
