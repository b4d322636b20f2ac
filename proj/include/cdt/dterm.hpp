#pragma once

// Proof structures: full binary trees whose leaves are axiom ids (or the
// wildcard minor premise "n") and whose inner nodes are detachment steps.

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cdt {

using AxiomId = std::int32_t;

class DTerm {
 public:
  enum class Kind : std::uint8_t { Leaf, Wildcard, Node };

  /// Default-constructed terms are the leaf for axiom 1.
  DTerm() : DTerm(leaf(1)) {}

  static DTerm leaf(AxiomId id);
  static DTerm wildcard();
  static DTerm node(DTerm major, DTerm minor);

  Kind kind() const { return node_->kind; }
  bool is_leaf() const { return kind() == Kind::Leaf; }
  bool is_wildcard() const { return kind() == Kind::Wildcard; }
  bool is_node() const { return kind() == Kind::Node; }
  AxiomId axiom() const { return node_->axiom; }
  const DTerm& major() const;
  const DTerm& minor() const;

  /// Number of inner nodes.
  std::uint64_t tree_size() const { return node_->tree_size; }
  std::uint32_t height() const { return node_->height; }
  std::size_t hash() const { return node_->hash; }

  /// Identity of the shared node; equal pointers imply equal terms.
  const void* identity() const { return node_.get(); }

  friend bool operator==(const DTerm& a, const DTerm& b);
  /// Total order: by tree size, then structurally.
  friend bool operator<(const DTerm& a, const DTerm& b);

 private:
  struct Children;
  struct Node {
    Kind kind;
    AxiomId axiom;
    std::uint32_t height;
    std::uint64_t tree_size;
    std::size_t hash;
    std::unique_ptr<Children> children;
  };
  explicit DTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct DTerm::Children {
  DTerm major;
  DTerm minor;
};

inline const DTerm& DTerm::major() const { return node_->children->major; }
inline const DTerm& DTerm::minor() const { return node_->children->minor; }

struct DTermHash {
  std::size_t operator()(const DTerm& d) const { return d.hash(); }
};

/// ⟨compacted size, tree size, height⟩.
struct Dimensions {
  std::uint64_t compacted = 0;
  std::uint64_t tree = 0;
  std::uint64_t height = 0;
  friend bool operator==(const Dimensions&, const Dimensions&) = default;
};

std::string to_string(const Dimensions& d);  // "<c,t,h>"

Dimensions dims(const DTerm& d);
/// Multiset dimensions: c over the shared minimal DAG, t summed, h maximal.
Dimensions dims(std::span<const DTerm> ds);

/// Perfectly shared DAG of a multiset of D-terms.
class DTermDag {
 public:
  using Id = std::int32_t;

  struct Entry {
    DTerm::Kind kind;
    AxiomId axiom = 0;  // leaves only
    Id major = -1;      // inner nodes only
    Id minor = -1;
  };

  /// Entries in topological order: children precede parents.
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<Id>& roots() const { return roots_; }
  /// Number of inner-node entries.
  std::uint64_t inner_count() const { return inner_; }
  /// Reference count of each entry from parents and roots.
  std::vector<std::uint64_t> reference_counts() const;

  DTerm expand(Id id) const;
  std::vector<DTerm> expand_roots() const;

 private:
  friend DTermDag compact(std::span<const DTerm> ds);
  std::vector<Entry> entries_;
  std::vector<Id> roots_;
  std::uint64_t inner_ = 0;
};

DTermDag compact(std::span<const DTerm> ds);

/// All distinct subterms including `d` and its leaves, children before parents.
std::vector<DTerm> subterms(const DTerm& d);

/// Replaces every wildcard leaf by `Leaf(id)`.
DTerm replace_wildcards(const DTerm& d, AxiomId id);
bool has_wildcards(const DTerm& d);
/// Distinct axiom ids used by leaves, ascending.
std::vector<AxiomId> axioms_used(const DTerm& d);

/// Position of a subterm: a sequence of steps from the root.
enum class Branch : std::uint8_t { Major, Minor };
using Path = std::vector<Branch>;

/// Parses "" (root) or a string over {'1','2'} where 1 selects the major and
/// 2 the minor premise.
Path parse_path(std::string_view text);
std::string print_path(const Path& p);

/// Subterm at `p`; throws Error if the path leaves the tree.
const DTerm& subterm_at(const DTerm& d, const Path& p);
DTerm replace_at(const DTerm& d, const Path& p, DTerm replacement);

/// Linear D-notation: prefix `D`, axiom ids as single digits or `[id]`,
/// `n` for the wildcard. Whitespace between tokens is ignored.
DTerm parse_dnotation(std::string_view text);
std::string print_dnotation(const DTerm& d);

}  // namespace cdt

template <>
struct std::hash<cdt::DTerm> {
  std::size_t operator()(const cdt::DTerm& d) const { return d.hash(); }
};
