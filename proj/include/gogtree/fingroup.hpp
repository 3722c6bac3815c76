#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gogtree/error.hpp"

namespace gogtree {

/// Index of an element inside its group's table.
using Elem = int;

class FiniteGroup;
using GroupPtr = std::shared_ptr<const FiniteGroup>;

constexpr int kDefaultOrderCap = 48;

/// A finite group stored as an explicit multiplication table.
///
/// All axioms (associativity, two-sided identity, inverses, name uniqueness)
/// are checked exhaustively at construction; instances are immutable and
/// safe to share across threads. Orders are capped (default 48) so that
/// every predicate downstream can afford an exhaustive scan.
class FiniteGroup : public std::enable_shared_from_this<FiniteGroup> {
public:
  /// Cyclic group of order n with elements e, s, s^2, ... for generator symbol s.
  static GroupPtr cyclic(int n, const std::string& symbol = "g", std::string name = "",
                         int order_cap = kDefaultOrderCap);
  /// Symmetric group on {1..n}, elements named in cycle notation.
  static GroupPtr symmetric(int n, std::string name = "", int order_cap = kDefaultOrderCap);
  /// Explicit table; rejects non-groups naming the failing triple/element.
  static GroupPtr from_table(std::vector<std::string> names,
                             std::vector<std::vector<Elem>> table, std::string name = "",
                             int order_cap = kDefaultOrderCap);
  /// New group whose elements are the given members of `parent` (same names).
  static GroupPtr from_subgroup(const GroupPtr& parent, uint64_t member_mask, std::string name);

  int order() const { return static_cast<int>(names_.size()); }
  const std::string& name() const { return name_; }
  const std::string& elem_name(Elem x) const { return names_[x]; }
  std::optional<Elem> elem_by_name(const std::string& s) const;
  Elem identity() const { return identity_; }
  Elem mul(Elem a, Elem b) const { return table_[a][b]; }
  Elem inv(Elem a) const { return inverse_[a]; }
  /// g x g^-1
  Elem conj(Elem g, Elem x) const { return mul(mul(g, x), inv(g)); }

  /// Elements ordered identity-first, then by name; used wherever a
  /// deterministic traversal or a canonical representative is needed.
  const std::vector<Elem>& canonical_order() const { return canon_order_; }

  /// All subgroups as member masks, deterministic order (size, then mask).
  const std::vector<uint64_t>& subgroup_lattice() const { return lattice_; }
  /// Conjugacy classes of subgroups: lists of lattice indices.
  const std::vector<std::vector<int>>& subgroup_classes() const { return classes_; }
  /// Lattice index of a subgroup mask; throws if not a subgroup.
  int lattice_index(uint64_t mask) const;
  /// Class index (into subgroup_classes) of a subgroup mask.
  int class_of_subgroup(uint64_t mask) const;

  uint64_t full_mask() const { return order() == 64 ? ~0ull : (1ull << order()) - 1; }
  uint64_t closure(uint64_t mask) const;
  uint64_t conj_mask(Elem g, uint64_t mask) const;
  bool mask_is_subgroup(uint64_t mask) const;
  std::vector<Elem> mask_members(uint64_t mask) const;
  /// Greedy small generating set for a subgroup mask.
  std::vector<Elem> generating_set(uint64_t mask) const;

private:
  FiniteGroup() = default;
  void finish_build(int order_cap);  // validates axioms, fills caches

  std::string name_;
  std::vector<std::string> names_;
  std::vector<std::vector<Elem>> table_;
  std::vector<Elem> inverse_;
  Elem identity_ = 0;
  std::vector<Elem> canon_order_;
  std::vector<uint64_t> lattice_;
  std::vector<std::vector<int>> classes_;
};

/// A subgroup as a member bitmask over a parent group.
class Subgroup {
public:
  Subgroup() = default;  // empty placeholder
  Subgroup(GroupPtr parent, uint64_t mask);  // validates closure
  static Subgroup generated(const GroupPtr& g, const std::vector<Elem>& gens);
  static Subgroup trivial(const GroupPtr& g);
  static Subgroup full(const GroupPtr& g);

  const GroupPtr& parent() const { return parent_; }
  uint64_t mask() const { return mask_; }
  int order() const;
  bool contains(Elem x) const { return (mask_ >> x) & 1; }
  std::vector<Elem> members() const { return parent_->mask_members(mask_); }
  bool operator==(const Subgroup& o) const { return parent_ == o.parent_ && mask_ == o.mask_; }

private:
  GroupPtr parent_;
  uint64_t mask_ = 0;
};

struct ConjugacyVerdict {
  bool conjugate = false;
  Elem witness = 0;  // w with w a w^-1 = b when conjugate
};

/// Exhaustive subgroup conjugacy test; throws on mismatched parents.
ConjugacyVerdict is_conjugate_subgroup(const Subgroup& a, const Subgroup& b);

/// A verified injective homomorphism between finite groups.
class Mono {
public:
  Mono() = default;  // empty; only the factories below produce usable monos

  /// Extends `partial` (defined on a generating set) multiplicatively and
  /// verifies homomorphism + injectivity; errors name the failing pair.
  static Mono check(GroupPtr dom, GroupPtr cod,
                    const std::vector<std::pair<Elem, Elem>>& partial);
  /// outer ∘ inner
  static Mono compose(const Mono& outer, const Mono& inner);
  /// Matches elements by name (for subgroup-as-group inclusions).
  static Mono by_names(GroupPtr dom, GroupPtr cod);

  const GroupPtr& domain() const { return dom_; }
  const GroupPtr& codomain() const { return cod_; }
  Elem map(Elem x) const { return image_[x]; }
  std::optional<Elem> preimage(Elem y) const;
  uint64_t image_mask() const { return image_mask_; }
  bool surjective() const { return image_mask_ == cod_->full_mask(); }
  int index() const;  // [codomain : image]

private:
  Mono(GroupPtr dom, GroupPtr cod, std::vector<Elem> image);

  GroupPtr dom_, cod_;
  std::vector<Elem> image_;
  std::vector<Elem> preimage_;  // -1 where undefined
  uint64_t image_mask_ = 0;
};

}  // namespace gogtree
