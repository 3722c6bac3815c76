#include "gogtree/fingroup.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

namespace gogtree {

namespace {

std::string cycle_notation(const std::vector<int>& perm) {
  const int n = static_cast<int>(perm.size());
  std::vector<bool> seen(n, false);
  std::string out;
  for (int start = 0; start < n; ++start) {
    if (seen[start] || perm[start] == start) continue;
    std::string cyc = "(";
    int p = start;
    while (!seen[p]) {
      seen[p] = true;
      cyc += std::to_string(p + 1);
      p = perm[p];
    }
    cyc += ")";
    out += cyc;
  }
  return out.empty() ? "e" : out;
}

}  // namespace

void FiniteGroup::finish_build(int order_cap) {
  const int n = order();
  if (n <= 0) throw Error("group must have at least one element");
  if (n > order_cap || n > 64)
    throw Error("group '" + name_ + "' has order " + std::to_string(n) +
                ", exceeding the cap of " + std::to_string(std::min(order_cap, 64)));

  {
    std::map<std::string, int> by_name;
    for (int i = 0; i < n; ++i) {
      if (names_[i].empty()) throw Error("group '" + name_ + "': empty element name");
      if (!by_name.emplace(names_[i], i).second)
        throw Error("group '" + name_ + "': duplicate element name '" + names_[i] + "'");
    }
  }
  for (int a = 0; a < n; ++a) {
    if (static_cast<int>(table_[a].size()) != n)
      throw Error("group '" + name_ + "': ragged multiplication table");
    for (int b = 0; b < n; ++b)
      if (table_[a][b] < 0 || table_[a][b] >= n)
        throw Error("group '" + name_ + "': table entry out of range at (" + names_[a] + ", " +
                    names_[b] + ")");
  }

  // identity: two-sided neutral element
  identity_ = -1;
  for (int c = 0; c < n && identity_ < 0; ++c) {
    bool ok = true;
    for (int a = 0; a < n && ok; ++a)
      if (table_[c][a] != a || table_[a][c] != a) ok = false;
    if (ok) identity_ = c;
  }
  if (identity_ < 0) throw Error("group '" + name_ + "': no two-sided identity element");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]])
          throw Error("group '" + name_ + "': associativity fails for triple (" + names_[a] +
                      ", " + names_[b] + ", " + names_[c] + ")");

  inverse_.assign(n, -1);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b)
      if (table_[a][b] == identity_ && table_[b][a] == identity_) {
        inverse_[a] = b;
        break;
      }
    if (inverse_[a] < 0)
      throw Error("group '" + name_ + "': element '" + names_[a] + "' has no inverse");
  }

  canon_order_.resize(n);
  std::iota(canon_order_.begin(), canon_order_.end(), 0);
  std::sort(canon_order_.begin(), canon_order_.end(), [&](Elem a, Elem b) {
    if ((a == identity_) != (b == identity_)) return a == identity_;
    return names_[a] < names_[b];
  });

  // Subgroup lattice by closure of extensions, then conjugacy classes.
  std::vector<uint64_t> lattice{1ull << identity_};
  for (size_t i = 0; i < lattice.size(); ++i) {
    const uint64_t base = lattice[i];
    for (int g = 0; g < n; ++g) {
      if ((base >> g) & 1) continue;
      uint64_t ext = closure(base | (1ull << g));
      if (std::find(lattice.begin(), lattice.end(), ext) == lattice.end()) lattice.push_back(ext);
    }
  }
  std::sort(lattice.begin(), lattice.end(), [](uint64_t a, uint64_t b) {
    int pa = std::popcount(a), pb = std::popcount(b);
    return pa != pb ? pa < pb : a < b;
  });
  lattice_ = std::move(lattice);

  std::vector<int> cls(lattice_.size(), -1);
  for (size_t i = 0; i < lattice_.size(); ++i) {
    if (cls[i] >= 0) continue;
    classes_.push_back({static_cast<int>(i)});
    cls[i] = static_cast<int>(classes_.size()) - 1;
    for (int g = 0; g < n; ++g) {
      uint64_t c = conj_mask(g, lattice_[i]);
      int j = lattice_index(c);
      if (cls[j] < 0) {
        cls[j] = cls[i];
        classes_.back().push_back(j);
      }
    }
    std::sort(classes_.back().begin(), classes_.back().end());
  }
}

GroupPtr FiniteGroup::cyclic(int n, const std::string& symbol, std::string name, int order_cap) {
  if (n < 1) throw Error("cyclic group order must be >= 1");
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = name.empty() ? "Z" + std::to_string(n) : std::move(name);
  g->names_.resize(n);
  for (int i = 0; i < n; ++i)
    g->names_[i] = i == 0 ? "e" : (i == 1 ? symbol : symbol + "^" + std::to_string(i));
  g->table_.assign(n, std::vector<Elem>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g->table_[a][b] = (a + b) % n;
  g->finish_build(order_cap);
  return g;
}

GroupPtr FiniteGroup::symmetric(int n, std::string name, int order_cap) {
  if (n < 1) throw Error("symmetric group degree must be >= 1");
  std::vector<std::vector<int>> perms;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = name.empty() ? "S" + std::to_string(n) : std::move(name);
  const int m = static_cast<int>(perms.size());
  if (m > 64)
    throw Error("symmetric group of degree " + std::to_string(n) + " exceeds the order cap");
  g->names_.resize(m);
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < m; ++i) {
    g->names_[i] = cycle_notation(perms[i]);
    index[perms[i]] = i;
  }
  g->table_.assign(m, std::vector<Elem>(m));
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      std::vector<int> composed(n);  // (a*b)(x) = a(b(x))
      for (int x = 0; x < n; ++x) composed[x] = perms[a][perms[b][x]];
      g->table_[a][b] = index.at(composed);
    }
  g->finish_build(order_cap);
  return g;
}

GroupPtr FiniteGroup::from_table(std::vector<std::string> names,
                                 std::vector<std::vector<Elem>> table, std::string name,
                                 int order_cap) {
  if (names.size() != table.size()) throw Error("table group: name/row count mismatch");
  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = std::move(name);
  g->names_ = std::move(names);
  g->table_ = std::move(table);
  g->finish_build(order_cap);
  return g;
}

GroupPtr FiniteGroup::from_subgroup(const GroupPtr& parent, uint64_t member_mask,
                                    std::string name) {
  if (!parent->mask_is_subgroup(member_mask))
    throw Error("from_subgroup: member set of '" + parent->name() + "' is not a subgroup");
  std::vector<Elem> members = parent->mask_members(member_mask);
  std::vector<int> pos(parent->order(), -1);
  for (size_t i = 0; i < members.size(); ++i) pos[members[i]] = static_cast<int>(i);

  auto g = std::shared_ptr<FiniteGroup>(new FiniteGroup());
  g->name_ = std::move(name);
  const int n = static_cast<int>(members.size());
  g->names_.resize(n);
  g->table_.assign(n, std::vector<Elem>(n));
  for (int i = 0; i < n; ++i) {
    g->names_[i] = parent->elem_name(members[i]);
    for (int j = 0; j < n; ++j) g->table_[i][j] = pos[parent->mul(members[i], members[j])];
  }
  g->finish_build(64);
  return g;
}

std::optional<Elem> FiniteGroup::elem_by_name(const std::string& s) const {
  for (int i = 0; i < order(); ++i)
    if (names_[i] == s) return i;
  return std::nullopt;
}

uint64_t FiniteGroup::closure(uint64_t mask) const {
  mask |= 1ull << identity_;
  bool grew = true;
  while (grew) {
    grew = false;
    uint64_t cur = mask;
    for (int a = 0; a < order(); ++a) {
      if (!((cur >> a) & 1)) continue;
      uint64_t bit = 1ull << inv(a);
      if (!(mask & bit)) {
        mask |= bit;
        grew = true;
      }
      for (int b = 0; b < order(); ++b) {
        if (!((cur >> b) & 1)) continue;
        bit = 1ull << mul(a, b);
        if (!(mask & bit)) {
          mask |= bit;
          grew = true;
        }
      }
    }
  }
  return mask;
}

uint64_t FiniteGroup::conj_mask(Elem g, uint64_t mask) const {
  uint64_t out = 0;
  for (int x = 0; x < order(); ++x)
    if ((mask >> x) & 1) out |= 1ull << conj(g, x);
  return out;
}

bool FiniteGroup::mask_is_subgroup(uint64_t mask) const {
  if (!((mask >> identity_) & 1)) return false;
  for (int a = 0; a < order(); ++a) {
    if (!((mask >> a) & 1)) continue;
    if (!((mask >> inv(a)) & 1)) return false;
    for (int b = 0; b < order(); ++b)
      if (((mask >> b) & 1) && !((mask >> mul(a, b)) & 1)) return false;
  }
  return true;
}

std::vector<Elem> FiniteGroup::mask_members(uint64_t mask) const {
  std::vector<Elem> out;
  for (int i = 0; i < order(); ++i)
    if ((mask >> i) & 1) out.push_back(i);
  return out;
}

std::vector<Elem> FiniteGroup::generating_set(uint64_t mask) const {
  std::vector<Elem> gens;
  uint64_t have = 1ull << identity_;
  for (Elem x : canonical_order()) {
    if (!((mask >> x) & 1) || ((have >> x) & 1)) continue;
    gens.push_back(x);
    have = closure(have | (1ull << x));
    if (have == mask) break;
  }
  return gens;
}

int FiniteGroup::lattice_index(uint64_t mask) const {
  for (size_t i = 0; i < lattice_.size(); ++i)
    if (lattice_[i] == mask) return static_cast<int>(i);
  throw Error("group '" + name_ + "': member set is not a subgroup");
}

int FiniteGroup::class_of_subgroup(uint64_t mask) const {
  int li = lattice_index(mask);
  for (size_t c = 0; c < classes_.size(); ++c)
    for (int i : classes_[c])
      if (i == li) return static_cast<int>(c);
  throw Error("group '" + name_ + "': subgroup has no conjugacy class");  // unreachable
}

Subgroup::Subgroup(GroupPtr parent, uint64_t mask) : parent_(std::move(parent)), mask_(mask) {
  if (!parent_->mask_is_subgroup(mask_))
    throw Error("member set of '" + parent_->name() + "' is not closed as a subgroup");
}

Subgroup Subgroup::generated(const GroupPtr& g, const std::vector<Elem>& gens) {
  uint64_t mask = 1ull << g->identity();
  for (Elem x : gens) {
    if (x < 0 || x >= g->order())
      throw Error("subgroup generator out of range for group '" + g->name() + "'");
    mask |= 1ull << x;
  }
  return Subgroup(g, g->closure(mask));
}

Subgroup Subgroup::trivial(const GroupPtr& g) { return Subgroup(g, 1ull << g->identity()); }

Subgroup Subgroup::full(const GroupPtr& g) { return Subgroup(g, g->full_mask()); }

int Subgroup::order() const { return std::popcount(mask_); }

ConjugacyVerdict is_conjugate_subgroup(const Subgroup& a, const Subgroup& b) {
  if (a.parent() != b.parent())
    throw Error("is_conjugate_subgroup: subgroups have different parent groups");
  const FiniteGroup& g = *a.parent();
  for (Elem w : g.canonical_order())
    if (g.conj_mask(w, a.mask()) == b.mask()) return {true, w};
  return {false, 0};
}

Mono::Mono(GroupPtr dom, GroupPtr cod, std::vector<Elem> image)
    : dom_(std::move(dom)), cod_(std::move(cod)), image_(std::move(image)) {
  preimage_.assign(cod_->order(), -1);
  for (int x = 0; x < dom_->order(); ++x) {
    image_mask_ |= 1ull << image_[x];
    preimage_[image_[x]] = x;
  }
}

Mono Mono::check(GroupPtr dom, GroupPtr cod, const std::vector<std::pair<Elem, Elem>>& partial) {
  const int n = dom->order();
  std::vector<Elem> image(n, -1);
  image[dom->identity()] = cod->identity();
  for (auto [x, y] : partial) {
    if (x < 0 || x >= n || y < 0 || y >= cod->order())
      throw Error("monomorphism: element out of range");
    if (image[x] >= 0 && image[x] != y)
      throw Error("monomorphism " + dom->name() + " -> " + cod->name() +
                  ": conflicting images for '" + dom->elem_name(x) + "'");
    image[x] = y;
  }

  // close multiplicatively over the given generators
  bool grew = true;
  while (grew) {
    grew = false;
    for (int a = 0; a < n; ++a) {
      if (image[a] < 0) continue;
      for (int b = 0; b < n; ++b) {
        if (image[b] < 0) continue;
        int ab = dom->mul(a, b);
        Elem y = cod->mul(image[a], image[b]);
        if (image[ab] < 0) {
          image[ab] = y;
          grew = true;
        } else if (image[ab] != y) {
          throw Error("not a homomorphism " + dom->name() + " -> " + cod->name() +
                      ": images disagree on the pair (" + dom->elem_name(a) + ", " +
                      dom->elem_name(b) + ")");
        }
      }
    }
  }
  for (int x = 0; x < n; ++x)
    if (image[x] < 0)
      throw Error("monomorphism " + dom->name() + " -> " + cod->name() +
                  ": given elements do not generate the domain (no image for '" +
                  dom->elem_name(x) + "')");

  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (cod->mul(image[a], image[b]) != image[dom->mul(a, b)])
        throw Error("not a homomorphism " + dom->name() + " -> " + cod->name() +
                    ": fails on the pair (" + dom->elem_name(a) + ", " + dom->elem_name(b) + ")");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (image[a] == image[b])
        throw Error("not injective " + dom->name() + " -> " + cod->name() + ": '" +
                    dom->elem_name(a) + "' and '" + dom->elem_name(b) + "' collide");

  return Mono(std::move(dom), std::move(cod), std::move(image));
}

Mono Mono::compose(const Mono& outer, const Mono& inner) {
  if (inner.codomain() != outer.domain())
    throw Error("mono composition: codomain/domain mismatch");
  std::vector<std::pair<Elem, Elem>> pairs;
  for (int x = 0; x < inner.domain()->order(); ++x)
    pairs.emplace_back(x, outer.map(inner.map(x)));
  return Mono::check(inner.domain(), outer.codomain(), pairs);
}

Mono Mono::by_names(GroupPtr dom, GroupPtr cod) {
  std::vector<std::pair<Elem, Elem>> pairs;
  for (int x = 0; x < dom->order(); ++x) {
    auto y = cod->elem_by_name(dom->elem_name(x));
    if (!y)
      throw Error("inclusion by names: '" + dom->elem_name(x) + "' not found in " + cod->name());
    pairs.emplace_back(x, *y);
  }
  return Mono::check(std::move(dom), std::move(cod), pairs);
}

std::optional<Elem> Mono::preimage(Elem y) const {
  if (y < 0 || y >= cod_->order() || preimage_[y] < 0) return std::nullopt;
  return preimage_[y];
}

int Mono::index() const { return cod_->order() / dom_->order(); }

}  // namespace gogtree
