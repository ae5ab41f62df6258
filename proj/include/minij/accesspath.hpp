#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "minij/nullness.hpp"

namespace minij {

class Interner;

// Canonical chain of field reads and no-argument calls rooted at a local
// variable or `this`.  Roots are per-method symbol ids, so same-named locals
// in disjoint scopes never collide.  Links pack an interned member name with
// a call bit.
struct AccessPath {
  enum class Root : uint8_t { This, Local };
  Root root = Root::This;
  uint32_t root_sym = 0;        // Local only
  std::vector<uint32_t> links;  // (name_id << 1) | is_call

  static uint32_t field_link(uint32_t name_id) { return name_id << 1; }
  static uint32_t call_link(uint32_t name_id) { return (name_id << 1) | 1u; }

  static AccessPath this_root() { return AccessPath{}; }
  static AccessPath local(uint32_t sym) {
    AccessPath p;
    p.root = Root::Local;
    p.root_sym = sym;
    return p;
  }

  AccessPath extended(uint32_t link) const {
    AccessPath p = *this;
    p.links.push_back(link);
    return p;
  }

  size_t depth() const { return links.size(); }

  bool operator==(const AccessPath& o) const {
    return root == o.root && root_sym == o.root_sym && links == o.links;
  }
  bool operator<(const AccessPath& o) const {
    if (root != o.root) return root < o.root;
    if (root_sym != o.root_sym) return root_sym < o.root_sym;
    return links < o.links;
  }

  /// True when `this` extends (or equals) `prefix`.
  bool extends(const AccessPath& prefix) const {
    if (root != prefix.root || root_sym != prefix.root_sym) return false;
    if (links.size() < prefix.links.size()) return false;
    return std::equal(prefix.links.begin(), prefix.links.end(), links.begin());
  }

  /// `root.f.g()` rendering; local roots print by name via the symbol table.
  std::string to_string(const Interner& names, const std::string& root_name) const;
};

// Finite map AccessPath -> Nullness at a program point, kept as a sorted
// vector (stores are small and copied often).  Absence means "unknown" in the
// store lattice; total lookup with declaration-derived defaults lives in the
// evaluator, which knows each path's declaration.
class NullnessStore {
 public:
  std::optional<Nullness> get(const AccessPath& p) const {
    auto it = lower_bound(p);
    if (it != facts_.end() && it->first == p) return it->second;
    return std::nullopt;
  }

  void set(const AccessPath& p, Nullness n) {
    auto it = lower_bound(p);
    if (it != facts_.end() && it->first == p) {
      it->second = n;
    } else {
      facts_.insert(it, {p, n});
    }
  }

  void erase(const AccessPath& p) {
    auto it = lower_bound(p);
    if (it != facts_.end() && it->first == p) facts_.erase(it);
  }

  /// Removes every fact whose path extends `prefix`, including the prefix
  /// itself.  Extensions sort contiguously after their prefix.
  void kill_extensions(const AccessPath& prefix) {
    auto b = lower_bound(prefix);
    auto e = b;
    while (e != facts_.end() && e->first.extends(prefix)) ++e;
    facts_.erase(b, e);
  }

  /// Store-lattice join: keys present in both sides get the value join; keys
  /// present on one side only are dropped (absence is top).  Parameters and
  /// `this` are seeded at entry, so they always survive joins.
  static NullnessStore join(const NullnessStore& a, const NullnessStore& b) {
    NullnessStore out;
    out.facts_.reserve(std::min(a.facts_.size(), b.facts_.size()));
    auto ia = a.facts_.begin();
    auto ib = b.facts_.begin();
    while (ia != a.facts_.end() && ib != b.facts_.end()) {
      if (ia->first < ib->first) {
        ++ia;
      } else if (ib->first < ia->first) {
        ++ib;
      } else {
        out.facts_.push_back({ia->first, nullness_join(ia->second, ib->second)});
        ++ia;
        ++ib;
      }
    }
    return out;
  }

  bool operator==(const NullnessStore& o) const { return facts_ == o.facts_; }

  const std::vector<std::pair<AccessPath, Nullness>>& facts() const {
    return facts_;
  }
  size_t size() const { return facts_.size(); }

 private:
  std::vector<std::pair<AccessPath, Nullness>>::iterator lower_bound(
      const AccessPath& p) {
    return std::lower_bound(
        facts_.begin(), facts_.end(), p,
        [](const auto& kv, const AccessPath& key) { return kv.first < key; });
  }
  std::vector<std::pair<AccessPath, Nullness>>::const_iterator lower_bound(
      const AccessPath& p) const {
    return std::lower_bound(
        facts_.begin(), facts_.end(), p,
        [](const auto& kv, const AccessPath& key) { return kv.first < key; });
  }

  std::vector<std::pair<AccessPath, Nullness>> facts_;
};

}  // namespace minij
