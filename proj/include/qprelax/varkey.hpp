#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qprelax {

// Extended-variable key. Three kinds:
//  - monomial z_S   (S = {} is the affine constant 1, never a free variable)
//  - square   z^J_{ii} = x_i^2 prod_{j in J} x_j  (i not in J; J = {} is z_ii)
//  - weight   lambda_{B,a}: junction-tree weight of binary assignment `a`
//             (bitmask over the sorted bag B)
// Sets are kept sorted; ordering is structural and total.
struct VarKey {
  enum class Kind : uint8_t { monomial = 0, square = 1, weight = 2 };
  Kind kind = Kind::monomial;
  int node = 0;           // square: the squared index i
  std::vector<int> set;   // monomial S / square exponent J / weight bag B
  uint64_t mask = 0;      // weight: assignment bits over sorted(B)

  static VarKey monomial(std::vector<int> S);
  static VarKey square(int i, std::vector<int> J);
  static VarKey weight(std::vector<int> bag, uint64_t mask);
  static VarKey one() { return monomial({}); }

  bool is_constant() const { return kind == Kind::monomial && set.empty(); }
  std::string label() const;

  // degree before lexicographic content, so z(1) < z(2) < z(1,2)
  std::strong_ordering operator<=>(const VarKey& o) const {
    if (auto c = kind <=> o.kind; c != 0) return c;
    if (auto c = node <=> o.node; c != 0) return c;
    if (auto c = set.size() <=> o.set.size(); c != 0) return c;
    if (auto c = set <=> o.set; c != 0) return c;
    return mask <=> o.mask;
  }
  bool operator==(const VarKey& o) const {
    return kind == o.kind && node == o.node && set == o.set && mask == o.mask;
  }
};

// Interns VarKeys and assigns dense indices on first use. Shared per
// program; single-writer during assembly.
class Registry {
 public:
  int intern(const VarKey& k);
  int index_of(const VarKey& k) const;  // -1 if absent
  const VarKey& key(int idx) const { return keys_.at(idx); }
  int size() const { return static_cast<int>(keys_.size()); }
  const std::vector<VarKey>& keys() const { return keys_; }

 private:
  std::vector<VarKey> keys_;
  std::map<VarKey, int> index_;
};

}  // namespace qprelax
