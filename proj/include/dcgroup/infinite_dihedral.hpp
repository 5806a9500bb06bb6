#pragma once

#include <memory>

#include "dcgroup/group.hpp"
#include "dcgroup/numeric.hpp"

namespace dcg {

/// D_inf = Z x| Z/2. Payload (n, f) with (n,f)(m,g) = (n + (-1)^f m, f xor g).
/// Letters: translation t = (1,0) and reflection s = (0,1); (n,1) = t^n s.
class InfiniteDihedralFamily final : public Family {
 public:
  FamilyKind kind() const override { return FamilyKind::infinite_dihedral; }
  std::string name() const override { return "dinf"; }

  void identity(Payload& out) const override { out.assign(2, 0); }

  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    std::int64_t n = x[1] ? checked_sub(x[0], y[0]) : checked_add(x[0], y[0]);
    out.assign({n, x[1] ^ y[1]});
  }

  void inverse(PayloadView x, Payload& out) const override {
    if (x[1]) {
      out.assign(x.begin(), x.end());
    } else {
      out.assign({checked_neg(x[0]), 0});
    }
  }

  bool is_canonical(PayloadView x) const override { return x.size() == 2 && (x[1] == 0 || x[1] == 1); }
  bool is_abelian() const override { return false; }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }

  std::vector<Letter> letters() const override { return {{"t", {1, 0}}, {"s", {0, 1}}}; }

  std::vector<WordToken> word(PayloadView x) const override {
    std::vector<WordToken> out;
    if (x[0] != 0) out.push_back({"t", x[0]});
    if (x[1]) out.push_back({"s", 1});
    return out;
  }

  // Translations commute with each other; a reflection commutes only with
  // itself and the identity.
  bool has_commute_keys() const override { return true; }
  CommuteKey commute_key(PayloadView x) const override {
    if (x[0] == 0 && x[1] == 0) return {true, {}};
    if (x[1] == 0) return {false, {0}};
    return {false, {1, x[0]}};
  }

  // Classes: {t^n, t^-n} and the two reflection classes by parity of n.
  void conj_canonical(PayloadView x, Payload& out) const override {
    if (x[1] == 0) {
      out.assign({x[0] < 0 ? checked_neg(x[0]) : x[0], 0});
    } else {
      std::int64_t parity = x[0] % 2 == 0 ? 0 : 1;
      out.assign({parity, 1});
    }
  }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t) const override {
    if (x[1]) return std::nullopt;
    if (x[0] == 0) return std::vector<Payload>{Payload{0, 0}};
    return std::vector<Payload>{Payload{x[0], 0}, Payload{checked_neg(x[0]), 0}};
  }
};

inline Group make_infinite_dihedral() { return Group(std::make_shared<InfiniteDihedralFamily>()); }

}  // namespace dcg
