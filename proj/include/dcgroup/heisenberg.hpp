#pragma once

#include <memory>
#include <numeric>

#include "dcgroup/group.hpp"
#include "dcgroup/numeric.hpp"

namespace dcg {

/// Integer Heisenberg group. Payload (a, b, c) with
/// (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
/// Letters x=(1,0,0), y=(0,1,0) and the central z=(0,0,1).
class HeisenbergFamily final : public Family {
 public:
  FamilyKind kind() const override { return FamilyKind::heisenberg; }
  std::string name() const override { return "heisenberg"; }

  void identity(Payload& out) const override { out.assign(3, 0); }

  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    std::int64_t a = checked_add(x[0], y[0]);
    std::int64_t b = checked_add(x[1], y[1]);
    std::int64_t c = checked_add(checked_add(x[2], y[2]), checked_mul(x[0], y[1]));
    out.assign({a, b, c});
  }

  void inverse(PayloadView x, Payload& out) const override {
    out.assign({checked_neg(x[0]), checked_neg(x[1]), checked_sub(checked_mul(x[0], x[1]), x[2])});
  }

  bool is_canonical(PayloadView x) const override { return x.size() == 3; }
  bool is_abelian() const override { return false; }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }

  std::vector<Letter> letters() const override {
    return {{"x", {1, 0, 0}}, {"y", {0, 1, 0}}, {"z", {0, 0, 1}}};
  }

  // x^a y^b = (a, b, ab), so (a,b,c) = x^a y^b z^(c - ab).
  std::vector<WordToken> word(PayloadView x) const override {
    std::vector<WordToken> out;
    if (x[0] != 0) out.push_back({"x", x[0]});
    if (x[1] != 0) out.push_back({"y", x[1]});
    std::int64_t k = checked_sub(x[2], checked_mul(x[0], x[1]));
    if (k != 0) out.push_back({"z", k});
    return out;
  }

  // (a,b,c) and (a',b',c') commute iff ab' = a'b, i.e. (a,b) and (a',b') are parallel.
  bool has_commute_keys() const override { return true; }
  CommuteKey commute_key(PayloadView x) const override {
    if (x[0] == 0 && x[1] == 0) return {true, {}};
    auto [a, b] = primitive_direction(x[0], x[1]);
    return {false, {a, b}};
  }

  // Conjugating (a,b,c) by (u,v,w) gives (a, b, c + av - bu); the class is
  // {(a, b, c + k*gcd(a,b))}, represented by c mod gcd(a,b).
  void conj_canonical(PayloadView x, Payload& out) const override {
    if (x[0] == 0 && x[1] == 0) {
      out.assign(x.begin(), x.end());
      return;
    }
    std::int64_t g = std::gcd(x[0], x[1]);
    std::int64_t r = x[2] % g;
    if (r < 0) r += g;
    out.assign({x[0], x[1], r});
  }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t) const override {
    if (x[0] == 0 && x[1] == 0) return std::vector<Payload>{Payload(x.begin(), x.end())};
    return std::nullopt;
  }

 private:
  static std::pair<std::int64_t, std::int64_t> primitive_direction(std::int64_t a, std::int64_t b) {
    std::int64_t g = std::gcd(a, b);
    a /= g;
    b /= g;
    if (a < 0 || (a == 0 && b < 0)) {
      a = -a;
      b = -b;
    }
    return {a, b};
  }
};

inline Group make_heisenberg() { return Group(std::make_shared<HeisenbergFamily>()); }

}  // namespace dcg
