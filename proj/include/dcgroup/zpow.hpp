#pragma once

#include <memory>
#include <string>

#include "dcgroup/group.hpp"
#include "dcgroup/numeric.hpp"

namespace dcg {

/// Z^d. Payload: the d coordinates.
class ZPowFamily final : public Family {
 public:
  explicit ZPowFamily(int dim) : dim_(dim) {
    if (dim < 1) throw ConfigError("Z^d needs d >= 1");
  }

  FamilyKind kind() const override { return FamilyKind::zpow; }
  std::string name() const override { return dim_ == 1 ? "Z" : "Z^" + std::to_string(dim_); }
  int dimension() const { return dim_; }

  void identity(Payload& out) const override { out.assign(dim_, 0); }

  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    out.resize(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = checked_add(x[i], y[i]);
  }

  void inverse(PayloadView x, Payload& out) const override {
    out.resize(dim_);
    for (int i = 0; i < dim_; ++i) out[i] = checked_neg(x[i]);
  }

  bool is_canonical(PayloadView x) const override { return x.size() == static_cast<std::size_t>(dim_); }
  bool is_abelian() const override { return true; }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }

  std::vector<Letter> letters() const override {
    std::vector<Letter> out;
    for (int i = 0; i < dim_; ++i) {
      Payload p(dim_, 0);
      p[i] = 1;
      out.push_back({letter_name(i), p});
    }
    return out;
  }

  std::vector<WordToken> word(PayloadView x) const override {
    std::vector<WordToken> out;
    for (int i = 0; i < dim_; ++i) {
      if (x[i] != 0) out.push_back({letter_name(i), x[i]});
    }
    return out;
  }

  bool has_commute_keys() const override { return true; }
  CommuteKey commute_key(PayloadView) const override { return {true, {}}; }

  void conj_canonical(PayloadView x, Payload& out) const override { out.assign(x.begin(), x.end()); }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t) const override {
    return std::vector<Payload>{Payload(x.begin(), x.end())};
  }

 private:
  std::string letter_name(int i) const { return dim_ == 1 ? "t" : "e" + std::to_string(i + 1); }

  int dim_;
};

inline Group make_zpow(int dim) { return Group(std::make_shared<ZPowFamily>(dim)); }

}  // namespace dcg
