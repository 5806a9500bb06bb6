#pragma once

#include <algorithm>
#include <memory>
#include <string>

#include "dcgroup/group.hpp"

namespace dcg {

/// Free group of rank k. Payload: a freely reduced word, letter i (0-based)
/// encoded as i+1 and its inverse as -(i+1).
class FreeGroupFamily final : public Family {
 public:
  explicit FreeGroupFamily(int rank) : rank_(rank) {
    if (rank < 1) throw ConfigError("free group needs rank >= 1");
  }

  FamilyKind kind() const override { return FamilyKind::free_group; }
  std::string name() const override { return "f" + std::to_string(rank_); }
  int rank() const { return rank_; }

  void identity(Payload& out) const override { out.clear(); }

  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    out.assign(x.begin(), x.end());
    for (std::int64_t l : y) {
      if (!out.empty() && out.back() == -l) {
        out.pop_back();
      } else {
        out.push_back(l);
      }
    }
  }

  void inverse(PayloadView x, Payload& out) const override {
    out.clear();
    for (auto it = x.rbegin(); it != x.rend(); ++it) out.push_back(-*it);
  }

  bool is_canonical(PayloadView x) const override {
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i] == 0 || x[i] > rank_ || x[i] < -rank_) return false;
      if (i > 0 && x[i] == -x[i - 1]) return false;
    }
    return true;
  }

  bool is_abelian() const override { return rank_ == 1; }
  std::optional<std::uint64_t> order() const override { return std::nullopt; }

  std::vector<Letter> letters() const override {
    std::vector<Letter> out;
    for (int i = 0; i < rank_; ++i) out.push_back({letter_name(i), {i + 1}});
    return out;
  }

  std::vector<WordToken> word(PayloadView x) const override {
    std::vector<WordToken> out;
    for (std::int64_t l : x) {
      std::int64_t gen = l > 0 ? l : -l;
      std::int64_t step = l > 0 ? 1 : -1;
      std::string nm = letter_name(static_cast<int>(gen - 1));
      if (!out.empty() && out.back().name == nm && (out.back().exponent > 0) == (step > 0)) {
        out.back().exponent += step;
      } else {
        out.push_back({nm, step});
      }
    }
    return out;
  }

  // Nontrivial elements commute iff they have the same primitive root up to inversion.
  bool has_commute_keys() const override { return true; }
  CommuteKey commute_key(PayloadView x) const override {
    if (x.empty()) return {true, {}};
    return {false, root(x)};
  }

  void conj_canonical(PayloadView x, Payload& out) const override {
    auto [prefix, core] = cyclic_split(x);
    out = min_rotation(core);
  }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t) const override {
    if (x.empty()) return std::vector<Payload>{Payload{}};
    return std::nullopt;
  }

  /// Writes x = p c p^-1 with c cyclically reduced; returns (|p|, c).
  static std::pair<std::size_t, Payload> cyclic_split(PayloadView x) {
    std::size_t n = x.size(), i = 0;
    while (2 * i + 1 < n && x[i] == -x[n - 1 - i]) ++i;
    return {i, Payload(x.begin() + i, x.end() - i)};
  }

  /// Canonical primitive root of a nontrivial reduced word, oriented so that
  /// a word and its inverse get the same key.
  static Payload root(PayloadView x) {
    auto [plen, core] = cyclic_split(x);
    std::size_t n = core.size(), period = n;
    for (std::size_t d = 1; d < n; ++d) {
      if (n % d) continue;
      bool periodic = true;
      for (std::size_t j = d; j < n && periodic; ++j) periodic = core[j] == core[j - d];
      if (periodic) {
        period = d;
        break;
      }
    }
    auto build = [&](bool inverted) {
      Payload r(x.begin(), x.begin() + plen);
      if (inverted) {
        for (std::size_t j = period; j-- > 0;) r.push_back(-core[j]);
      } else {
        r.insert(r.end(), core.begin(), core.begin() + period);
      }
      for (std::size_t j = plen; j-- > 0;) r.push_back(-x[j]);
      return r;
    };
    Payload fwd = build(false), bwd = build(true);
    return std::lexicographical_compare(bwd.begin(), bwd.end(), fwd.begin(), fwd.end()) ? bwd : fwd;
  }

  /// Order on letters: x < x^-1 < y < y^-1 < ...
  static std::int64_t letter_rank(std::int64_t l) { return 2 * ((l > 0 ? l : -l) - 1) + (l < 0); }

  static Payload min_rotation(const Payload& w) {
    std::size_t n = w.size(), best = 0;
    auto less_at = [&](std::size_t a, std::size_t b) {
      for (std::size_t k = 0; k < n; ++k) {
        auto ra = letter_rank(w[(a + k) % n]), rb = letter_rank(w[(b + k) % n]);
        if (ra != rb) return ra < rb;
      }
      return false;
    };
    for (std::size_t s = 1; s < n; ++s) {
      if (less_at(s, best)) best = s;
    }
    Payload out;
    for (std::size_t k = 0; k < n; ++k) out.push_back(w[(best + k) % n]);
    return out;
  }

 private:
  std::string letter_name(int i) const {
    static const char* names[] = {"x", "y", "z", "w"};
    return rank_ <= 4 ? names[i] : "a" + std::to_string(i + 1);
  }

  int rank_;
};

inline Group make_free_group(int rank) { return Group(std::make_shared<FreeGroupFamily>(rank)); }

}  // namespace dcg
