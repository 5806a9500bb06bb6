#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dcgroup/group.hpp"

namespace dcg {

/// Multiplication table of a finite group on indices 0..order-1, with named
/// generator letters. Construction validates the Latin-square property,
/// identity and inverses, associativity (exhaustively up to order 256), and
/// that the letters generate the group.
class FiniteTable {
 public:
  static constexpr std::size_t kAssociativityCheckLimit = 256;

  FiniteTable(std::string name, std::size_t order, std::vector<std::uint32_t> table,
              std::vector<std::pair<std::string, std::uint32_t>> letters)
      : name_(std::move(name)), order_(order), table_(std::move(table)), letters_(std::move(letters)) {
    validate();
    build_words();
    build_classes();
  }

  /// Closes `gens` under `mul` starting from `identity`; element 0 is the identity.
  template <class T, class Mul>
  static FiniteTable from_generators(std::string name, const std::vector<std::pair<std::string, T>>& gens,
                                     const T& identity, Mul mul, std::size_t max_order = 4096) {
    std::vector<T> elems{identity};
    std::map<T, std::uint32_t> index{{identity, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i) {
      for (const auto& [nm, g] : gens) {
        T p = mul(elems[i], g);
        if (index.emplace(p, static_cast<std::uint32_t>(elems.size())).second) {
          elems.push_back(p);
          if (elems.size() > max_order) throw ResourceError("finite group closure exceeds cap");
        }
      }
    }
    std::size_t n = elems.size();
    std::vector<std::uint32_t> table(n * n);
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = 0; b < n; ++b) {
        auto it = index.find(mul(elems[a], elems[b]));
        if (it == index.end()) throw StructuralError("multiplication not closed in " + name);
        table[a * n + b] = it->second;
      }
    }
    std::vector<std::pair<std::string, std::uint32_t>> letters;
    for (const auto& [nm, g] : gens) letters.emplace_back(nm, index.at(g));
    return FiniteTable(std::move(name), n, std::move(table), std::move(letters));
  }

  const std::string& name() const { return name_; }
  std::size_t order() const { return order_; }
  std::uint32_t identity() const { return identity_; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const { return table_[a * order_ + b]; }
  std::uint32_t inverse(std::uint32_t a) const { return inverse_[a]; }
  bool commute(std::uint32_t a, std::uint32_t b) const { return mul(a, b) == mul(b, a); }
  std::uint32_t conjugate(std::uint32_t g, std::uint32_t x) const { return mul(inverse(g), mul(x, g)); }

  const std::vector<std::pair<std::string, std::uint32_t>>& letters() const { return letters_; }
  const std::vector<WordToken>& word(std::uint32_t a) const { return words_[a]; }

  /// Smallest index in the conjugacy class of a.
  std::uint32_t class_rep(std::uint32_t a) const { return class_rep_[a]; }
  const std::vector<std::uint32_t>& class_of(std::uint32_t a) const { return classes_[class_index_[a]]; }
  const std::vector<std::vector<std::uint32_t>>& classes() const { return classes_; }

  bool is_abelian() const {
    for (std::uint32_t a = 0; a < order_; ++a)
      for (std::uint32_t b = a + 1; b < order_; ++b)
        if (!commute(a, b)) return false;
    return true;
  }

 private:
  void validate() {
    if (order_ == 0) throw StructuralError(name_ + ": empty table");
    if (table_.size() != order_ * order_) throw StructuralError(name_ + ": table has wrong size");
    for (auto v : table_)
      if (v >= order_) throw StructuralError(name_ + ": table entry out of range");
    std::vector<char> seen(order_);
    for (std::size_t a = 0; a < order_; ++a) {
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t b = 0; b < order_; ++b) {
        if (seen[table_[a * order_ + b]]++) throw StructuralError(name_ + ": row is not a permutation");
      }
      std::fill(seen.begin(), seen.end(), 0);
      for (std::size_t b = 0; b < order_; ++b) {
        if (seen[table_[b * order_ + a]]++) throw StructuralError(name_ + ": column is not a permutation");
      }
    }
    bool found = false;
    for (std::uint32_t e = 0; e < order_ && !found; ++e) {
      bool ok = true;
      for (std::uint32_t x = 0; x < order_ && ok; ++x) ok = mul(e, x) == x && mul(x, e) == x;
      if (ok) {
        identity_ = e;
        found = true;
      }
    }
    if (!found) throw StructuralError(name_ + ": no identity");
    inverse_.assign(order_, 0);
    for (std::uint32_t a = 0; a < order_; ++a) {
      for (std::uint32_t b = 0; b < order_; ++b) {
        if (mul(a, b) == identity_) inverse_[a] = b;
      }
    }
    if (order_ <= kAssociativityCheckLimit) {
      for (std::uint32_t a = 0; a < order_; ++a)
        for (std::uint32_t b = 0; b < order_; ++b) {
          std::uint32_t ab = mul(a, b);
          for (std::uint32_t c = 0; c < order_; ++c) {
            if (mul(ab, c) != mul(a, mul(b, c))) throw StructuralError(name_ + ": not associative");
          }
        }
    }
    for (const auto& [nm, idx] : letters_) {
      if (idx >= order_) throw StructuralError(name_ + ": letter out of range");
      if (nm.empty() || nm == "e") throw StructuralError(name_ + ": bad letter name");
    }
  }

  // Shortest words by BFS over letters and their inverses, letter order as given.
  void build_words() {
    words_.assign(order_, {});
    std::vector<char> seen(order_, 0);
    seen[identity_] = 1;
    std::deque<std::uint32_t> queue{identity_};
    while (!queue.empty()) {
      std::uint32_t cur = queue.front();
      queue.pop_front();
      for (const auto& [nm, idx] : letters_) {
        for (int sign : {1, -1}) {
          std::uint32_t nxt = mul(cur, sign > 0 ? idx : inverse(idx));
          if (seen[nxt]) continue;
          seen[nxt] = 1;
          auto w = words_[cur];
          if (!w.empty() && w.back().name == nm && (w.back().exponent > 0) == (sign > 0)) {
            w.back().exponent += sign;
          } else {
            w.push_back({nm, sign});
          }
          words_[nxt] = std::move(w);
          queue.push_back(nxt);
        }
      }
    }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
      throw StructuralError(name_ + ": letters do not generate the group");
    }
  }

  void build_classes() {
    class_rep_.assign(order_, 0);
    class_index_.assign(order_, 0);
    std::vector<char> done(order_, 0);
    for (std::uint32_t x = 0; x < order_; ++x) {
      if (done[x]) continue;
      std::vector<std::uint32_t> cls;
      for (std::uint32_t g = 0; g < order_; ++g) cls.push_back(conjugate(g, x));
      std::sort(cls.begin(), cls.end());
      cls.erase(std::unique(cls.begin(), cls.end()), cls.end());
      for (auto y : cls) {
        done[y] = 1;
        class_rep_[y] = cls.front();
        class_index_[y] = static_cast<std::uint32_t>(classes_.size());
      }
      classes_.push_back(std::move(cls));
    }
  }

  std::string name_;
  std::size_t order_;
  std::vector<std::uint32_t> table_;
  std::vector<std::pair<std::string, std::uint32_t>> letters_;
  std::uint32_t identity_ = 0;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::vector<WordToken>> words_;
  std::vector<std::uint32_t> class_rep_;
  std::vector<std::uint32_t> class_index_;
  std::vector<std::vector<std::uint32_t>> classes_;
};

/// Finite group given by a table. Payload: [index].
class FiniteTableFamily final : public Family {
 public:
  explicit FiniteTableFamily(std::shared_ptr<const FiniteTable> table)
      : table_(std::move(table)), abelian_(table_->is_abelian()) {}

  const FiniteTable& table() const { return *table_; }
  std::shared_ptr<const FiniteTable> table_ptr() const { return table_; }

  FamilyKind kind() const override { return FamilyKind::finite_table; }
  std::string name() const override { return table_->name(); }

  void identity(Payload& out) const override { out.assign(1, table_->identity()); }
  void multiply(PayloadView x, PayloadView y, Payload& out) const override {
    out.assign(1, table_->mul(static_cast<std::uint32_t>(x[0]), static_cast<std::uint32_t>(y[0])));
  }
  void inverse(PayloadView x, Payload& out) const override {
    out.assign(1, table_->inverse(static_cast<std::uint32_t>(x[0])));
  }
  bool is_canonical(PayloadView x) const override {
    return x.size() == 1 && x[0] >= 0 && static_cast<std::size_t>(x[0]) < table_->order();
  }
  bool is_abelian() const override { return abelian_; }
  std::optional<std::uint64_t> order() const override { return table_->order(); }

  std::vector<Letter> letters() const override {
    std::vector<Letter> out;
    for (const auto& [nm, idx] : table_->letters()) out.push_back({nm, {idx}});
    return out;
  }

  std::vector<WordToken> word(PayloadView x) const override {
    return table_->word(static_cast<std::uint32_t>(x[0]));
  }

  bool has_commute_keys() const override { return abelian_; }
  CommuteKey commute_key(PayloadView) const override { return {true, {}}; }

  void conj_canonical(PayloadView x, Payload& out) const override {
    out.assign(1, table_->class_rep(static_cast<std::uint32_t>(x[0])));
  }

  std::optional<std::vector<Payload>> finite_class(PayloadView x, std::size_t cap) const override {
    const auto& cls = table_->class_of(static_cast<std::uint32_t>(x[0]));
    if (cls.size() > cap) return std::nullopt;
    std::vector<Payload> out;
    for (auto y : cls) out.push_back({y});
    return out;
  }

 private:
  std::shared_ptr<const FiniteTable> table_;
  bool abelian_;
};

inline Group make_finite(FiniteTable table) {
  return Group(std::make_shared<FiniteTableFamily>(std::make_shared<const FiniteTable>(std::move(table))));
}

inline Group make_finite(std::shared_ptr<const FiniteTable> table) {
  return Group(std::make_shared<FiniteTableFamily>(std::move(table)));
}

/// The table behind a finite-table group; throws for other families.
inline const FiniteTable& table_of(const Group& g) {
  if (g.kind() != FamilyKind::finite_table) throw PreconditionError(g.name() + " is not a finite table group");
  return static_cast<const FiniteTableFamily&>(g.family()).table();
}

inline std::uint32_t table_index(const Element& x) { return static_cast<std::uint32_t>(x[0]); }

}  // namespace dcg
