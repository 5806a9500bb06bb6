#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcgroup/ball.hpp"
#include "dcgroup/dc_engine.hpp"
#include "dcgroup/measure.hpp"

namespace dcg {

inline constexpr std::size_t kDefaultCosetCap = 1000;

/// Membership predicate for a subgroup H, optionally with generators.
struct SubgroupOracle {
  std::function<bool(const Element&)> membership;
  std::optional<std::vector<Element>> generators;
  std::string description;

  bool contains(const Element& x) const { return membership(x); }
};

namespace index_detail {

// Image of x under the homomorphism to Z/2 used by the even-sum subgroup.
inline std::int64_t parity(const Group& g, PayloadView x) {
  switch (g.kind()) {
    case FamilyKind::zpow: {
      std::int64_t s = 0;
      for (auto v : x) s += v & 1;
      return s & 1;
    }
    case FamilyKind::heisenberg:
      return (x[0] + x[1]) & 1;
    case FamilyKind::free_group:
      return static_cast<std::int64_t>(x.size() & 1);
    case FamilyKind::infinite_dihedral:
      return x[0] & 1;
    case FamilyKind::direct_product: {
      const auto& prod = product_of(g);
      auto parts = prod.split(x);
      std::int64_t s = 0;
      for (std::size_t i = 0; i < parts.size(); ++i) s += parity(prod.components()[i], parts[i]);
      return s & 1;
    }
    case FamilyKind::finite_table:
      break;
  }
  throw ConfigError("even-sum subgroup is not defined for " + g.name());
}

}  // namespace index_detail

namespace index_detail {

// Row echelon basis of the lattice spanned by integer vectors (Euclid on columns).
inline std::vector<std::vector<BigInt>> lattice_echelon(std::vector<std::vector<BigInt>> rows, std::size_t dim) {
  std::vector<std::vector<BigInt>> basis;
  for (std::size_t c = 0; c < dim && !rows.empty(); ++c) {
    for (;;) {
      std::size_t best = rows.size();
      for (std::size_t i = 0; i < rows.size(); ++i)
        if (rows[i][c] != 0 && (best == rows.size() || abs(rows[i][c]) < abs(rows[best][c]))) best = i;
      if (best == rows.size()) break;
      bool reduced = true;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i == best || rows[i][c] == 0) continue;
        BigInt q = rows[i][c] / rows[best][c];
        for (std::size_t k = c; k < dim; ++k) rows[i][k] -= q * rows[best][k];
        if (rows[i][c] != 0) reduced = false;
      }
      if (reduced) {
        if (rows[best][c] < 0)
          for (auto& v : rows[best]) v = -v;
        basis.push_back(std::move(rows[best]));
        rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(best));
        break;
      }
    }
  }
  return basis;
}

inline bool in_lattice(const std::vector<std::vector<BigInt>>& basis, PayloadView x) {
  std::vector<BigInt> v;
  for (auto c : x) v.emplace_back(static_cast<long>(c));
  for (const auto& row : basis) {
    std::size_t c = 0;
    while (row[c] == 0) ++c;
    if (v[c] % row[c] != 0) return false;
    BigInt q = v[c] / row[c];
    for (std::size_t k = c; k < v.size(); ++k) v[k] -= q * row[k];
  }
  return std::all_of(v.begin(), v.end(), [](const BigInt& z) { return z == 0; });
}

}  // namespace index_detail

/// Subgroup generated by `gens`. In Z^d membership is exact lattice
/// membership; elsewhere the subgroup is closed by BFS and a ResourceError is
/// thrown once the closure exceeds `cap` elements.
inline SubgroupOracle generated_subgroup(const Group& g, std::vector<Element> gens, std::size_t cap = 100'000) {
  if (g.kind() == FamilyKind::zpow) {
    std::vector<std::vector<BigInt>> rows;
    std::size_t dim = g.identity().payload().size();
    for (const auto& x : gens) {
      g.check(x);
      std::vector<BigInt> r;
      for (auto c : x.payload()) r.emplace_back(static_cast<long>(c));
      rows.push_back(std::move(r));
    }
    auto basis = std::make_shared<std::vector<std::vector<BigInt>>>(index_detail::lattice_echelon(rows, dim));
    std::string desc = "<";
    for (const auto& x : gens) desc += (desc.size() > 1 ? "," : "") + g.format(x);
    desc += ">";
    return {[basis](const Element& x) { return index_detail::in_lattice(*basis, x.payload()); }, std::move(gens),
            desc};
  }
  std::vector<Element> sym;
  for (const auto& x : gens) {
    g.check(x);
    sym.push_back(x);
    sym.push_back(g.inverse(x));
  }
  auto members = std::make_shared<std::unordered_set<Element, ElementHash>>();
  members->insert(g.identity());
  std::deque<Element> queue{g.identity()};
  // Payload words stored so far; long words in infinite subgroups exhaust this first.
  std::size_t words = 0;
  const std::size_t word_budget = 64 * cap;
  while (!queue.empty()) {
    Element y = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : sym) {
      Element z = g.multiply(y, s);
      if (members->insert(z).second) {
        words += z.payload().size();
        if (members->size() > cap || words > word_budget) {
          throw ResourceError("subgroup closure exceeds " + std::to_string(cap) +
                              " elements; use a named predicate for infinite subgroups");
        }
        queue.push_back(std::move(z));
      }
    }
  }
  std::string desc = "<";
  for (const auto& x : gens) desc += (desc.size() > 1 ? "," : "") + g.format(x);
  desc += ">";
  return {[members](const Element& x) { return members->count(x) > 0; }, std::move(gens), desc};
}

/// Built-in subgroups by name:
///   trivial, whole, center, even-sum, translations (dinf), factor:i (products, 1-based),
///   mod:k (elements of Z or Z_m whose coordinate is divisible by k)
inline SubgroupOracle named_subgroup(const Group& g, const std::string& name) {
  if (name == "trivial") {
    Element e = g.identity();
    return {[e](const Element& x) { return x == e; }, std::vector<Element>{}, "trivial"};
  }
  if (name == "whole") return {[](const Element&) { return true; }, std::nullopt, "whole"};
  if (name == "even-sum") {
    index_detail::parity(g, g.identity().payload());  // rejects unsupported families now
    return {[g](const Element& x) { return index_detail::parity(g, x.payload()) == 0; }, std::nullopt, "even-sum"};
  }
  if (name == "translations") {
    if (g.kind() != FamilyKind::infinite_dihedral) throw ConfigError("translations subgroup needs dinf");
    return {[](const Element& x) { return x[1] == 0; }, std::vector<Element>{g.letter("t")}, "translations"};
  }
  if (name == "center") {
    switch (g.kind()) {
      case FamilyKind::zpow:
        return named_subgroup(g, "whole");
      case FamilyKind::heisenberg:
        return {[](const Element& x) { return x[0] == 0 && x[1] == 0; }, std::vector<Element>{g.letter("z")},
                "center"};
      case FamilyKind::free_group:
        if (g.is_abelian()) return named_subgroup(g, "whole");
        return named_subgroup(g, "trivial");
      case FamilyKind::infinite_dihedral:
        return named_subgroup(g, "trivial");
      case FamilyKind::finite_table: {
        const FiniteTable& t = table_of(g);
        auto central = std::make_shared<std::vector<bool>>(t.order(), true);
        for (std::uint32_t a = 0; a < t.order(); ++a)
          for (std::uint32_t b = 0; b < t.order(); ++b)
            if (!t.commute(a, b)) (*central)[a] = false;
        return {[central](const Element& x) { return (*central)[table_index(x)]; }, std::nullopt, "center"};
      }
      case FamilyKind::direct_product:
        break;
    }
    throw ConfigError("center oracle not available for " + g.name());
  }
  if (name.rfind("factor:", 0) == 0) {
    const auto& prod = product_of(g);
    std::size_t i = static_cast<std::size_t>(spec_detail::parse_positive(name.substr(7), name));
    if (i > prod.components().size()) throw ConfigError("factor index out of range in '" + name + "'");
    std::vector<Element> ids;
    for (const auto& c : prod.components()) ids.push_back(c.identity());
    return {[g, ids, i](const Element& x) {
              auto parts = product_of(g).split(x.payload());
              for (std::size_t j = 0; j < parts.size(); ++j) {
                if (j + 1 == i) continue;
                const auto& id = ids[j].payload();
                if (!std::equal(parts[j].begin(), parts[j].end(), id.begin(), id.end())) return false;
              }
              return true;
            },
            std::nullopt, name};
  }
  if (name.rfind("mod:", 0) == 0) {
    std::int64_t k = spec_detail::parse_positive(name.substr(4), name);
    if (g.kind() != FamilyKind::zpow && g.kind() != FamilyKind::finite_table) {
      throw ConfigError("mod:k needs Z^d or a cyclic table");
    }
    if (g.kind() == FamilyKind::finite_table) {
      return generated_subgroup(g, {g.power(g.letter(g.letters().front().name), k)});
    }
    return {[k](const Element& x) { return x[0] % k == 0; }, std::nullopt, name};
  }
  throw ConfigError("unknown subgroup '" + name + "'");
}

/// A named subgroup, or a comma-separated list of generator words.
inline SubgroupOracle parse_subgroup(const Group& g, const std::string& text, std::size_t cap = 100'000) {
  std::string s = spec_detail::trim(text);
  static const char* names[] = {"trivial", "whole", "center", "even-sum", "translations"};
  for (const char* n : names)
    if (s == n) return named_subgroup(g, s);
  if (s.rfind("factor:", 0) == 0 || s.rfind("mod:", 0) == 0) return named_subgroup(g, s);
  std::string body = s.rfind("gen:", 0) == 0 ? s.substr(4) : s;
  std::vector<Element> gens;
  for (const auto& w : spec_detail::split_top_level(body, ',')) gens.push_back(g.parse_word(w));
  return generated_subgroup(g, std::move(gens), cap);
}

/// Left cosets xH reached from H by the left action s.xH. reps[0] = e, and
/// reps are in BFS order, so reps[i] has word length depth[i] <= i.
struct CosetTable {
  std::vector<Element> gens;
  std::vector<Element> reps;
  std::vector<std::size_t> depth;
  /// action[i][k]: coset of gens[k] * reps[i]; npos where not explored (cap hit).
  std::vector<std::vector<std::size_t>> action;
  Index index = Index::finite(1);

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Coset containing x among the enumerated ones.
  std::optional<std::size_t> coset_of(const Group& g, const SubgroupOracle& h, const Element& x) const {
    for (std::size_t j = 0; j < reps.size(); ++j)
      if (h.contains(g.multiply(g.inverse(reps[j]), x))) return j;
    return std::nullopt;
  }
};

/// Schreier BFS over left cosets; coset equality is tested as rep_i^-1 * y in H.
/// Stops at closure (finite index) or when `cap` cosets are found (AtLeast(cap)).
inline CosetTable schreier_cosets(const Group& g, const std::vector<Element>& gens, const SubgroupOracle& h,
                                  std::size_t cap = kDefaultCosetCap) {
  if (cap < 1) throw PreconditionError("coset cap must be at least 1");
  if (!h.contains(g.identity())) throw PreconditionError("subgroup oracle rejects the identity");
  CosetTable t;
  t.gens = gens;
  t.reps.push_back(g.identity());
  t.depth.push_back(0);
  std::vector<Element> rep_inv{g.identity()};
  bool capped = false;
  for (std::size_t i = 0; i < t.reps.size(); ++i) {
    t.action.emplace_back(gens.size(), CosetTable::npos);
    if (capped) continue;
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Element y = g.multiply(gens[k], t.reps[i]);
      std::size_t found = CosetTable::npos;
      for (std::size_t j = 0; j < t.reps.size(); ++j) {
        if (h.contains(g.multiply(rep_inv[j], y))) {
          found = j;
          break;
        }
      }
      if (found == CosetTable::npos) {
        if (t.reps.size() >= cap) {
          capped = true;
          break;
        }
        found = t.reps.size();
        rep_inv.push_back(g.inverse(y));
        t.reps.push_back(std::move(y));
        t.depth.push_back(t.depth[i] + 1);
      }
      t.action[i][k] = found;
    }
  }
  t.index = capped ? Index::at_least(cap) : Index::finite(t.reps.size());
  return t;
}

inline CosetTable schreier_cosets(const GenSet& gens, const SubgroupOracle& h, std::size_t cap = kDefaultCosetCap) {
  return schreier_cosets(gens.group(), gens.elements(), h, cap);
}

/// m elements of word length <= m in pairwise distinct left cosets of H.
inline std::vector<Element> distinct_coset_reps(const GenSet& gens, const SubgroupOracle& h, std::size_t m) {
  if (m < 1) throw PreconditionError("m must be at least 1");
  CosetTable t = schreier_cosets(gens, h, m);
  if (t.reps.size() < m) {
    throw PreconditionError("subgroup has index " + t.index.to_string() + " < " + std::to_string(m));
  }
  return {t.reps.begin(), t.reps.begin() + static_cast<std::ptrdiff_t>(m)};
}

/// mu(xH) = sum of mu(g) over g with x^-1 g in H.
inline Number coset_mass(const Measure& mu, const SubgroupOracle& h, const Element& x) {
  const Group& g = mu.group();
  Element xi = g.inverse(x);
  BigInt acc = 0;
  CompensatedSum facc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!h.contains(g.multiply(xi, mu.atom(i)))) continue;
    if (mu.is_exact()) {
      acc += mu.numerators()[i];
    } else {
      facc.add(mu.probabilities()[i]);
    }
  }
  if (mu.is_exact()) return Number(make_rational(acc, mu.denominator()));
  return Number(facc.value());
}

// ---------------------------------------------------------------------------
// Mixing bound

struct MixingParams {
  Rational c;
  Rational epsilon;
};

/// min step weight over the support (including e), clamped to 1/2.
inline Rational min_step_weight(const Measure& step) {
  if (!step.is_exact()) throw PreconditionError("mixing parameters need an exact step measure");
  Rational c = make_rational(*std::min_element(step.numerators().begin(), step.numerators().end()),
                             step.denominator());
  return std::min(c, Rational(1, 2));
}

/// ceil(1 + 32 (1-c)^2 / (c^4 eps^2)) with c clamped to 1/2.
inline BigInt mixing_bound(const MixingParams& p) {
  if (p.c <= 0) throw PreconditionError("c must be positive");
  if (p.epsilon <= 0) throw PreconditionError("epsilon must be positive");
  Rational c = std::min(p.c, Rational(1, 2));
  Rational one_minus = 1 - c;
  Rational c2 = c * c;
  Rational v = 1 + 32 * one_minus * one_minus / (c2 * c2 * p.epsilon * p.epsilon);
  return ceil(v);
}

/// inf{pi(x)p(x,y)} / r with pi uniform: c/(q r) at finite index q, c/r when pi is counting measure.
inline Rational conductance_floor(const Rational& c, const Rational& r, const Index& index) {
  if (r <= 0) throw PreconditionError("r must be positive");
  if (c <= 0) throw PreconditionError("c must be positive");
  Rational v = c / r;
  if (index.is_finite()) v /= Rational(static_cast<unsigned long>(index.value()));
  v.canonicalize();
  return v;
}

// ---------------------------------------------------------------------------
// Coset chain

/// The walk induced on left cosets: P(i,j) = sum of mu(s) over s with
/// s.rep_i H = rep_j H. Reversing an i.i.d. step sequence does not change the
/// law of the product, so mu^{*n}(rep_j H) = P^n(0, j). Entries are stored
/// as integers over the step's common denominator D.
class CosetChain {
 public:
  CosetChain(const Measure& step, const SubgroupOracle& h, std::size_t coset_cap = kDefaultCosetCap)
      : group_(step.group()) {
    if (!step.is_exact()) throw PreconditionError("coset chain needs an exact step measure");
    std::vector<Element> gens(step.support().begin(), step.support().end());
    table_ = schreier_cosets(group_, gens, h, coset_cap);
    if (!table_.index.is_finite()) throw PreconditionError("coset chain needs a finite index");
    q_ = table_.reps.size();
    denom_ = step.denominator();
    weights_ = step.numerators();
    matrix_.assign(q_ * q_, BigInt(0));
    for (std::size_t i = 0; i < q_; ++i)
      for (std::size_t k = 0; k < gens.size(); ++k) matrix_[i * q_ + table_.action[i][k]] += weights_[k];
    detect_regular();
  }

  std::size_t size() const { return q_; }
  const CosetTable& table() const { return table_; }
  const BigInt& denominator() const { return denom_; }
  /// P(i,j) numerator over denominator().
  const BigInt& entry(std::size_t i, std::size_t j) const { return matrix_[i * q_ + j]; }
  /// True when the cosets carry a group structure (H normal) and powering runs in its group algebra.
  bool regular() const { return !perm_.empty(); }

  /// Numerators of the row P^n(0, .) over denominator()^n. Left-to-right
  /// powering: each bit costs one squaring plus, for set bits, a cheap
  /// product with the small-entry step.
  std::vector<BigInt> row_power(const BigInt& n) const {
    if (n < 1) throw PreconditionError("power must be at least 1");
    return regular() ? algebra_power(n) : matrix_power(n);
  }

  /// Numerators of P^n(0, .) for n = 1.. by repeated multiplication.
  std::vector<BigInt> step_row(const std::vector<BigInt>& row) const {
    std::vector<BigInt> out(q_, BigInt(0));
    for (std::size_t i = 0; i < q_; ++i) {
      if (sgn(row[i]) == 0) continue;
      for (std::size_t j = 0; j < q_; ++j)
        if (sgn(entry(i, j)) != 0) out[j] += row[i] * entry(i, j);
    }
    return out;
  }

  /// Squares a row of the regular chain; valid only when regular().
  std::vector<BigInt> square_row(const std::vector<BigInt>& a) const { return algebra_mul(a, a); }

 private:
  // Checks whether the coset permutations generate a group acting regularly
  // (order q); then coset k is identified with the unique element sending 0 to k.
  void detect_regular() {
    const std::size_t ng = table_.gens.size();
    std::vector<std::vector<std::size_t>> gens(ng, std::vector<std::size_t>(q_));
    for (std::size_t k = 0; k < ng; ++k)
      for (std::size_t i = 0; i < q_; ++i) gens[k][i] = table_.action[i][k];
    std::map<std::vector<std::size_t>, std::size_t> seen;
    std::vector<std::vector<std::size_t>> elems;
    std::vector<std::size_t> id(q_);
    for (std::size_t i = 0; i < q_; ++i) id[i] = i;
    seen[id] = 0;
    elems.push_back(id);
    for (std::size_t e = 0; e < elems.size(); ++e) {
      for (const auto& s : gens) {
        std::vector<std::size_t> p(q_);
        for (std::size_t i = 0; i < q_; ++i) p[i] = s[elems[e][i]];
        if (seen.emplace(p, elems.size()).second) {
          elems.push_back(std::move(p));
          if (elems.size() > q_) return;
        }
      }
    }
    if (elems.size() != q_) return;
    // by_target[k] = permutation sending coset 0 to k.
    std::vector<std::vector<std::size_t>> by_target(q_);
    for (auto& p : elems) by_target[p[0]] = p;
    // Product of group-algebra basis elements: (pi_a o pi_b)(0) = pi_a(b).
    perm_.assign(q_ * q_, 0);
    for (std::size_t a = 0; a < q_; ++a)
      for (std::size_t b = 0; b < q_; ++b) perm_[a * q_ + b] = by_target[a][b];
    commutative_ = true;
    for (std::size_t a = 0; a < q_ && commutative_; ++a)
      for (std::size_t b = 0; b < q_; ++b)
        if (perm_[a * q_ + b] != perm_[b * q_ + a]) commutative_ = false;
    inverse_.assign(q_, 0);
    for (std::size_t a = 0; a < q_; ++a)
      for (std::size_t b = 0; b < q_; ++b)
        if (perm_[a * q_ + b] == 0) inverse_[a] = b;
  }

  // c = a * b in the group algebra. When the group is commutative and both
  // factors satisfy a(k) = a(k^-1), products are shared across inverse pairs.
  std::vector<BigInt> algebra_mul(const std::vector<BigInt>& a, const std::vector<BigInt>& b) const {
    std::vector<BigInt> c(q_, BigInt(0));
    const bool same = &a == &b;
    if (commutative_ && same) {
      std::map<std::pair<std::size_t, std::size_t>, BigInt> memo;
      auto cls = [&](std::size_t k) { return std::min(k, inverse_[k]); };
      for (std::size_t i = 0; i < q_; ++i) {
        if (sgn(a[i]) == 0) continue;
        for (std::size_t j = i; j < q_; ++j) {
          if (sgn(a[j]) == 0) continue;
          std::size_t ci = cls(i), cj = cls(j);
          std::pair<std::size_t, std::size_t> key{std::min(ci, cj), std::max(ci, cj)};
          bool symmetric = a[i] == a[inverse_[i]] && a[j] == a[inverse_[j]];
          BigInt prod;
          if (symmetric) {
            auto it = memo.find(key);
            if (it == memo.end()) {
              if (i == j) {
                mpz_mul(prod.get_mpz_t(), a[i].get_mpz_t(), a[i].get_mpz_t());
              } else {
                mpz_mul(prod.get_mpz_t(), a[i].get_mpz_t(), a[j].get_mpz_t());
              }
              it = memo.emplace(key, std::move(prod)).first;
            }
            prod = it->second;
          } else {
            mpz_mul(prod.get_mpz_t(), a[i].get_mpz_t(), a[j].get_mpz_t());
          }
          if (i == j) {
            c[perm_[i * q_ + i]] += prod;
          } else {
            mpz_mul_2exp(prod.get_mpz_t(), prod.get_mpz_t(), 1);
            c[perm_[i * q_ + j]] += prod;
          }
        }
      }
      return c;
    }
    BigInt prod;
    for (std::size_t i = 0; i < q_; ++i) {
      if (sgn(a[i]) == 0) continue;
      for (std::size_t j = 0; j < q_; ++j) {
        if (sgn(b[j]) == 0) continue;
        mpz_mul(prod.get_mpz_t(), a[i].get_mpz_t(), b[j].get_mpz_t());
        c[perm_[i * q_ + j]] += prod;
      }
    }
    return c;
  }

  // Step element of the group algebra: sum of mu(s) pi_s.
  std::vector<BigInt> step_element() const {
    std::vector<BigInt> a(q_, BigInt(0));
    for (std::size_t k = 0; k < weights_.size(); ++k) a[table_.action[0][k]] += weights_[k];
    return a;
  }

  std::vector<BigInt> algebra_power(const BigInt& n) const {
    // The row of P^n from coset 0 equals the coefficients of A^n where the
    // left walk applies pi_s after the current element: A^n = A * ... * A.
    std::vector<BigInt> base = step_element();
    std::vector<BigInt> acc = base;
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (std::size_t b = bits - 1; b-- > 0;) {
      acc = algebra_mul(acc, acc);
      if (mpz_tstbit(n.get_mpz_t(), b)) acc = algebra_mul(base, acc);
    }
    return acc;
  }

  std::vector<BigInt> matrix_mul(const std::vector<BigInt>& x, const std::vector<BigInt>& y) const {
    std::vector<BigInt> z(q_ * q_, BigInt(0));
    BigInt prod;
    for (std::size_t i = 0; i < q_; ++i)
      for (std::size_t k = 0; k < q_; ++k) {
        if (sgn(x[i * q_ + k]) == 0) continue;
        for (std::size_t j = 0; j < q_; ++j) {
          if (sgn(y[k * q_ + j]) == 0) continue;
          mpz_mul(prod.get_mpz_t(), x[i * q_ + k].get_mpz_t(), y[k * q_ + j].get_mpz_t());
          z[i * q_ + j] += prod;
        }
      }
    return z;
  }

  std::vector<BigInt> matrix_power(const BigInt& n) const {
    std::vector<BigInt> acc = matrix_;
    std::size_t bits = mpz_sizeinbase(n.get_mpz_t(), 2);
    for (std::size_t b = bits - 1; b-- > 0;) {
      acc = matrix_mul(acc, acc);
      if (mpz_tstbit(n.get_mpz_t(), b)) acc = matrix_mul(acc, matrix_);
    }
    return {acc.begin(), acc.begin() + static_cast<std::ptrdiff_t>(q_)};
  }

  Group group_;
  CosetTable table_;
  std::size_t q_ = 0;
  BigInt denom_;
  std::vector<BigInt> weights_;
  std::vector<BigInt> matrix_;
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> inverse_;
  bool commutative_ = false;
};

/// |numer / denom - 1/q| as an exact comparison against eps, plus a double.
struct DeviationCheck {
  double deviation = 0;
  bool within = false;
};

inline DeviationCheck check_deviation(const BigInt& numer, const BigInt& denom, std::uint64_t q, const Rational& eps) {
  BigInt qq(static_cast<unsigned long>(q));
  BigInt diff = qq * numer - denom;
  diff = abs(diff);
  BigInt lhs = diff * eps.get_den();
  BigInt rhs = eps.get_num() * qq * denom;
  return {ratio_to_double(diff, qq * denom), lhs <= rhs};
}

struct UniformityCheck {
  std::string subgroup;
  std::string probe;
  Index index = Index::finite(1);
  std::string n;
  double deviation = 0;
  bool within = false;
  std::string status;  // "checked" or a reason it was skipped
};

struct UniformityReport {
  std::string group;
  Rational c;
  Rational epsilon;
  BigInt n_star;
  std::vector<UniformityCheck> checks;
  bool pass = true;
};

/// For each H and probe x: |mu^{*n}(xH) - 1/[G:H]| <= eps at n = n* and 2n*,
/// with n* the mixing bound for the step's minimum weight. Exact via the
/// coset chain; infinite-index subgroups are reported as skipped.
inline UniformityReport verify_uniform_measurement(const Measure& step, const std::vector<SubgroupOracle>& subgroups,
                                                   const Rational& eps, const std::vector<Element>& probes,
                                                   std::size_t coset_cap = kDefaultCosetCap,
                                                   bool check_double = true) {
  if (!step.is_exact()) throw PreconditionError("uniformity check needs an exact step measure");
  if (!step.is_symmetric()) throw PreconditionError("step measure is not symmetric");
  if (!step.find(step.group().identity())) {
    throw AperiodicityError("step measure gives the identity zero mass; a lazy step is required");
  }
  UniformityReport rep;
  rep.group = step.group().name();
  rep.c = min_step_weight(step);
  rep.epsilon = eps;
  rep.n_star = mixing_bound({rep.c, eps});
  const Group& g = step.group();
  for (const auto& h : subgroups) {
    std::vector<Element> gens(step.support().begin(), step.support().end());
    CosetTable probe_table = schreier_cosets(g, gens, h, coset_cap);
    if (!probe_table.index.is_finite()) {
      for (const auto& x : probes) {
        rep.checks.push_back({h.description, g.format(x), probe_table.index, rep.n_star.get_str(), 0, true,
                              "skipped: infinite index"});
      }
      continue;
    }
    CosetChain chain(step, h, coset_cap);
    const std::uint64_t q = chain.size();
    std::vector<BigInt> row = chain.row_power(rep.n_star);
    BigInt dn;
    mpz_pow_ui(dn.get_mpz_t(), chain.denominator().get_mpz_t(), rep.n_star.get_ui());
    std::vector<std::pair<BigInt, std::vector<BigInt>>> levels;
    levels.emplace_back(rep.n_star, row);
    if (check_double) {
      std::vector<BigInt> row2 = chain.regular() ? chain.square_row(row) : chain.row_power(BigInt(2 * rep.n_star));
      levels.emplace_back(BigInt(2 * rep.n_star), std::move(row2));
    }
    for (const auto& [n, r] : levels) {
      BigInt denom = dn;
      if (n != rep.n_star) denom *= dn;
      BigInt total = 0;
      for (const auto& v : r) total += v;
      if (total != denom) throw VerificationError("coset chain lost mass", {{"subgroup", h.description}});
      for (const auto& x : probes) {
        auto j = chain.table().coset_of(g, h, x);
        if (!j) throw PreconditionError("probe not in any enumerated coset");
        DeviationCheck d = check_deviation(r[*j], denom, q, eps);
        rep.checks.push_back({h.description, g.format(x), Index::finite(q), n.get_str(), d.deviation, d.within,
                              "checked"});
        rep.pass = rep.pass && d.within;
      }
    }
  }
  return rep;
}

/// One point of an index-measurement curve.
struct IndexPoint {
  std::size_t n = 0;
  Number mass;
  Number deviation;
};

struct IndexCurve {
  std::string group;
  std::string subgroup;
  std::string probe;
  Index index = Index::finite(1);
  std::vector<IndexPoint> points;
};

/// |mu_n(xH) - 1/[G:H]| over n. The index comes from a Schreier search with
/// the sequence's generators (ball), step support (walk) or the group's default
/// generators (explicit); at infinite index the target mass is 0. Ball sequences are counted sphere by sphere; walks
/// with finite index run on the coset chain.
inline IndexCurve index_measurement_curve(const MeasureSeqSpec& seq, const SubgroupOracle& h, const Element& x,
                                          NRange range, std::size_t coset_cap = kDefaultCosetCap,
                                          std::size_t atom_cap = kDefaultSupportCap) {
  const Group& g = seq.group();
  g.check(x);
  IndexCurve curve;
  curve.group = g.name();
  curve.subgroup = h.description;
  curve.probe = g.format(x);
  Element xi = g.inverse(x);
  if (auto* b = std::get_if<BallUniformSeq>(&seq.kind)) {
    curve.index = schreier_cosets(b->gens, h, coset_cap).index;
    Rational target = curve.index.reciprocal();
    BallEnumerator en(b->gens, atom_cap);
    std::uint64_t inside = 0, total = 0;
    for (std::size_t n = 0; n <= range.last; ++n) {
      for (const auto& y : en.sphere(n)) {
        ++total;
        if (h.contains(g.multiply(xi, y))) ++inside;
      }
      if (n < range.first) continue;
      Rational mass = make_rational(BigInt(static_cast<unsigned long>(inside)), BigInt(static_cast<unsigned long>(total)));
      curve.points.push_back({n, Number(mass), Number(Rational(abs(mass - target)))});
    }
    return curve;
  }
  if (auto* w = std::get_if<WalkPowerSeq>(&seq.kind)) {
    std::vector<Element> gens(w->step.support().begin(), w->step.support().end());
    curve.index = schreier_cosets(g, gens, h, coset_cap).index;
    if (curve.index.is_finite() && w->step.is_exact()) {
      CosetChain chain(w->step, h, coset_cap);
      auto j = chain.table().coset_of(g, h, x);
      Rational target = curve.index.reciprocal();
      std::vector<BigInt> row(chain.size(), BigInt(0));
      row[0] = 1;
      BigInt denom = 1;
      for (std::size_t n = 0; n <= range.last; ++n) {
        if (n > 0) {
          row = chain.step_row(row);
          denom *= chain.denominator();
        }
        if (n < range.first) continue;
        Rational mass = make_rational(row[*j], denom);
        curve.points.push_back({n, Number(mass), Number(Rational(abs(mass - target)))});
      }
      return curve;
    }
  }
  if (std::holds_alternative<ExplicitSeq>(seq.kind)) curve.index = schreier_cosets(g.default_genset(), h, coset_cap).index;
  MeasureCursor cursor(seq, atom_cap);
  Number target = Number(curve.index.reciprocal());
  for (std::size_t n = range.first; n <= range.last; ++n) {
    Measure mu = cursor.at(n);
    Number mass = coset_mass(mu, h, x);
    curve.points.push_back({n, mass, abs_diff(mass, target)});
  }
  return curve;
}

inline nlohmann::json to_json(const IndexCurve& c) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : c.points) {
    pts.push_back({{"n", p.n},
                   {"mass", number_json(p.mass)},
                   {"deviation", number_json(p.deviation)},
                   {"deviation_float", p.deviation.to_double()}});
  }
  return {{"group", c.group}, {"subgroup", c.subgroup}, {"probe", c.probe}, {"index", c.index.to_string()},
          {"points", pts}};
}

inline nlohmann::json to_json(const UniformityReport& r) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"subgroup", c.subgroup},
                      {"probe", c.probe},
                      {"index", c.index.to_string()},
                      {"n", c.n},
                      {"deviation", c.deviation},
                      {"within_epsilon", c.within},
                      {"status", c.status}});
  }
  return {{"group", r.group},       {"c", r.c.get_str()}, {"epsilon", r.epsilon.get_str()},
          {"n_star", r.n_star.get_str()}, {"checks", checks}, {"pass", r.pass},
          {"subgroups_checked_only", true}};
}

}  // namespace dcg
