#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcgroup/catalog.hpp"
#include "dcgroup/dc_engine.hpp"
#include "dcgroup/finite_table.hpp"

namespace dcg {

/// Sorted list of element indices.
using ElementSet = std::vector<std::uint32_t>;

struct ConjDecomp {
  std::vector<ElementSet> classes;
};

inline ElementSet center(const FiniteTable& t) {
  ElementSet out;
  for (std::uint32_t z = 0; z < t.order(); ++z) {
    bool central = true;
    for (std::uint32_t g = 0; g < t.order() && central; ++g) central = t.commute(z, g);
    if (central) out.push_back(z);
  }
  return out;
}

inline ElementSet centralizer(const FiniteTable& t, std::uint32_t x) {
  ElementSet out;
  for (std::uint32_t g = 0; g < t.order(); ++g)
    if (t.commute(x, g)) out.push_back(g);
  return out;
}

/// Classes by orbit enumeration under conjugation by every element.
inline ConjDecomp conj_classes(const FiniteTable& t) {
  ConjDecomp d;
  std::vector<bool> done(t.order(), false);
  for (std::uint32_t x = 0; x < t.order(); ++x) {
    if (done[x]) continue;
    ElementSet cls;
    for (std::uint32_t g = 0; g < t.order(); ++g) {
      std::uint32_t y = t.conjugate(g, x);
      if (!done[y]) {
        done[y] = true;
        cls.push_back(y);
      }
    }
    std::sort(cls.begin(), cls.end());
    d.classes.push_back(std::move(cls));
  }
  return d;
}

/// Smallest subgroup containing X.
inline ElementSet subgroup_closure(const FiniteTable& t, const ElementSet& xs) {
  std::vector<bool> in(t.order(), false);
  ElementSet out{t.identity()};
  in[t.identity()] = true;
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::uint32_t x : xs) {
      std::uint32_t y = t.mul(out[i], x);
      if (!in[y]) {
        in[y] = true;
        out.push_back(y);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// [A, A] for a subgroup A (given as an element set).
inline ElementSet commutator_subgroup(const FiniteTable& t, const ElementSet& a) {
  std::vector<bool> seen(t.order(), false);
  ElementSet comms;
  for (std::uint32_t x : a)
    for (std::uint32_t y : a) {
      std::uint32_t c = t.mul(t.mul(t.inverse(x), t.inverse(y)), t.mul(x, y));
      if (!seen[c]) {
        seen[c] = true;
        comms.push_back(c);
      }
    }
  return subgroup_closure(t, comms);
}

inline ElementSet all_elements(const FiniteTable& t) {
  ElementSet out(t.order());
  for (std::uint32_t i = 0; i < t.order(); ++i) out[i] = i;
  return out;
}

inline ElementSet commutator_subgroup(const FiniteTable& t) { return commutator_subgroup(t, all_elements(t)); }

inline Rational dc_class_formula(const FiniteTable& t) {
  return make_rational(BigInt(static_cast<unsigned long>(conj_classes(t).classes.size())),
                       BigInt(static_cast<unsigned long>(t.order())));
}

inline bool is_normal(const FiniteTable& t, const ElementSet& s) {
  std::vector<bool> in(t.order(), false);
  for (auto x : s) in[x] = true;
  for (std::uint32_t g = 0; g < t.order(); ++g)
    for (auto x : s)
      if (!in[t.conjugate(g, x)]) return false;
  return true;
}

/// Outcome of one machine-checked statement on one group.
struct Verdict {
  bool pass = true;
  std::string theorem;
  std::string group;
  nlohmann::json witness = nlohmann::json::object();
};

inline nlohmann::json to_json(const Verdict& v) {
  return {{"theorem", v.theorem}, {"group", v.group}, {"pass", v.pass}, {"witness", v.witness}};
}

/// dc > 5/8 forces abelian; nonabelian groups have [G:Z] >= 4 and dc <= 1/2 + 1/(2[G:Z]).
inline Verdict verify_gustafson(const FiniteTable& t) {
  Verdict v{true, "gustafson", t.name(), {}};
  Rational dc = dc_class_formula(t);
  std::uint64_t q = t.order() / center(t).size();
  bool abelian = t.is_abelian();
  v.witness = {{"dc", dc.get_str()}, {"center_index", q}, {"abelian", abelian}};
  if (dc > Rational(5, 8) && !abelian) v.pass = false;
  if (!abelian) {
    Rational bound = gustafson_upper_bound(q);
    v.witness["bound"] = bound.get_str();
    if (dc > bound || q < 4) v.pass = false;
  }
  return v;
}

/// With dc = 1/2 + eps and eps > 0: [G:Z] <= 1/eps. Vacuous when dc <= 1/2.
inline Verdict verify_center_bound(const FiniteTable& t) {
  Verdict v{true, "center-bound", t.name(), {}};
  Rational dc = dc_class_formula(t);
  Rational eps = dc - Rational(1, 2);
  std::uint64_t q = t.order() / center(t).size();
  v.witness = {{"dc", dc.get_str()}, {"center_index", q}};
  if (eps <= 0) {
    v.witness["vacuous"] = true;
    return v;
  }
  Rational bound = 1 / eps;
  v.witness["bound"] = bound.get_str();
  v.pass = Rational(static_cast<unsigned long>(q)) <= bound;
  return v;
}

struct NeumannDecomposition {
  Rational alpha;
  Rational r;
  ElementSet small_classes;  // elements whose class size is at most r
  ElementSet gamma;
  ElementSet h;
  std::uint64_t index_gamma = 0;
  std::uint64_t order_h = 0;
  std::uint64_t max_class_in_gamma = 0;
  bool class_bound_applies = false;
};

namespace structure_detail {

// k^q <= r^p for r = a/b, with exponent p/q; exact.
inline bool power_le(std::uint64_t k, const Rational& r, const Rational& exponent) {
  unsigned long p = exponent.get_num().get_ui();
  unsigned long q = exponent.get_den().get_ui();
  BigInt lhs, a, b;
  mpz_ui_pow_ui(lhs.get_mpz_t(), k, q);
  mpz_pow_ui(a.get_mpz_t(), r.get_num_mpz_t(), p);
  mpz_pow_ui(b.get_mpz_t(), r.get_den_mpz_t(), p);
  return lhs * b <= a;
}

}  // namespace structure_detail

/// With alpha = dc(G) and r = alpha^-2 + alpha^-1 + 1: Y = {x : class size <= r},
/// Gamma = <Y>, H = [Gamma, Gamma]. Checks [G:Gamma] <= ceil(1/alpha), Gamma and
/// H normal, Gamma/H abelian, dc >= 1/([G:Gamma]^2 |H|), and, when r >= 2/alpha,
/// that classes meeting Gamma have size at most r^(6/alpha + 2). Any failure
/// throws VerificationError carrying the data.
inline NeumannDecomposition neumann_decompose(const FiniteTable& t) {
  NeumannDecomposition d;
  d.alpha = dc_class_formula(t);
  Rational inv = 1 / d.alpha;
  d.r = inv * inv + inv + 1;
  ConjDecomp cd = conj_classes(t);
  std::vector<std::uint64_t> class_size(t.order());
  for (const auto& c : cd.classes)
    for (auto x : c) class_size[x] = c.size();
  for (std::uint32_t x = 0; x < t.order(); ++x)
    if (Rational(static_cast<unsigned long>(class_size[x])) <= d.r) d.small_classes.push_back(x);
  d.gamma = subgroup_closure(t, d.small_classes);
  d.h = commutator_subgroup(t, d.gamma);
  d.index_gamma = t.order() / d.gamma.size();
  d.order_h = d.h.size();
  for (auto x : d.gamma) d.max_class_in_gamma = std::max(d.max_class_in_gamma, class_size[x]);

  nlohmann::json w = {{"group", t.name()},
                      {"alpha", d.alpha.get_str()},
                      {"r", d.r.get_str()},
                      {"index_gamma", d.index_gamma},
                      {"order_h", d.order_h},
                      {"max_class_in_gamma", d.max_class_in_gamma}};
  auto fail = [&](const std::string& what) {
    w["failed"] = what;
    throw VerificationError("Neumann decomposition check failed on " + t.name() + ": " + what, w);
  };
  if (Rational(static_cast<unsigned long>(d.index_gamma)) > Rational(ceil(inv))) fail("index of Gamma exceeds ceil(1/alpha)");
  if (!std::includes(d.gamma.begin(), d.gamma.end(), d.h.begin(), d.h.end())) fail("H not inside Gamma");
  if (!is_normal(t, d.gamma)) fail("Gamma not normal");
  if (!is_normal(t, d.h)) fail("H not normal");
  std::vector<bool> in_h(t.order(), false);
  for (auto x : d.h) in_h[x] = true;
  for (auto x : d.gamma)
    for (auto y : d.gamma)
      if (!in_h[t.mul(t.mul(t.inverse(x), t.inverse(y)), t.mul(x, y))]) fail("Gamma/H not abelian");
  if (d.alpha < neumann_lower_bound(d.index_gamma, d.order_h)) fail("dc below 1/(m^2 d)");
  d.class_bound_applies = d.r >= 2 * inv;
  if (d.class_bound_applies) {
    Rational exponent = 6 * inv + 2;
    if (!structure_detail::power_le(d.max_class_in_gamma, d.r, exponent)) fail("class size bound r^(6/alpha+2)");
  }
  return d;
}

inline Verdict verify_neumann(const FiniteTable& t) {
  Verdict v{true, "neumann", t.name(), {}};
  try {
    NeumannDecomposition d = neumann_decompose(t);
    v.witness = {{"alpha", d.alpha.get_str()},          {"r", d.r.get_str()},
                 {"index_gamma", d.index_gamma},        {"order_h", d.order_h},
                 {"max_class_in_gamma", d.max_class_in_gamma},
                 {"class_bound_applies", d.class_bound_applies}};
  } catch (const VerificationError& e) {
    v.pass = false;
    v.witness = e.witness();
  }
  return v;
}

/// |[G,G]| <= k^((3 + 5 ln k)/2) with k the largest class size; the base-2
/// reading of the logarithm is reported alongside.
inline Verdict verify_nvl(const FiniteTable& t) {
  Verdict v{true, "neumann-vaughan-lee", t.name(), {}};
  std::uint64_t k = 0;
  for (const auto& c : conj_classes(t).classes) k = std::max<std::uint64_t>(k, c.size());
  std::uint64_t derived = commutator_subgroup(t).size();
  const double lk = std::log(static_cast<double>(k));
  const double log_bound_ln = 0.5 * (3.0 + 5.0 * lk) * lk;
  const double log_bound_log2 = 0.5 * (3.0 + 5.0 * std::log2(static_cast<double>(k))) * lk;
  const double log_derived = std::log(static_cast<double>(derived));
  // Relative slack only absorbs rounding in the logarithms (k = 1 gives 0 <= 0).
  v.pass = log_derived <= log_bound_ln + 1e-12 * std::max(1.0, log_bound_ln);
  v.witness = {{"max_class_size", k},
               {"derived_order", derived},
               {"bound_ln", std::exp(log_bound_ln)},
               {"bound_log2", std::exp(log_bound_log2)},
               {"holds_log2", log_derived <= log_bound_log2 + 1e-12 * std::max(1.0, log_bound_log2)}};
  return v;
}

/// X^n as an element set (X^0 = {e}).
inline ElementSet product_power(const FiniteTable& t, const ElementSet& xs, std::size_t n) {
  std::vector<bool> cur(t.order(), false);
  cur[t.identity()] = true;
  for (std::size_t step = 0; step < n; ++step) {
    std::vector<bool> next(t.order(), false);
    for (std::uint32_t a = 0; a < t.order(); ++a) {
      if (!cur[a]) continue;
      for (auto x : xs) next[t.mul(a, x)] = true;
    }
    if (next == cur) break;
    cur = std::move(next);
  }
  ElementSet out;
  for (std::uint32_t a = 0; a < t.order(); ++a)
    if (cur[a]) out.push_back(a);
  return out;
}

/// For symmetric X containing e with |X| >= |G|/m: X^(3m-1) = <X>.
inline Verdict verify_neum_translates(const FiniteTable& t, ElementSet xs, std::size_t m) {
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  if (m < 1) throw PreconditionError("m must be at least 1");
  if (!std::binary_search(xs.begin(), xs.end(), t.identity())) throw PreconditionError("X must contain e");
  for (auto x : xs)
    if (!std::binary_search(xs.begin(), xs.end(), t.inverse(x))) throw PreconditionError("X must be symmetric");
  if (xs.size() * m < t.order()) throw PreconditionError("|X| < |G|/m");
  Verdict v{true, "neumann-translates", t.name(), {}};
  ElementSet power = product_power(t, xs, 3 * m - 1);
  ElementSet closure = subgroup_closure(t, xs);
  v.pass = power == closure;
  v.witness = {{"m", m}, {"x_size", xs.size()}, {"power_size", power.size()}, {"closure_size", closure.size()}};
  return v;
}

/// All per-group checks over the catalog, ordered by group then theorem.
inline std::vector<Verdict> verify_catalog() {
  std::vector<Verdict> out;
  for (const auto& [name, t] : build_catalog()) {
    out.push_back(verify_gustafson(t));
    out.push_back(verify_center_bound(t));
    out.push_back(verify_neumann(t));
    out.push_back(verify_nvl(t));
  }
  return out;
}

inline nlohmann::json verification_report(const std::vector<Verdict>& vs) {
  nlohmann::json groups = nlohmann::json::object();
  bool pass = true;
  for (const auto& v : vs) {
    groups[v.group][v.theorem] = {{"pass", v.pass}, {"witness", v.witness}};
    pass = pass && v.pass;
  }
  return {{"pass", pass}, {"groups", groups}};
}

}  // namespace dcg
