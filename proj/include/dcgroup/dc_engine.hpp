#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcgroup/ball.hpp"
#include "dcgroup/measure.hpp"

namespace dcg {

inline constexpr std::uint64_t kDefaultPairsCap = 100'000'000;
/// Two-sided 95% normal quantile.
inline constexpr double kWilsonZ95 = 1.959963984540054;

namespace dc_detail {

struct KeyHash {
  std::size_t operator()(const Payload& p) const { return hash_words(0x5bd1e995, {p.data(), p.size()}); }
};

inline void check_pairs(std::uint64_t atoms, std::uint64_t cap) {
  if (atoms != 0 && atoms > cap / atoms) {
    throw ResourceError("pair count " + std::to_string(atoms) + "^2 exceeds cap of " + std::to_string(cap));
  }
}

}  // namespace dc_detail

/// Sum over all ordered pairs of the support; quadratic, used as the oracle
/// that the bucketed path is validated against.
inline Number dc_all_pairs(const Measure& mu, std::uint64_t pairs_cap = kDefaultPairsCap) {
  dc_detail::check_pairs(mu.size(), pairs_cap);
  const Group& g = mu.group();
  const std::size_t n = mu.size();
  if (mu.is_exact()) {
    BigInt total = 0, row;
    for (std::size_t i = 0; i < n; ++i) {
      row = 0;
      for (std::size_t j = 0; j < n; ++j) {
        if (g.commute(mu.atom(i), mu.atom(j))) row += mu.numerators()[j];
      }
      total += row * mu.numerators()[i];
    }
    return Number(make_rational(total, mu.denominator() * mu.denominator()));
  }
  CompensatedSum total;
  for (std::size_t i = 0; i < n; ++i) {
    CompensatedSum row;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.commute(mu.atom(i), mu.atom(j))) row.add(mu.probabilities()[j]);
    }
    total.add(row.value() * mu.probabilities()[i]);
  }
  return Number(total.value());
}

/// dc of a measure using the family's commuting keys: with central mass M0
/// and per-key masses m_k, dc = M0(2 - M0) + sum m_k^2.
inline Number dc_bucketed(const Measure& mu) {
  const Family& f = mu.group().family();
  if (!f.has_commute_keys()) throw PreconditionError(mu.group().name() + " has no commuting keys");
  if (mu.is_exact()) {
    BigInt central = 0;
    std::unordered_map<Payload, BigInt, dc_detail::KeyHash> buckets;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      CommuteKey k = f.commute_key(mu.atom(i).payload());
      if (k.central) {
        central += mu.numerators()[i];
      } else {
        buckets[k.key] += mu.numerators()[i];
      }
    }
    const BigInt& d = mu.denominator();
    BigInt total = central * (2 * d - central);
    for (const auto& [k, m] : buckets) total += m * m;
    return Number(make_rational(total, d * d));
  }
  CompensatedSum central;
  std::unordered_map<Payload, CompensatedSum, dc_detail::KeyHash> buckets;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    CommuteKey k = f.commute_key(mu.atom(i).payload());
    (k.central ? central : buckets[k.key]).add(mu.probabilities()[i]);
  }
  // Sum squares in a fixed key order so the result does not depend on hashing.
  std::vector<std::pair<Payload, double>> ordered;
  for (const auto& [k, m] : buckets) ordered.emplace_back(k, m.value());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    return std::lexicographical_compare(a.first.begin(), a.first.end(), b.first.begin(), b.first.end());
  });
  double m0 = central.value();
  CompensatedSum total;
  total.add(m0 * (2.0 - m0));
  for (const auto& [k, m] : ordered) total.add(m * m);
  return Number(total.value());
}

/// dc_mu = sum over pairs of mu(x)mu(y)[xy = yx].
inline Number dc_of_measure(const Measure& mu, std::uint64_t pairs_cap = kDefaultPairsCap) {
  if (mu.group().is_abelian()) return mu.is_exact() ? Number(Rational(1)) : Number(1.0);
  if (mu.group().family().has_commute_keys()) return dc_bucketed(mu);
  if (mu.group().kind() == FamilyKind::finite_table) {
    // Centralizer sizes restricted to the support, straight from the table.
    dc_detail::check_pairs(mu.size(), pairs_cap);
    const FiniteTable& t = table_of(mu.group());
    std::vector<std::uint32_t> idx;
    for (const auto& x : mu.support()) idx.push_back(table_index(x));
    if (mu.is_exact()) {
      BigInt total = 0, row;
      for (std::size_t i = 0; i < idx.size(); ++i) {
        row = 0;
        for (std::size_t j = 0; j < idx.size(); ++j)
          if (t.commute(idx[i], idx[j])) row += mu.numerators()[j];
        total += row * mu.numerators()[i];
      }
      return Number(make_rational(total, mu.denominator() * mu.denominator()));
    }
  }
  return dc_all_pairs(mu, pairs_cap);
}

/// Incremental dc of the uniform measure on a growing set: elements are added
/// one at a time and dc = (#commuting ordered pairs) / N^2 is available after
/// each addition. Uses commuting keys when the family has them, otherwise
/// keeps all elements and counts pairs directly.
class UniformDcCounter {
 public:
  UniformDcCounter(const Group& g, std::uint64_t pairs_cap = kDefaultPairsCap)
      : group_(g), keyed_(g.is_abelian() || g.family().has_commute_keys()), cap_(pairs_cap) {}

  void add(const Element& x) {
    ++n_;
    if (group_.is_abelian()) {
      commuting_ = n_ * n_;
      return;
    }
    if (keyed_) {
      CommuteKey k = group_.family().commute_key(x.payload());
      if (k.central) {
        // x commutes with everything: 2N - 1 new ordered pairs.
        commuting_ += 2 * (n_ - 1) + 1;
        ++central_;
      } else {
        std::uint64_t& m = buckets_[k.key];
        commuting_ += 2 * (central_ + m) + 1;
        ++m;
      }
      return;
    }
    dc_detail::check_pairs(n_, cap_);
    std::uint64_t c = 1;
    for (const auto& y : elems_)
      if (group_.commute(x, y)) c += 2;
    commuting_ += c;
    elems_.push_back(x);
  }

  std::uint64_t size() const { return n_; }
  std::uint64_t commuting_pairs() const { return commuting_; }
  Rational value() const {
    BigInt n(static_cast<unsigned long>(n_));
    return make_rational(BigInt(static_cast<unsigned long>(commuting_)), n * n);
  }

 private:
  Group group_;
  bool keyed_;
  std::uint64_t cap_;
  std::uint64_t n_ = 0;
  std::uint64_t commuting_ = 0;
  std::uint64_t central_ = 0;
  std::unordered_map<Payload, std::uint64_t, dc_detail::KeyHash> buckets_;
  std::vector<Element> elems_;
};

struct DcPoint {
  std::size_t n = 0;
  Number value;
  std::size_t support_size = 0;
};

/// Per-n values plus statistics of the last `tail_window` points. tail_max is
/// a finite-prefix stand-in for the limsup, nothing more.
struct DcReport {
  std::string group;
  std::string sequence;
  std::vector<DcPoint> points;
  std::size_t tail_window = 0;
  Number tail_max;
  Number tail_min;
};

template <class P>
inline void fill_tail(const std::vector<P>& points, std::size_t window, std::size_t& tail_window, Number& tail_max,
                      Number& tail_min, Number P::*field) {
  tail_window = std::min<std::size_t>(std::max<std::size_t>(window, 1), points.size());
  if (points.empty()) return;
  tail_max = points.back().*field;
  tail_min = points.back().*field;
  for (std::size_t i = points.size() - tail_window; i < points.size(); ++i) {
    const Number& v = points[i].*field;
    if (tail_max < v) tail_max = v;
    if (v < tail_min) tail_min = v;
  }
}

struct DcCaps {
  std::size_t atom_cap = kDefaultSupportCap;
  std::uint64_t pairs_cap = kDefaultPairsCap;
};

inline DcReport dc_sequence(const MeasureSeqSpec& seq, NRange range, std::size_t tail_window, DcCaps caps = {}) {
  DcReport rep;
  rep.group = seq.group().name();
  rep.sequence = seq.describe();
  if (auto* b = std::get_if<BallUniformSeq>(&seq.kind)) {
    // Ball measures are uniform, so count commuting pairs incrementally sphere by sphere.
    BallEnumerator en(b->gens, caps.atom_cap);
    UniformDcCounter counter(b->gens.group(), caps.pairs_cap);
    for (std::size_t n = 0; n <= range.last; ++n) {
      for (const auto& x : en.sphere(n)) counter.add(x);
      if (n >= range.first) rep.points.push_back({n, Number(counter.value()), static_cast<std::size_t>(counter.size())});
    }
  } else {
    MeasureCursor cursor(seq, caps.atom_cap);
    for (std::size_t n = range.first; n <= range.last; ++n) {
      Measure mu = cursor.at(n);
      rep.points.push_back({n, dc_of_measure(mu, caps.pairs_cap), mu.size()});
    }
  }
  fill_tail(rep.points, tail_window, rep.tail_window, rep.tail_max, rep.tail_min, &DcPoint::value);
  return rep;
}

struct McEstimate {
  double mean = 0;
  double ci_low = 0;
  double ci_high = 0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::uint64_t successes = 0;
};

/// Wilson score interval for `successes` out of `trials`.
inline McEstimate wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kWilsonZ95) {
  if (trials == 0) throw PreconditionError("Wilson interval needs at least one trial");
  McEstimate e;
  e.trials = trials;
  e.successes = successes;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double centre = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  e.mean = p;
  e.ci_low = std::clamp(std::min(centre - half, p), 0.0, 1.0);
  e.ci_high = std::clamp(std::max(centre + half, p), 0.0, 1.0);
  if (successes == trials) e.ci_high = 1.0;
  if (successes == 0) e.ci_low = 0.0;
  return e;
}

/// Fraction of independent pairs of n-step walk endpoints that commute.
inline McEstimate dc_montecarlo(const Measure& step, std::size_t n, std::uint64_t trials, std::uint64_t seed) {
  if (trials < 1) throw PreconditionError("Monte Carlo needs at least one trial");
  const Group& g = step.group();
  Sampler sampler(step);
  std::mt19937_64 rng(seed);
  auto walk = [&] {
    Element x = g.identity();
    for (std::size_t k = 0; k < n; ++k) x = g.multiply(x, sampler.draw(rng));
    return x;
  };
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    Element x = walk();
    Element y = walk();
    if (g.commute(x, y)) ++hits;
  }
  McEstimate e = wilson_interval(hits, trials);
  e.seed = seed;
  return e;
}

/// (1/q) sum_t 1/[G:C_G(t)] over a transversal t of the centre (1/infinity = 0).
inline Rational dc_central_formula(const Index& q, const std::vector<Index>& centralizer_indices) {
  if (!q.is_finite()) throw PreconditionError("centre has infinite index; the formula needs a finite transversal");
  if (q.value() < 1) throw PreconditionError("centre index must be at least 1");
  if (centralizer_indices.size() != q.value()) {
    throw PreconditionError("expected " + std::to_string(q.value()) + " centralizer indices, got " +
                            std::to_string(centralizer_indices.size()));
  }
  bool has_central = false;
  Rational sum = 0;
  for (const auto& idx : centralizer_indices) {
    if (idx.is_finite() && idx.value() == 0) throw PreconditionError("centralizer index 0");
    if (idx.is_finite() && idx.value() == 1) has_central = true;
    sum += idx.reciprocal();
  }
  if (!has_central) throw PreconditionError("no entry 1 for the central coset");
  sum /= Rational(static_cast<unsigned long>(q.value()));
  sum.canonicalize();
  return sum;
}

/// 1/(m^2 d).
inline Rational neumann_lower_bound(std::uint64_t m, std::uint64_t d) {
  if (m < 1 || d < 1) throw PreconditionError("m and d must be at least 1");
  BigInt mm(static_cast<unsigned long>(m));
  return make_rational(BigInt(1), mm * mm * BigInt(static_cast<unsigned long>(d)));
}

/// 1/2 + 1/(2q).
inline Rational gustafson_upper_bound(std::uint64_t q) {
  if (q < 1) throw PreconditionError("centre index must be at least 1");
  return make_rational(BigInt(static_cast<unsigned long>(q + 1)), BigInt(static_cast<unsigned long>(2 * q)));
}

/// Size of the conjugacy class of x by BFS under conjugation by the group's
/// generators; nullopt once more than `cap` members have been found.
inline std::optional<std::size_t> class_size_capped(const Group& g, const Element& x, std::size_t cap) {
  std::vector<Element> conj;
  for (const auto& l : g.family().generators()) {
    Element s = g.make(l.value);
    conj.push_back(s);
    conj.push_back(g.inverse(s));
  }
  std::unordered_set<Element, ElementHash> seen{x};
  std::deque<Element> queue{x};
  while (!queue.empty()) {
    Element y = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : conj) {
      Element z = g.conjugate(s, y);
      if (seen.insert(z).second) {
        if (seen.size() > cap) return std::nullopt;
        queue.push_back(std::move(z));
      }
    }
  }
  return seen.size();
}

/// mu({x : [G:C_G(x)] <= r}); classes larger than `class_cap` count as > r.
inline Number mass_of_small_centralizers(const Measure& mu, const Rational& r, std::size_t class_cap = 10'000) {
  if (r < 1) throw PreconditionError("r must be at least 1");
  if (Rational(static_cast<unsigned long>(class_cap)) <= r) throw PreconditionError("class cap must exceed r");
  const Group& g = mu.group();
  BigInt acc = 0;
  CompensatedSum facc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    auto k = class_size_capped(g, mu.atom(i), class_cap);
    if (!k || Rational(static_cast<unsigned long>(*k)) > r) continue;
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
// Serialization

inline nlohmann::json number_json(const Number& v) {
  if (v.is_exact()) return v.to_string();
  return v.to_double();
}

inline nlohmann::json to_json(const DcReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"n", p.n},
                   {"value", number_json(p.value)},
                   {"value_float", p.value.to_double()},
                   {"support", p.support_size},
                   {"exact", p.value.is_exact()}});
  }
  return {{"group", r.group},
          {"sequence", r.sequence},
          {"points", pts},
          {"tail",
           {{"window", r.tail_window}, {"max", number_json(r.tail_max)}, {"min", number_json(r.tail_min)},
            {"max_float", r.tail_max.to_double()}, {"min_float", r.tail_min.to_double()}}}};
}

inline nlohmann::json to_json(const McEstimate& e) {
  return {{"mean", e.mean},           {"ci_low", e.ci_low}, {"ci_high", e.ci_high},
          {"trials", e.trials},       {"seed", e.seed},     {"successes", e.successes},
          {"interval", "wilson-95"}};
}

inline void write_csv(std::ostream& out, const DcReport& r) {
  out << "n,value\n";
  char buf[64];
  for (const auto& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.17g", p.value.to_double());
    out << p.n << ',' << buf << '\n';
  }
}

}  // namespace dcg
