#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "dcgroup/ball.hpp"
#include "dcgroup/group.hpp"
#include "dcgroup/group_spec.hpp"
#include "dcgroup/numeric.hpp"

namespace dcg {

enum class WeightMode { exact, float64 };

inline constexpr std::size_t kDefaultSupportCap = 5'000'000;
inline constexpr double kFloatMassTolerance = 1e-12;

inline const char* to_string(WeightMode m) { return m == WeightMode::exact ? "exact" : "float"; }

/// Finitely supported probability measure on a group.
///
/// Atoms are kept sorted by element order, every stored weight is positive,
/// and the total mass is 1. Exact weights are stored as integer numerators
/// over one shared denominator (reduced so the overall gcd is 1), which makes
/// convolution a pure integer computation.
class Measure {
 public:
  static Measure dirac(const Group& g, const Element& x) {
    g.check(x);
    Measure m(g, WeightMode::exact);
    m.atoms_.push_back(x);
    m.numer_.push_back(1);
    m.denom_ = 1;
    return m;
  }

  /// Duplicates are merged and zero weights dropped; total mass must be exactly 1.
  static Measure from_exact(const Group& g, std::vector<std::pair<Element, Rational>> atoms) {
    BigInt lcm = 1;
    for (auto& [x, w] : atoms) {
      g.check(x);
      if (sgn(w) < 0) throw PreconditionError("negative weight");
      mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), w.get_den_mpz_t());
    }
    std::unordered_map<Element, BigInt, ElementHash> acc;
    for (auto& [x, w] : atoms) acc[x] += w.get_num() * (lcm / w.get_den());
    Measure m(g, WeightMode::exact);
    m.assign_exact(std::move(acc), lcm);
    if (m.exact_total() != m.denom_) throw PreconditionError("weights do not sum to 1");
    return m;
  }

  static Measure from_float(const Group& g, std::vector<std::pair<Element, double>> atoms) {
    std::unordered_map<Element, double, ElementHash> acc;
    for (auto& [x, w] : atoms) {
      g.check(x);
      if (!(w >= 0.0)) throw PreconditionError("negative or NaN weight");
      acc[x] += w;
    }
    Measure m(g, WeightMode::float64);
    m.assign_float(std::move(acc));
    if (std::fabs(m.float_total() - 1.0) > kFloatMassTolerance) throw PreconditionError("weights do not sum to 1");
    return m;
  }

  /// Uniform measure on a finite set of distinct elements.
  static Measure uniform(const Group& g, std::span<const Element> elems) {
    if (elems.empty()) throw PreconditionError("uniform measure on an empty set");
    std::unordered_map<Element, BigInt, ElementHash> acc;
    acc.reserve(elems.size());
    for (const auto& x : elems) {
      g.check(x);
      acc[x] = 1;
    }
    Measure m(g, WeightMode::exact);
    BigInt n(static_cast<unsigned long>(acc.size()));
    m.assign_exact(std::move(acc), n);
    return m;
  }

  /// Builds directly from exact numerators; used by operations that already hold normalised data.
  static Measure from_numerators(const Group& g, std::unordered_map<Element, BigInt, ElementHash> acc, BigInt denom) {
    Measure m(g, WeightMode::exact);
    m.assign_exact(std::move(acc), std::move(denom));
    return m;
  }

  static Measure from_probabilities(const Group& g, std::unordered_map<Element, double, ElementHash> acc) {
    Measure m(g, WeightMode::float64);
    m.assign_float(std::move(acc));
    return m;
  }

  const Group& group() const { return group_; }
  WeightMode mode() const { return mode_; }
  bool is_exact() const { return mode_ == WeightMode::exact; }
  std::size_t size() const { return atoms_.size(); }
  std::span<const Element> support() const { return atoms_; }
  const Element& atom(std::size_t i) const { return atoms_[i]; }

  const std::vector<BigInt>& numerators() const { return numer_; }
  const BigInt& denominator() const { return denom_; }
  const std::vector<double>& probabilities() const { return prob_; }

  Number weight_at(std::size_t i) const {
    if (is_exact()) return Number(make_rational(numer_[i], denom_));
    return Number(prob_[i]);
  }

  double weight_double(std::size_t i) const {
    return is_exact() ? ratio_to_double(numer_[i], denom_) : prob_[i];
  }

  std::optional<std::size_t> find(const Element& x) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), x);
    if (it == atoms_.end() || !(*it == x)) return std::nullopt;
    return static_cast<std::size_t>(it - atoms_.begin());
  }

  Number weight(const Element& x) const {
    auto i = find(x);
    if (!i) return is_exact() ? Number(Rational(0)) : Number(0.0);
    return weight_at(*i);
  }

  Number total_mass() const {
    if (is_exact()) return Number(make_rational(exact_total(), denom_));
    return Number(float_total());
  }

  /// mu(x) = mu(x^-1) for every atom.
  bool is_symmetric() const {
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      auto j = find(group_.inverse(atoms_[i]));
      if (!j) return false;
      if (is_exact() ? numer_[i] != numer_[*j] : prob_[i] != prob_[*j]) return false;
    }
    return true;
  }

  Measure to_float() const {
    if (!is_exact()) return *this;
    Measure m(group_, WeightMode::float64);
    m.atoms_ = atoms_;
    for (const auto& a : numer_) m.prob_.push_back(ratio_to_double(a, denom_));
    return m;
  }

  /// Exact equality (same atoms, same weights, same mode).
  friend bool operator==(const Measure& a, const Measure& b) {
    return a.group_ == b.group_ && a.mode_ == b.mode_ && a.atoms_ == b.atoms_ && a.numer_ == b.numer_ &&
           a.denom_ == b.denom_ && a.prob_ == b.prob_;
  }

 private:
  Measure(const Group& g, WeightMode mode) : group_(g), mode_(mode) {}

  BigInt exact_total() const {
    BigInt s = 0;
    for (const auto& a : numer_) s += a;
    return s;
  }

  double float_total() const {
    CompensatedSum s;
    for (double p : prob_) s.add(p);
    return s.value();
  }

  void assign_exact(std::unordered_map<Element, BigInt, ElementHash> acc, BigInt denom) {
    std::vector<std::pair<Element, BigInt>> items;
    items.reserve(acc.size());
    for (auto& [x, w] : acc) {
      if (sgn(w) != 0) items.emplace_back(x, std::move(w));
    }
    if (items.empty()) throw PreconditionError("measure has no mass");
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    BigInt g = denom;
    for (const auto& [x, w] : items) {
      if (g == 1) break;
      mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), w.get_mpz_t());
    }
    atoms_.clear();
    numer_.clear();
    atoms_.reserve(items.size());
    numer_.reserve(items.size());
    for (auto& [x, w] : items) {
      atoms_.push_back(std::move(x));
      if (g != 1) mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), g.get_mpz_t());
      numer_.push_back(std::move(w));
    }
    denom_ = std::move(denom);
    if (g != 1) mpz_divexact(denom_.get_mpz_t(), denom_.get_mpz_t(), g.get_mpz_t());
  }

  void assign_float(std::unordered_map<Element, double, ElementHash> acc) {
    std::vector<std::pair<Element, double>> items;
    for (auto& [x, w] : acc) {
      if (w > 0.0) items.emplace_back(x, w);
    }
    if (items.empty()) throw PreconditionError("measure has no mass");
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    atoms_.clear();
    prob_.clear();
    for (auto& [x, w] : items) {
      atoms_.push_back(std::move(x));
      prob_.push_back(w);
    }
  }

  Group group_;
  WeightMode mode_;
  std::vector<Element> atoms_;
  std::vector<BigInt> numer_;
  BigInt denom_;
  std::vector<double> prob_;
};

inline void require_compatible(const Measure& mu, const Measure& nu) {
  require_same_group(mu.group(), nu.group());
  if (mu.mode() != nu.mode()) throw PreconditionError("weight mode mismatch");
}

/// (mu * nu)(z) = sum_x mu(x) nu(x^-1 z).
inline Measure convolve(const Measure& mu, const Measure& nu, std::size_t support_cap = kDefaultSupportCap) {
  require_compatible(mu, nu);
  const Group& g = mu.group();
  auto over_cap = [&](std::size_t n) {
    if (n > support_cap) throw ResourceError("convolution support exceeds cap of " + std::to_string(support_cap));
  };
  if (mu.is_exact()) {
    std::unordered_map<Element, BigInt, ElementHash> acc;
    BigInt prod;
    for (std::size_t i = 0; i < mu.size(); ++i) {
      for (std::size_t j = 0; j < nu.size(); ++j) {
        mpz_mul(prod.get_mpz_t(), mu.numerators()[i].get_mpz_t(), nu.numerators()[j].get_mpz_t());
        acc[g.multiply(mu.atom(i), nu.atom(j))] += prod;
      }
      over_cap(acc.size());
    }
    return Measure::from_numerators(g, std::move(acc), mu.denominator() * nu.denominator());
  }
  std::unordered_map<Element, double, ElementHash> acc;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    for (std::size_t j = 0; j < nu.size(); ++j) {
      acc[g.multiply(mu.atom(i), nu.atom(j))] += mu.probabilities()[i] * nu.probabilities()[j];
    }
    over_cap(acc.size());
  }
  return Measure::from_probabilities(g, std::move(acc));
}

/// n-fold convolution power by binary powering. A ResourceError carries the
/// largest power that was fully computed.
inline Measure walk_power(const Measure& step, std::uint64_t n, std::size_t support_cap = kDefaultSupportCap) {
  if (n == 0) throw PreconditionError("walk_power needs n >= 1");
  std::optional<Measure> acc;
  std::uint64_t acc_power = 0;
  Measure base = step;
  std::uint64_t base_power = 1;
  std::uint64_t e = n;
  try {
    while (true) {
      if (e & 1) {
        acc = acc ? convolve(*acc, base, support_cap) : base;
        acc_power += base_power;
      }
      e >>= 1;
      if (!e) break;
      base = convolve(base, base, support_cap);
      base_power *= 2;
    }
  } catch (const ResourceError& err) {
    throw ResourceError(err.what(), std::max(acc_power, base_power));
  }
  return *acc;
}

/// Uniform measure on S^n.
inline Measure ball_uniform(const GenSet& gens, std::size_t n, std::size_t atom_cap = kDefaultBallCap) {
  BallEnumerator en(gens, atom_cap);
  return Measure::uniform(gens.group(), en.ball(n));
}

/// Pushforward of mu along f; colliding images have their weights added.
template <class F>
Measure pushforward(const Measure& mu, F&& f) {
  const Group& g = mu.group();
  if (mu.is_exact()) {
    std::unordered_map<Element, BigInt, ElementHash> acc;
    for (std::size_t i = 0; i < mu.size(); ++i) acc[f(mu.atom(i))] += mu.numerators()[i];
    return Measure::from_numerators(g, std::move(acc), mu.denominator());
  }
  std::unordered_map<Element, double, ElementHash> acc;
  for (std::size_t i = 0; i < mu.size(); ++i) acc[f(mu.atom(i))] += mu.probabilities()[i];
  return Measure::from_probabilities(g, std::move(acc));
}

/// x.mu: atom x*g with weight mu(g).
inline Measure translate(const Element& x, const Measure& mu) {
  mu.group().check(x);
  return pushforward(mu, [&](const Element& g) { return mu.group().multiply(x, g); });
}

/// sum_g |mu(g) - nu(g)| over the union of supports.
inline Number l1_distance(const Measure& mu, const Measure& nu) {
  require_compatible(mu, nu);
  std::size_t i = 0, j = 0;
  if (mu.is_exact()) {
    const BigInt &da = mu.denominator(), &db = nu.denominator();
    BigInt total = 0, t;
    while (i < mu.size() || j < nu.size()) {
      if (j == nu.size() || (i < mu.size() && mu.atom(i) < nu.atom(j))) {
        total += mu.numerators()[i++] * db;
      } else if (i == mu.size() || nu.atom(j) < mu.atom(i)) {
        total += nu.numerators()[j++] * da;
      } else {
        t = mu.numerators()[i++] * db - nu.numerators()[j++] * da;
        total += abs(t);
      }
    }
    return Number(make_rational(total, da * db));
  }
  CompensatedSum s;
  while (i < mu.size() || j < nu.size()) {
    if (j == nu.size() || (i < mu.size() && mu.atom(i) < nu.atom(j))) {
      s.add(mu.probabilities()[i++]);
    } else if (i == mu.size() || nu.atom(j) < mu.atom(i)) {
      s.add(nu.probabilities()[j++]);
    } else {
      s.add(std::fabs(mu.probabilities()[i++] - nu.probabilities()[j++]));
    }
  }
  return Number(s.value());
}

/// Uniform double in [0,1) from 53 random bits; independent of the standard
/// library's distribution implementations so draws are reproducible everywhere.
inline double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Inverse-CDF sampler over the measure's sorted support.
class Sampler {
 public:
  explicit Sampler(const Measure& mu) : mu_(&mu) {
    cdf_.reserve(mu.size());
    if (mu.is_exact()) {
      BigInt prefix = 0;
      for (std::size_t i = 0; i < mu.size(); ++i) {
        prefix += mu.numerators()[i];
        cdf_.push_back(ratio_to_double(prefix, mu.denominator()));
      }
    } else {
      CompensatedSum s;
      for (double p : mu.probabilities()) {
        s.add(p);
        cdf_.push_back(s.value());
      }
    }
  }

  std::size_t draw_index(std::mt19937_64& rng) const {
    double u = unit_uniform(rng);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<std::size_t>(it - cdf_.begin());
  }

  const Element& draw(std::mt19937_64& rng) const { return mu_->atom(draw_index(rng)); }

 private:
  const Measure* mu_;
  std::vector<double> cdf_;
};

/// `count` i.i.d. draws; identical seeds give identical output.
inline std::vector<Element> sample(const Measure& mu, std::uint64_t seed, std::size_t count) {
  std::vector<Element> out;
  if (count == 0) return out;
  Sampler sampler(mu);
  std::mt19937_64 rng(seed);
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(sampler.draw(rng));
  return out;
}

// ---------------------------------------------------------------------------
// Measure sequences

/// Inclusive range of sequence indices.
struct NRange {
  std::size_t first = 0;
  std::size_t last = 0;

  NRange() = default;
  NRange(std::size_t a, std::size_t b) : first(a), last(b) {
    if (b < a) throw ConfigError("empty n range " + std::to_string(a) + ".." + std::to_string(b));
  }

  std::size_t count() const { return last - first + 1; }

  /// "A..B" or a single "N".
  static NRange parse(const std::string& text) {
    auto dots = text.find("..");
    try {
      if (dots == std::string::npos) {
        std::size_t n = std::stoul(text);
        return {n, n};
      }
      return {std::stoul(text.substr(0, dots)), std::stoul(text.substr(dots + 2))};
    } catch (const std::logic_error&) {
      throw ConfigError("bad n range '" + text + "'");
    }
  }
};

struct BallUniformSeq {
  GenSet gens;
};
struct WalkPowerSeq {
  Measure step;
};
struct ExplicitSeq {
  std::vector<Measure> measures;  // mu_n = measures[n]
};

/// Which measure sequence (mu_n) to use.
struct MeasureSeqSpec {
  std::variant<BallUniformSeq, WalkPowerSeq, ExplicitSeq> kind;

  const Group& group() const {
    return std::visit(
        [](const auto& k) -> const Group& {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, BallUniformSeq>) {
            return k.gens.group();
          } else if constexpr (std::is_same_v<K, WalkPowerSeq>) {
            return k.step.group();
          } else {
            if (k.measures.empty()) throw PreconditionError("explicit sequence is empty");
            return k.measures.front().group();
          }
        },
        kind);
  }

  std::string describe() const {
    if (auto* b = std::get_if<BallUniformSeq>(&kind)) {
      std::string s = "ball{";
      for (const auto& w : b->gens.words()) s += (s.size() > 5 ? "," : "") + w;
      return s + "}";
    }
    if (std::holds_alternative<WalkPowerSeq>(kind)) return "walk";
    return "explicit";
  }
};

/// Produces mu_n for nondecreasing n, reusing work between calls: balls grow
/// incrementally and walk powers advance by single convolutions.
class MeasureCursor {
 public:
  explicit MeasureCursor(const MeasureSeqSpec& spec, std::size_t atom_cap = kDefaultSupportCap)
      : spec_(spec), cap_(atom_cap) {
    if (auto* b = std::get_if<BallUniformSeq>(&spec_.kind)) balls_.emplace(b->gens, atom_cap);
  }

  Measure at(std::size_t n) {
    if (auto* b = std::get_if<BallUniformSeq>(&spec_.kind)) {
      return Measure::uniform(b->gens.group(), balls_->ball(n));
    }
    if (auto* w = std::get_if<WalkPowerSeq>(&spec_.kind)) {
      if (n == 0) return Measure::dirac(w->step.group(), w->step.group().identity());
      if (!walk_ || walk_n_ > n) {
        walk_ = walk_power(w->step, n, cap_);
      } else {
        while (walk_n_ < n) {
          try {
            walk_ = convolve(*walk_, w->step, cap_);
          } catch (const ResourceError& e) {
            throw ResourceError(e.what(), walk_n_);
          }
          ++walk_n_;
        }
      }
      walk_n_ = n;
      return *walk_;
    }
    const auto& ms = std::get<ExplicitSeq>(spec_.kind).measures;
    if (n >= ms.size()) throw PreconditionError("explicit sequence has no measure at n=" + std::to_string(n));
    return ms[n];
  }

  /// Ball enumerator behind a ball sequence (nullptr otherwise).
  BallEnumerator* balls() { return balls_ ? &*balls_ : nullptr; }

 private:
  const MeasureSeqSpec& spec_;
  std::size_t cap_;
  std::optional<BallEnumerator> balls_;
  std::optional<Measure> walk_;
  std::size_t walk_n_ = 0;
};

/// ||x.mu_n - mu_n||_1 for each n in range.
inline std::vector<std::pair<std::size_t, Number>> almost_invariance_defect(const MeasureSeqSpec& seq,
                                                                              const Element& x, NRange range,
                                                                              std::size_t atom_cap = kDefaultSupportCap) {
  seq.group().check(x);
  MeasureCursor cursor(seq, atom_cap);
  std::vector<std::pair<std::size_t, Number>> out;
  for (std::size_t n = range.first; n <= range.last; ++n) {
    Measure mu = cursor.at(n);
    out.emplace_back(n, l1_distance(translate(x, mu), mu));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Text format:
//   # group: <spec>
//   # mode: exact|float
//   <element word> TAB <p/q or decimal>

inline void write_measure(std::ostream& out, const Measure& mu) {
  out << "# group: " << mu.group().name() << "\n";
  out << "# mode: " << to_string(mu.mode()) << "\n";
  for (std::size_t i = 0; i < mu.size(); ++i) {
    out << mu.group().format(mu.atom(i)) << '\t';
    if (mu.is_exact()) {
      out << make_rational(mu.numerators()[i], mu.denominator()).get_str();
    } else {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", mu.probabilities()[i]);
      out << buf;
    }
    out << '\n';
  }
}

inline Measure read_measure(std::istream& in) {
  std::string line;
  std::optional<Group> group;
  WeightMode mode = WeightMode::exact;
  std::vector<std::pair<Element, Rational>> exact;
  std::vector<std::pair<Element, double>> floats;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind("# group:", 0) == 0) {
      group = parse_group(spec_detail::trim(line.substr(8)));
      continue;
    }
    if (line.rfind("# mode:", 0) == 0) {
      std::string m = spec_detail::trim(line.substr(7));
      if (m == "exact") {
        mode = WeightMode::exact;
      } else if (m == "float") {
        mode = WeightMode::float64;
      } else {
        throw ConfigError("unknown weight mode '" + m + "'");
      }
      continue;
    }
    if (line[0] == '#') continue;
    if (!group) throw ConfigError("measure file has atoms before its '# group:' header");
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ConfigError("measure line without TAB: '" + line + "'");
    Element x = group->parse_word(line.substr(0, tab));
    std::string w = spec_detail::trim(line.substr(tab + 1));
    if (mode == WeightMode::exact) {
      exact.emplace_back(std::move(x), parse_rational(w));
    } else {
      floats.emplace_back(std::move(x), std::stod(w));
    }
  }
  if (!group) throw ConfigError("measure file lacks a '# group:' header");
  return mode == WeightMode::exact ? Measure::from_exact(*group, std::move(exact))
                                   : Measure::from_float(*group, std::move(floats));
}

}  // namespace dcg
