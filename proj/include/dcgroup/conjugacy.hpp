#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <nlohmann/json.hpp>

#include "dcgroup/ball.hpp"
#include "dcgroup/dc_engine.hpp"
#include "dcgroup/measure.hpp"
#include "dcgroup/structure_finite.hpp"

namespace dcg {

inline constexpr std::size_t kDefaultClassCap = 100'000;

/// Canonical representative of a conjugacy class. Two elements have equal
/// ids iff they are conjugate.
struct ConjClassId {
  Element rep;

  friend bool operator==(const ConjClassId&, const ConjClassId&) = default;
};

struct ConjClassIdHash {
  std::size_t operator()(const ConjClassId& c) const { return c.rep.hash(); }
};

inline ConjClassId conj_canonical(const Group& g, const Element& x) {
  g.check(x);
  Payload out;
  g.family().conj_canonical(x.payload(), out);
  return {Element(g.signature(), std::move(out))};
}

struct CrPoint {
  std::size_t n = 0;
  std::uint64_t classes_meeting = 0;
  std::uint64_t classes_contained = 0;
  std::uint64_t ball_size = 0;
  Number cr_value;
};

struct CrReport {
  std::string group;
  std::string sequence;
  std::vector<CrPoint> points;
  std::size_t tail_window = 0;
  Number tail_max;
  Number tail_min;
};

namespace conj_detail {

// Class counting for a growing set. A class counts as contained once it is
// finite and all of its members are in the set; infinite classes never are.
class ClassCounter {
 public:
  ClassCounter(const Group& g, std::size_t class_cap) : group_(g), cap_(class_cap) {}

  void add(const Element& x) {
    ConjClassId id = conj_canonical(group_, x);
    if (!seen_.insert(id).second) return;
    auto members = group_.family().finite_class(x.payload(), cap_);
    if (!members) return;
    std::vector<Element> ms;
    for (auto& p : *members) ms.emplace_back(group_.signature(), std::move(p));
    pending_.push_back(std::move(ms));
  }

  /// Moves pending classes whose members are all in the set to contained.
  template <class InSet>
  void settle(InSet&& in_set) {
    std::vector<std::vector<Element>> still;
    for (auto& ms : pending_) {
      bool all = true;
      for (const auto& m : ms)
        if (!in_set(m)) {
          all = false;
          break;
        }
      if (all) {
        ++contained_;
      } else {
        still.push_back(std::move(ms));
      }
    }
    pending_ = std::move(still);
  }

  std::uint64_t meeting() const { return seen_.size(); }
  std::uint64_t contained() const { return contained_; }

 private:
  Group group_;
  std::size_t cap_;
  std::unordered_set<ConjClassId, ConjClassIdHash> seen_;
  std::vector<std::vector<Element>> pending_;
  std::uint64_t contained_ = 0;
};

inline CrPoint point_for_set(const Group& g, std::size_t n, std::span<const Element> set, std::size_t class_cap) {
  std::unordered_set<Element, ElementHash> members(set.begin(), set.end());
  auto in_set = [&](const Element& m) { return members.count(m) > 0; };
  ClassCounter counter(g, class_cap);
  for (const auto& x : set) counter.add(x);
  counter.settle(in_set);
  CrPoint p{n, counter.meeting(), counter.contained(), set.size(), Number()};
  p.cr_value = Number(make_rational(BigInt(static_cast<unsigned long>(p.classes_meeting)),
                                    BigInt(static_cast<unsigned long>(p.ball_size))));
  return p;
}

}  // namespace conj_detail

/// cr_n = #classes meeting F_n / |F_n| for ball sequences or explicit uniform sets.
inline CrReport cr_sequence(const MeasureSeqSpec& seq, NRange range, std::size_t tail_window,
                            std::size_t atom_cap = kDefaultSupportCap, std::size_t class_cap = kDefaultClassCap) {
  CrReport rep;
  const Group& g = seq.group();
  rep.group = g.name();
  rep.sequence = seq.describe();
  if (auto* b = std::get_if<BallUniformSeq>(&seq.kind)) {
    BallEnumerator en(b->gens, atom_cap);
    conj_detail::ClassCounter counter(g, class_cap);
    for (std::size_t n = 0; n <= range.last; ++n) {
      auto in_ball = [&](const Element& m) { return en.contains(m, n); };
      for (const auto& x : en.sphere(n)) counter.add(x);
      counter.settle(in_ball);
      if (n < range.first) continue;
      CrPoint p{n, counter.meeting(), counter.contained(), en.size(n), Number()};
      p.cr_value = Number(make_rational(BigInt(static_cast<unsigned long>(p.classes_meeting)),
                                        BigInt(static_cast<unsigned long>(p.ball_size))));
      rep.points.push_back(std::move(p));
    }
  } else if (auto* e = std::get_if<ExplicitSeq>(&seq.kind)) {
    for (std::size_t n = range.first; n <= range.last; ++n) {
      if (n >= e->measures.size()) throw PreconditionError("explicit sequence has no set at n=" + std::to_string(n));
      const Measure& mu = e->measures[n];
      for (std::size_t i = 1; i < mu.size(); ++i) {
        if (mu.is_exact() ? mu.numerators()[i] != mu.numerators()[0] : mu.probabilities()[i] != mu.probabilities()[0]) {
          throw PreconditionError("conjugacy ratio needs uniform measures on finite sets");
        }
      }
      rep.points.push_back(conj_detail::point_for_set(g, n, mu.support(), class_cap));
    }
  } else {
    throw PreconditionError("conjugacy ratio is defined for ball or explicit uniform sequences");
  }
  fill_tail(rep.points, tail_window, rep.tail_window, rep.tail_max, rep.tail_min, &CrPoint::cr_value);
  return rep;
}

/// |{C : C meets F_n but is not contained in it}| / |F_n|.
inline Rational contained_vs_meeting(const MeasureSeqSpec& seq, std::size_t n,
                                     std::size_t atom_cap = kDefaultSupportCap,
                                     std::size_t class_cap = kDefaultClassCap) {
  CrReport r = cr_sequence(seq, NRange(n, n), 1, atom_cap, class_cap);
  const CrPoint& p = r.points.front();
  return make_rational(BigInt(static_cast<unsigned long>(p.classes_meeting - p.classes_contained)),
                       BigInt(static_cast<unsigned long>(p.ball_size)));
}

/// |cr_n - dc_n| <= tol at a single n.
inline Verdict verify_cr_eq_dc(const MeasureSeqSpec& seq, std::size_t n, double tol, DcCaps caps = {}) {
  Verdict v{true, "cr-eq-dc", seq.group().name(), {}};
  CrReport cr = cr_sequence(seq, NRange(n, n), 1, caps.atom_cap);
  DcReport dc = dc_sequence(seq, NRange(n, n), 1, caps);
  Number c = cr.points.front().cr_value;
  Number d = dc.points.front().value;
  double diff = abs_diff(c, d).to_double();
  v.pass = diff <= tol;
  v.witness = {{"n", n}, {"cr", number_json(c)}, {"dc", number_json(d)}, {"difference", diff}, {"tol", tol}};
  return v;
}

/// 1/(m^2 d).
inline Rational cr_lower_bound(std::uint64_t m, std::uint64_t d) { return neumann_lower_bound(m, d); }

inline nlohmann::json to_json(const CrReport& r) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : r.points) {
    pts.push_back({{"n", p.n},
                   {"classes_meeting", p.classes_meeting},
                   {"classes_contained", p.classes_contained},
                   {"support", p.ball_size},
                   {"value", number_json(p.cr_value)},
                   {"value_float", p.cr_value.to_double()}});
  }
  return {{"group", r.group},
          {"sequence", r.sequence},
          {"points", pts},
          {"tail",
           {{"window", r.tail_window}, {"max", number_json(r.tail_max)}, {"min", number_json(r.tail_min)},
            {"max_float", r.tail_max.to_double()}, {"min_float", r.tail_min.to_double()}}}};
}

inline void write_csv(std::ostream& out, const CrReport& r) {
  out << "n,value,classes_meeting,classes_contained\n";
  char buf[64];
  for (const auto& p : r.points) {
    std::snprintf(buf, sizeof buf, "%.17g", p.cr_value.to_double());
    out << p.n << ',' << buf << ',' << p.classes_meeting << ',' << p.classes_contained << '\n';
  }
}

}  // namespace dcg
