#pragma once

// Brute-force oracles shared by the unit tests and the acceptance binary.

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "dcgroup/dcgroup.hpp"

namespace oracle {

/// Uniform measure on a finite group's table.
inline dcg::Measure uniform_on(const dcg::Group& g) {
  const auto& t = dcg::table_of(g);
  std::vector<dcg::Element> all;
  for (std::uint32_t i = 0; i < t.order(); ++i) all.push_back(g.make(dcg::Payload{i}));
  return dcg::Measure::uniform(g, all);
}

struct ConjugacyAudit {
  std::uint64_t pairs = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t conjugate_pairs = 0;
};

/// Compares canonical class ids with an exhaustive conjugator search: x ~ y
/// iff g^-1 x g = y for some g in the ball of radius `conj_radius`. Runs over
/// all pairs from the ball of radius `radius`.
inline ConjugacyAudit audit_conjugacy(const dcg::Group& g, std::size_t radius, std::size_t conj_radius) {
  auto gens = g.default_genset();
  auto elems = dcg::ball(gens, radius);
  auto conjugators = dcg::ball(gens, conj_radius);
  std::vector<dcg::ConjClassId> ids;
  for (const auto& x : elems) ids.push_back(dcg::conj_canonical(g, x));
  ConjugacyAudit a;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    std::unordered_set<dcg::Element, dcg::ElementHash> orbit;
    for (const auto& c : conjugators) orbit.insert(g.conjugate(c, elems[i]));
    for (std::size_t j = 0; j < elems.size(); ++j) {
      bool brute = orbit.count(elems[j]) > 0;
      bool canon = ids[i] == ids[j];
      ++a.pairs;
      a.conjugate_pairs += brute;
      a.mismatches += brute != canon;
    }
  }
  return a;
}

}  // namespace oracle
