// A lazy walk on Z12 spreads evenly over the cosets of <a^3> by the mixing bound.

#include <cstdio>

#include "dcgroup/dcgroup.hpp"

int main() {
  using dcg::Rational;
  dcg::Group g = dcg::parse_group("z12");
  dcg::Measure step = dcg::Measure::from_exact(
      g, {{g.identity(), Rational(1, 2)}, {g.letter("a"), Rational(1, 4)}, {g.parse_word("a^-1"), Rational(1, 4)}});
  dcg::SubgroupOracle h = dcg::parse_subgroup(g, "a^3");

  auto curve = dcg::index_measurement_curve({dcg::WalkPowerSeq{step}}, h, g.identity(), dcg::NRange(1, 40));
  std::printf("index %s\n", curve.index.to_string().c_str());
  for (const auto& p : curve.points)
    if (p.n % 5 == 0) std::printf("n=%3zu  mass %.6f  deviation %.2e\n", p.n, p.mass.to_double(), p.deviation.to_double());

  std::vector<dcg::Element> probes{g.identity(), g.letter("a"), g.parse_word("a^2")};
  auto rep = dcg::verify_uniform_measurement(step, {h}, Rational(1, 20), probes);
  std::printf("n* = %s for c = %s, eps = 1/20: %s\n", rep.n_star.get_str().c_str(), rep.c.get_str().c_str(),
              rep.pass ? "within eps" : "outside eps");
}
