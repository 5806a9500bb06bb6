#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dcgroup/dcgroup.hpp"

using namespace dcg;

namespace {

Measure lazy_z() {
  auto z = parse_group("Z");
  Element t = z.letter("t");
  return Measure::from_exact(z, {{z.identity(), Rational(1, 2)}, {t, Rational(1, 4)}, {z.inverse(t), Rational(1, 4)}});
}

// Independent convolution oracle: weight of z summed over every pair of atoms.
Rational convolution_at(const Measure& mu, const Measure& nu, const Element& z) {
  const Group& g = mu.group();
  Rational acc = 0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    for (std::size_t j = 0; j < nu.size(); ++j)
      if (g.multiply(mu.atom(i), nu.atom(j)) == z) acc += mu.weight_at(i).exact() * nu.weight_at(j).exact();
  return acc;
}

// Random exact measure with up to `atoms` atoms drawn from short words.
Measure random_measure(const Group& g, std::mt19937_64& rng, int atoms) {
  auto letters = g.letters();
  std::vector<std::pair<Element, Rational>> out;
  std::map<Element, long> weights;
  for (int i = 0; i < atoms; ++i) {
    Element x = g.identity();
    int len = static_cast<int>(rng() % 4);
    for (int k = 0; k < len; ++k) {
      Element l(g.signature(), letters[rng() % letters.size()].value);
      x = g.multiply(x, (rng() & 1) ? l : g.inverse(l));
    }
    weights[x] += 1 + static_cast<long>(rng() % 5);
  }
  long total = 0;
  for (auto& [x, w] : weights) total += w;
  for (auto& [x, w] : weights) out.emplace_back(x, make_rational(w, total));
  return Measure::from_exact(g, out);
}

Measure symmetrized(const Measure& mu) {
  const Group& g = mu.group();
  std::vector<std::pair<Element, Rational>> atoms;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    Rational half = mu.weight_at(i).exact() / 2;
    atoms.emplace_back(mu.atom(i), half);
    atoms.emplace_back(g.inverse(mu.atom(i)), half);
  }
  std::map<Element, Rational> merged;
  for (auto& [x, w] : atoms) merged[x] += w;
  return Measure::from_exact(g, {merged.begin(), merged.end()});
}

}  // namespace

TEST(Measure, RejectsBadWeights) {
  auto z = parse_group("Z");
  EXPECT_THROW(Measure::from_exact(z, {{z.identity(), Rational(1, 2)}}), PreconditionError);
  EXPECT_THROW(Measure::from_exact(z, {{z.identity(), Rational(3, 2)}, {z.letter("t"), Rational(-1, 2)}}),
               PreconditionError);
  EXPECT_THROW(Measure::from_float(z, {{z.identity(), 0.5}}), PreconditionError);
  Measure m = Measure::from_exact(z, {{z.identity(), Rational(1)}, {z.letter("t"), Rational(0)}});
  EXPECT_EQ(m.size(), 1u);
}

TEST(Convolve, Examples) {
  auto z = parse_group("Z");
  Measure mu = lazy_z();
  EXPECT_EQ(convolve(Measure::dirac(z, z.identity()), mu), mu);
  Measure sq = convolve(mu, mu);
  EXPECT_EQ(sq.weight(z.identity()).exact(), Rational(3, 8));
  auto f = parse_group("f2");
  Element a = f.letter("x"), b = f.parse_word("y x^-1");
  EXPECT_EQ(convolve(Measure::dirac(f, a), Measure::dirac(f, b)), Measure::dirac(f, f.multiply(a, b)));
}

TEST(Convolve, MismatchErrors) {
  Measure mu = lazy_z();
  EXPECT_THROW(convolve(mu, mu.to_float()), PreconditionError);
  auto h = parse_group("heisenberg");
  EXPECT_THROW(convolve(mu, Measure::dirac(h, h.identity())), StructuralError);
}

TEST(WalkPower, Examples) {
  auto z = parse_group("Z");
  Measure mu = lazy_z();
  EXPECT_EQ(walk_power(mu, 1), mu);
  Measure two = walk_power(mu, 2);
  EXPECT_EQ(two, Measure::from_exact(z, {{z.parse_word("t^-2"), Rational(1, 16)},
                                         {z.parse_word("t^-1"), Rational(1, 4)},
                                         {z.identity(), Rational(3, 8)},
                                         {z.parse_word("t"), Rational(1, 4)},
                                         {z.parse_word("t^2"), Rational(1, 16)}}));
  auto s3 = parse_group("s3");
  Measure walk = walk_power(Measure::uniform(s3, s3.default_genset().elements()), 37);
  EXPECT_EQ(walk.total_mass().exact(), Rational(1));
}

TEST(WalkPower, ResourceErrorCarriesLastPower) {
  auto f = parse_group("f2");
  Measure step = Measure::uniform(f, f.default_genset().elements());
  try {
    walk_power(step, 20, 1000);
    FAIL() << "expected a resource error";
  } catch (const ResourceError& e) {
    EXPECT_TRUE(e.last_completed().has_value());
  }
}

TEST(BallUniform, Examples) {
  auto z2 = parse_group("Z^2");
  Measure b = ball_uniform(z2.default_genset(), 1);
  EXPECT_EQ(b.size(), 5u);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b.weight_at(i).exact(), Rational(1, 5));
  EXPECT_EQ(ball_uniform(z2.default_genset(), 0), Measure::dirac(z2, z2.identity()));
  auto d = parse_group("dinf");
  Measure bd = ball_uniform(d.default_genset(), 3);
  auto elems = ball(d.default_genset(), 3);
  EXPECT_EQ(bd.size(), elems.size());
  for (const auto& x : elems) EXPECT_EQ(bd.weight(x).exact(), make_rational(1, static_cast<long>(elems.size())));
}

TEST(Translate, Examples) {
  auto z = parse_group("Z");
  Measure mu = lazy_z();
  EXPECT_EQ(translate(z.identity(), mu), mu);
  EXPECT_EQ(translate(z.letter("t"), Measure::dirac(z, z.identity())), Measure::dirac(z, z.letter("t")));
  EXPECT_EQ(translate(z.parse_word("t^7"), mu).total_mass().exact(), Rational(1));
}

TEST(L1Distance, Examples) {
  auto z = parse_group("Z");
  Measure mu = lazy_z();
  EXPECT_EQ(l1_distance(mu, mu).exact(), Rational(0));
  EXPECT_EQ(l1_distance(Measure::dirac(z, z.identity()), Measure::dirac(z, z.letter("t"))).exact(), Rational(2));
  for (long n = 0; n <= 30; ++n) {
    Measure b = ball_uniform(z.default_genset(), n);
    EXPECT_EQ(l1_distance(translate(z.letter("t"), b), b).exact(), make_rational(2, 2 * n + 1));
  }
  EXPECT_THROW(l1_distance(mu, mu.to_float()), PreconditionError);
}

TEST(AlmostInvariance, Examples) {
  auto z = parse_group("Z");
  MeasureSeqSpec zs{BallUniformSeq{z.default_genset()}};
  auto zd = almost_invariance_defect(zs, z.letter("t"), NRange(1, 40));
  for (const auto& [n, v] : zd) EXPECT_EQ(v.exact(), make_rational(2, 2 * static_cast<long>(n) + 1));
  for (std::size_t i = 1; i < zd.size(); ++i) EXPECT_LT(zd[i].second, zd[i - 1].second);
  for (const auto& [n, v] : almost_invariance_defect(zs, z.identity(), NRange(0, 10))) EXPECT_EQ(v.exact(), 0);

  auto f = parse_group("f2");
  MeasureSeqSpec fs{BallUniformSeq{f.default_genset()}};
  for (const auto& [n, v] : almost_invariance_defect(fs, f.letter("x"), NRange(1, 7))) EXPECT_GT(v.to_double(), 0.5);
}

TEST(Sample, Examples) {
  auto z = parse_group("Z");
  for (const auto& x : sample(Measure::dirac(z, z.identity()), 99, 50)) EXPECT_EQ(x, z.identity());
  EXPECT_TRUE(sample(lazy_z(), 1, 0).empty());
  Element a = z.identity(), b = z.letter("t");
  Measure coin = Measure::from_exact(z, {{a, Rational(1, 2)}, {b, Rational(1, 2)}});
  auto draws = sample(coin, 12345, 100000);
  std::size_t heads = std::count(draws.begin(), draws.end(), a);
  EXPECT_NEAR(heads / 1e5, 0.5, 0.01);
  EXPECT_EQ(draws, sample(coin, 12345, 100000));
  EXPECT_NE(draws, sample(coin, 54321, 100000));
}

TEST(MeasureText, RoundTrip) {
  auto h = parse_group("heisenberg");
  Measure mu = walk_power(Measure::uniform(h, h.default_genset().elements()), 3);
  std::stringstream ss;
  write_measure(ss, mu);
  EXPECT_EQ(read_measure(ss), mu);
  std::stringstream bad("# group: Z\n# mode: exact\nt\t1/3\n");
  EXPECT_THROW(read_measure(bad), Error);
}

TEST(NRange, Parse) {
  EXPECT_EQ(NRange::parse("3..9").first, 3u);
  EXPECT_EQ(NRange::parse("3..9").last, 9u);
  EXPECT_EQ(NRange::parse("4").count(), 1u);
  EXPECT_THROW(NRange::parse("9..3"), ConfigError);
  EXPECT_THROW(NRange::parse("x"), ConfigError);
}

TEST(Property, ConvolutionMatchesPairOracleAndIsAssociative) {
  std::mt19937_64 rng(21);
  for (const char* spec : {"heisenberg", "f2", "dinf", "s4", "Z^2"}) {
    auto g = parse_group(spec);
    for (int trial = 0; trial < 25; ++trial) {
      Measure a = random_measure(g, rng, 6), b = random_measure(g, rng, 5), c = random_measure(g, rng, 4);
      Measure ab = convolve(a, b);
      EXPECT_EQ(ab.total_mass().exact(), Rational(1));
      for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_EQ(ab.weight_at(i).exact(), convolution_at(a, b, ab.atom(i)));
      EXPECT_EQ(convolve(ab, c), convolve(a, convolve(b, c))) << spec;
      Element x = ab.atom(rng() % ab.size());
      EXPECT_EQ(translate(x, a).total_mass().exact(), Rational(1));
    }
  }
}

TEST(Property, WalkPowersSymmetricAndAdditive) {
  std::mt19937_64 rng(5);
  for (const char* spec : {"heisenberg", "dinf", "d5"}) {
    auto g = parse_group(spec);
    Measure step = symmetrized(random_measure(g, rng, 3));
    ASSERT_TRUE(step.is_symmetric());
    for (std::uint64_t n = 1; n <= 20; n += (g.order() ? 1 : 3)) {
      Measure p = walk_power(step, n);
      EXPECT_TRUE(p.is_symmetric()) << spec << " n=" << n;
      EXPECT_EQ(p.total_mass().exact(), Rational(1));
    }
    for (std::uint64_t m = 1; m <= 4; ++m)
      for (std::uint64_t n = 1; n <= 4; ++n)
        EXPECT_EQ(walk_power(step, m + n), convolve(walk_power(step, m), walk_power(step, n)));
  }
}

TEST(Property, FloatModeTracksExact) {
  auto h = parse_group("heisenberg");
  Measure step = Measure::uniform(h, h.default_genset().elements());
  Measure exact = walk_power(step, 6);
  Measure fl = walk_power(step.to_float(), 6);
  ASSERT_EQ(exact.size(), fl.size());
  EXPECT_NEAR(fl.total_mass().to_double(), 1.0, kFloatMassTolerance);
  for (std::size_t i = 0; i < exact.size(); ++i)
    EXPECT_NEAR(exact.weight_at(i).to_double(), fl.weight_at(i).to_double(), 1e-15);
}
