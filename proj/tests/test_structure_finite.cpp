#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "dcgroup/dcgroup.hpp"

using namespace dcg;

namespace {

std::uint32_t idx(const Group& g, const std::string& word) { return table_index(g.parse_word(word)); }

ElementSet set_of(const Group& g, std::initializer_list<const char*> words) {
  ElementSet s;
  for (const char* w : words) s.push_back(idx(g, w));
  std::sort(s.begin(), s.end());
  return s;
}

// Brute-force class size: distinct conjugates over the whole table.
std::size_t class_size(const FiniteTable& t, std::uint32_t x) {
  std::set<std::uint32_t> cls;
  for (std::uint32_t g = 0; g < t.order(); ++g) cls.insert(t.conjugate(g, x));
  return cls.size();
}

}  // namespace

TEST(Center, Examples) {
  auto q8 = parse_group("q8");
  EXPECT_EQ(center(table_of(q8)), set_of(q8, {"e", "i^2"}));
  auto s3 = parse_group("s3");
  EXPECT_EQ(center(table_of(s3)), set_of(s3, {"e"}));
  auto z6 = parse_group("z6");
  EXPECT_EQ(center(table_of(z6)).size(), 6u);
}

TEST(Centralizer, Q8) {
  auto q8 = parse_group("q8");
  const auto& t = table_of(q8);
  EXPECT_EQ(centralizer(t, idx(q8, "i")), set_of(q8, {"e", "i^2", "i", "i^-1"}));
  EXPECT_EQ(t.order() / centralizer(t, idx(q8, "i")).size(), 2u);
}

TEST(ConjClasses, S3AndPartition) {
  auto s3 = parse_group("s3");
  auto cd = conj_classes(table_of(s3));
  std::multiset<std::size_t> sizes;
  for (const auto& c : cd.classes) sizes.insert(c.size());
  EXPECT_EQ(sizes, (std::multiset<std::size_t>{1, 2, 3}));

  for (const auto& [name, t] : build_catalog()) {
    auto classes = conj_classes(t).classes;
    std::vector<int> seen(t.order(), 0);
    for (const auto& c : classes) {
      for (auto x : c) {
        ++seen[x];
        for (const auto& [l, gen] : t.letters())
          EXPECT_TRUE(std::binary_search(c.begin(), c.end(), t.conjugate(gen, x))) << name;
      }
    }
    for (int s : seen) EXPECT_EQ(s, 1) << name;
  }
}

TEST(CommutatorSubgroup, Examples) {
  auto s3 = parse_group("s3");
  ElementSet d = commutator_subgroup(table_of(s3));
  EXPECT_EQ(d.size(), 3u);
  EXPECT_EQ(d, set_of(s3, {"e", "s1 s2", "s2 s1"}));
  auto s4 = parse_group("s4");
  EXPECT_EQ(commutator_subgroup(table_of(s4)).size(), 12u);
  auto z9 = parse_group("z9");
  EXPECT_EQ(commutator_subgroup(table_of(z9)).size(), 1u);
}

TEST(SubgroupClosure, Examples) {
  auto d6 = parse_group("d6");
  EXPECT_EQ(subgroup_closure(table_of(d6), set_of(d6, {"r^2"})).size(), 3u);
  EXPECT_EQ(subgroup_closure(table_of(d6), set_of(d6, {"r", "s"})).size(), 12u);
}

TEST(DcClassFormula, Examples) {
  auto q8 = parse_group("q8");
  EXPECT_EQ(dc_class_formula(table_of(q8)), Rational(5, 8));
  auto s4 = parse_group("s4");
  EXPECT_EQ(dc_class_formula(table_of(s4)), Rational(5, 24));
  auto a4 = parse_group("a4");
  EXPECT_EQ(dc_class_formula(table_of(a4)), Rational(1, 3));
}

TEST(Gustafson, Examples) {
  auto z6 = parse_group("z6");
  EXPECT_TRUE(verify_gustafson(table_of(z6)).pass);
  auto q8 = parse_group("q8");
  Verdict vq = verify_gustafson(table_of(q8));
  EXPECT_TRUE(vq.pass);
  EXPECT_EQ(vq.witness["dc"], "5/8");
  EXPECT_EQ(vq.witness["bound"], "5/8");
  auto s3 = parse_group("s3");
  Verdict vs = verify_gustafson(table_of(s3));
  EXPECT_TRUE(vs.pass);
  EXPECT_EQ(vs.witness["center_index"], 6);
  EXPECT_EQ(vs.witness["bound"], "7/12");
}

TEST(CenterBound, Examples) {
  auto d4 = parse_group("d4");
  Verdict v = verify_center_bound(table_of(d4));
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.witness["center_index"], 4);
  EXPECT_EQ(v.witness["bound"], "8");
  auto z5 = parse_group("z5");
  Verdict va = verify_center_bound(table_of(z5));
  EXPECT_TRUE(va.pass);
  EXPECT_EQ(va.witness["bound"], "2");
  auto s3 = parse_group("s3");
  EXPECT_TRUE(verify_center_bound(table_of(s3)).witness.value("vacuous", false));
}

TEST(Neumann, Examples) {
  auto s3 = parse_group("s3");
  auto d = neumann_decompose(table_of(s3));
  EXPECT_EQ(d.alpha, Rational(1, 2));
  EXPECT_EQ(d.r, Rational(7));
  EXPECT_EQ(d.gamma.size(), 6u);
  EXPECT_EQ(d.index_gamma, 1u);
  EXPECT_EQ(d.order_h, 3u);

  auto q8 = parse_group("q8");
  auto dq = neumann_decompose(table_of(q8));
  EXPECT_EQ(dq.gamma.size(), 8u);
  EXPECT_EQ(dq.h, set_of(q8, {"e", "i^2"}));

  auto z7 = parse_group("z7");
  auto dz = neumann_decompose(table_of(z7));
  EXPECT_EQ(dz.gamma.size(), 7u);
  EXPECT_EQ(dz.order_h, 1u);
}

TEST(Neumann, CatalogInvariants) {
  for (const auto& [name, t] : build_catalog()) {
    auto d = neumann_decompose(t);
    Rational inv = 1 / d.alpha;
    EXPECT_EQ(d.r, inv * inv + inv + 1) << name;
    EXPECT_TRUE(std::includes(d.gamma.begin(), d.gamma.end(), d.h.begin(), d.h.end())) << name;
    EXPECT_TRUE(is_normal(t, d.gamma)) << name;
    EXPECT_TRUE(is_normal(t, d.h)) << name;
    EXPECT_GE(d.alpha, neumann_lower_bound(d.index_gamma, d.order_h)) << name;
    // Small-class set is a union of conjugacy classes.
    for (auto x : d.small_classes)
      for (std::uint32_t g = 0; g < t.order(); ++g)
        EXPECT_TRUE(std::binary_search(d.small_classes.begin(), d.small_classes.end(), t.conjugate(g, x))) << name;
    EXPECT_TRUE(verify_neumann(t).pass) << name;
  }
}

TEST(NeumannVaughanLee, Examples) {
  auto q8 = parse_group("q8");
  Verdict v = verify_nvl(table_of(q8));
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.witness["max_class_size"], 2);
  EXPECT_EQ(v.witness["derived_order"], 2);
  EXPECT_NEAR(v.witness["bound_ln"].get<double>(), std::pow(2.0, (3 + 5 * std::log(2.0)) / 2), 1e-9);
  auto z4 = parse_group("z4");
  EXPECT_TRUE(verify_nvl(table_of(z4)).pass);
  auto s4 = parse_group("s4");
  Verdict vs = verify_nvl(table_of(s4));
  EXPECT_TRUE(vs.pass);
  EXPECT_EQ(vs.witness["max_class_size"], 8);
  EXPECT_EQ(vs.witness["derived_order"], 12);
}

TEST(NeumTranslates, Examples) {
  auto s3 = parse_group("s3");
  const auto& t = table_of(s3);
  EXPECT_TRUE(verify_neum_translates(t, all_elements(t), 1).pass);
  EXPECT_TRUE(verify_neum_translates(t, set_of(s3, {"e", "s1", "s1 s2 s1"}), 2).pass);
  auto z8 = parse_group("z8");
  EXPECT_TRUE(verify_neum_translates(table_of(z8), set_of(z8, {"e", "a", "a^-1"}), 3).pass);
  EXPECT_EQ(product_power(table_of(z8), set_of(z8, {"e", "a", "a^-1"}), 8).size(), 8u);
}

TEST(NeumTranslates, Preconditions) {
  auto z8 = parse_group("z8");
  const auto& t = table_of(z8);
  EXPECT_THROW(verify_neum_translates(t, set_of(z8, {"a", "a^-1"}), 4), PreconditionError);
  EXPECT_THROW(verify_neum_translates(t, set_of(z8, {"e", "a", "a^2"}), 3), PreconditionError);
  EXPECT_THROW(verify_neum_translates(t, set_of(z8, {"e", "a", "a^-1"}), 2), PreconditionError);
}

TEST(Catalog, FullVerification) {
  auto vs = verify_catalog();
  auto report = verification_report(vs);
  EXPECT_TRUE(report["pass"].get<bool>());
  EXPECT_EQ(vs.size(), 4 * build_catalog().size());
}

TEST(Property, ClassSizeSubmultiplicative) {
  std::mt19937_64 rng(31);
  for (const auto& [name, t] : build_catalog()) {
    for (int trial = 0; trial < 40; ++trial) {
      auto x = static_cast<std::uint32_t>(rng() % t.order());
      auto y = static_cast<std::uint32_t>(rng() % t.order());
      EXPECT_LE(class_size(t, t.mul(x, y)), class_size(t, x) * class_size(t, y)) << name;
    }
  }
}

TEST(Property, DcFormulaMatchesMeasureEngine) {
  for (const auto& [name, t] : build_catalog()) {
    Group g = make_finite(t);
    std::vector<Element> all;
    for (std::uint32_t i = 0; i < t.order(); ++i) all.push_back(g.make(Payload{i}));
    EXPECT_EQ(dc_class_formula(t), dc_all_pairs(Measure::uniform(g, all)).exact()) << name;
  }
}

TEST(Property, CentralizerIndexIsClassSize) {
  for (const auto& [name, t] : build_catalog()) {
    for (std::uint32_t x = 0; x < t.order(); ++x)
      ASSERT_EQ(t.order() / centralizer(t, x).size(), class_size(t, x)) << name;
  }
}
