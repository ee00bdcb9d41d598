#include <gtest/gtest.h>

#include <random>

#include "support.hpp"
#include "vcsp/error.hpp"
#include "vcsp/gap.hpp"

using namespace vcsp;
using namespace testing_support;

namespace {

WeightedRelation cut() { return WeightedRelation(2, 2, std::vector<ExtRat>{0, 1, 1, 0}); }

Operation bool_min() { return boolean_op(2, [](std::span<const int> a) { return std::min(a[0], a[1]); }); }
Operation bool_max() { return boolean_op(2, [](std::span<const int> a) { return std::max(a[0], a[1]); }); }
Operation majority() { return boolean_op(3, [](std::span<const int> a) { return a[0] + a[1] + a[2] >= 2 ? 1 : 0; }); }
Operation minority() { return boolean_op(3, [](std::span<const int> a) { return (a[0] + a[1] + a[2]) % 2; }); }

Language single(const WeightedRelation& r, const std::string& name) {
  Language l;
  l.domain_size = r.domain_size();
  l.add(r, name);
  return l;
}

Language two_sat_with_costs() {
  Language l;
  for (int s = 0; s < 4; ++s) {
    WeightedRelation r(2, 2, ExtRat(0));
    r.set(std::vector<int>{(s >> 1) & 1, s & 1}, ExtRat::infinity());
    l.add(r, "clause" + std::to_string(s));
  }
  l.add(WeightedRelation(1, 2, std::vector<ExtRat>{0, Rational(3, 2)}), "nu");
  l.add(WeightedRelation(1, 2, std::vector<ExtRat>{Rational(2, 3), 0}), "mu");
  return with_constants(l);
}

Language eqs_with_constants() { return with_constants(gap::make_eqs_language(gap::AbelianGroup::cyclic(2), 3)); }

Language r0_with_constants() {
  return with_constants(single(crisp_relation(3, 2, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), "R0"));
}

Language soft_xor() { return single(WeightedRelation(2, 2, std::vector<ExtRat>{1, 0, 0, 1}), "xor"); }

}  // namespace

TEST(Compose, DiagonalAndProjection) {
  const Operation f = majority();
  const Operation p1 = Operation::projection(2, 2, 0);
  const Operation diag = compose(f, {p1, p1, p1});
  EXPECT_EQ(diag, p1);
  const Operation g1 = bool_min(), g2 = bool_max();
  EXPECT_EQ(compose(Operation::projection(2, 2, 1), {g1, g2}), g2);
}

TEST(Compose, MajorityFromMinAndMax) {
  const Operation f = bool_min(), g = bool_max();
  const Operation p0 = Operation::projection(3, 2, 0), p1 = Operation::projection(3, 2, 1),
                  p2 = Operation::projection(3, 2, 2);
  const Operation gxy = compose(g, {p0, p1}), gxz = compose(g, {p0, p2}), gyz = compose(g, {p1, p2});
  const Operation h = compose(f, {compose(f, {gxy, gxz}), gyz});
  EXPECT_EQ(h, majority());
}

TEST(Polymorphism, ProjectionsPreserveEverything) {
  const Language l = eqs_with_constants();
  for (int i = 0; i < 3; ++i) EXPECT_TRUE(is_polymorphism(Operation::projection(3, 2, i), l));
}

TEST(Polymorphism, MajorityBreaksEvenParity) {
  const Language l = single(crisp_relation(3, 2, {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}), "R0");
  EXPECT_FALSE(is_polymorphism(majority(), l));
  const auto v = find_polymorphism_violation(majority(), l);
  ASSERT_TRUE(v);
  EXPECT_FALSE(l.relations[0].feasible(v->image));
  EXPECT_TRUE(is_polymorphism(minority(), l));
}

TEST(Polymorphism, MinPreservesCut) { EXPECT_TRUE(is_polymorphism(bool_min(), single(cut(), "cut"))); }

TEST(Wnu, Examples) {
  EXPECT_TRUE(is_wnu(majority()));
  EXPECT_TRUE(is_symmetric(majority()));
  EXPECT_TRUE(is_wnu(minority()));
  EXPECT_FALSE(is_wnu(Operation::projection(3, 2, 0)));
  EXPECT_FALSE(is_symmetric(Operation::projection(2, 2, 0)));
  EXPECT_THROW(is_wnu(bool_min()), InputError);
}

TEST(Wnu, AgreesWithOracleOnAllTernaryBooleanOperations) {
  for (int code = 0; code < 256; ++code) {
    std::vector<int> t(8);
    for (int i = 0; i < 8; ++i) t[i] = (code >> i) & 1;
    const Operation f(3, 2, t);
    EXPECT_EQ(is_wnu(f), oracle_is_wnu(f)) << code;
  }
}

TEST(Enumerate, EvenParityWithConstantsHasOnlyMinorityAsTernaryWnu) {
  EnumerationFilter wnu;
  wnu.wnu = true;
  const auto ops = enumerate_polymorphisms(r0_with_constants(), 3, wnu);
  ASSERT_EQ(ops.size(), 1u);
  EXPECT_EQ(ops[0], minority());
  EXPECT_TRUE(enumerate_polymorphisms(r0_with_constants(), 4, wnu).empty());
}

TEST(Enumerate, TwoSatHasMajority) {
  EnumerationFilter wnu;
  wnu.wnu = true;
  const auto ops = enumerate_polymorphisms(two_sat_with_costs(), 3, wnu);
  EXPECT_NE(std::find(ops.begin(), ops.end(), majority()), ops.end());
}

TEST(Enumerate, MatchesExhaustiveFilter) {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 6; ++t) {
    Language l;
    l.domain_size = 2;
    for (int r = 0; r < 2; ++r) {
      std::vector<Tuple> tuples;
      for (int s = 0; s < 8; ++s)
        if (rng() % 2) tuples.push_back(tuple_at(s, 3, 2));
      l.add(crisp_relation(3, 2, tuples), "r" + std::to_string(r));
    }
    std::vector<Operation> expected;
    for (int code = 0; code < 256; ++code) {
      std::vector<int> tab(8);
      for (int i = 0; i < 8; ++i) tab[i] = (code >> i) & 1;
      Operation f(3, 2, tab);
      if (oracle_is_polymorphism(f, l)) expected.push_back(f);
    }
    auto got = enumerate_polymorphisms(l, 3);
    std::sort(got.begin(), got.end());
    std::sort(expected.begin(), expected.end());
    EXPECT_EQ(got, expected);
  }
}

TEST(Support, MinOnCutHasHalfMinHalfMax) {
  const Language l = with_constants(single(cut(), "cut"));
  const SupportResult r = in_support(bool_min(), l);
  ASSERT_EQ(r.answer, SupportAnswer::Yes);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.witness->weight(bool_min()), Rational(1, 2));
  EXPECT_EQ(r.witness->weight(bool_max()), Rational(1, 2));
  EXPECT_TRUE(oracle_is_fractional_polymorphism(*r.witness, l));
  EXPECT_TRUE(is_fractional_polymorphism(*r.witness, l));
}

TEST(Support, BareCutAdmitsConstantOperations) {
  const SupportResult r = in_support(bool_min(), single(cut(), "cut"));
  ASSERT_EQ(r.answer, SupportAnswer::Yes);
  EXPECT_EQ(r.witness->weight(bool_min()), Rational(1, 2));
  EXPECT_TRUE(oracle_is_fractional_polymorphism(*r.witness, single(cut(), "cut")));
}

TEST(Support, ProjectionsAreAlwaysInSupport) {
  for (const Language& l : {single(cut(), "cut"), soft_xor(), two_sat_with_costs()}) {
    const SupportResult r = in_support(Operation::projection(3, 2, 1), l);
    ASSERT_EQ(r.answer, SupportAnswer::Yes);
    EXPECT_TRUE(oracle_is_fractional_polymorphism(*r.witness, l));
    EXPECT_GT(r.witness->weight(Operation::projection(3, 2, 1)), Rational(0));
  }
}

TEST(Support, MajorityAgainstUnaryPlusCrispXorMatchesFullLp) {
  Language l;
  l.domain_size = 2;
  l.add(WeightedRelation(1, 2, std::vector<ExtRat>{0, 1}), "nu");
  l.add(crisp_relation(2, 2, {{0, 1}, {1, 0}}), "xor");
  const SupportResult r = in_support(majority(), l);
  const bool oracle = oracle_in_support(majority(), l);
  EXPECT_EQ(r.answer == SupportAnswer::Yes, oracle);
  if (r.answer == SupportAnswer::Yes) {
    EXPECT_TRUE(oracle_is_fractional_polymorphism(*r.witness, l));
  }
}

TEST(Support, MajorityAgainstSoftXorGivesSeparatingInstance) {
  const Language l = soft_xor();
  const SupportResult r = in_support(majority(), l);
  ASSERT_EQ(r.answer, SupportAnswer::No);
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(certificate_is_valid(*r.certificate, majority(), l));
  const Instance sep = separating_instance(*r.certificate, majority(), l);
  EXPECT_EQ(sep.num_vars(), 8);
  const OracleResult best = oracle_min(sep);
  for (int i = 0; i < 3; ++i) {
    Assignment proj(8), maj(8);
    for (int x = 0; x < 8; ++x) proj[x] = tuple_at(x, 3, 2)[i];
    EXPECT_EQ(oracle_cost(sep, proj), best.value);
  }
  Assignment maj(8);
  for (int x = 0; x < 8; ++x) maj[x] = majority()(tuple_at(x, 3, 2));
  EXPECT_GT(oracle_cost(sep, maj), best.value);
}

TEST(Support, ZeroCertificateIsInvalid) {
  const Language l = soft_xor();
  const SupportResult r = in_support(majority(), l);
  ASSERT_TRUE(r.certificate);
  FarkasCertificate zero = *r.certificate;
  for (auto& e : zero.entries) e.z = 0;
  EXPECT_FALSE(certificate_is_valid(zero, majority(), l));
}

TEST(Support, NonPolymorphismIsReported) {
  const SupportResult r = in_support(majority(), r0_with_constants());
  EXPECT_EQ(r.answer, SupportAnswer::NotPolymorphism);
  EXPECT_TRUE(r.violation);
}

TEST(Support, RandomBinaryLanguagesAgreeWithFullLp) {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 15; ++t) {
    Language l;
    l.domain_size = 2;
    std::vector<ExtRat> tab;
    for (int i = 0; i < 4; ++i) tab.push_back(rng() % 5 == 0 ? ExtRat::infinity() : ExtRat(random_rational(rng, 4, 2)));
    if (std::all_of(tab.begin(), tab.end(), [](const ExtRat& e) { return e.is_inf(); })) tab[0] = 0;
    l.add(WeightedRelation(2, 2, tab), "phi");
    for (int code = 0; code < 16; ++code) {
      std::vector<int> ft(4);
      for (int i = 0; i < 4; ++i) ft[i] = (code >> i) & 1;
      const Operation f(2, 2, ft);
      const SupportResult r = in_support(f, l);
      EXPECT_EQ(r.answer == SupportAnswer::Yes, oracle_in_support(f, l)) << t << ' ' << code;
      if (r.answer == SupportAnswer::Yes) {
        EXPECT_TRUE(oracle_is_fractional_polymorphism(*r.witness, l));
        EXPECT_GT(r.witness->weight(f), Rational(0));
      }
      if (r.answer == SupportAnswer::No) {
        EXPECT_TRUE(certificate_is_valid(*r.certificate, f, l));
        const Instance sep = separating_instance(*r.certificate, f, l);
        const OracleResult best = oracle_min(sep);
        Assignment img(4);
        for (int x = 0; x < 4; ++x) img[x] = f(tuple_at(x, 2, 2));
        EXPECT_GT(oracle_cost(sep, img), best.value);
      }
    }
  }
}

TEST(Core, UnaryCostRetractsToZero) {
  const CoreResult c = find_core(single(WeightedRelation(1, 2, std::vector<ExtRat>{0, 1}), "nu"));
  EXPECT_EQ(c.domain, (std::vector<int>{0}));
}

TEST(Core, ConstantsMakeACore) {
  Language l;
  l.domain_size = 3;
  const Language c3 = with_constants(l);
  EXPECT_EQ(c3.relations.size(), 3u);
  EXPECT_EQ(find_core(c3).domain, (std::vector<int>{0, 1, 2}));
}

TEST(Core, EmptyLanguageCollapses) {
  Language l;
  l.domain_size = 2;
  EXPECT_EQ(find_core(l).domain.size(), 1u);
}

TEST(Bwc, EquationsOverZ2AreViolated) {
  const BwcResult r = test_bwc(eqs_with_constants());
  EXPECT_FALSE(r.satisfied);
}

static Language crisp_two_sat() {
  Language l;
  for (int s = 0; s < 4; ++s) {
    WeightedRelation r(2, 2, ExtRat(0));
    r.set(std::vector<int>{(s >> 1) & 1, s & 1}, ExtRat::infinity());
    l.add(r, "clause" + std::to_string(s));
  }
  return with_constants(l);
}

// Clauses with non-constant unary costs contain weighted vertex cover.
TEST(Bwc, TwoSatWithUnaryCostsIsViolated) { EXPECT_FALSE(test_bwc(two_sat_with_costs()).satisfied); }

TEST(Bwc, CrispTwoSatIsSatisfied) {
  const Language l = crisp_two_sat();
  const BwcResult r = test_bwc(l);
  ASSERT_TRUE(r.satisfied);
  EXPECT_TRUE(oracle_is_wnu(*r.f));
  EXPECT_TRUE(oracle_is_wnu(*r.g));
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) EXPECT_EQ((*r.f)({y, x, x}), (*r.g)({y, x, x, x}));
  EXPECT_EQ(in_support(*r.f, l).answer, SupportAnswer::Yes);
  EXPECT_EQ(in_support(*r.g, l).answer, SupportAnswer::Yes);
}

TEST(Bwc, ConstantsOnlyIsSatisfied) {
  Language l;
  l.domain_size = 2;
  EXPECT_TRUE(test_bwc(with_constants(l)).satisfied);
}

TEST(Sym, CutHasBinarySymmetric) {
  const auto rep = test_sym(single(cut(), "cut"), 2);
  ASSERT_EQ(rep.size(), 1u);
  ASSERT_TRUE(rep[0].found);
  EXPECT_TRUE(*rep[0].found == bool_min() || *rep[0].found == bool_max());
}

TEST(Sym, EquationsHaveNoBinarySymmetric) {
  const auto rep = test_sym(eqs_with_constants(), 2);
  ASSERT_EQ(rep.size(), 1u);
  EXPECT_FALSE(rep[0].found);
}

TEST(Sym, ConstantsOnlyFindsMin) {
  Language l;
  l.domain_size = 2;
  const auto rep = test_sym(with_constants(l), 3);
  ASSERT_EQ(rep.size(), 2u);
  ASSERT_TRUE(rep[0].found);
  EXPECT_EQ(*rep[0].found, bool_min());
  EXPECT_TRUE(rep[1].found);
}
