#include <gtest/gtest.h>

#include "sclforge/parse.hpp"
#include "sclforge/qm.hpp"
#include "test_support.hpp"

using namespace sclforge;

namespace {

Rational q(long p, long d = 1) { return make_rational(p, d); }

const Alphabet kAB = Alphabet::two_generator();

Word w(const std::string& s) { return parse_word(s, kAB); }

// -tau by letter-by-letter orbit iteration; returns [lo, hi].
std::pair<Rational, Rational> mu_oracle(const MapBindings& maps, const Word& word, long N) {
  std::vector<std::pair<const PLMap*, bool>> letters;
  for (const auto& b : word.blocks())
    for (std::int64_t i = 0; i < (b.exp > 0 ? b.exp : -b.exp); ++i) letters.push_back({&maps.map(b.gen), b.exp < 0});
  Rational x(0);
  for (long it = 0; it < N; ++it)
    for (auto l = letters.rbegin(); l != letters.rend(); ++l) x = l->second ? l->first->preimage(x) : (*l->first)(x);
  Rational t = x / Rational(N);
  return {-t - Rational(1) / N, -t + Rational(1) / N};
}

bool overlaps(const TauInterval& a, const std::pair<Rational, Rational>& b) {
  return a.lo() <= b.second && b.first <= a.hi();
}

const Representation& rep(unsigned l) {
  static std::map<unsigned, Representation> cache;
  auto it = cache.find(l);
  if (it == cache.end()) it = cache.emplace(l, build_rep_onerelator(l)).first;
  return it->second;
}

}  // namespace

TEST(CommExpr, Validation) {
  CommExpr e;
  EXPECT_THROW(e.validate(), PreconditionError);
  e.pairs.push_back({w("a"), w("[a,b]")});
  e.pairs.push_back({w("b"), w("a b")});
  try {
    e.validate();
    FAIL();
  } catch (const PreconditionError& err) {
    EXPECT_NE(std::string(err.what()).find("w_2"), std::string::npos);
  }
  e.pairs.pop_back();
  EXPECT_NO_THROW(e.validate());
  EXPECT_EQ(e.product(), w("a [a,b] a^-1 [a,b]^-1"));
}

TEST(CommExpr, ConcatAndConjugate) {
  CommExpr e{{{w("a"), w("[a,b]")}}, "free"};
  CommExpr f{{{w("b"), w("[b,a]")}}, "free"};
  EXPECT_EQ(concat(e, f).product(), e.product() * f.product());
  Word h = w("a b^2");
  EXPECT_EQ(conjugate_expr(e, h).product(), conjugate(h, e.product()));
}

TEST(CommExpr, ExpandPower) {
  for (int i = 0; i < 100; ++i) {
    Word g = sclforge::testing::random_word(kAB, 8), u = sclforge::testing::random_word(kAB, 8),
         v = sclforge::testing::random_word(kAB, 8);
    Word c = commutator(u, v);
    CommExpr base{{{g, c}}, "free"};
    std::int64_t n = sclforge::testing::uniform(1, 6);
    CommExpr left = expand_power(base, PowerSide::left, n), right = expand_power(base, PowerSide::right, n);
    EXPECT_EQ(left.product(), commutator(g.pow(n), c));
    EXPECT_EQ(right.product(), commutator(g, c.pow(n)));
    EXPECT_EQ(left.size(), static_cast<std::size_t>(n));
    EXPECT_NO_THROW(left.validate());
    EXPECT_NO_THROW(right.validate());
  }
  EXPECT_THROW(expand_power(CommExpr{}, PowerSide::left, 0), std::invalid_argument);
}

TEST(MixedExpansion, FreeGroup) {
  const RelatorLattice L = RelatorLattice::free(2);
  for (int i = 0; i < 200; ++i) {
    Word t = sclforge::testing::random_word(kAB, 6), u = sclforge::testing::random_word(kAB, 6),
         v = sclforge::testing::random_word(kAB, 6), s = sclforge::testing::random_word(kAB, 6);
    Word x = commutator(t, commutator(u, v)) * conjugate(s, commutator(commutator(u, v), s));
    MixedExpansion ex = mixed_expansion(x, L);
    EXPECT_EQ(ex.relator_power, Integer(0));
    EXPECT_EQ(ex.target, x);
    EXPECT_EQ(ex.expr.product(), x);
    EXPECT_NO_THROW(ex.expr.validate());
  }
  EXPECT_THROW(mixed_expansion(w("[a,b]"), L), NotInGamma3);
  EXPECT_EQ(mixed_expansion(Word(), L).expr.size(), 1u);
}

TEST(MixedExpansion, RelatorPowers) {
  for (unsigned l = 2; l <= 4; ++l) {
    const RelatorLattice L = RelatorLattice::one_relator(l);
    Word x = one_relator(l).pow(2) * w("[a,[a,b]]");
    MixedExpansion ex = mixed_expansion(x, L);
    EXPECT_EQ(ex.relator_power, Integer(2));
    EXPECT_EQ(ex.target, x * one_relator(l).pow(-2));
    EXPECT_EQ(ex.expr.product(), ex.target);
    for (const auto& p : ex.expr.pairs) EXPECT_TRUE(has_zero_exponent_sums(p.w));
    MixedExpansion yz = mixed_expansion(commutator(word_y(), word_z(l)), L);
    EXPECT_EQ(yz.relator_power, Integer(-1));
  }
  const RelatorLattice S = RelatorLattice::surface(2);
  MixedExpansion sx = mixed_expansion(word_x(2, 3), S);
  EXPECT_EQ(sx.relator_power, Integer(-6));
  EXPECT_EQ(sx.expr.product(), sx.target);
}

TEST(RelationExpression, ProductMatchesTarget) {
  for (unsigned l = 2; l <= 8; ++l) {
    EXPECT_EQ(relation_expression(l).product(), relation_target(l));
    EXPECT_NO_THROW(relation_expression(l).validate());
    for (std::int64_t n = 1; n <= 3; ++n) {
      Word expected;
      for (std::int64_t j = n - 1; j >= 0; --j) expected.append(conjugate(word_y().pow(j), relation_target(l)));
      EXPECT_EQ(sequence_expression(l, n).product(), expected);
    }
  }
}

TEST(Mu, RelationValueForThree) {
  MuValue m = mu_eval(rep(3).maps, relation_expression(3), 256);
  EXPECT_LE(abs_of(m.value.center + 2), q(1) + m.value.radius);
  EXPECT_TRUE(overlaps(m.value, mu_oracle(rep(3).maps, relation_expression(3).product(), 64)));
  EXPECT_TRUE(m.value.contains(q(-1)));
}

TEST(Mu, IndependentOfLiftChoice) {
  MapBindings shifted = rep(2).maps;
  shifted.bind(Generator("a"), rep(2).maps.map(Generator("a")).shifted(q(1)));
  shifted.bind(Generator("b"), rep(2).maps.map(Generator("b")).shifted(q(-2)));
  for (std::int64_t n = 1; n <= 3; ++n) {
    Word p = sequence_expression(2, n).product();
    EXPECT_EQ(compose_word(shifted, p), compose_word(rep(2).maps, p));
  }
}

TEST(Mu, RequiresBoundGenerators) {
  EXPECT_THROW(mu_of_word(rep(2).maps, parse_word("[a1,b1]", Alphabet::surface(1))), std::invalid_argument);
}

TEST(Mu, SequenceAgreesWithOracle) {
  for (unsigned l = 2; l <= 3; ++l) {
    for (std::int64_t n = 1; n <= 4; ++n) {
      MuValue m = mu_eval(rep(l).maps, sequence_expression(l, n), 256);
      EXPECT_TRUE(overlaps(m.value, mu_oracle(rep(l).maps, sequence_expression(l, n).product(), 32)))
          << "l=" << l << " n=" << n;
    }
  }
}

TEST(SequenceReport, OneRelatorRows) {
  for (unsigned l = 2; l <= 4; ++l) {
    auto rows = sequence_report(rep(l), 1, 6, 256);
    ASSERT_EQ(rows.size(), 6u);
    for (const auto& r : rows) {
      const long expected = 1 - r.n * (static_cast<long>(l) - 1);
      EXPECT_TRUE(r.mu.contains(q(expected))) << "l=" << l << " n=" << r.n;
      EXPECT_TRUE(r.mu.intersects(r.closed_form));
      EXPECT_GE(abs_of(r.mu.center) + 2 * r.mu.radius, r.bound);
      EXPECT_EQ(r.cl_upper, q(1));
      EXPECT_EQ(r.ratio, r.bavard_lower);
    }
  }
}

TEST(SequenceReport, SurfaceRows) {
  auto rows = surface_pullback_report(rep(3), 1, 4, 256);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.membership);
    EXPECT_TRUE(r.mu.contains(q(3 * (1 - 2 * r.n))));
    EXPECT_EQ(r.cl_upper, q(3));
    EXPECT_EQ(r.bound, q(3 * (2 * r.n - 1)));
  }
}

TEST(BavardLower, Clamped) {
  EXPECT_EQ(bavard_lower({q(-5), q(1)}), q(2));
  EXPECT_EQ(bavard_lower({q(1, 4), q(1, 2)}), q(0));
}

TEST(Certificate, OverflowAtFour) {
  Certificate c = overflow_certify(rep(4), RelatorLattice::one_relator(4), {word_y()}, {word_z(4)}, 256);
  EXPECT_TRUE(c.certified);
  EXPECT_EQ(c.verdict(), "certified");
  EXPECT_TRUE(c.mu.contains(q(-2)));
  EXPECT_EQ(c.threshold, q(1));
  EXPECT_EQ(c.k, 1u);
}

TEST(Certificate, OverflowInconclusiveAtTwo) {
  Certificate c = overflow_certify(rep(2), RelatorLattice::one_relator(2), {word_y()}, {word_z(2)}, 256);
  EXPECT_FALSE(c.certified);
  EXPECT_EQ(c.verdict(), "inconclusive");
  EXPECT_TRUE(c.mu.contains(q(0)));
}

TEST(Certificate, OverflowPreconditions) {
  EXPECT_THROW(overflow_certify(rep(4), RelatorLattice::one_relator(4), {w("a")}, {w("b")}), PreconditionError);
  EXPECT_THROW(overflow_certify(rep(4), RelatorLattice::one_relator(4), {}, {}), std::invalid_argument);
  EXPECT_THROW(overflow_certify(rep(4), RelatorLattice::one_relator(4), {w("a")}, {}), std::invalid_argument);
}

TEST(Certificate, SurfaceOverflow) {
  const RelatorLattice S = RelatorLattice::surface(3);
  std::vector<Word> ys, zs;
  for (unsigned i = 1; i <= 3; ++i) {
    ys.push_back(word_y(i));
    zs.push_back(word_z(3, i));
  }
  Certificate c = overflow_certify(rep(3), S, ys, zs, 256);
  EXPECT_TRUE(c.mu.contains(q(-3)));
  EXPECT_FALSE(c.certified);  // 3 does not exceed 2k - 1 = 5
}

TEST(Certificate, Growth) {
  Certificate c = growth_certify(rep(2), 3, q(5), 256);
  EXPECT_FALSE(c.certified);
  EXPECT_EQ(c.n, 3);
  Certificate d = growth_certify(rep(3), 6, q(1), 256);
  EXPECT_TRUE(d.certified);
  EXPECT_GT(d.scl_lower, d.threshold);
  EXPECT_EQ(d.method, "growth");
}
