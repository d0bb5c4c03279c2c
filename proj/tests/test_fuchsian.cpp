#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sclforge/fuchsian.hpp"
#include "test_support.hpp"

using namespace sclforge;

namespace {

constexpr double kPi = std::numbers::pi;

MobiusMap random_mobius() {
  auto u = [] { return static_cast<double>(sclforge::testing::uniform(-1000, 1000)) / 1000.0; };
  MobiusMap m = MobiusMap::rotation(kPi * u()) * MobiusMap::translation(2.0 * u()) * MobiusMap::rotation(kPi * u());
  return m;
}

}  // namespace

TEST(Mobius, GroupLaws) {
  for (int i = 0; i < 200; ++i) {
    MobiusMap a = random_mobius(), b = random_mobius();
    EXPECT_NEAR(a.det(), 1.0, 1e-12);
    EXPECT_NEAR((a * b).det(), 1.0, 1e-12);
    EXPECT_LT(distance_to_pm_identity(a * a.inverse()), 1e-12);
    Complex z = std::polar(0.5, 0.3);
    EXPECT_LT(std::abs((a * b).apply(z) - a.apply(b.apply(z))), 1e-12);
  }
}

TEST(Mobius, LiftCoversBoundaryAction) {
  for (int i = 0; i < 200; ++i) {
    MobiusMap a = random_mobius();
    double t = static_cast<double>(sclforge::testing::uniform(-3000, 3000)) / 997.0;
    double s = a.lift(t);
    Complex img = a.apply(std::polar(1.0, 2.0 * kPi * t));
    EXPECT_LT(std::abs(img - std::polar(1.0, 2.0 * kPi * s)), 1e-9);
    EXPECT_NEAR(a.lift(t + 1.0), s + 1.0, 1e-9);
    EXPECT_NEAR(a.inverse().lift(s), t, 1e-9);
  }
}

TEST(Mobius, RotationTranslationNumber) {
  FuchsianRep rep;
  rep.maps[Generator("a")] = MobiusMap::rotation(0.7);
  NumericTau t = tau_numeric(rep, Word::letter(Generator("a")), 1000);
  EXPECT_NEAR(t.estimate, 0.7 / (2.0 * kPi), 1e-12);
  EXPECT_LE(t.uncertainty, 1.1e-3);
  EXPECT_THROW(tau_numeric(rep, Word::letter(Generator("b")), 10), std::invalid_argument);
  EXPECT_THROW(tau_numeric(rep, Word::letter(Generator("a")), 0), std::invalid_argument);
}

TEST(FuchsianRep, RelatorClosesAndGeneratorsAreHyperbolic) {
  for (unsigned g = 2; g <= 5; ++g) {
    FuchsianRep rep = fuchsian_rep(g);
    EXPECT_LT(rep.relator_residual, kRelatorTolerance);
    EXPECT_LT(distance_to_pm_identity(rep.word_matrix(surface_relator(g))), kRelatorTolerance);
    for (const auto& [gen, m] : rep.maps) {
      EXPECT_GT(std::abs(m.trace()), 2.0) << gen.str();
      NumericTau t = tau_numeric(rep, Word::letter(gen), 2048);
      EXPECT_LE(std::abs(t.estimate), t.uncertainty);
    }
  }
  EXPECT_THROW(fuchsian_rep(1), std::invalid_argument);
}

TEST(FuchsianRep, RelatorLiftIsExtremalEulerClass) {
  for (unsigned g = 2; g <= 4; ++g) {
    FuchsianRep rep = fuchsian_rep(g);
    NumericTau t = tau_numeric(rep, surface_relator(g), 64);
    EXPECT_NEAR(std::abs(t.estimate), 2.0 * g - 2.0, 1e-6);
  }
}

TEST(FuchsianRep, SingleCommutatorBound) {
  FuchsianRep rep = fuchsian_rep(2);
  const Alphabet s2 = Alphabet::surface(2);
  for (int i = 0; i < 60; ++i) {
    Word u = sclforge::testing::random_word(s2, 6), v = sclforge::testing::random_word(s2, 6);
    NumericTau t = tau_numeric(rep, commutator(u, v), 512);
    EXPECT_LE(std::abs(t.estimate), 1.0 + t.uncertainty);
  }
}

TEST(LeastSquares, ExactLineAndErrors) {
  LinearFit f = least_squares({1, 2, 3, 4}, {1, -3, -7, -11});
  EXPECT_NEAR(f.slope, -4.0, 1e-12);
  EXPECT_NEAR(f.intercept, 5.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  LinearFit flat = least_squares({1, 2}, {3, 3});
  EXPECT_EQ(flat.r2, 1.0);
  EXPECT_THROW(least_squares({1}, {1}), FitError);
  EXPECT_THROW(least_squares({2, 2}, {1, 3}), FitError);
  EXPECT_THROW(least_squares({1, 2}, {1}), FitError);
}

TEST(NumericReport, AffineInN) {
  NumericReport r = mu_numeric_report(2, 1, 6, 1024);
  ASSERT_EQ(r.rows.size(), 6u);
  EXPECT_GT(r.fit.r2, 0.999);
  EXPECT_LT(r.fit.slope, 0.0);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.cl_upper, 2.0);
    EXPECT_GE(row.bavard_lower, 0.0);
    EXPECT_NEAR(row.ratio, row.bavard_lower / 2.0, 1e-15);
  }
}
