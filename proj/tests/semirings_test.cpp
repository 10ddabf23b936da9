#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <type_traits>

#include "aprob/semiring.hpp"
#include "test_support.hpp"

using namespace aprob;
using aprob::testing::random_opinion;

namespace {

void expect_same(const Opinion& a, const Opinion& b, double tol) {
  EXPECT_NEAR(a.belief(), b.belief(), tol);
  EXPECT_NEAR(a.disbelief(), b.disbelief(), tol);
  EXPECT_NEAR(a.uncertainty(), b.uncertainty(), tol);
  EXPECT_NEAR(a.base_rate(), b.base_rate(), tol);
}

/// Opinion with projected probability at most `cap` and a random base rate.
Opinion random_bounded(Rng& rng, double cap) {
  for (;;) {
    const Opinion op = random_opinion(rng);
    const Opinion out{op.belief(), op.disbelief(), op.uncertainty(), 0.05 + 0.4 * uniform01(rng)};
    if (projected_probability(out) <= cap) return out;
  }
}

double p(const Opinion& op) { return projected_probability(op); }

}  // namespace

static_assert(Parametrisation<ProbSemiring>);
static_assert(Parametrisation<SlSemiring>);
static_assert(Parametrisation<BetaSemiring>);

TEST(ProbSemiring, Examples) {
  const auto s = prob_parametrisation();
  EXPECT_DOUBLE_EQ(s.plus(0.3, 0.2), 0.5);
  EXPECT_DOUBLE_EQ(s.times(0.3, 0.2), 0.06);
  EXPECT_DOUBLE_EQ(s.negate_label(0.05), 0.95);
  EXPECT_DOUBLE_EQ(s.divide(0.2, 0.4), 0.5);
  EXPECT_EQ(s.zero(), 0.0);
  EXPECT_EQ(s.one(), 1.0);
}

TEST(ProbSemiring, DivisionByZeroIsAnError) {
  try {
    prob_parametrisation().divide(0.1, 0.0);
    FAIL() << "expected UndefinedResult";
  } catch (const UndefinedResult& e) {
    EXPECT_STREQ(e.what(), "evidence has probability zero");
  }
}

TEST(ProbSemiring, LabelsFromOpinionsUseProjectedProbability) {
  EXPECT_DOUBLE_EQ(prob_parametrisation().from_label(Label{Opinion(0.5, 0.3, 0.2, 0.5)}), 0.6);
}

TEST(ProbSemiring, SemiringLawsOnRandomTriples) {
  const auto s = prob_parametrisation();
  Rng rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double x = uniform01(rng), y = uniform01(rng), z = uniform01(rng);
    EXPECT_NEAR(s.plus(x, s.plus(y, z)), s.plus(s.plus(x, y), z), 1e-12);
    EXPECT_NEAR(s.times(x, s.times(y, z)), s.times(s.times(x, y), z), 1e-12);
    EXPECT_EQ(s.plus(x, y), s.plus(y, x));
    EXPECT_EQ(s.times(x, y), s.times(y, x));
    EXPECT_NEAR(s.times(x, s.plus(y, z)), s.plus(s.times(x, y), s.times(x, z)), 1e-12);
    EXPECT_EQ(s.plus(s.zero(), x), x);
    EXPECT_EQ(s.times(s.one(), x), x);
    EXPECT_EQ(s.times(s.zero(), x), 0.0);
  }
}

TEST(SlSemiring, Elements) {
  const auto s = sl_parametrisation();
  Rng rng(2);
  for (int i = 0; i < 100; ++i) {
    const Opinion w = random_bounded(rng, 1.0);
    expect_same(s.times(s.one(), w), w, 1e-15);
    const Opinion z = s.plus(s.zero(), w);
    EXPECT_NEAR(p(z), p(w), 1e-15);
    EXPECT_NEAR(z.uncertainty(), w.uncertainty(), 1e-15);
    expect_same(s.times(s.zero(), w), s.zero(), 1e-15);
  }
}

TEST(SlSemiring, UndefinedDivisionFallsBackToVacuous) {
  const auto s = sl_parametrisation();
  EXPECT_EQ(s.divide(Opinion(0.3, 0.1, 0.6, 0.2), Opinion(0.2, 0.5, 0.3, 0.6)), Opinion::vacuous(0.5));
}

TEST(SlSemiring, NegationIsComplement) {
  EXPECT_EQ(sl_parametrisation().negate_label(Opinion(0.3, 0.5, 0.2, 0.2)), Opinion(0.5, 0.3, 0.2, 0.8));
}

TEST(SlSemiring, LawsHoldOnProjectedProbabilities) {
  const auto s = sl_parametrisation();
  Rng rng(3);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    const Opinion x = random_bounded(rng, 1.0), y = random_bounded(rng, 0.33), z = random_bounded(rng, 0.33);
    try {
      EXPECT_NEAR(p(s.plus(x, y)), p(s.plus(y, x)), 1e-12);
      EXPECT_NEAR(p(s.times(x, y)), p(s.times(y, x)), 1e-12);
      EXPECT_NEAR(p(s.times(x, s.times(y, z))), p(s.times(s.times(x, y), z)), 1e-12);
      EXPECT_NEAR(p(s.plus(y, s.plus(z, y))), p(s.plus(s.plus(y, z), y)), 1e-12);
      EXPECT_NEAR(p(s.times(x, s.plus(y, z))), p(s.plus(s.times(x, y), s.times(x, z))), 1e-12);
      ++checked;
    } catch (const UndefinedResult&) {
      // Sums whose disbelief leaves [0,1] are undefined; skip those triples.
    }
  }
  EXPECT_GT(checked, 500);
}

TEST(BetaSemiring, Elements) {
  const auto s = beta_parametrisation();
  Rng rng(4);
  for (int i = 0; i < 100; ++i) {
    const Opinion w = random_opinion(rng);
    const Opinion sum = s.plus(s.zero(), w);
    const Opinion prod = s.times(s.one(), w);
    EXPECT_NEAR(p(sum), p(w), 1e-15);
    EXPECT_NEAR(mean_variance(sum).variance, mean_variance(w).variance, 1e-12);
    EXPECT_NEAR(p(prod), p(w), 1e-15);
    EXPECT_NEAR(mean_variance(prod).variance, mean_variance(w).variance, 1e-12);
    EXPECT_DOUBLE_EQ(p(s.times(s.zero(), w)), 0.0);
  }
  EXPECT_EQ(s.negate_label(Opinion(0.3, 0.5, 0.2, 0.2)), Opinion(0.5, 0.3, 0.2, 0.8));
}

TEST(BetaSemiring, LawsHoldOnProjectedProbabilities) {
  const auto s = beta_parametrisation();
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const Opinion x = random_opinion(rng), y = random_bounded(rng, 0.33), z = random_bounded(rng, 0.33);
    EXPECT_NEAR(p(s.plus(x, y)), p(s.plus(y, x)), 1e-12);
    EXPECT_NEAR(p(s.times(x, y)), p(s.times(y, x)), 1e-12);
    EXPECT_NEAR(p(s.times(x, s.times(y, z))), p(s.times(s.times(x, y), z)), 1e-12);
    EXPECT_NEAR(p(s.plus(y, s.plus(z, y))), p(s.plus(s.plus(y, z), y)), 1e-12);
    EXPECT_NEAR(p(s.times(x, s.plus(y, z))), p(s.plus(s.times(x, y), s.times(x, z))), 1e-12);
    EXPECT_NEAR(p(s.plus(s.zero(), x)), p(x), 1e-12);
    EXPECT_NEAR(p(s.times(s.one(), x)), p(x), 1e-12);
  }
}

TEST(BetaSemiring, PointMassLabelsBehaveLikeProbabilities) {
  const auto s = beta_parametrisation();
  const Opinion x = s.from_label(Label{0.3}), y = s.from_label(Label{0.4});
  EXPECT_TRUE(x.is_point_mass());
  EXPECT_NEAR(p(s.times(x, y)), 0.12, 1e-15);
  EXPECT_NEAR(p(s.plus(x, y)), 0.7, 1e-15);
  EXPECT_NEAR(p(s.divide(x, s.plus(x, y))), 0.3 / 0.7, 1e-15);
}

TEST(FoldLabels, EmptyAndSingleton) {
  const auto s = prob_parametrisation();
  EXPECT_EQ(fold_labels<ProbSemiring>({}, FoldOp::plus, s), 0.0);
  EXPECT_EQ(fold_labels<ProbSemiring>({}, FoldOp::times, s), 1.0);
  const std::array<double, 1> one{0.42};
  EXPECT_EQ(fold_labels<ProbSemiring>(one, FoldOp::plus, s), 0.42);
  const auto b = beta_parametrisation();
  EXPECT_EQ(fold_labels<BetaSemiring>({}, FoldOp::plus, b), b.zero());
  const std::array<Opinion, 1> op{Opinion(0.2, 0.3, 0.5, 0.5)};
  EXPECT_EQ(fold_labels<BetaSemiring>(op, FoldOp::times, b), op[0]);
}

TEST(FoldLabels, ProbabilityFoldIsPermutationInvariant) {
  const auto s = prob_parametrisation();
  Rng rng(6);
  std::array<double, 5> labels{};
  for (auto& l : labels) l = uniform01(rng);
  std::sort(labels.begin(), labels.end());
  const double sum = fold_labels<ProbSemiring>(labels, FoldOp::plus, s);
  const double product = fold_labels<ProbSemiring>(labels, FoldOp::times, s);
  int perms = 0;
  do {
    EXPECT_NEAR(fold_labels<ProbSemiring>(labels, FoldOp::plus, s), sum, 1e-12);
    EXPECT_NEAR(fold_labels<ProbSemiring>(labels, FoldOp::times, s), product, 1e-12);
    ++perms;
  } while (std::next_permutation(labels.begin(), labels.end()));
  EXPECT_EQ(perms, 120);
}

TEST(FoldLabels, OpinionFoldIsDeterministic) {
  const auto s = beta_parametrisation();
  Rng rng(7);
  std::vector<Opinion> labels;
  for (int i = 0; i < 6; ++i) labels.push_back(random_bounded(rng, 0.15));
  EXPECT_EQ(fold_labels<BetaSemiring>(labels, FoldOp::plus, s), fold_labels<BetaSemiring>(labels, FoldOp::plus, s));
}

TEST(SemiringKind, ParsesNames) {
  EXPECT_EQ(parse_semiring_kind("prob"), SemiringKind::prob);
  EXPECT_EQ(parse_semiring_kind("sl"), SemiringKind::sl);
  EXPECT_EQ(parse_semiring_kind("beta"), SemiringKind::beta);
  EXPECT_THROW(parse_semiring_kind("gradient"), std::invalid_argument);
  EXPECT_EQ(to_string(SemiringKind::beta), "beta");
}

TEST(SemiringKind, VisitSelectsDivisionVariance) {
  EXPECT_EQ(parse_division_variance("paper"), DivisionVariance::paper);
  EXPECT_EQ(parse_division_variance("delta"), DivisionVariance::delta_method);
  EXPECT_THROW(parse_division_variance("exact"), std::invalid_argument);
  const Opinion x = beta_to_opinion({6, 14}), y = beta_to_opinion({18, 12});
  const auto divide = [&](DivisionVariance d) {
    return visit_semiring(
        SemiringKind::beta, PriorConfig{},
        [&](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, BetaSemiring>) return s.divide(x, y);
          else return Opinion::vacuous();
        },
        d);
  };
  EXPECT_EQ(divide(DivisionVariance::paper), beta_division(x, y));
  EXPECT_EQ(divide(DivisionVariance::delta_method), beta_division(x, y, {}, DivisionVariance::delta_method));
  EXPECT_NE(divide(DivisionVariance::paper), divide(DivisionVariance::delta_method));
}
