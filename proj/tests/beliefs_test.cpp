#include <gtest/gtest.h>

#include <cmath>

#include "translucent/translucent.hpp"

using namespace translucent;

namespace {

Rational q(long num, long den = 1) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

TranslucentType<Rational> type(Rational a, Rational b) { return {a, b}; }

std::vector<Rational> unit_grid(int steps) {
  std::vector<Rational> out;
  for (int k = 0; k <= steps; ++k) out.push_back(q(k, steps));
  return out;
}

// Subset mixture with a caller-supplied exponent for the defectors outside J.
Rational mixture_mass(const Rational& alpha, const Rational& beta, int n, std::uint64_t pattern, int extra_defect) {
  const int others = n - 1;
  Rational total = 0;
  for (std::uint64_t j = 0; j < (std::uint64_t{1} << others); ++j) {
    if (pattern & j) continue;
    int js = __builtin_popcountll(j);
    int k = __builtin_popcountll(pattern);
    Rational w = 1;
    for (int t = 0; t < js; ++t) w *= alpha;
    for (int t = 0; t < others - js; ++t) w *= 1 - alpha;
    for (int t = 0; t < k; ++t) w *= beta;
    for (int t = 0; t < others - js - k + extra_defect; ++t) w *= 1 - beta;
    total += w;
  }
  return total;
}

}  // namespace

TEST(OnPath, Examples) {
  auto all = on_path_beliefs(type(q(1, 2), 1), 3);
  EXPECT_EQ(all.probability(0b11), 1);
  EXPECT_EQ(all.probability(0b01), 0);
  auto half = on_path_beliefs(type(0, q(1, 2)), 3);
  for (std::uint64_t m = 0; m < 4; ++m) EXPECT_EQ(half.probability(m), q(1, 4));
  auto four = on_path_beliefs(type(0, q(3, 10)), 4);
  EXPECT_EQ(four.probability(0b011), q(63, 1000));
  EXPECT_THROW(on_path_beliefs(type(0, 2), 3), InputError);
  EXPECT_THROW(on_path_beliefs(type(0, 0), 1), InputError);
}

TEST(DeviationBeliefs, Examples) {
  auto detected = deviation_belief_mixture(type(1, q(7, 10)), 2);
  EXPECT_EQ(detected.probability(0), 1);
  auto opaque = deviation_belief_mixture(type(0, q(1, 2)), 2);
  auto path = on_path_beliefs(type(0, q(1, 2)), 2);
  EXPECT_EQ(opaque.distribution(), path.distribution());
  auto mid = deviation_belief_mixture(type(q(1, 2), q(4, 5)), 3);
  for (const auto& p : mid.cooperate) EXPECT_EQ(p, q(2, 5));
  auto subsets = deviation_mixture_distribution(type(q(1, 2), q(4, 5)), 3);
  EXPECT_EQ(subsets, mid.distribution());
}

TEST(DeviationBeliefs, MixtureEqualsProductExactly) {
  for (int n = 2; n <= 7; ++n) {
    for (const auto& a : unit_grid(4)) {
      for (const auto& b : unit_grid(5)) {
        auto t = type(a, b);
        auto mixture = deviation_mixture_distribution(t, n);
        Rational gamma = (1 - a) * b;
        for (std::uint64_t m = 0; m < mixture.size(); ++m) {
          int k = __builtin_popcountll(m);
          Rational expected = 1;
          for (int s = 0; s < n - 1; ++s) expected *= s < k ? gamma : Rational(1 - gamma);
          EXPECT_EQ(mixture[m], expected) << n << " " << a << " " << b << " " << m;
        }
      }
    }
  }
}

TEST(DeviationBeliefs, MixtureEqualsProductUpToTwelvePlayers) {
  for (int n = 8; n <= 12; ++n) {
    for (double a : {0.0, 0.3, 0.75, 1.0}) {
      for (double b : {0.0, 0.45, 0.9, 1.0}) {
        TranslucentType<double> t{a, b};
        auto mixture = deviation_mixture_distribution(t, n);
        double gamma = (1 - a) * b;
        double total = 0;
        for (std::uint64_t m = 0; m < mixture.size(); ++m) {
          int k = __builtin_popcountll(m);
          double expected = std::pow(gamma, k) * std::pow(1 - gamma, n - 1 - k);
          EXPECT_NEAR(mixture[m], expected, 1e-12);
          total += mixture[m];
        }
        EXPECT_NEAR(total, 1.0, 1e-12);
      }
    }
  }
}

TEST(DeviationBeliefs, PrintedExponentDoesNotNormalize) {
  // One more defector factor outside J, as in the printed text.
  Rational a = q(1, 2), b = q(1, 2);
  Rational printed = 0, corrected = 0;
  for (std::uint64_t m = 0; m < 4; ++m) {
    printed += mixture_mass(a, b, 3, m, 1);
    corrected += mixture_mass(a, b, 3, m, 0);
  }
  EXPECT_EQ(corrected, 1);
  EXPECT_NE(printed, 1);
}

TEST(DeviationBeliefs, BudgetFallsBackToProduct) {
  auto t = TranslucentType<double>{0.5, 0.5};
  EXPECT_THROW(deviation_mixture_distribution(t, 14, 1000), BudgetExceeded);
  auto model = deviation_belief_mixture(t, 14, 0, 1000);
  EXPECT_EQ(model.num_others(), 13);
  EXPECT_DOUBLE_EQ(model.cooperate[0], 0.25);
}

TEST(ExpectedUtility, CooperateExamples) {
  auto pd = make_prisoners_dilemma(4, 1);
  EXPECT_EQ(expected_utility_cooperate(pd, 0, type(0, q(1, 2))), 1);
  auto pgg = make_public_goods(4, Number(q(1, 2)));
  EXPECT_EQ(expected_utility_cooperate(pgg, 0, type(0, q(9, 10))), q(37, 20));
  auto bertrand = make_bertrand(2, 2, 100);
  EXPECT_EQ(expected_utility_cooperate(bertrand, 0, type(0, q(9, 10))), 45);
}

TEST(ExpectedUtility, DeviationExamples) {
  auto pd = make_prisoners_dilemma(4, 1);
  EXPECT_EQ(expected_utility_deviation(pd, 0, type(q(1, 2), q(1, 2)), pd.defect(0)), 1);
  auto pgg = make_public_goods(4, Number(q(1, 2)));
  EXPECT_EQ(expected_utility_deviation(pgg, 0, type(q(2, 5), q(9, 10)), 0), q(181, 100));
  auto td = make_travelers_dilemma(2, 100, 10);
  EXPECT_EQ(expected_utility_deviation(td, 0, type(q(3, 5), q(1, 2)), 0), 4);
  EXPECT_THROW(expected_utility_deviation(td, 0, type(0, 0), 99), InputError);
}

TEST(ExpectedUtility, PublicGoodsDeviationFormula) {
  // 1 - x + rho ((1 - alpha) beta (N - 1) + x) for every grid contribution.
  const Rational rho = q(2, 5);
  for (int n = 3; n <= 5; ++n) {
    auto d = make_public_goods(n, Number(rho), 10);
    for (const auto& a : unit_grid(4)) {
      for (const auto& b : unit_grid(4)) {
        for (int x = 0; x < 10; ++x) {
          Rational dollars = q(x, 10);
          Rational expected = 1 - dollars + rho * ((1 - a) * b * (n - 1) + dollars);
          EXPECT_EQ(expected_utility_deviation(d, 1, type(a, b), x), expected);
        }
      }
    }
  }
}

TEST(ExpectedUtility, BinomialMatchesEnumeration) {
  std::vector<SocialDilemma> games;
  for (int n = 2; n <= 10; ++n) {
    games.push_back(make_bertrand(n, 2, 9));
    games.push_back(make_public_goods(n, Number(q(3, 4)), 4));
  }
  games.push_back(make_prisoners_dilemma(5, 2));
  games.push_back(make_travelers_dilemma(2, 12, 3));
  for (const auto& d : games) {
    for (double a : {0.0, 0.35, 1.0}) {
      for (double b : {0.0, 0.2, 0.65, 1.0}) {
        TranslucentType<double> t{a, b};
        for (int s = 0; s < d.game.num_strategies(0); ++s) {
          double binomial = expected_utility_deviation(d, 0, t, s, Aggregation::kBinomial);
          double enumerated = expected_utility_deviation(d, 0, t, s, Aggregation::kEnumerate);
          EXPECT_NEAR(binomial, enumerated, 1e-9);
        }
      }
    }
  }
}

TEST(ExpectedUtility, CooperateNondecreasingInBeta) {
  std::vector<SocialDilemma> games{make_prisoners_dilemma(4, 1), make_public_goods(3, Number(q(1, 2)), 10),
                                   make_bertrand(3, 2, 20), make_travelers_dilemma(2, 30, 5)};
  auto betas = unit_grid(20);
  for (const auto& d : games) {
    Rational previous = expected_utility_cooperate(d, 0, type(0, betas[0]));
    for (std::size_t k = 1; k < betas.size(); ++k) {
      Rational current = expected_utility_cooperate(d, 0, type(0, betas[k]));
      EXPECT_GE(current, previous) << kind_name(d.kind) << " beta " << betas[k];
      previous = current;
    }
  }
}

TEST(Rationality, Examples) {
  auto pd = make_prisoners_dilemma(4, 1);
  auto boundary = is_cooperation_rational(pd, 0, type(q(1, 2), q(1, 2)));
  EXPECT_TRUE(boundary.verdict);
  EXPECT_EQ(boundary.eu_coop, 1);
  EXPECT_EQ(boundary.eu_best_deviation, 1);
  EXPECT_EQ(boundary.best_deviation, 1);

  auto td = make_travelers_dilemma(2, 100, 70);
  EXPECT_TRUE(is_cooperation_rational(td, 0, type(q(3, 5), q(1, 2))).verdict);
  auto td71 = make_travelers_dilemma(2, 100, 71);
  EXPECT_FALSE(is_cooperation_rational(td71, 0, type(q(3, 5), q(1, 2))).verdict);
}

TEST(Rationality, OpaqueTypesNeverCooperate) {
  std::vector<SocialDilemma> games{make_prisoners_dilemma(4, 1), make_public_goods(3, Number(q(1, 2)), 10),
                                   make_bertrand(3, 2, 20), make_travelers_dilemma(2, 30, 5)};
  for (const auto& d : games) {
    for (const auto& b : unit_grid(10)) {
      EXPECT_FALSE(is_cooperation_rational(d, 0, type(0, b)).verdict) << kind_name(d.kind) << " " << b;
    }
  }
}

TEST(Rationality, OpaqueMatchesStandardBestResponse) {
  std::vector<SocialDilemma> games{make_prisoners_dilemma(4, 1), make_public_goods(3, Number(q(1, 2)), 10),
                                   make_bertrand(3, 2, 20), make_travelers_dilemma(2, 30, 5),
                                   make_travelers_dilemma(2, 10, 1)};
  for (const auto& d : games) {
    for (const auto& b : unit_grid(10)) {
      auto model = on_path_beliefs(type(0, b), d.num_players(), 0);
      // Test-local best response: maximize the on-path payoff over all strategies.
      Rational coop = expected_payoff_two_point(d, 0, d.cooperate(0), model, Aggregation::kEnumerate);
      bool best = true;
      for (int s = 0; s < d.game.num_strategies(0); ++s) {
        best = best && coop >= expected_payoff_two_point(d, 0, s, model, Aggregation::kEnumerate);
      }
      EXPECT_EQ(is_standard_best_response(d, 0, d.cooperate(0), model), best);
      EXPECT_EQ(is_cooperation_rational(d, 0, type(0, b)).verdict, best) << kind_name(d.kind) << " " << b;
    }
  }
}

TEST(Rationality, TravelersBestDeviationIsFloorOrJustBelowTop) {
  for (int l : {1, 2, 5}) {
    for (int spread : {2, 3, 7, 15}) {
      for (int bonus : {1, 2, 4, 9}) {
        auto d = make_travelers_dilemma(l, l + spread, bonus);
        for (const auto& a : unit_grid(5)) {
          for (const auto& b : unit_grid(5)) {
            Rational best;
            bool first = true;
            for (int s = 0; s < spread; ++s) {
              Rational eu = expected_utility_deviation(d, 0, type(a, b), s);
              if (first || eu > best) best = eu;
              first = false;
            }
            Rational floor = expected_utility_deviation(d, 0, type(a, b), 0);
            Rational below_top = expected_utility_deviation(d, 0, type(a, b), spread - 1);
            EXPECT_TRUE(best == floor || best == below_top)
                << "l=" << l << " h=" << l + spread << " bonus=" << bonus << " a=" << a << " b=" << b;
          }
        }
      }
    }
  }
}

TEST(Rationality, ExactFallbackOnTies) {
  auto pd = make_prisoners_dilemma(4, 1);
  auto check = is_cooperation_rational_exact(pd, 0, type(q(1, 2), q(1, 2)));
  EXPECT_TRUE(check.verdict);
  EXPECT_TRUE(check.exact);
  auto clear = is_cooperation_rational_exact(pd, 0, type(1, 1));
  EXPECT_TRUE(clear.verdict);
  EXPECT_FALSE(clear.exact);
  // 0.1 * 0.3 * 10 = 0.3 in exact arithmetic, not in binary.
  auto pd10 = make_prisoners_dilemma(10, Number(q(3, 10)));
  EXPECT_TRUE(is_cooperation_rational_exact(pd10, 0, type(q(1, 10), q(3, 10))).verdict);
}

TEST(Rationality, Budget) {
  auto d = make_travelers_dilemma(2, 100, 10);
  EXPECT_THROW(is_cooperation_rational(d, 0, type(0, 0), 10), BudgetExceeded);
}
