#include <gtest/gtest.h>

#include <random>

#include "translucent/translucent.hpp"

using namespace translucent;

namespace {

Rational q(long num, long den = 1) {
  Rational out(num, den);
  out.canonicalize();
  return out;
}

std::vector<Rational> unit_grid(int steps) {
  std::vector<Rational> out;
  for (int k = 0; k <= steps; ++k) out.push_back(q(k, steps));
  return out;
}

// Every vector in grid^n.
std::vector<std::vector<Rational>> cube(const std::vector<Rational>& grid, int n) {
  std::vector<std::vector<Rational>> out{{}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<Rational>> next;
    for (const auto& v : out) {
      for (const auto& g : grid) {
        auto w = v;
        w.push_back(g);
        next.push_back(std::move(w));
      }
    }
    out = std::move(next);
  }
  return out;
}

bool coherent_two_point(const DilemmaParams& p, const std::vector<Rational>& betas) {
  auto d = make_dilemma(p);
  return is_coherent(d.game, two_point_profile(d, betas)).coherent;
}

// Direct subset sum over who among the others matches the floor price.
Rational subset_f(const std::vector<Rational>& gammas) {
  const int m = static_cast<int>(gammas.size());
  Rational total = 0;
  for (int j = 0; j < (1 << m); ++j) {
    Rational w = 1;
    for (int k = 0; k < m; ++k) w *= ((j >> k) & 1) ? Rational(1 - gammas[static_cast<std::size_t>(k)]) : gammas[static_cast<std::size_t>(k)];
    total += w / (__builtin_popcount(static_cast<unsigned>(j)) + 1);
  }
  return total;
}

}  // namespace

TEST(Coherence, PrisonersDilemmaProfiles) {
  auto d = make_prisoners_dilemma(4, 1);
  EXPECT_TRUE(is_coherent(d.game, pure_profile<Rational>(d.game, Profile{0, 0})).coherent);
  EXPECT_TRUE(is_coherent(d.game, pure_profile<Rational>(d.game, Profile{1, 1})).coherent);
  auto cd = is_coherent(d.game, pure_profile<Rational>(d.game, Profile{0, 1}));
  EXPECT_FALSE(cd.coherent);
  ASSERT_TRUE(cd.witness);
  EXPECT_EQ(cd.witness->player, 0);
  EXPECT_EQ(cd.witness->strategy, 0);
  EXPECT_EQ(cd.witness->deviation, 1);
  EXPECT_TRUE(is_coherent(d.game, two_point_profile<Rational>(d, {q(3, 10), q(3, 10)})).coherent);
}

TEST(TranslucentEquilibrium, Examples) {
  auto pd = make_prisoners_dilemma(4, 1);
  auto cd = is_translucent_equilibrium(pd.game, pure_profile<Rational>(pd.game, Profile{0, 1}), true);
  EXPECT_FALSE(cd.equilibrium);
  EXPECT_TRUE(cd.structure_agrees);
  auto td = make_travelers_dilemma(2, 100, 10);
  auto top = is_translucent_equilibrium(td.game, pure_profile<Rational>(td.game, td.welfare_profile), true);
  EXPECT_TRUE(top.equilibrium);
  EXPECT_TRUE(top.structure_agrees);
}

TEST(TranslucentEquilibrium, PureNashOfRandomTables) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> cell(-3, 3);
  int found = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> counts{2 + trial % 2, 2 + (trial / 2) % 2};
    if (trial % 5 == 0) counts.push_back(2);
    std::vector<Number> cells;
    std::uint64_t size = saturating_product(counts) * counts.size();
    for (std::uint64_t k = 0; k < size; ++k) cells.emplace_back(cell(rng));
    Game g(PayoffTableRule{counts, {}, cells});
    for (const auto& nash : verify_social_dilemma(g).nash_equilibria) {
      auto r = is_translucent_equilibrium(g, pure_profile<Rational>(g, nash), true);
      EXPECT_TRUE(r.equilibrium);
      EXPECT_TRUE(r.structure_agrees);
      ++found;
    }
  }
  EXPECT_GT(found, 100);
}

TEST(TeCondition, Examples) {
  auto p = pd_params(4, 1);
  EXPECT_TRUE(te_condition<Rational>(p, {q(3, 10), q(3, 10)}));
  EXPECT_FALSE(te_condition<Rational>(p, {q(1, 5), q(9, 10)}));
  EXPECT_FALSE(coherent_two_point(p, {q(1, 5), q(9, 10)}));
  for (const auto& params : {pd_params(4, 1), td_params(2, 9, 3), pgg_params(3, Number(q(1, 2)), 4),
                             bertrand_params(3, 2, 7)}) {
    std::vector<Rational> zeros(static_cast<std::size_t>(params.num_players()), 0);
    EXPECT_TRUE(te_condition<Rational>(params, zeros));
    EXPECT_TRUE(coherent_two_point(params, zeros));
  }
}

TEST(TeCondition, AgreesWithCoherence) {
  auto tenths = unit_grid(10);
  auto quarters = unit_grid(4);
  std::vector<std::pair<DilemmaParams, std::vector<Rational>>> cases;
  for (Rational b : {q(3, 2), q(4), q(10)}) cases.push_back({pd_params(Number(b), 1), tenths});
  for (int spread : {3, 9, 20}) {
    for (int bonus : {1, 2, 5, spread + 3}) cases.push_back({td_params(2, 2 + spread, bonus), tenths});
  }
  for (int n = 2; n <= 4; ++n) {
    for (Rational rho : {Rational(Rational(1, n) + Rational(1, 10)), q(19, 20)}) {
      cases.push_back({pgg_params(n, Number(rho), 4), n <= 3 ? tenths : quarters});
    }
  }
  for (int n = 2; n <= 4; ++n) {
    for (int h : {5, 12}) cases.push_back({bertrand_params(n, 2, h), n <= 3 ? tenths : quarters});
  }
  for (const auto& [p, grid] : cases) {
    for (const auto& betas : cube(grid, p.num_players())) {
      EXPECT_EQ(te_condition<Rational>(p, betas), coherent_two_point(p, betas)) << p.snapshot();
    }
  }
}

TEST(GeneralizedF, Examples) {
  for (int n = 2; n <= 6; ++n) {
    std::vector<Rational> ones(static_cast<std::size_t>(n - 1), 1);
    std::vector<Rational> zeros(static_cast<std::size_t>(n - 1), 0);
    EXPECT_EQ(generalized_f(ones), 1);
    EXPECT_EQ(generalized_f(zeros), q(1, n));
    for (const auto& g : unit_grid(7)) {
      std::vector<Rational> same(static_cast<std::size_t>(n - 1), g);
      EXPECT_EQ(generalized_f(same), f_gamma_binomial(g, n));
    }
  }
  for (int n = 2; n <= 12; ++n) {
    for (double g : {0.0, 0.13, 0.5, 0.87, 1.0}) {
      std::vector<double> same(static_cast<std::size_t>(n - 1), g);
      EXPECT_NEAR(generalized_f(same), f_gamma(g, n), 1e-12);
    }
  }
  EXPECT_THROW(generalized_f(std::vector<double>(30, 0.5), 1000), BudgetExceeded);
}

TEST(GeneralizedF, MatchesSubsetSum) {
  auto grid = unit_grid(3);
  for (int m = 1; m <= 3; ++m) {
    for (const auto& gammas : cube(grid, m)) EXPECT_EQ(generalized_f(gammas), subset_f(gammas));
  }
}

TEST(TypedCondition, PrisonersDilemmaBoundary) {
  auto p = pd_params(4, 1);
  auto v = te_condition_typed<Rational>(p, {q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)});
  ASSERT_TRUE(v.verdict);
  EXPECT_TRUE(*v.verdict);
  auto d = make_dilemma(p);
  EXPECT_TRUE(typed_structure_equilibrium<Rational>(d, {q(1, 2), q(1, 2)}, {q(1, 2), q(1, 2)}));
}

TEST(TypedCondition, MatchesTypedStructure) {
  auto fifths = unit_grid(5);
  std::vector<DilemmaParams> params{pd_params(4, 1), pd_params(Number(q(5, 2)), 2), td_params(2, 6, 2),
                                    td_params(1, 5, Number(q(1, 2))), bertrand_params(2, 2, 6)};
  for (const auto& p : params) {
    auto d = make_dilemma(p);
    for (const auto& alphas : cube(fifths, 2)) {
      for (const auto& betas : cube(unit_grid(4), 2)) {
        auto v = te_condition_typed<Rational>(p, alphas, betas);
        ASSERT_TRUE(v.verdict);
        EXPECT_EQ(*v.verdict, typed_structure_equilibrium(d, alphas, betas))
            << p.snapshot() << " a=(" << alphas[0] << "," << alphas[1] << ") b=(" << betas[0] << "," << betas[1]
            << ")";
      }
    }
  }
}

TEST(TypedCondition, ThreePlayerBertrand) {
  auto p = bertrand_params(3, 2, 4);
  auto d = make_dilemma(p);
  auto halves = unit_grid(2);
  for (const auto& alphas : cube(halves, 3)) {
    for (const auto& betas : cube(halves, 3)) {
      EXPECT_EQ(*te_condition_typed<Rational>(p, alphas, betas).verdict, typed_structure_equilibrium(d, alphas, betas));
    }
  }
}

TEST(TypedCondition, PublicGoodsScaledReadingMatches) {
  auto p = pgg_params(3, Number(q(1, 2)), 1);
  auto d = make_dilemma(p);
  int scaled_only = 0;
  auto halves = unit_grid(2);
  for (const auto& alphas : cube(halves, 3)) {
    for (const auto& betas : cube(unit_grid(4), 3)) {
      auto v = te_condition_typed<Rational>(p, alphas, betas);
      ASSERT_TRUE(v.scaled);
      EXPECT_FALSE(v.verdict);
      bool oracle = typed_structure_equilibrium(d, alphas, betas);
      EXPECT_EQ(*v.scaled, oracle);
      if (*v.scaled && !v.printed) ++scaled_only;
    }
  }
  EXPECT_GT(scaled_only, 0);
}

TEST(TypedCondition, HomogeneousBertrandReducesToSingleType) {
  for (int n = 2; n <= 5; ++n) {
    auto p = bertrand_params(n, 2, 30);
    for (const auto& a : unit_grid(5)) {
      for (const auto& b : unit_grid(5)) {
        if (b == 0) continue;
        std::vector<Rational> alphas(static_cast<std::size_t>(n), a), betas(static_cast<std::size_t>(n), b);
        EXPECT_EQ(*te_condition_typed<Rational>(p, alphas, betas).verdict,
                  cooperation_condition<Rational>(p, a, b).rational);
      }
    }
  }
}

TEST(TypedCondition, TravelersHighDetectionMatchesEngine) {
  auto p = td_params(2, 12, 4);
  auto d = make_dilemma(p);
  for (const auto& a : unit_grid(10)) {
    if (a < q(1, 2)) continue;
    for (const auto& b : unit_grid(10)) {
      if (b == 0) continue;
      bool engine = is_cooperation_rational(d, 0, TranslucentType<Rational>{a, b}).verdict;
      EXPECT_EQ(*te_condition_typed<Rational>(p, {a, a}, {b, b}).verdict, engine);
      EXPECT_EQ(printed_cooperation_condition<Rational>(p, a, b).rational, engine);
    }
  }
}

TEST(TypedCondition, DefectorsAreNotConstrained) {
  // Player 2 never cooperates, so only players 0 and 1 need cooperation to be rational.
  auto p = pgg_params(3, Number(q(1, 2)), 1);
  std::vector<Rational> alphas{1, 1, 0}, betas{1, 1, 0};
  auto v = te_condition_typed<Rational>(p, alphas, betas);
  EXPECT_TRUE(*v.scaled);
  EXPECT_TRUE(typed_structure_equilibrium(make_dilemma(p), alphas, betas));
}

TEST(TypedCondition, LiteralDetectionLetsMixedDefectorClimb) {
  // A player at L whose opponent may still be at H gains by moving to H - 1
  // when only detected opponents react.
  auto d = make_dilemma(td_params(2, 6, 2));
  std::vector<Rational> alphas{q(1, 5), q(1, 5)}, betas{q(1, 2), q(3, 4)};
  auto sigma = two_point_profile(d, betas);
  auto literal = build_typed_structure(d, sigma, alphas);
  EXPECT_FALSE(check_translucent_equilibrium(literal, d.game, sigma, support_states(literal, sigma)).holds);
  EXPECT_TRUE(typed_structure_equilibrium(d, alphas, betas));
  EXPECT_TRUE(*te_condition_typed<Rational>(td_params(2, 6, 2), alphas, betas).verdict);
}
