#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "translucent/translucent.hpp"

using namespace translucent;

namespace {

// Prices and claims are stored as offsets from the floor.
Profile offsets(std::initializer_list<int> values, int floor) {
  Profile out;
  for (int v : values) out.push_back(v - floor);
  return out;
}

Rational exact(const Game& g, const Profile& p, int i) { return g.payoff<Rational>(p, i); }

}  // namespace

TEST(PrisonersDilemma, PayoffRule) {
  auto d = make_prisoners_dilemma(4, 1);
  EXPECT_EQ(exact(d.game, {0, 0}, 0), 3);
  EXPECT_EQ(exact(d.game, {0, 0}, 1), 3);
  EXPECT_EQ(exact(d.game, {1, 1}, 0), 0);
  EXPECT_EQ(exact(d.game, {0, 1}, 0), -1);
  EXPECT_EQ(exact(d.game, {0, 1}, 1), 4);
  EXPECT_EQ(exact(d.game, {1, 0}, 0), 4);
  EXPECT_EQ(d.nash_profile, (Profile{1, 1}));
  EXPECT_EQ(d.welfare_profile, (Profile{0, 0}));
}

TEST(PrisonersDilemma, RejectsBadParameters) {
  EXPECT_THROW(make_prisoners_dilemma(1, 1), InputError);
  EXPECT_THROW(make_prisoners_dilemma(1, 2), InputError);
  EXPECT_THROW(make_prisoners_dilemma(2, 0), InputError);
}

TEST(PrisonersDilemma, Verified) {
  auto report = verify_social_dilemma(make_prisoners_dilemma(4, 1));
  ASSERT_TRUE(report.unique_nash);
  ASSERT_TRUE(report.unique_welfare);
  EXPECT_EQ(*report.unique_nash, (Profile{1, 1}));
  EXPECT_EQ(*report.unique_welfare, (Profile{0, 0}));
  EXPECT_TRUE(report.dominance_ok);
}

TEST(PublicGoods, PayoffRule) {
  auto d = make_public_goods(2, Number(Rational(3, 5)));
  EXPECT_EQ(exact(d.game, {100, 100}, 0), Rational(6, 5));
  EXPECT_EQ(exact(d.game, {50, 100}, 0), Rational(7, 5));
  auto three = make_public_goods(3, Number(Rational(1, 2)));
  for (int i = 0; i < 3; ++i) EXPECT_EQ(exact(three.game, {0, 0, 0}, i), 1);
}

TEST(PublicGoods, RejectsRhoOutsideRange) {
  EXPECT_THROW(make_public_goods(2, Number(Rational(1, 2))), InputError);
  EXPECT_THROW(make_public_goods(2, Number(1)), InputError);
  EXPECT_THROW(make_public_goods(1, Number(Rational(3, 5))), InputError);
  EXPECT_THROW(make_public_goods(2, Number(Rational(3, 5)), 0), InputError);
}

TEST(PublicGoods, UniqueNashIsZero) {
  for (int grid : {10, 100}) {
    auto report = verify_social_dilemma(make_public_goods(2, Number(Rational(3, 5)), grid));
    ASSERT_TRUE(report.unique_nash);
    EXPECT_EQ(*report.unique_nash, (Profile{0, 0}));
    ASSERT_TRUE(report.unique_welfare);
    EXPECT_EQ(*report.unique_welfare, (Profile{grid, grid}));
    EXPECT_TRUE(report.dominance_ok);
  }
}

TEST(PublicGoods, WelfareIdentity) {
  for (int n : {2, 3}) {
    for (Rational rho : {Rational(3, 5), Rational(9, 10)}) {
      auto d = make_public_goods(n, Number(rho), 4);
      for_each_profile(d.game.strategy_counts(), [&](const Profile& p) {
        Rational total = 0;
        Rational contributed = 0;
        for (int i = 0; i < n; ++i) {
          total += d.game.payoff<Rational>(p, i);
          contributed += Rational(p[static_cast<std::size_t>(i)]) / 4;
        }
        EXPECT_EQ(total, Rational(n - (1 - rho * n) * contributed));
      });
    }
  }
}

TEST(Bertrand, PayoffRule) {
  auto two = make_bertrand(2, 2, 100);
  auto p = offsets({3, 5}, 2);
  EXPECT_EQ(exact(two.game, p, 0), 3);
  EXPECT_EQ(exact(two.game, p, 1), 0);
  auto three = make_bertrand(3, 2, 10);
  auto q = offsets({4, 4, 9}, 2);
  EXPECT_EQ(exact(three.game, q, 0), 2);
  EXPECT_EQ(exact(three.game, q, 1), 2);
  EXPECT_EQ(exact(three.game, q, 2), 0);
}

TEST(Bertrand, TiePayoffsSumToLowestPrice) {
  auto d = make_bertrand(3, 2, 7);
  for_each_profile(d.game.strategy_counts(), [&](const Profile& p) {
    Rational total = 0;
    for (int i = 0; i < 3; ++i) total += d.game.payoff<Rational>(p, i);
    EXPECT_EQ(total, *std::min_element(p.begin(), p.end()) + 2);
  });
}

TEST(Bertrand, FloorOneHasTwoEquilibria) {
  EXPECT_THROW(make_bertrand(2, 1, 100), InputError);
  auto report = verify_social_dilemma(make_bertrand_game(2, 1, 5));
  ASSERT_EQ(report.nash_equilibria.size(), 2U);
  EXPECT_EQ(report.nash_equilibria[0], offsets({1, 1}, 1));
  EXPECT_EQ(report.nash_equilibria[1], offsets({2, 2}, 1));
  EXPECT_FALSE(report.unique_nash);
  EXPECT_FALSE(report.is_social_dilemma());
}

TEST(TravelersDilemma, PayoffRule) {
  auto d = make_travelers_dilemma(2, 100, 10);
  auto p = offsets({50, 60}, 2);
  EXPECT_EQ(exact(d.game, p, 0), 60);
  EXPECT_EQ(exact(d.game, p, 1), 40);
  auto q = offsets({80, 80}, 2);
  EXPECT_EQ(exact(d.game, q, 0), 80);
  EXPECT_EQ(exact(d.game, q, 1), 80);
  EXPECT_EQ(exact(d.game, offsets({2, 100}, 2), 1), -8);
}

TEST(TravelersDilemma, SwappingClaimsSwapsPayoffs) {
  auto d = make_travelers_dilemma(3, 12, Number(Rational(5, 2)));
  for_each_profile(d.game.strategy_counts(), [&](const Profile& p) {
    Profile swapped{p[1], p[0]};
    EXPECT_EQ(exact(d.game, p, 0), exact(d.game, swapped, 1));
    EXPECT_EQ(exact(d.game, p, 1), exact(d.game, swapped, 0));
  });
}

TEST(TravelersDilemma, NashAndWelfare) {
  auto report = verify_social_dilemma(make_travelers_dilemma(2, 100, 2));
  ASSERT_TRUE(report.unique_nash);
  EXPECT_EQ(*report.unique_nash, offsets({2, 2}, 2));
  ASSERT_TRUE(report.unique_welfare);
  EXPECT_EQ(*report.unique_welfare, offsets({100, 100}, 2));
  EXPECT_TRUE(report.dominance_ok);
}

TEST(TravelersDilemma, SmallBonusIsNotADilemma) {
  // With bonus 1 undercutting by one unit only breaks even.
  auto report = verify_social_dilemma(make_travelers_dilemma(2, 10, 1));
  EXPECT_FALSE(report.is_social_dilemma());
}

TEST(Factories, DeskGridsVerify) {
  for (Rational b : {Rational(3, 2), Rational(4), Rational(10)}) {
    EXPECT_TRUE(verify_social_dilemma(make_prisoners_dilemma(Number(b), Number(Rational(1, 2)))).is_social_dilemma());
  }
  for (int n = 2; n <= 4; ++n) {
    for (Rational rho : {Rational(Rational(1, n) + Rational(1, 100)), Rational(3, 4), Rational(99, 100)}) {
      EXPECT_TRUE(verify_social_dilemma(make_public_goods(n, Number(rho), 4)).is_social_dilemma()) << n;
    }
  }
  for (int n = 2; n <= 3; ++n) {
    for (int l = 2; l <= 4; ++l) {
      for (int h = l + 1; h <= 9; ++h) {
        EXPECT_TRUE(verify_social_dilemma(make_bertrand(n, l, h)).is_social_dilemma()) << n << " " << l << " " << h;
      }
    }
  }
  for (int h = 4; h <= 20; h += 4) {
    for (int bonus : {2, 3, 7}) {
      EXPECT_TRUE(verify_social_dilemma(make_travelers_dilemma(2, h, bonus)).is_social_dilemma());
    }
  }
}

TEST(Game, ProfileChecks) {
  auto d = make_prisoners_dilemma(4, 1);
  EXPECT_THROW(d.game.payoff_checked<double>(Profile{0}, 0), InputError);
  EXPECT_THROW(d.game.payoff_checked<double>(Profile{0, 2}, 0), InputError);
  EXPECT_THROW(d.game.payoff_checked<double>(Profile{0, 0}, 2), InputError);
  EXPECT_DOUBLE_EQ(d.game.payoff_checked<double>(Profile{1, 0}, 0), 4.0);
}

TEST(Game, BudgetNamesTheCount) {
  auto d = make_bertrand(4, 2, 200);
  try {
    verify_social_dilemma(d, 1000);
    FAIL() << "expected BudgetExceeded";
  } catch (const BudgetExceeded& e) {
    EXPECT_NE(std::string(e.what()).find(std::to_string(199ULL * 199 * 199 * 199)), std::string::npos) << e.what();
  }
}

TEST(Game, PayoffTable) {
  // Matching pennies.
  std::vector<Number> cells{1, -1, -1, 1, -1, 1, 1, -1};
  Game g(PayoffTableRule{{2, 2}, {}, cells});
  EXPECT_EQ(exact(g, {0, 0}, 0), 1);
  EXPECT_EQ(exact(g, {0, 0}, 1), -1);
  EXPECT_EQ(exact(g, {1, 0}, 1), 1);
  EXPECT_FALSE(g.symmetric());
  EXPECT_TRUE(verify_social_dilemma(g).nash_equilibria.empty());
  EXPECT_THROW(Game(PayoffTableRule{{2, 2}, {}, {1, 2, 3}}), InputError);
}

TEST(Game, Labels) {
  auto td = make_travelers_dilemma(2, 100, 10);
  EXPECT_EQ(td.game.strategy_label(0, 0), "2");
  auto pgg = make_public_goods(2, Number(Rational(3, 5)), 4);
  EXPECT_EQ(pgg.game.strategy_label(0, 2), "0.5");
  EXPECT_EQ(make_prisoners_dilemma(4, 1).game.strategy_label(1, 1), "D");
}
