#pragma once

// The four canonical social dilemmas and exhaustive verification of the
// social-dilemma axioms: a unique pure Nash equilibrium, a unique
// welfare-maximizing profile, and every player strictly preferring the
// welfare profile to the Nash profile.

#include <optional>
#include <string>
#include <vector>

#include "translucent/game.hpp"

namespace translucent {

/// A game tagged with its Nash ("defect") and welfare ("cooperate") profiles.
struct SocialDilemma {
  Game game;
  DilemmaKind kind;
  Profile nash_profile;
  Profile welfare_profile;

  int num_players() const { return game.num_players(); }
  int cooperate(int player) const { return welfare_profile.at(static_cast<std::size_t>(player)); }
  int defect(int player) const { return nash_profile.at(static_cast<std::size_t>(player)); }
};

inline SocialDilemma make_prisoners_dilemma(const Number& b, const Number& c) {
  if (!(c.exact() > 0)) throw InputError("prisoner's dilemma: need c > 0");
  if (!(b.exact() > c.exact())) throw InputError("prisoner's dilemma: need b > c");
  return {Game(PrisonersDilemmaRule{b, c}), DilemmaKind::kPrisonersDilemma, {1, 1}, {0, 0}};
}

inline SocialDilemma make_public_goods(int n, const Number& rho, int grid = 100) {
  if (n < 2) throw InputError("public goods: need n >= 2");
  if (grid < 1) throw InputError("public goods: grid must be >= 1");
  if (!(rho.exact() * n > 1) || !(rho.exact() < 1)) {
    throw InputError("public goods: rho must lie strictly between 1/n and 1");
  }
  return {Game(PublicGoodsRule{n, rho, grid}), DilemmaKind::kPublicGoods,
          Profile(static_cast<std::size_t>(n), 0), Profile(static_cast<std::size_t>(n), grid)};
}

/// Bertrand game without the price-floor restriction; used to exhibit the
/// non-unique equilibria below l = 2.
inline Game make_bertrand_game(int n, int l, int h) { return Game(BertrandRule{n, l, h}); }

inline SocialDilemma make_bertrand(int n, int l, int h) {
  if (n < 2) throw InputError("bertrand: need n >= 2");
  if (l < 2) {
    throw InputError("bertrand: price floor l = " + std::to_string(l) +
                     " < 2 admits more than one pure Nash equilibrium");
  }
  if (h <= l) throw InputError("bertrand: need l < h");
  return {make_bertrand_game(n, l, h), DilemmaKind::kBertrand, Profile(static_cast<std::size_t>(n), 0),
          Profile(static_cast<std::size_t>(n), h - l)};
}

/// Bonuses at or below 1 are accepted but do not yield a unique Nash
/// equilibrium; verify_social_dilemma reports that.
inline SocialDilemma make_travelers_dilemma(int l, int h, const Number& bonus) {
  if (l <= 0) throw InputError("travelers dilemma: need l > 0");
  if (h <= l) throw InputError("travelers dilemma: need l < h");
  if (!(bonus.exact() > 0)) throw InputError("travelers dilemma: need bonus > 0");
  return {Game(TravelersDilemmaRule{l, h, bonus}), DilemmaKind::kTravelersDilemma, {0, 0},
          {h - l, h - l}};
}

/// Scalar parameters of one of the four dilemmas. Fields not used by `kind`
/// are ignored.
struct DilemmaParams {
  DilemmaKind kind = DilemmaKind::kPrisonersDilemma;
  Number b;      // pd benefit
  Number c;      // pd cost
  int n = 2;     // pgg, bertrand
  Number rho;    // pgg
  int grid = 100;
  int l = 2;     // bertrand, td
  int h = 100;   // bertrand, td
  Number bonus;  // td

  int num_players() const {
    return kind == DilemmaKind::kPublicGoods || kind == DilemmaKind::kBertrand ? n : 2;
  }

  /// "b=4;c=1" style summary, used as a CSV column.
  std::string snapshot() const {
    switch (kind) {
      case DilemmaKind::kPrisonersDilemma:
        return "b=" + format_real(b.exact()) + ";c=" + format_real(c.exact());
      case DilemmaKind::kPublicGoods:
        return "n=" + std::to_string(n) + ";rho=" + format_real(rho.exact());
      case DilemmaKind::kBertrand:
        return "n=" + std::to_string(n) + ";l=" + std::to_string(l) + ";h=" + std::to_string(h);
      case DilemmaKind::kTravelersDilemma:
        return "l=" + std::to_string(l) + ";h=" + std::to_string(h) + ";bonus=" + format_real(bonus.exact());
    }
    return {};
  }
};

inline SocialDilemma make_dilemma(const DilemmaParams& p) {
  switch (p.kind) {
    case DilemmaKind::kPrisonersDilemma: return make_prisoners_dilemma(p.b, p.c);
    case DilemmaKind::kPublicGoods: return make_public_goods(p.n, p.rho, p.grid);
    case DilemmaKind::kBertrand: return make_bertrand(p.n, p.l, p.h);
    case DilemmaKind::kTravelersDilemma: return make_travelers_dilemma(p.l, p.h, p.bonus);
  }
  throw InputError("unknown game kind");
}

inline DilemmaParams pd_params(const Number& b, const Number& c) {
  DilemmaParams p;
  p.kind = DilemmaKind::kPrisonersDilemma;
  p.b = b;
  p.c = c;
  return p;
}

inline DilemmaParams pgg_params(int n, const Number& rho, int grid = 100) {
  DilemmaParams p;
  p.kind = DilemmaKind::kPublicGoods;
  p.n = n;
  p.rho = rho;
  p.grid = grid;
  return p;
}

inline DilemmaParams bertrand_params(int n, int l, int h) {
  DilemmaParams p;
  p.kind = DilemmaKind::kBertrand;
  p.n = n;
  p.l = l;
  p.h = h;
  return p;
}

inline DilemmaParams td_params(int l, int h, const Number& bonus) {
  DilemmaParams p;
  p.kind = DilemmaKind::kTravelersDilemma;
  p.l = l;
  p.h = h;
  p.bonus = bonus;
  return p;
}

struct SocialDilemmaReport {
  std::vector<Profile> nash_equilibria;
  std::vector<Profile> welfare_maximizers;
  std::optional<Profile> unique_nash;
  std::optional<Profile> unique_welfare;
  bool dominance_ok = false;

  bool is_social_dilemma() const { return unique_nash && unique_welfare && dominance_ok; }
};

/// Exhaustively enumerates pure Nash equilibria and welfare maximizers.
inline SocialDilemmaReport verify_social_dilemma(const Game& game,
                                                 std::uint64_t budget = kDefaultBudget) {
  std::uint64_t profiles = game.num_profiles();
  if (profiles > budget) throw BudgetExceeded("verify_social_dilemma", profiles, budget);

  SocialDilemmaReport report;
  const int n = game.num_players();
  std::vector<Profile> welfare_candidates;
  double best_welfare = -std::numeric_limits<double>::infinity();
  Profile scratch;

  for_each_profile(game.strategy_counts(), [&](const Profile& profile) {
    bool is_nash = true;
    for (int i = 0; i < n && is_nash; ++i) {
      double current = game.payoff<double>(profile, i);
      scratch = profile;
      for (int s = 0; s < game.num_strategies(i) && is_nash; ++s) {
        if (s == profile[static_cast<std::size_t>(i)]) continue;
        scratch[static_cast<std::size_t>(i)] = s;
        double deviation = game.payoff<double>(scratch, i);
        if (deviation > current && !near_tie(deviation, current)) {
          is_nash = false;
        } else if (near_tie(deviation, current)) {
          if (game.payoff<Rational>(scratch, i) > game.payoff<Rational>(profile, i)) is_nash = false;
        }
      }
    }
    if (is_nash) report.nash_equilibria.push_back(profile);

    double welfare = 0.0;
    for (int i = 0; i < n; ++i) welfare += game.payoff<double>(profile, i);
    if (welfare > best_welfare && !near_tie(welfare, best_welfare)) {
      best_welfare = welfare;
      welfare_candidates.clear();
      welfare_candidates.push_back(profile);
    } else if (near_tie(welfare, best_welfare)) {
      welfare_candidates.push_back(profile);
      best_welfare = std::max(best_welfare, welfare);
    }
  });

  // Resolve near-ties among welfare candidates exactly.
  auto exact_welfare = [&](const Profile& p) {
    Rational total = 0;
    for (int i = 0; i < n; ++i) total += game.payoff<Rational>(p, i);
    return total;
  };
  Rational top;
  bool first = true;
  for (const auto& p : welfare_candidates) {
    Rational w = exact_welfare(p);
    if (first || w > top) {
      top = w;
      first = false;
    }
  }
  for (const auto& p : welfare_candidates) {
    if (exact_welfare(p) == top) report.welfare_maximizers.push_back(p);
  }

  if (report.nash_equilibria.size() == 1) report.unique_nash = report.nash_equilibria.front();
  if (report.welfare_maximizers.size() == 1) report.unique_welfare = report.welfare_maximizers.front();
  if (report.unique_nash && report.unique_welfare) {
    report.dominance_ok = true;
    for (int i = 0; i < n; ++i) {
      if (!(game.payoff<Rational>(*report.unique_welfare, i) >
            game.payoff<Rational>(*report.unique_nash, i))) {
        report.dominance_ok = false;
      }
    }
  }
  return report;
}

inline SocialDilemmaReport verify_social_dilemma(const SocialDilemma& dilemma,
                                                 std::uint64_t budget = kDefaultBudget) {
  return verify_social_dilemma(dilemma.game, budget);
}

}  // namespace translucent
