#pragma once

// Finite N-player normal-form games evaluated by rule.
//
// Strategies are dense indices 0..k-1 per player. The four social dilemmas
// compute payoffs from their parameters, so large strategy grids never need a
// materialized payoff matrix; user-supplied games use an explicit table.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "translucent/number.hpp"

namespace translucent {

using Profile = std::vector<int>;

enum class DilemmaKind { kPrisonersDilemma, kPublicGoods, kBertrand, kTravelersDilemma };

inline std::string kind_name(DilemmaKind kind) {
  switch (kind) {
    case DilemmaKind::kPrisonersDilemma: return "pd";
    case DilemmaKind::kPublicGoods: return "pgg";
    case DilemmaKind::kBertrand: return "bertrand";
    case DilemmaKind::kTravelersDilemma: return "td";
  }
  return "?";
}

inline DilemmaKind parse_kind(const std::string& name) {
  if (name == "pd") return DilemmaKind::kPrisonersDilemma;
  if (name == "pgg") return DilemmaKind::kPublicGoods;
  if (name == "bertrand") return DilemmaKind::kBertrand;
  if (name == "td") return DilemmaKind::kTravelersDilemma;
  throw InputError("unknown game kind '" + name + "'");
}

// Strategy 0 is C, strategy 1 is D.
struct PrisonersDilemmaRule {
  Number benefit;
  Number cost;
};

// Strategy k contributes k/grid of the unit endowment.
struct PublicGoodsRule {
  int players = 2;
  Number rho;
  int grid = 100;
};

// Strategy k prices at low + k.
struct BertrandRule {
  int players = 2;
  int low = 2;
  int high = 100;
};

// Strategy k claims low + k.
struct TravelersDilemmaRule {
  int low = 2;
  int high = 100;
  Number bonus;
};

/// Explicit payoff table: payoffs[profile_index * N + player].
struct PayoffTableRule {
  std::vector<int> strategy_counts;
  std::vector<std::vector<std::string>> labels;
  std::vector<Number> payoffs;
};

inline std::uint64_t saturating_product(std::span<const int> sizes) {
  std::uint64_t total = 1;
  for (int s : sizes) {
    if (s <= 0) return 0;
    if (total > std::numeric_limits<std::uint64_t>::max() / static_cast<std::uint64_t>(s)) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    total *= static_cast<std::uint64_t>(s);
  }
  return total;
}

/// Row-major index of a profile; player 0 varies slowest.
inline std::uint64_t profile_index(std::span<const int> sizes, std::span<const int> profile) {
  std::uint64_t index = 0;
  for (std::size_t p = 0; p < sizes.size(); ++p) {
    index = index * static_cast<std::uint64_t>(sizes[p]) + static_cast<std::uint64_t>(profile[p]);
  }
  return index;
}

inline Profile profile_at(std::span<const int> sizes, std::uint64_t index) {
  Profile profile(sizes.size(), 0);
  for (std::size_t p = sizes.size(); p-- > 0;) {
    profile[p] = static_cast<int>(index % static_cast<std::uint64_t>(sizes[p]));
    index /= static_cast<std::uint64_t>(sizes[p]);
  }
  return profile;
}

/// Advances `profile` in lexicographic order; false after the last one.
inline bool next_profile(std::span<const int> sizes, std::span<int> profile) {
  for (std::size_t p = sizes.size(); p-- > 0;) {
    if (++profile[p] < sizes[p]) return true;
    profile[p] = 0;
  }
  return false;
}

/// Visits every profile of the product space in lexicographic order.
template <class Fn>
void for_each_profile(std::span<const int> sizes, Fn&& fn) {
  if (saturating_product(sizes) == 0) return;
  Profile profile(sizes.size(), 0);
  do {
    fn(std::as_const(profile));
  } while (next_profile(sizes, profile));
}

class Game {
 public:
  using Rule = std::variant<PrisonersDilemmaRule, PublicGoodsRule, BertrandRule,
                            TravelersDilemmaRule, PayoffTableRule>;

  explicit Game(Rule rule) : rule_(std::move(rule)) {
    counts_ = std::visit([](const auto& r) { return counts_of(r); }, rule_);
    if (counts_.size() < 2) throw InputError("a game needs at least 2 players");
    for (int c : counts_) {
      if (c < 1) throw InputError("every strategy set must be nonempty");
    }
    if (const auto* table = std::get_if<PayoffTableRule>(&rule_)) {
      std::uint64_t cells = saturating_product(counts_) * counts_.size();
      if (table->payoffs.size() != cells) {
        throw InputError("payoff table has " + std::to_string(table->payoffs.size()) +
                         " entries, expected " + std::to_string(cells));
      }
      if (!table->labels.empty()) {
        if (table->labels.size() != counts_.size()) throw InputError("labels: wrong player count");
        for (std::size_t p = 0; p < counts_.size(); ++p) {
          if (table->labels[p].size() != static_cast<std::size_t>(counts_[p])) {
            throw InputError("labels: wrong strategy count for player " + std::to_string(p));
          }
        }
      }
    }
  }

  const Rule& rule() const { return rule_; }
  int num_players() const { return static_cast<int>(counts_.size()); }
  int num_strategies(int player) const { return counts_.at(static_cast<std::size_t>(player)); }
  std::span<const int> strategy_counts() const { return counts_; }
  std::uint64_t num_profiles() const { return saturating_product(counts_); }

  /// Payoff depends only on the player's own strategy and the multiset of
  /// the others' strategies.
  bool symmetric() const { return !std::holds_alternative<PayoffTableRule>(rule_); }

  std::string strategy_label(int player, int strategy) const {
    return std::visit(
        [&](const auto& r) -> std::string {
          using R = std::decay_t<decltype(r)>;
          if constexpr (std::is_same_v<R, PrisonersDilemmaRule>) {
            return strategy == 0 ? "C" : "D";
          } else if constexpr (std::is_same_v<R, PublicGoodsRule>) {
            return format_real(Rational(strategy, r.grid));
          } else if constexpr (std::is_same_v<R, BertrandRule> ||
                               std::is_same_v<R, TravelersDilemmaRule>) {
            return std::to_string(r.low + strategy);
          } else {
            if (r.labels.empty()) return std::to_string(strategy);
            return r.labels.at(static_cast<std::size_t>(player)).at(static_cast<std::size_t>(strategy));
          }
        },
        rule_);
  }

  void check_profile(std::span<const int> profile, int player) const {
    if (profile.size() != counts_.size()) {
      throw InputError("profile has " + std::to_string(profile.size()) + " entries for a " +
                       std::to_string(counts_.size()) + "-player game");
    }
    if (player < 0 || player >= num_players()) {
      throw InputError("player index " + std::to_string(player) + " out of range");
    }
    for (std::size_t p = 0; p < profile.size(); ++p) {
      if (profile[p] < 0 || profile[p] >= counts_[p]) {
        throw InputError("strategy index out of range for player " + std::to_string(p));
      }
    }
  }

  /// u_player(profile). Unchecked; see payoff_checked.
  template <Scalar T>
  T payoff(std::span<const int> profile, int player) const {
    return std::visit([&](const auto& r) { return evaluate<T>(r, profile, player); }, rule_);
  }

  template <Scalar T>
  T payoff_checked(std::span<const int> profile, int player) const {
    check_profile(profile, player);
    return payoff<T>(profile, player);
  }

 private:
  static std::vector<int> counts_of(const PrisonersDilemmaRule&) { return {2, 2}; }
  static std::vector<int> counts_of(const PublicGoodsRule& r) {
    if (r.players < 2) throw InputError("public goods: need n >= 2");
    if (r.grid < 1) throw InputError("public goods: grid must be >= 1");
    return std::vector<int>(static_cast<std::size_t>(r.players), r.grid + 1);
  }
  static std::vector<int> counts_of(const BertrandRule& r) {
    if (r.players < 2) throw InputError("bertrand: need n >= 2");
    if (r.low < 0 || r.high <= r.low) throw InputError("bertrand: need 0 <= l < h");
    return std::vector<int>(static_cast<std::size_t>(r.players), r.high - r.low + 1);
  }
  static std::vector<int> counts_of(const TravelersDilemmaRule& r) {
    if (r.high <= r.low) throw InputError("travelers dilemma: need l < h");
    return {r.high - r.low + 1, r.high - r.low + 1};
  }
  static std::vector<int> counts_of(const PayoffTableRule& r) { return r.strategy_counts; }

  template <Scalar T>
  static T evaluate(const PrisonersDilemmaRule& r, std::span<const int> s, int i) {
    T u = from_int<T>(0);
    if (s[static_cast<std::size_t>(1 - i)] == 0) u += r.benefit.as<T>();
    if (s[static_cast<std::size_t>(i)] == 0) u -= r.cost.as<T>();
    return u;
  }

  template <Scalar T>
  static T evaluate(const PublicGoodsRule& r, std::span<const int> s, int i) {
    long long total = 0;
    for (int x : s) total += x;
    // 1 - x_i + rho * sum_j x_j, contributions in units of 1/grid.
    T u = from_int<T>(r.grid - s[static_cast<std::size_t>(i)]);
    T pool = r.rho.as<T>() * from_int<T>(total);
    u += pool;
    u /= from_int<T>(r.grid);
    return u;
  }

  template <Scalar T>
  static T evaluate(const BertrandRule& r, std::span<const int> s, int i) {
    int lowest = *std::min_element(s.begin(), s.end());
    if (s[static_cast<std::size_t>(i)] != lowest) return from_int<T>(0);
    long long ties = std::count(s.begin(), s.end(), lowest);
    T u = from_int<T>(r.low + lowest);
    u /= from_int<T>(ties);
    return u;
  }

  template <Scalar T>
  static T evaluate(const TravelersDilemmaRule& r, std::span<const int> s, int i) {
    int mine = s[static_cast<std::size_t>(i)];
    int theirs = s[static_cast<std::size_t>(1 - i)];
    T lower = from_int<T>(r.low + std::min(mine, theirs));
    if (mine < theirs) lower += r.bonus.as<T>();
    if (mine > theirs) lower -= r.bonus.as<T>();
    return lower;
  }

  template <Scalar T>
  T evaluate(const PayoffTableRule& r, std::span<const int> s, int i) const {
    std::uint64_t index = profile_index(counts_, s) * counts_.size() + static_cast<std::uint64_t>(i);
    return r.payoffs[index].template as<T>();
  }

  Rule rule_;
  std::vector<int> counts_;
};

/// Profile with player `i`'s entry replaced.
inline Profile with_strategy(Profile profile, int player, int strategy) {
  profile[static_cast<std::size_t>(player)] = strategy;
  return profile;
}

}  // namespace translucent
