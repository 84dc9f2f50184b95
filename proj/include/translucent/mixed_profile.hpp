#pragma once

// Mixed strategy profiles and the product distributions they induce.

#include <string>
#include <utility>
#include <vector>

#include "translucent/dilemmas.hpp"

namespace translucent {

template <Scalar T>
struct MixedProfile {
  std::vector<std::vector<T>> probs;  // probs[i][s]

  int num_players() const { return static_cast<int>(probs.size()); }

  bool in_support(int player, int strategy) const {
    return probs[static_cast<std::size_t>(player)][static_cast<std::size_t>(strategy)] > from_int<T>(0);
  }

  std::vector<int> support(int player) const {
    std::vector<int> out;
    const auto& row = probs[static_cast<std::size_t>(player)];
    for (std::size_t s = 0; s < row.size(); ++s) {
      if (row[s] > from_int<T>(0)) out.push_back(static_cast<int>(s));
    }
    return out;
  }

  bool profile_in_support(std::span<const int> profile) const {
    for (int i = 0; i < num_players(); ++i) {
      if (!in_support(i, profile[static_cast<std::size_t>(i)])) return false;
    }
    return true;
  }
};

template <Scalar T>
void check_mixed_profile(const Game& game, const MixedProfile<T>& sigma) {
  if (sigma.num_players() != game.num_players()) throw InputError("mixed profile: wrong player count");
  for (int i = 0; i < game.num_players(); ++i) {
    const auto& row = sigma.probs[static_cast<std::size_t>(i)];
    if (static_cast<int>(row.size()) != game.num_strategies(i)) {
      throw InputError("mixed profile: wrong strategy count for player " + std::to_string(i));
    }
    T total = from_int<T>(0);
    for (const T& p : row) {
      if (p < from_int<T>(0)) throw InputError("mixed profile: negative probability");
      total += p;
    }
    if (!weakly_greater(total, from_int<T>(1)) || !weakly_greater(from_int<T>(1), total)) {
      throw InputError("mixed profile: player " + std::to_string(i) + " probabilities do not sum to 1");
    }
  }
}

template <Scalar T>
MixedProfile<T> pure_profile(const Game& game, std::span<const int> profile) {
  MixedProfile<T> sigma;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<T> row(static_cast<std::size_t>(game.num_strategies(i)), from_int<T>(0));
    row.at(static_cast<std::size_t>(profile[static_cast<std::size_t>(i)])) = from_int<T>(1);
    sigma.probs.push_back(std::move(row));
  }
  return sigma;
}

/// beta_i on player i's cooperate strategy, the rest on defect.
template <Scalar T>
MixedProfile<T> two_point_profile(const SocialDilemma& d, const std::vector<T>& betas) {
  if (static_cast<int>(betas.size()) != d.num_players()) throw InputError("need one beta per player");
  MixedProfile<T> sigma;
  for (int i = 0; i < d.num_players(); ++i) {
    const T& beta = betas[static_cast<std::size_t>(i)];
    if (beta < from_int<T>(0) || beta > from_int<T>(1)) throw InputError("beta must lie in [0,1]");
    std::vector<T> row(static_cast<std::size_t>(d.game.num_strategies(i)), from_int<T>(0));
    row[static_cast<std::size_t>(d.cooperate(i))] += beta;
    row[static_cast<std::size_t>(d.defect(i))] += from_int<T>(1) - beta;
    sigma.probs.push_back(std::move(row));
  }
  return sigma;
}

/// sigma_{-i} as a list of (profile, probability). Player i's slot holds 0.
template <Scalar T>
std::vector<std::pair<Profile, T>> others_distribution(const MixedProfile<T>& sigma, int i,
                                                       std::uint64_t budget = kDefaultBudget) {
  const int n = sigma.num_players();
  std::vector<std::vector<int>> supports;
  std::vector<int> sizes;
  for (int j = 0; j < n; ++j) {
    supports.push_back(j == i ? std::vector<int>{0} : sigma.support(j));
    sizes.push_back(static_cast<int>(supports.back().size()));
  }
  std::uint64_t count = saturating_product(sizes);
  if (count > budget) throw BudgetExceeded("support enumeration", count, budget);
  std::vector<std::pair<Profile, T>> out;
  for_each_profile(sizes, [&](const Profile& pick) {
    Profile profile(static_cast<std::size_t>(n), 0);
    T p = from_int<T>(1);
    for (int j = 0; j < n; ++j) {
      profile[static_cast<std::size_t>(j)] = supports[static_cast<std::size_t>(j)][static_cast<std::size_t>(pick[static_cast<std::size_t>(j)])];
      if (j != i) p *= sigma.probs[static_cast<std::size_t>(j)][static_cast<std::size_t>(profile[static_cast<std::size_t>(j)])];
    }
    out.emplace_back(std::move(profile), std::move(p));
  });
  return out;
}

/// u_i(s_i, sigma_{-i}).
template <Scalar T>
T payoff_against(const Game& game, int i, int own, const MixedProfile<T>& sigma,
                 std::uint64_t budget = kDefaultBudget) {
  T total = from_int<T>(0);
  for (auto& [profile, p] : others_distribution(sigma, i, budget)) {
    profile[static_cast<std::size_t>(i)] = own;
    total += p * game.payoff<T>(profile, i);
  }
  return total;
}

}  // namespace translucent
