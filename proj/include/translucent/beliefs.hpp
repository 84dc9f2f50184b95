#pragma once

// Beliefs of a type (alpha, beta, C) player and the brute-force engine that
// decides whether cooperating is a best response to them.
//
// On the equilibrium path each other player independently cooperates with
// probability beta. If the player deviates, each other player independently
// notices with probability alpha and then defects; the resulting mixture over
// "who noticed" collapses to a product model with cooperation probability
// (1 - alpha) * beta per player.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "translucent/dilemmas.hpp"

namespace translucent {

template <Scalar T>
struct TranslucentType {
  T alpha;
  T beta;
};

template <Scalar T>
void check_type(const TranslucentType<T>& t) {
  auto in_unit = [](const T& x) { return x >= from_int<T>(0) && x <= from_int<T>(1); };
  if (!in_unit(t.alpha)) throw InputError("alpha must lie in [0,1]");
  if (!in_unit(t.beta)) throw InputError("beta must lie in [0,1]");
}

inline TranslucentType<double> to_double(const TranslucentType<Rational>& t) {
  return {to_double(t.alpha), to_double(t.beta)};
}

/// Independent cooperate/defect model of the other players.
///
/// Patterns over the others are bit masks: bit k set means the k-th other
/// player (in increasing player order, skipping the focal player) cooperates.
template <Scalar T>
struct OthersBehaviorModel {
  int focal_player = 0;
  std::vector<T> cooperate;

  int num_others() const { return static_cast<int>(cooperate.size()); }

  T probability(std::uint64_t pattern) const {
    T p = from_int<T>(1);
    for (int k = 0; k < num_others(); ++k) {
      const T& q = cooperate[static_cast<std::size_t>(k)];
      if ((pattern >> k) & 1U) {
        p *= q;
      } else {
        T complement = from_int<T>(1) - q;
        p *= complement;
      }
    }
    return p;
  }

  std::vector<T> distribution() const {
    std::vector<T> out(std::uint64_t{1} << num_others());
    for (std::uint64_t m = 0; m < out.size(); ++m) out[m] = probability(m);
    return out;
  }
};

template <Scalar T>
OthersBehaviorModel<T> on_path_beliefs(const TranslucentType<T>& t, int n, int focal = 0) {
  check_type(t);
  if (n < 2) throw InputError("need at least 2 players");
  return {focal, std::vector<T>(static_cast<std::size_t>(n - 1), t.beta)};
}

/// The detection mixture sum_J alpha^|J| (1-alpha)^(n-1-|J|) mu^J written out
/// by explicit subset enumeration. mu^J makes every player in J defect and
/// lets each remaining other player cooperate with probability beta.
template <Scalar T>
std::vector<T> deviation_mixture_distribution(const TranslucentType<T>& t, int n,
                                              std::uint64_t budget = kDefaultBudget) {
  check_type(t);
  if (n < 2) throw InputError("need at least 2 players");
  if (n - 1 > 30) throw BudgetExceeded("deviation mixture", std::uint64_t{1} << 62, budget);
  const int others = n - 1;
  const std::uint64_t patterns = std::uint64_t{1} << others;
  if (patterns * patterns > budget) {
    throw BudgetExceeded("deviation mixture subset enumeration", patterns * patterns, budget);
  }
  const T one = from_int<T>(1);
  const T not_alpha = one - t.alpha;
  const T not_beta = one - t.beta;
  std::vector<T> mixture(patterns, from_int<T>(0));
  for (std::uint64_t noticed = 0; noticed < patterns; ++noticed) {
    int j_size = __builtin_popcountll(noticed);
    T weight = ipow(t.alpha, j_size) * ipow(not_alpha, others - j_size);
    for (std::uint64_t pattern = 0; pattern < patterns; ++pattern) {
      if (pattern & noticed) continue;  // a player who noticed never cooperates
      int k = __builtin_popcountll(pattern);
      T mass = ipow(t.beta, k) * ipow(not_beta, others - j_size - k);
      mixture[pattern] += weight * mass;
    }
  }
  return mixture;
}

/// Post-deviation beliefs. For n - 1 small enough to enumerate, the subset
/// mixture is computed and checked against the product form before the
/// product model is returned.
template <Scalar T>
OthersBehaviorModel<T> deviation_belief_mixture(const TranslucentType<T>& t, int n, int focal = 0,
                                                std::uint64_t budget = kDefaultBudget) {
  check_type(t);
  if (n < 2) throw InputError("need at least 2 players");
  T gamma = (from_int<T>(1) - t.alpha) * t.beta;
  OthersBehaviorModel<T> product{focal, std::vector<T>(static_cast<std::size_t>(n - 1), gamma)};
  const std::uint64_t patterns = n - 1 <= 30 ? std::uint64_t{1} << (n - 1) : 0;
  if (patterns != 0 && patterns * patterns <= budget) {
    std::vector<T> mixture = deviation_mixture_distribution(t, n, budget);
    for (std::uint64_t m = 0; m < patterns; ++m) {
      T diff = abs_value(T(mixture[m] - product.probability(m)));
      bool mismatch = false;
      if constexpr (std::is_same_v<T, double>) {
        mismatch = diff > 1e-12;
      } else {
        mismatch = diff != 0;
      }
      if (mismatch) {
        throw std::logic_error("detection mixture disagrees with product form");
      }
    }
  }
  return product;
}

enum class Aggregation {
  kAuto,       // binomial when the game is symmetric and probabilities are equal
  kBinomial,   // sum over the number of cooperating others
  kEnumerate,  // sum over all 2^(n-1) cooperate/defect patterns
};

/// Expected payoff to player i for playing `own` when every other player j
/// independently plays their cooperate strategy with probability coop[j]
/// and their defect strategy otherwise.
template <Scalar T>
T expected_payoff_two_point(const SocialDilemma& d, int i, int own,
                            const OthersBehaviorModel<T>& model,
                            Aggregation aggregation = Aggregation::kAuto) {
  const int n = d.num_players();
  if (model.num_others() != n - 1) throw InputError("belief model has wrong player count");
  bool homogeneous = true;
  for (const T& q : model.cooperate) homogeneous = homogeneous && q == model.cooperate.front();
  if (aggregation == Aggregation::kAuto) {
    aggregation = homogeneous && d.game.symmetric() ? Aggregation::kBinomial : Aggregation::kEnumerate;
  }
  if (aggregation == Aggregation::kBinomial && !(homogeneous && d.game.symmetric())) {
    throw InputError("binomial aggregation needs a symmetric game and equal probabilities");
  }

  std::vector<int> others;
  for (int j = 0; j < n; ++j) {
    if (j != i) others.push_back(j);
  }
  Profile profile(static_cast<std::size_t>(n));
  profile[static_cast<std::size_t>(i)] = own;
  T total = from_int<T>(0);

  if (aggregation == Aggregation::kBinomial) {
    const T& q = model.cooperate.front();
    const T not_q = from_int<T>(1) - q;
    T binom = from_int<T>(1);
    for (int k = 0; k <= n - 1; ++k) {
      if (k > 0) {
        binom *= from_int<T>(n - k);
        binom /= from_int<T>(k);
      }
      for (int idx = 0; idx < n - 1; ++idx) {
        int j = others[static_cast<std::size_t>(idx)];
        profile[static_cast<std::size_t>(j)] = idx < k ? d.cooperate(j) : d.defect(j);
      }
      T weight = binom * ipow(q, k) * ipow(not_q, n - 1 - k);
      if (weight == from_int<T>(0)) continue;
      total += weight * d.game.payoff<T>(profile, i);
    }
    return total;
  }

  if (n - 1 > 30) throw BudgetExceeded("pattern enumeration", std::uint64_t{1} << 62, 0);
  const std::uint64_t patterns = std::uint64_t{1} << (n - 1);
  for (std::uint64_t m = 0; m < patterns; ++m) {
    T weight = model.probability(m);
    if (weight == from_int<T>(0)) continue;
    for (int idx = 0; idx < n - 1; ++idx) {
      int j = others[static_cast<std::size_t>(idx)];
      profile[static_cast<std::size_t>(j)] = ((m >> idx) & 1U) ? d.cooperate(j) : d.defect(j);
    }
    total += weight * d.game.payoff<T>(profile, i);
  }
  return total;
}

template <Scalar T>
T expected_utility_cooperate(const SocialDilemma& d, int i, const TranslucentType<T>& t,
                             Aggregation aggregation = Aggregation::kAuto) {
  auto model = on_path_beliefs(t, d.num_players(), i);
  return expected_payoff_two_point(d, i, d.cooperate(i), model, aggregation);
}

/// Expected payoff of deviating to `deviation` under post-deviation beliefs.
/// Not deviating keeps the on-path beliefs.
template <Scalar T>
T expected_utility_deviation(const SocialDilemma& d, int i, const TranslucentType<T>& t,
                             int deviation, Aggregation aggregation = Aggregation::kAuto) {
  if (deviation < 0 || deviation >= d.game.num_strategies(i)) {
    throw InputError("deviation strategy out of range");
  }
  if (deviation == d.cooperate(i)) return expected_utility_cooperate(d, i, t, aggregation);
  check_type(t);
  T gamma = (from_int<T>(1) - t.alpha) * t.beta;
  OthersBehaviorModel<T> model{i, std::vector<T>(static_cast<std::size_t>(d.num_players() - 1), gamma)};
  return expected_payoff_two_point(d, i, deviation, model, aggregation);
}

template <Scalar T>
struct CooperationCheck {
  bool verdict = false;
  int best_deviation = -1;
  T eu_coop{};
  T eu_best_deviation{};
  bool exact = false;  // decided in rational arithmetic
};

/// Cooperation is rational iff its expected utility weakly exceeds that of
/// every other strategy in S_i evaluated under post-deviation beliefs. Ties
/// report the first deviation (in strategy order) reaching the maximum.
template <Scalar T>
CooperationCheck<T> is_cooperation_rational(const SocialDilemma& d, int i, const TranslucentType<T>& t,
                                            std::uint64_t budget = kDefaultBudget,
                                            Aggregation aggregation = Aggregation::kAuto) {
  check_type(t);
  const int strategies = d.game.num_strategies(i);
  const std::uint64_t work = static_cast<std::uint64_t>(strategies) * static_cast<std::uint64_t>(d.num_players());
  if (work > budget) throw BudgetExceeded("is_cooperation_rational", work, budget);

  CooperationCheck<T> out;
  out.exact = std::is_same_v<T, Rational>;
  out.eu_coop = expected_utility_cooperate(d, i, t, aggregation);
  bool have_best = false;
  for (int s = 0; s < strategies; ++s) {
    if (s == d.cooperate(i)) continue;
    T eu = expected_utility_deviation(d, i, t, s, aggregation);
    if (!have_best || eu > out.eu_best_deviation) {
      out.eu_best_deviation = eu;
      out.best_deviation = s;
      have_best = true;
    }
  }
  out.verdict = !have_best || weakly_greater(out.eu_coop, out.eu_best_deviation);
  return out;
}

/// Decides in double and re-decides in exact arithmetic when the margin is
/// too small to trust.
inline CooperationCheck<double> is_cooperation_rational_exact(const SocialDilemma& d, int i,
                                                              const TranslucentType<Rational>& t,
                                                              std::uint64_t budget = kDefaultBudget) {
  auto fast = is_cooperation_rational(d, i, to_double(t), budget);
  if (!near_tie(fast.eu_coop, fast.eu_best_deviation)) {
    fast.verdict = fast.eu_coop > fast.eu_best_deviation;
    return fast;
  }
  auto exact = is_cooperation_rational(d, i, t, budget);
  return {exact.verdict, exact.best_deviation, to_double(exact.eu_coop), to_double(exact.eu_best_deviation), true};
}

/// Standard best response: `own` is a best response to a fixed distribution
/// over the others' cooperate/defect patterns, with beliefs unchanged by a
/// deviation.
template <Scalar T>
bool is_standard_best_response(const SocialDilemma& d, int i, int own, const OthersBehaviorModel<T>& model) {
  T eu_own = expected_payoff_two_point(d, i, own, model, Aggregation::kEnumerate);
  for (int s = 0; s < d.game.num_strategies(i); ++s) {
    if (!weakly_greater(eu_own, expected_payoff_two_point(d, i, s, model, Aggregation::kEnumerate))) {
      return false;
    }
  }
  return true;
}

}  // namespace translucent
