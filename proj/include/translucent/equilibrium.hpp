#pragma once

// Coherence, translucent equilibrium, and the per-game conditions for
// two-point profiles beta_i * cooperate + (1 - beta_i) * defect.

#include <optional>
#include <vector>

#include "translucent/closed_form.hpp"
#include "translucent/counterfactual.hpp"

namespace translucent {

namespace detail {

/// min over s_-i of u_i(own, s_-i). Symmetric games only visit sorted
/// tuples of the others' strategies.
template <Scalar T>
T min_payoff_over_others(const Game& game, int i, int own, std::uint64_t budget) {
  const int n = game.num_players();
  std::optional<T> best;
  auto visit = [&](const Profile& profile) {
    T value = game.payoff<T>(profile, i);
    if (!best || value < *best) best = value;
  };
  if (game.symmetric()) {
    const int k = game.num_strategies(i);
    // Number of multisets of size n-1 from k strategies, capped.
    std::uint64_t count = 1;
    for (int r = 1; r <= n - 1 && count <= budget; ++r) {
      count = count * static_cast<std::uint64_t>(k + r - 1) / static_cast<std::uint64_t>(r);
    }
    if (count > budget) throw BudgetExceeded("punishment search", count, budget);
    std::vector<int> tuple(static_cast<std::size_t>(n - 1), 0);
    Profile profile(static_cast<std::size_t>(n), 0);
    while (true) {
      for (int idx = 0, j = 0; j < n; ++j) {
        profile[static_cast<std::size_t>(j)] = j == i ? own : tuple[static_cast<std::size_t>(idx++)];
      }
      visit(profile);
      int pos = n - 2;
      while (pos >= 0 && tuple[static_cast<std::size_t>(pos)] == k - 1) --pos;
      if (pos < 0) break;
      int next = tuple[static_cast<std::size_t>(pos)] + 1;
      for (int q = pos; q < n - 1; ++q) tuple[static_cast<std::size_t>(q)] = next;
    }
    return *best;
  }
  std::vector<int> counts(game.strategy_counts().begin(), game.strategy_counts().end());
  counts[static_cast<std::size_t>(i)] = 1;
  std::uint64_t total = saturating_product(counts);
  if (total > budget) throw BudgetExceeded("punishment search", total, budget);
  for_each_profile(counts, [&](const Profile& p) { visit(with_strategy(p, i, own)); });
  return *best;
}

}  // namespace detail

struct CoherenceResult {
  bool coherent = true;
  std::optional<CoherenceWitness> witness;
};

/// sigma is coherent iff for every player i, every s_i in supp(sigma_i) and
/// every s'_i there is some s'_-i with u_i(s_i, sigma_-i) >= u_i(s'_i, s'_-i).
template <Scalar T>
CoherenceResult is_coherent(const Game& game, const MixedProfile<T>& sigma, std::uint64_t budget = kDefaultBudget) {
  check_mixed_profile(game, sigma);
  CoherenceResult result;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<T> worst;
    for (int dev = 0; dev < game.num_strategies(i); ++dev) {
      worst.push_back(detail::min_payoff_over_others<T>(game, i, dev, budget));
    }
    for (int own : sigma.support(i)) {
      T value = payoff_against(game, i, own, sigma, budget);
      for (int dev = 0; dev < game.num_strategies(i); ++dev) {
        if (dev == own) continue;
        if (!weakly_greater(value, worst[static_cast<std::size_t>(dev)])) {
          return {false, CoherenceWitness{i, own, dev}};
        }
      }
    }
  }
  return result;
}

struct TranslucentEquilibriumResult {
  bool equilibrium = false;
  std::optional<CoherenceWitness> witness;
  bool structure_checked = false;
  bool structure_agrees = true;
  std::vector<Violation> structure_failures;
};

/// Decided by coherence. With verify_structure, the structure from the
/// coherence proof is also built and checked against TE1-TE4 on supp(sigma).
template <Scalar T>
TranslucentEquilibriumResult is_translucent_equilibrium(const Game& game, const MixedProfile<T>& sigma,
                                                        bool verify_structure = false,
                                                        std::uint64_t budget = kDefaultBudget) {
  TranslucentEquilibriumResult out;
  auto coherence = is_coherent(game, sigma, budget);
  out.equilibrium = coherence.coherent;
  out.witness = coherence.witness;
  if (verify_structure) {
    auto m = build_coherent_structure(game, sigma, true, budget);
    auto violations = validate_structure(m);
    auto te = check_translucent_equilibrium(m, game, sigma, support_states(m, sigma), budget);
    out.structure_checked = true;
    out.structure_failures = violations;
    out.structure_failures.insert(out.structure_failures.end(), te.failures.begin(), te.failures.end());
    out.structure_agrees = violations.empty() && te.holds == out.equilibrium;
  }
  return out;
}

/// sum over J subset of the others of
/// prod_{j not in J} gamma_j prod_{j in J} (1 - gamma_j) / (|J| + 1).
template <Scalar T>
T generalized_f(const std::vector<T>& gammas, std::uint64_t budget = kDefaultBudget) {
  const int others = static_cast<int>(gammas.size());
  if (others < 1) throw InputError("generalized f: need at least one other player");
  for (const T& g : gammas) {
    if (g < from_int<T>(0) || g > from_int<T>(1)) throw InputError("generalized f: gamma must lie in [0,1]");
  }
  if (others > 40 || (std::uint64_t{1} << others) > budget) {
    throw BudgetExceeded("generalized f", others > 40 ? std::uint64_t{1} << 62 : std::uint64_t{1} << others, budget);
  }
  T total = from_int<T>(0);
  for (std::uint64_t J = 0; J < (std::uint64_t{1} << others); ++J) {
    T term = from_int<T>(1);
    for (int k = 0; k < others; ++k) {
      const T& g = gammas[static_cast<std::size_t>(k)];
      if ((J >> k) & 1U) {
        T miss = from_int<T>(1) - g;
        term *= miss;
      } else {
        term *= g;
      }
    }
    term /= from_int<T>(__builtin_popcountll(J) + 1);
    total += term;
  }
  return total;
}

namespace detail {

template <Scalar T>
void check_betas(const DilemmaParams& p, const std::vector<T>& values, const char* what) {
  if (static_cast<int>(values.size()) != p.num_players()) {
    throw InputError(std::string("need one ") + what + " per player");
  }
  for (const T& v : values) {
    if (v < from_int<T>(0) || v > from_int<T>(1)) throw InputError(std::string(what) + " must lie in [0,1]");
  }
}

template <Scalar T>
std::vector<T> others_of(const std::vector<T>& values, int i) {
  std::vector<T> out;
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (static_cast<int>(j) != i) out.push_back(values[j]);
  }
  return out;
}

template <Scalar T>
T sum_of(const std::vector<T>& values) {
  T total = from_int<T>(0);
  for (const T& v : values) total += v;
  return total;
}

template <Scalar T>
T product_of(const std::vector<T>& values) {
  T total = from_int<T>(1);
  for (const T& v : values) total *= v;
  return total;
}

}  // namespace detail

/// Two-point profile is a translucent equilibrium (no type restriction) iff
/// every player i with beta_i > 0 satisfies
///   pd:       beta_-i b >= c
///   td:       bonus (1 - beta_-i) <= (H - L) beta_-i
///   pgg:      rho sum_{j != i} beta_j >= 1 - rho
///   bertrand: prod_{j != i} beta_j >= L / H
/// The all-zero profile is the Nash equilibrium and always qualifies.
template <Scalar T>
bool te_condition(const DilemmaParams& p, const std::vector<T>& betas) {
  check_closed_form_params(p);
  detail::check_betas(p, betas, "beta");
  const int n = p.num_players();
  for (int i = 0; i < n; ++i) {
    if (betas[static_cast<std::size_t>(i)] == from_int<T>(0)) continue;
    auto rest = detail::others_of(betas, i);
    bool ok = true;
    switch (p.kind) {
      case DilemmaKind::kPrisonersDilemma:
        ok = weakly_greater(T(rest[0] * p.b.as<T>()), p.c.as<T>());
        break;
      case DilemmaKind::kTravelersDilemma: {
        T lhs = from_int<T>(p.h - p.l) * rest[0];
        T rhs = p.bonus.as<T>() * (from_int<T>(1) - rest[0]);
        ok = weakly_greater(lhs, rhs);
        break;
      }
      case DilemmaKind::kPublicGoods: {
        T lhs = p.rho.as<T>() * detail::sum_of(rest);
        ok = weakly_greater(lhs, T(from_int<T>(1) - p.rho.as<T>()));
        break;
      }
      case DilemmaKind::kBertrand: {
        T lhs = detail::product_of(rest) * from_int<T>(p.h);
        ok = weakly_greater(lhs, from_int<T>(p.l));
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

struct TypedTeVerdict {
  std::optional<bool> verdict;  // unset for pgg, where two readings are reported
  bool printed = false;         // the condition as printed; for pgg the mean reading
  std::optional<bool> scaled;   // pgg only: the (N-1)-scaled reading
};

/// Translucent equilibrium in a structure where player i has type alpha_i:
/// every player i with beta_i > 0 must find cooperation rational against
/// the others' beta_-i under detection probability alpha_i.
///   pd:       alpha_i beta_-i b >= c
///   td:       the bonus cap of cooperation_condition at (alpha_i, beta_-i)
///   pgg:      alpha_i rho sum_{j != i} beta_j >= 1 - rho        (scaled)
///             alpha_i rho mean_{j != i} beta_j >= 1 - rho       (mean)
///   bertrand: prod_{j != i} beta_j >= (N/H) max(L g, prod gamma_j (H-1)),
///             gamma_j = (1 - alpha_i) beta_j, g = generalized_f(gamma)
template <Scalar T>
TypedTeVerdict te_condition_typed(const DilemmaParams& p, const std::vector<T>& alphas, const std::vector<T>& betas,
                                  std::uint64_t budget = kDefaultBudget) {
  check_closed_form_params(p);
  detail::check_betas(p, alphas, "alpha");
  detail::check_betas(p, betas, "beta");
  const int n = p.num_players();
  const T one = from_int<T>(1);
  bool verdict = true;
  bool printed = true;
  bool scaled = true;
  for (int i = 0; i < n; ++i) {
    if (betas[static_cast<std::size_t>(i)] == from_int<T>(0)) continue;
    const T& alpha = alphas[static_cast<std::size_t>(i)];
    auto rest = detail::others_of(betas, i);
    switch (p.kind) {
      case DilemmaKind::kPrisonersDilemma:
      case DilemmaKind::kTravelersDilemma: {
        bool ok = cooperation_condition(p, alpha, rest[0]).rational;
        verdict = verdict && ok;
        printed = printed && printed_cooperation_condition(p, alpha, rest[0]).rational;
        break;
      }
      case DilemmaKind::kPublicGoods: {
        T total = detail::sum_of(rest);
        T lhs_scaled = alpha * p.rho.as<T>() * total;
        T lhs_mean = lhs_scaled / from_int<T>(n - 1);
        T rhs = one - p.rho.as<T>();
        scaled = scaled && weakly_greater(lhs_scaled, rhs);
        printed = printed && weakly_greater(lhs_mean, rhs);
        break;
      }
      case DilemmaKind::kBertrand: {
        std::vector<T> gammas;
        for (const T& b : rest) gammas.push_back((one - alpha) * b);
        T g = generalized_f(gammas, budget);
        T binding = detail::product_of(rest);
        T floor_term = from_int<T>(p.l) * g;
        T best = floor_term;
        if (p.h - 1 > p.l) {
          T undercut = detail::product_of(gammas) * from_int<T>(p.h - 1);
          if (undercut > best) best = undercut;
        }
        T scale = from_int<T>(n);
        scale /= from_int<T>(p.h);
        verdict = verdict && weakly_greater(binding, T(scale * best));
        printed = printed && weakly_greater(binding, T(scale * floor_term));
        break;
      }
    }
  }
  TypedTeVerdict out;
  out.printed = printed;
  if (p.kind == DilemmaKind::kPublicGoods) {
    out.scaled = scaled;
  } else {
    out.verdict = verdict;
  }
  return out;
}

/// Typed-structure oracle: builds the detection-bit structure with the given
/// alphas and checks TE1-TE4 on the states whose profile is in the support.
/// Deviations away from a non-cooperative strategy are punished outright,
/// which the type leaves unconstrained.
template <Scalar T>
bool typed_structure_equilibrium(const SocialDilemma& d, const std::vector<T>& alphas, const std::vector<T>& betas,
                                 std::uint64_t budget = kDefaultBudget) {
  auto sigma = two_point_profile(d, betas);
  auto m = build_typed_structure(d, sigma, alphas, TypedSwitch::kPunishOthers, budget);
  return check_translucent_equilibrium(m, d.game, sigma, support_states(m, sigma), budget).holds;
}

}  // namespace translucent
