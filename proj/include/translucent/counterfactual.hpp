#pragma once

// Finite counterfactual structures (Omega, s, f, PR_1..PR_N).
//
// f(w, i, s') is the state that would result if player i switched to s' at
// w. Beliefs are stored as sparse rows sorted by state index; the structures
// built here have thousands of states but each row touches only a few.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "translucent/mixed_profile.hpp"

namespace translucent {

template <Scalar T>
using BeliefRow = std::vector<std::pair<int, T>>;

template <Scalar T>
struct CounterfactualStructure {
  std::vector<int> strategy_counts;
  std::vector<Profile> profiles;                      // s(w)
  std::vector<std::vector<int>> aux;                  // extra state bits, possibly empty
  std::vector<std::vector<std::vector<int>>> closest; // closest[w][i][s]
  std::vector<std::vector<BeliefRow<T>>> beliefs;     // beliefs[i][w]

  int num_players() const { return static_cast<int>(strategy_counts.size()); }
  int num_states() const { return static_cast<int>(profiles.size()); }
  int strategy(int state, int player) const {
    return profiles[static_cast<std::size_t>(state)][static_cast<std::size_t>(player)];
  }
  const BeliefRow<T>& belief(int player, int state) const {
    return beliefs[static_cast<std::size_t>(player)][static_cast<std::size_t>(state)];
  }
  int closest_state(int state, int player, int s) const {
    return closest[static_cast<std::size_t>(state)][static_cast<std::size_t>(player)][static_cast<std::size_t>(s)];
  }
};

/// Sorts by state and merges duplicate entries. Zero entries are dropped.
template <Scalar T>
BeliefRow<T> normalize_row(BeliefRow<T> row) {
  std::sort(row.begin(), row.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  BeliefRow<T> out;
  for (auto& [state, p] : row) {
    if (!out.empty() && out.back().first == state) {
      out.back().second += p;
    } else {
      out.emplace_back(state, std::move(p));
    }
  }
  std::erase_if(out, [](const auto& e) { return e.second == from_int<T>(0); });
  return out;
}

template <Scalar T>
bool rows_equal(const BeliefRow<T>& a, const BeliefRow<T>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].first != b[k].first) return false;
    if constexpr (std::same_as<T, double>) {
      if (std::fabs(a[k].second - b[k].second) > 1e-12) return false;
    } else {
      if (a[k].second != b[k].second) return false;
    }
  }
  return true;
}

struct Violation {
  std::string axiom;
  int state = -1;
  int player = -1;
  std::string detail;

  std::string to_string() const {
    std::string out = axiom;
    if (state >= 0) out += " state=" + std::to_string(state);
    if (player >= 0) out += " player=" + std::to_string(player);
    if (!detail.empty()) out += ": " + detail;
    return out;
  }
};

/// Checks shape, CS1, CS2, PR1, PR2 and normalization. An empty list means
/// the structure is valid.
template <Scalar T>
std::vector<Violation> validate_structure(const CounterfactualStructure<T>& m) {
  std::vector<Violation> out;
  const int n = m.num_players();
  const int states = m.num_states();
  if (n < 2) out.push_back({"shape", -1, -1, "need at least 2 players"});
  if (states == 0) out.push_back({"shape", -1, -1, "no states"});
  if (!out.empty()) return out;

  bool shape_ok = true;
  for (int w = 0; w < states; ++w) {
    const auto& profile = m.profiles[static_cast<std::size_t>(w)];
    if (static_cast<int>(profile.size()) != n) {
      out.push_back({"shape", w, -1, "profile has wrong length"});
      shape_ok = false;
      continue;
    }
    for (int i = 0; i < n; ++i) {
      if (profile[static_cast<std::size_t>(i)] < 0 ||
          profile[static_cast<std::size_t>(i)] >= m.strategy_counts[static_cast<std::size_t>(i)]) {
        out.push_back({"shape", w, i, "strategy out of range"});
        shape_ok = false;
      }
    }
  }
  if (static_cast<int>(m.closest.size()) != states) {
    out.push_back({"shape", -1, -1, "closest table has wrong state count"});
    shape_ok = false;
  }
  if (static_cast<int>(m.beliefs.size()) != n) {
    out.push_back({"shape", -1, -1, "beliefs have wrong player count"});
    shape_ok = false;
  }
  for (int i = 0; shape_ok && i < n; ++i) {
    if (static_cast<int>(m.beliefs[static_cast<std::size_t>(i)].size()) != states) {
      out.push_back({"shape", -1, i, "beliefs have wrong state count"});
      shape_ok = false;
    }
  }
  if (!shape_ok) return out;

  // CS1 and CS2.
  for (int w = 0; w < states; ++w) {
    const auto& row = m.closest[static_cast<std::size_t>(w)];
    if (static_cast<int>(row.size()) != n) {
      out.push_back({"shape", w, -1, "closest row has wrong player count"});
      continue;
    }
    for (int i = 0; i < n; ++i) {
      const auto& targets = row[static_cast<std::size_t>(i)];
      if (static_cast<int>(targets.size()) != m.strategy_counts[static_cast<std::size_t>(i)]) {
        out.push_back({"shape", w, i, "closest entries have wrong strategy count"});
        continue;
      }
      for (int s = 0; s < static_cast<int>(targets.size()); ++s) {
        int target = targets[static_cast<std::size_t>(s)];
        if (target < 0 || target >= states) {
          out.push_back({"CS1", w, i, "closest state for strategy " + std::to_string(s) + " is undefined"});
        } else if (m.strategy(target, i) != s) {
          out.push_back({"CS1", w, i,
                         "closest state " + std::to_string(target) + " for strategy " + std::to_string(s) +
                             " plays " + std::to_string(m.strategy(target, i))});
        }
      }
      int own = m.strategy(w, i);
      if (targets[static_cast<std::size_t>(own)] != w) {
        out.push_back({"CS2", w, i, "closest state for the current strategy is not the state itself"});
      }
    }
  }

  // Normalization, PR1 and PR2.
  for (int i = 0; i < n; ++i) {
    for (int w = 0; w < states; ++w) {
      const auto& row = m.belief(i, w);
      T total = from_int<T>(0);
      bool entries_ok = true;
      for (const auto& [target, p] : row) {
        if (target < 0 || target >= states) {
          out.push_back({"shape", w, i, "belief entry names unknown state " + std::to_string(target)});
          entries_ok = false;
        } else if (p < from_int<T>(0)) {
          out.push_back({"normalization", w, i, "negative probability"});
          entries_ok = false;
        }
        total += p;
      }
      if (!entries_ok) continue;
      bool normalized;
      if constexpr (std::same_as<T, double>) {
        normalized = std::fabs(total - 1.0) <= 1e-12;
      } else {
        normalized = total == 1;
      }
      if (!normalized) {
        out.push_back({"normalization", w, i, "beliefs sum to " + format_real(total)});
      }
      for (const auto& [target, p] : row) {
        if (p == from_int<T>(0)) continue;
        if (m.strategy(target, i) != m.strategy(w, i)) {
          out.push_back({"PR1", w, i, "positive probability on state " + std::to_string(target) +
                                          " with a different own strategy"});
          break;
        }
      }
      for (const auto& [target, p] : row) {
        if (p == from_int<T>(0)) continue;
        if (!rows_equal(m.belief(i, target), row)) {
          out.push_back({"PR2", w, i, "positive probability on state " + std::to_string(target) +
                                          " with different beliefs"});
          break;
        }
      }
    }
  }
  return out;
}

/// Pushforward of PR_i(w) through f(., i, s').
template <Scalar T>
BeliefRow<T> derived_beliefs(const CounterfactualStructure<T>& m, int i, int w, int deviation) {
  BeliefRow<T> out;
  for (const auto& [source, p] : m.belief(i, w)) out.emplace_back(m.closest_state(source, i, deviation), p);
  return normalize_row(std::move(out));
}

/// EU_i(w): expected payoff of the strategy i plays at w.
template <Scalar T>
T eu_at_state(const CounterfactualStructure<T>& m, const Game& game, int i, int w) {
  T total = from_int<T>(0);
  const int own = m.strategy(w, i);
  for (const auto& [target, p] : m.belief(i, w)) {
    Profile profile = with_strategy(m.profiles[static_cast<std::size_t>(target)], i, own);
    total += p * game.payoff<T>(profile, i);
  }
  return total;
}

/// EU_i(w, s'): expected payoff of switching to s' under derived beliefs.
template <Scalar T>
T eu_at_state_switch(const CounterfactualStructure<T>& m, const Game& game, int i, int w, int deviation) {
  T total = from_int<T>(0);
  for (const auto& [target, p] : derived_beliefs(m, i, w, deviation)) {
    Profile profile = with_strategy(m.profiles[static_cast<std::size_t>(target)], i, deviation);
    total += p * game.payoff<T>(profile, i);
  }
  return total;
}

template <Scalar T>
struct StateUtilityReport {
  T eu{};
  std::vector<std::pair<int, T>> eu_switch;  // every strategy other than the one played
  bool rational = false;
};

template <Scalar T>
StateUtilityReport<T> is_rational_at(const CounterfactualStructure<T>& m, const Game& game, int i, int w) {
  StateUtilityReport<T> report;
  report.eu = eu_at_state(m, game, i, w);
  report.rational = true;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    if (s == m.strategy(w, i)) continue;
    T value = eu_at_state_switch(m, game, i, w, s);
    if (!weakly_greater(report.eu, value)) report.rational = false;
    report.eu_switch.emplace_back(s, std::move(value));
  }
  return report;
}

struct TeReport {
  bool holds = true;
  std::vector<Violation> failures;  // axiom is "TE1".."TE4"
};

/// Checks TE1-TE4 for sigma on the state set `omega_prime`.
template <Scalar T>
TeReport check_translucent_equilibrium(const CounterfactualStructure<T>& m, const Game& game,
                                       const MixedProfile<T>& sigma, const std::vector<int>& omega_prime,
                                       std::uint64_t budget = kDefaultBudget) {
  TeReport report;
  auto fail = [&](std::string axiom, int w, int i, std::string detail) {
    report.holds = false;
    report.failures.push_back({std::move(axiom), w, i, std::move(detail)});
  };
  if (omega_prime.empty()) fail("TE1", -1, -1, "empty state set");
  std::vector<char> member(static_cast<std::size_t>(m.num_states()), 0);
  for (int w : omega_prime) member.at(static_cast<std::size_t>(w)) = 1;
  const int n = m.num_players();

  std::vector<std::map<Profile, T>> marginals(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (auto& [profile, p] : others_distribution(sigma, i, budget)) {
      marginals[static_cast<std::size_t>(i)][profile] = p;
    }
  }

  for (int w : omega_prime) {
    if (!sigma.profile_in_support(m.profiles[static_cast<std::size_t>(w)])) {
      fail("TE1", w, -1, "state profile is outside the support");
    }
    for (int i = 0; i < n; ++i) {
      std::map<Profile, T> seen;
      for (const auto& [target, p] : m.belief(i, w)) {
        if (p == from_int<T>(0)) continue;
        if (!member[static_cast<std::size_t>(target)]) {
          fail("TE2", w, i, "belief reaches state " + std::to_string(target) + " outside the set");
        }
        Profile others = with_strategy(m.profiles[static_cast<std::size_t>(target)], i, 0);
        seen[others] += p;
      }
      bool matches = seen.size() == marginals[static_cast<std::size_t>(i)].size();
      for (const auto& [others, p] : seen) {
        if (!matches) break;
        auto it = marginals[static_cast<std::size_t>(i)].find(others);
        matches = it != marginals[static_cast<std::size_t>(i)].end() && weakly_greater(p, it->second) &&
                  weakly_greater(it->second, p);
      }
      if (!matches) fail("TE3", w, i, "beliefs about the others differ from sigma_-i");
      if (!is_rational_at(m, game, i, w).rational) fail("TE4", w, i, "not rational");
    }
  }
  return report;
}

/// States whose profile lies in the support of sigma.
template <Scalar T>
std::vector<int> support_states(const CounterfactualStructure<T>& m, const MixedProfile<T>& sigma) {
  std::vector<int> out;
  for (int w = 0; w < m.num_states(); ++w) {
    if (sigma.profile_in_support(m.profiles[static_cast<std::size_t>(w)])) out.push_back(w);
  }
  return out;
}

namespace detail {

/// Omega = S, state index = profile index, with an empty belief table.
template <Scalar T>
CounterfactualStructure<T> profile_states(const Game& game, std::uint64_t budget) {
  CounterfactualStructure<T> m;
  m.strategy_counts.assign(game.strategy_counts().begin(), game.strategy_counts().end());
  std::uint64_t states = game.num_profiles();
  int widest = *std::max_element(m.strategy_counts.begin(), m.strategy_counts.end());
  std::uint64_t work = states * static_cast<std::uint64_t>(game.num_players()) * static_cast<std::uint64_t>(widest);
  if (states > budget || work > budget) throw BudgetExceeded("state space", work, budget);
  for_each_profile(m.strategy_counts, [&](const Profile& p) { m.profiles.push_back(p); });
  m.aux.assign(m.profiles.size(), {});
  m.beliefs.assign(static_cast<std::size_t>(game.num_players()), std::vector<BeliefRow<T>>(m.profiles.size()));
  return m;
}

/// PR_i(w) = s_i(w) x sigma_{-i}.
template <Scalar T>
BeliefRow<T> product_row(const CounterfactualStructure<T>& m, const std::vector<std::pair<Profile, T>>& others,
                         int i, int own) {
  BeliefRow<T> row;
  for (const auto& [profile, p] : others) {
    Profile full = with_strategy(profile, i, own);
    row.emplace_back(static_cast<int>(profile_index(m.strategy_counts, full)), p);
  }
  return normalize_row(std::move(row));
}

}  // namespace detail

/// Opaque structure for a Nash equilibrium: Omega = S, f((s_i, s_-i), i, s')
/// = (s', s_-i), and beliefs s_i x sigma_-i everywhere.
///
/// Omega is all of S rather than the support, since CS1 needs a state for
/// every unilateral switch.
template <Scalar T>
CounterfactualStructure<T> build_nash_structure(const Game& game, const MixedProfile<T>& sigma,
                                                std::uint64_t budget = kDefaultBudget) {
  check_mixed_profile(game, sigma);
  const int n = game.num_players();
  for (int i = 0; i < n; ++i) {
    std::vector<T> values;
    for (int s = 0; s < game.num_strategies(i); ++s) values.push_back(payoff_against(game, i, s, sigma, budget));
    for (int s : sigma.support(i)) {
      for (int t = 0; t < game.num_strategies(i); ++t) {
        if (!weakly_greater(values[static_cast<std::size_t>(s)], values[static_cast<std::size_t>(t)])) {
          throw InputError("not a Nash equilibrium: player " + std::to_string(i) + " gains by switching from " +
                           std::to_string(s) + " to " + std::to_string(t));
        }
      }
    }
  }

  auto m = detail::profile_states<T>(game, budget);
  for (int i = 0; i < n; ++i) {
    auto others = others_distribution(sigma, i, budget);
    std::vector<BeliefRow<T>> by_own;
    for (int s = 0; s < game.num_strategies(i); ++s) by_own.push_back(detail::product_row(m, others, i, s));
    for (int w = 0; w < m.num_states(); ++w) {
      m.beliefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] = by_own[static_cast<std::size_t>(m.strategy(w, i))];
    }
  }
  m.closest.resize(m.profiles.size());
  for (int w = 0; w < m.num_states(); ++w) {
    auto& row = m.closest[static_cast<std::size_t>(w)];
    row.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      for (int s = 0; s < game.num_strategies(i); ++s) {
        Profile target = with_strategy(m.profiles[static_cast<std::size_t>(w)], i, s);
        row[static_cast<std::size_t>(i)].push_back(static_cast<int>(profile_index(m.strategy_counts, target)));
      }
    }
  }
  return m;
}

struct CoherenceWitness {
  int player = -1;
  int strategy = -1;   // in the support
  int deviation = -1;  // no punishment makes it unprofitable
};

class IncoherentProfile : public InputError {
 public:
  explicit IncoherentProfile(CoherenceWitness w)
      : InputError("profile is not coherent: player " + std::to_string(w.player) + " strategy " +
                   std::to_string(w.strategy) + " deviation " + std::to_string(w.deviation)),
        witness_(w) {}
  const CoherenceWitness& witness() const { return witness_; }

 private:
  CoherenceWitness witness_;
};

/// Structure from the coherence proof. Omega = S. At states where player
/// i's strategy is outside supp(sigma_i), i has point beliefs and an opaque
/// closest-state function. Elsewhere i believes s_i x sigma_-i, and a switch
/// to s' lands on (s', p) for the lexicographically smallest punishment p
/// with u_i(s_i, sigma_-i) >= u_i(s', p).
///
/// With allow_incoherent, a missing punishment is replaced by the
/// lexicographically smallest minimizer of u_i(s', .) so that the TE check
/// can show the failure; otherwise IncoherentProfile is thrown.
template <Scalar T>
CounterfactualStructure<T> build_coherent_structure(const Game& game, const MixedProfile<T>& sigma,
                                                    bool allow_incoherent = false,
                                                    std::uint64_t budget = kDefaultBudget) {
  check_mixed_profile(game, sigma);
  const int n = game.num_players();
  auto m = detail::profile_states<T>(game, budget);
  m.closest.assign(m.profiles.size(), std::vector<std::vector<int>>(static_cast<std::size_t>(n)));

  for (int i = 0; i < n; ++i) {
    auto others = others_distribution(sigma, i, budget);
    std::vector<int> others_counts = m.strategy_counts;
    others_counts[static_cast<std::size_t>(i)] = 1;

    // punish[own][deviation] = profile index of (deviation, p).
    std::vector<std::vector<int>> punish(static_cast<std::size_t>(game.num_strategies(i)));
    std::vector<BeliefRow<T>> rows(static_cast<std::size_t>(game.num_strategies(i)));
    for (int own : sigma.support(i)) {
      rows[static_cast<std::size_t>(own)] = detail::product_row(m, others, i, own);
      T target_value = payoff_against(game, i, own, sigma, budget);
      auto& table = punish[static_cast<std::size_t>(own)];
      table.assign(static_cast<std::size_t>(game.num_strategies(i)), -1);
      for (int dev = 0; dev < game.num_strategies(i); ++dev) {
        if (dev == own) continue;
        std::optional<Profile> found;
        std::optional<Profile> argmin;
        std::optional<T> min_value;
        for_each_profile(others_counts, [&](const Profile& p) {
          if (found) return;
          Profile candidate = with_strategy(p, i, dev);
          T value = game.payoff<T>(candidate, i);
          if (weakly_greater(target_value, value)) {
            found = candidate;
          } else if (!min_value || value < *min_value) {
            min_value = value;
            argmin = candidate;
          }
        });
        if (!found) {
          if (!allow_incoherent) throw IncoherentProfile({i, own, dev});
          found = argmin;
        }
        table[static_cast<std::size_t>(dev)] = static_cast<int>(profile_index(m.strategy_counts, *found));
      }
    }

    for (int w = 0; w < m.num_states(); ++w) {
      const int own = m.strategy(w, i);
      auto& targets = m.closest[static_cast<std::size_t>(w)][static_cast<std::size_t>(i)];
      const bool supported = sigma.in_support(i, own);
      m.beliefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] =
          supported ? rows[static_cast<std::size_t>(own)] : BeliefRow<T>{{w, from_int<T>(1)}};
      for (int s = 0; s < game.num_strategies(i); ++s) {
        if (s == own) {
          targets.push_back(w);
        } else if (supported) {
          targets.push_back(punish[static_cast<std::size_t>(own)][static_cast<std::size_t>(s)]);
        } else {
          Profile target = with_strategy(m.profiles[static_cast<std::size_t>(w)], i, s);
          targets.push_back(static_cast<int>(profile_index(m.strategy_counts, target)));
        }
      }
    }
  }
  return m;
}

/// Detection-bit structure: Omega = S x {0,1}^N, state (s, v).
///   f((s,v), i, s*) = (s', v) with s'_i = s*, and for j != i, s'_j = s_j if
///   v_j = 0 and the Nash component of j if v_j = 1 (identity when s* = s_i).
///   PR_i(s,v)(s',v') = [s'_i = s_i, v'_i = v_i] sigma_-i(s'_-i)
///                      prod_{j != i} (alpha_i if v'_j = 1 else 1 - alpha_i).
/// Player i has type alpha_i in this structure.
///
/// For two players and the prisoner's dilemma this is the 16-state structure
/// of the typed analysis. Other games and player counts are an extension
/// used to cross-check the belief model.
///
/// The type only pins down what happens when a cooperator deviates. With
/// TypedSwitch::kPunishOthers, a deviation by i from any other strategy sends
/// every other player to the Nash component regardless of v.
enum class TypedSwitch { kDetection, kPunishOthers };

template <Scalar T>
CounterfactualStructure<T> build_typed_structure(const SocialDilemma& d, const MixedProfile<T>& sigma,
                                                 const std::vector<T>& alphas,
                                                 TypedSwitch mode = TypedSwitch::kDetection,
                                                 std::uint64_t budget = kDefaultBudget) {
  const Game& game = d.game;
  check_mixed_profile(game, sigma);
  const int n = game.num_players();
  if (static_cast<int>(alphas.size()) != n) throw InputError("need one alpha per player");
  for (const T& a : alphas) {
    if (a < from_int<T>(0) || a > from_int<T>(1)) throw InputError("alpha must lie in [0,1]");
  }
  if (n > 20) throw BudgetExceeded("typed structure", std::uint64_t{1} << 62, budget);
  const std::uint64_t bits = std::uint64_t{1} << n;
  const std::uint64_t profiles = game.num_profiles();
  if (profiles > budget / bits) throw BudgetExceeded("typed structure", profiles * bits, budget);

  CounterfactualStructure<T> m;
  m.strategy_counts.assign(game.strategy_counts().begin(), game.strategy_counts().end());
  for_each_profile(m.strategy_counts, [&](const Profile& p) {
    for (std::uint64_t v = 0; v < bits; ++v) {
      m.profiles.push_back(p);
      std::vector<int> aux(static_cast<std::size_t>(n));
      for (int j = 0; j < n; ++j) aux[static_cast<std::size_t>(j)] = static_cast<int>((v >> j) & 1U);
      m.aux.push_back(std::move(aux));
    }
  });
  auto state_of = [&](const Profile& p, std::uint64_t v) {
    return static_cast<int>(profile_index(m.strategy_counts, p) * bits + v);
  };

  m.closest.resize(m.profiles.size());
  for (int w = 0; w < m.num_states(); ++w) {
    const Profile& s = m.profiles[static_cast<std::size_t>(w)];
    const std::uint64_t v = static_cast<std::uint64_t>(w) % bits;
    auto& row = m.closest[static_cast<std::size_t>(w)];
    row.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const bool punish = mode == TypedSwitch::kPunishOthers && s[static_cast<std::size_t>(i)] != d.cooperate(i);
      for (int star = 0; star < game.num_strategies(i); ++star) {
        if (star == s[static_cast<std::size_t>(i)]) {
          row[static_cast<std::size_t>(i)].push_back(w);
          continue;
        }
        Profile target = s;
        target[static_cast<std::size_t>(i)] = star;
        for (int j = 0; j < n; ++j) {
          if (j != i && (punish || ((v >> j) & 1U))) target[static_cast<std::size_t>(j)] = d.defect(j);
        }
        row[static_cast<std::size_t>(i)].push_back(state_of(target, v));
      }
    }
  }

  m.beliefs.assign(static_cast<std::size_t>(n), std::vector<BeliefRow<T>>(m.profiles.size()));
  for (int i = 0; i < n; ++i) {
    auto others = others_distribution(sigma, i, budget);
    const T& alpha = alphas[static_cast<std::size_t>(i)];
    const T not_alpha = from_int<T>(1) - alpha;
    // Rows depend only on (s_i, v_i).
    std::map<std::pair<int, int>, BeliefRow<T>> cache;
    for (int w = 0; w < m.num_states(); ++w) {
      const int own = m.strategy(w, i);
      const std::uint64_t v = static_cast<std::uint64_t>(w) % bits;
      const int own_bit = static_cast<int>((v >> i) & 1U);
      auto key = std::make_pair(own, own_bit);
      auto it = cache.find(key);
      if (it == cache.end()) {
        BeliefRow<T> row;
        for (const auto& [profile, p] : others) {
          Profile full = with_strategy(profile, i, own);
          for (std::uint64_t u = 0; u < bits; ++u) {
            if (static_cast<int>((u >> i) & 1U) != own_bit) continue;
            T q = p;
            for (int j = 0; j < n; ++j) {
              if (j == i) continue;
              q *= ((u >> j) & 1U) ? alpha : not_alpha;
            }
            row.emplace_back(state_of(full, u), std::move(q));
          }
        }
        it = cache.emplace(key, normalize_row(std::move(row))).first;
      }
      m.beliefs[static_cast<std::size_t>(i)][static_cast<std::size_t>(w)] = it->second;
    }
  }
  return m;
}

template <Scalar T>
CounterfactualStructure<T> build_typed_pd_structure(const T& alpha_1, const T& alpha_2, const T& beta_1,
                                                    const T& beta_2, const Number& b, const Number& c) {
  auto d = make_prisoners_dilemma(b, c);
  return build_typed_structure(d, two_point_profile<T>(d, {beta_1, beta_2}), std::vector<T>{alpha_1, alpha_2});
}

}  // namespace translucent
