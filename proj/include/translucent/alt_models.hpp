#pragma once

// Comparison models: Fehr-Schmidt inequity aversion, Charness-Rabin social
// preferences, and the logit quantal response equilibrium.

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "translucent/mixed_profile.hpp"

namespace translucent {

template <Scalar T>
struct FehrSchmidtParams {
  std::vector<T> a;  // envy
  std::vector<T> b;  // guilt
};

template <Scalar T>
void check_params(const Game& game, const FehrSchmidtParams<T>& p) {
  const auto n = static_cast<std::size_t>(game.num_players());
  if (p.a.size() != n || p.b.size() != n) throw InputError("fehr-schmidt: need one (a, b) pair per player");
  for (std::size_t i = 0; i < n; ++i) {
    if (p.b[i] < from_int<T>(0) || p.b[i] > p.a[i]) throw InputError("fehr-schmidt: need 0 <= b_i <= a_i");
  }
}

/// u_i - a_i/(N-1) sum_j max(u_j - u_i, 0) - b_i/(N-1) sum_j max(u_i - u_j, 0).
template <Scalar T>
T fehr_schmidt_utility(const Game& game, std::span<const int> profile, int i, const FehrSchmidtParams<T>& p) {
  const int n = game.num_players();
  T own = game.payoff<T>(profile, i);
  T envy = from_int<T>(0);
  T guilt = from_int<T>(0);
  for (int j = 0; j < n; ++j) {
    if (j == i) continue;
    T diff = game.payoff<T>(profile, j) - own;
    if (diff > from_int<T>(0)) {
      envy += diff;
    } else {
      guilt -= diff;
    }
  }
  T scale = from_int<T>(n - 1);
  T out = own - p.a[static_cast<std::size_t>(i)] * envy / scale - p.b[static_cast<std::size_t>(i)] * guilt / scale;
  return out;
}

/// Full contribution x > 0 by everyone survives a unilateral cut by player
/// i iff b_i >= 1 - rho: cutting to x' saves (1 - rho)(x - x') and costs
/// b_i (x - x') in guilt.
template <Scalar T>
bool fs_pgg_full_contribution_condition(const T& b_fs, const T& rho) {
  if (rho <= from_int<T>(0) || rho >= from_int<T>(1)) throw InputError("rho must lie in (0,1)");
  return weakly_greater(b_fs, T(from_int<T>(1) - rho));
}

/// The threshold (1 - rho)/rho, which scales the guilt gap by rho.
template <Scalar T>
bool fs_pgg_printed_condition(const T& b_fs, const T& rho) {
  if (rho <= from_int<T>(0) || rho >= from_int<T>(1)) throw InputError("rho must lie in (0,1)");
  T threshold = (from_int<T>(1) - rho) / rho;
  return weakly_greater(b_fs, threshold);
}

template <Scalar T>
struct CharnessRabinParams {
  std::vector<T> a;  // weight on the social term
  std::vector<T> d;  // weight on the minimum within the social term
};

/// (1 - a_i) u_i + a_i (d_i min_j u_j + (1 - d_i) sum_j u_j).
template <Scalar T>
T charness_rabin_utility(const Game& game, std::span<const int> profile, int i, const CharnessRabinParams<T>& p) {
  const auto idx = static_cast<std::size_t>(i);
  if (p.a.size() != static_cast<std::size_t>(game.num_players()) || p.d.size() != p.a.size()) {
    throw InputError("charness-rabin: need one (a, d) pair per player");
  }
  T own = game.payoff<T>(profile, i);
  T lowest = own;
  T total = from_int<T>(0);
  for (int j = 0; j < game.num_players(); ++j) {
    T u = game.payoff<T>(profile, j);
    if (u < lowest) lowest = u;
    total += u;
  }
  const T one = from_int<T>(1);
  T social = p.d[idx] * lowest + (one - p.d[idx]) * total;
  T out = (one - p.a[idx]) * own + p.a[idx] * social;
  return out;
}

/// Strategies of player i maximizing `utility` with the others fixed.
template <Scalar T>
std::vector<int> transformed_best_responses(const Game& game, Profile profile, int i,
                                            const std::function<T(std::span<const int>, int)>& utility) {
  std::vector<T> values;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    profile[static_cast<std::size_t>(i)] = s;
    values.push_back(utility(profile, i));
  }
  T best = *std::max_element(values.begin(), values.end());
  std::vector<int> out;
  for (int s = 0; s < game.num_strategies(i); ++s) {
    if (weakly_greater(values[static_cast<std::size_t>(s)], best)) out.push_back(s);
  }
  return out;
}

struct QreOptions {
  double damping = 0.5;
  double tolerance = 1e-10;
  int max_iterations = 100000;
  std::uint64_t budget = kDefaultBudget;
};

struct QreResult {
  MixedProfile<double> sigma;
  double residual = 0.0;
  int iterations = 0;
};

class QreNotConverged : public std::runtime_error {
 public:
  QreNotConverged(double residual, int iterations)
      : std::runtime_error("logit QRE did not converge: residual " + format_real(residual) + " after " +
                           std::to_string(iterations) + " iterations"),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// Logit response: sigma_i(s) proportional to exp(lambda EU_i(s, sigma_-i)).
inline MixedProfile<double> logit_response(const Game& game, const MixedProfile<double>& sigma, double lambda,
                                           std::uint64_t budget = kDefaultBudget) {
  MixedProfile<double> out;
  for (int i = 0; i < game.num_players(); ++i) {
    std::vector<double> eu;
    for (int s = 0; s < game.num_strategies(i); ++s) eu.push_back(payoff_against(game, i, s, sigma, budget));
    double top = *std::max_element(eu.begin(), eu.end());
    std::vector<double> row;
    double total = 0.0;
    for (double v : eu) {
      row.push_back(std::exp(lambda * (v - top)));
      total += row.back();
    }
    for (double& v : row) v /= total;
    out.probs.push_back(std::move(row));
  }
  return out;
}

/// Damped fixed-point iteration from the uniform profile. Throws
/// QreNotConverged when the residual max |response - sigma| stays above the
/// tolerance.
inline QreResult logit_qre(const Game& game, double lambda, const QreOptions& options = {}) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw InputError("lambda must be a finite number >= 0");
  if (!(options.damping > 0.0 && options.damping <= 1.0)) throw InputError("damping must lie in (0,1]");
  MixedProfile<double> sigma;
  for (int i = 0; i < game.num_players(); ++i) {
    int k = game.num_strategies(i);
    if (k > 200) throw InputError("logit QRE: strategy set too large");
    sigma.probs.emplace_back(static_cast<std::size_t>(k), 1.0 / k);
  }
  QreResult result;
  for (int it = 1; it <= options.max_iterations; ++it) {
    auto response = logit_response(game, sigma, lambda, options.budget);
    double residual = 0.0;
    for (std::size_t i = 0; i < sigma.probs.size(); ++i) {
      for (std::size_t s = 0; s < sigma.probs[i].size(); ++s) {
        residual = std::max(residual, std::fabs(response.probs[i][s] - sigma.probs[i][s]));
      }
    }
    result.residual = residual;
    result.iterations = it;
    if (residual <= options.tolerance) {
      result.sigma = std::move(sigma);
      return result;
    }
    for (std::size_t i = 0; i < sigma.probs.size(); ++i) {
      double total = 0.0;
      for (std::size_t s = 0; s < sigma.probs[i].size(); ++s) {
        double& p = sigma.probs[i][s];
        p = (1.0 - options.damping) * p + options.damping * response.probs[i][s];
        total += p;
      }
      for (double& p : sigma.probs[i]) p /= total;
    }
  }
  throw QreNotConverged(result.residual, result.iterations);
}

}  // namespace translucent
