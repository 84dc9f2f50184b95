#pragma once

// Closed-form cooperation predicates for the four dilemmas and the
// tie-splitting kernel f(gamma, N).
//
// Every predicate here is the direct comparison of the cooperate payoff with
// the best deviation payoff, simplified by hand. The generic engine in
// beliefs.hpp is the oracle they are tested against.

#include <optional>

#include "translucent/beliefs.hpp"

namespace translucent {

/// sum_k C(N-1,k) (1-gamma)^k gamma^(N-1-k) / (k+1): the expected share of a
/// player pricing at the floor when each of N-1 others independently prices
/// high with probability gamma.
template <Scalar T>
T f_gamma_binomial(const T& gamma, int n) {
  if (n < 2) throw InputError("f: need n >= 2");
  const T not_gamma = from_int<T>(1) - gamma;
  T total = from_int<T>(0);
  T binom = from_int<T>(1);
  for (int k = 0; k <= n - 1; ++k) {
    if (k > 0) {
      binom *= from_int<T>(n - k);
      binom /= from_int<T>(k);
    }
    T term = binom * ipow(not_gamma, k) * ipow(gamma, n - 1 - k);
    term /= from_int<T>(k + 1);
    total += term;
  }
  return total;
}

/// (1 - gamma^N) / (N (1 - gamma)); undefined at gamma = 1.
template <Scalar T>
T f_gamma_identity(const T& gamma, int n) {
  if (n < 2) throw InputError("f: need n >= 2");
  T denom = from_int<T>(n) * (from_int<T>(1) - gamma);
  if (denom == from_int<T>(0)) throw InputError("f identity is singular at gamma = 1");
  T num = from_int<T>(1) - ipow(gamma, n);
  return num / denom;
}

template <Scalar T>
T f_gamma(const T& gamma, int n) {
  if (gamma < from_int<T>(0) || gamma > from_int<T>(1)) throw InputError("f: gamma must lie in [0,1]");
  if constexpr (std::same_as<T, double>) {
    if (gamma < 1.0 - 1e-9) return f_gamma_identity(gamma, n);
    return f_gamma_binomial(gamma, n);
  } else {
    if (gamma == 1) return Rational(1);
    return f_gamma_identity(gamma, n);
  }
}

/// rational iff binding >= threshold. An empty binding stands for +infinity
/// (only the TD bonus cap can be unbounded).
template <Scalar T>
struct CooperationVerdict {
  bool rational = false;
  std::optional<T> binding;
  T threshold{};
};

/// Parameter checks shared by the closed forms. PGG also accepts rho = 1 as
/// the limiting case.
inline void check_closed_form_params(const DilemmaParams& p) {
  switch (p.kind) {
    case DilemmaKind::kPrisonersDilemma:
      if (!(p.c.exact() > 0) || !(p.b.exact() > p.c.exact())) throw InputError("pd: need b > c > 0");
      return;
    case DilemmaKind::kPublicGoods:
      if (p.n < 2) throw InputError("pgg: need n >= 2");
      if (!(p.rho.exact() * p.n > 1) || p.rho.exact() > 1) throw InputError("pgg: need 1/n < rho <= 1");
      return;
    case DilemmaKind::kBertrand:
      if (p.n < 2 || p.l < 2 || p.h <= p.l) throw InputError("bertrand: need n >= 2 and 2 <= l < h");
      return;
    case DilemmaKind::kTravelersDilemma:
      if (p.l <= 0 || p.h <= p.l || !(p.bonus.exact() > 0)) throw InputError("td: need 0 < l < h, bonus > 0");
      return;
  }
  throw InputError("unknown game kind");
}

namespace detail {

template <Scalar T>
void check_unit(const T& alpha, const T& beta) {
  check_type(TranslucentType<T>{alpha, beta});
}

template <Scalar T>
CooperationVerdict<T> compare(T binding, T threshold) {
  CooperationVerdict<T> v;
  v.rational = weakly_greater(binding, threshold);
  v.binding = std::move(binding);
  v.threshold = std::move(threshold);
  return v;
}

/// Largest TD bonus at which cooperation survives the deviation to L:
/// bonus (1 - alpha beta) <= beta (H - L).
/// Against H - 1 the condition is bonus (1 - 2 alpha) <= alpha (H - L) + 1 - alpha
/// whenever beta > 0 and H - L >= 2.
template <Scalar T>
std::optional<T> td_bonus_cap(const DilemmaParams& p, const T& alpha, const T& beta) {
  const T one = from_int<T>(1);
  const T spread = from_int<T>(p.h - p.l);
  std::optional<T> cap;
  auto tighten = [&](const T& value) {
    if (!cap || value < *cap) cap = value;
  };
  T denom = one - alpha * beta;
  if (denom > from_int<T>(0)) tighten(T(spread * beta / denom));
  const T half = from_rational<T>(Rational(1, 2));
  if (beta > from_int<T>(0) && p.h - p.l >= 2 && alpha < half) {
    T slope = one - from_int<T>(2) * alpha;
    T numer = alpha * spread + one - alpha;
    tighten(T(numer / slope));
  }
  return cap;
}

}  // namespace detail

/// Cooperation is rational for a type (alpha, beta) iff:
///   pd:       alpha beta b >= c
///   pgg:      alpha beta rho (N-1) >= 1 - rho
///   td:       bonus <= the cap from td_bonus_cap
///   bertrand: beta^(N-1) >= (N/H) max(L f(gamma,N), gamma^(N-1) (H-1)),
///             gamma = (1-alpha) beta; the second term only when H - 1 > L.
template <Scalar T>
CooperationVerdict<T> cooperation_condition(const DilemmaParams& p, const T& alpha, const T& beta) {
  check_closed_form_params(p);
  detail::check_unit(alpha, beta);
  const T one = from_int<T>(1);
  switch (p.kind) {
    case DilemmaKind::kPrisonersDilemma:
      return detail::compare<T>(alpha * beta * p.b.as<T>(), p.c.as<T>());
    case DilemmaKind::kPublicGoods: {
      T binding = alpha * beta * p.rho.as<T>() * from_int<T>(p.n - 1);
      return detail::compare<T>(binding, one - p.rho.as<T>());
    }
    case DilemmaKind::kTravelersDilemma: {
      CooperationVerdict<T> v;
      v.threshold = p.bonus.as<T>();
      v.binding = detail::td_bonus_cap(p, alpha, beta);
      v.rational = !v.binding || weakly_greater(*v.binding, v.threshold);
      return v;
    }
    case DilemmaKind::kBertrand: {
      T gamma = (one - alpha) * beta;
      T floor_share = from_int<T>(p.l) * f_gamma(gamma, p.n);
      T best = floor_share;
      if (p.h - 1 > p.l) {
        T undercut = ipow(gamma, p.n - 1) * from_int<T>(p.h - 1);
        if (undercut > best) best = undercut;
      }
      T threshold = from_int<T>(p.n) * best / from_int<T>(p.h);
      return detail::compare<T>(ipow(beta, p.n - 1), threshold);
    }
  }
  throw InputError("unknown game kind");
}

/// The simpler conditions that keep only the floor deviation for Bertrand
/// and use the (H-L-1)/(1-2 alpha) cap for TD. Kept for comparison.
template <Scalar T>
CooperationVerdict<T> printed_cooperation_condition(const DilemmaParams& p, const T& alpha, const T& beta) {
  check_closed_form_params(p);
  detail::check_unit(alpha, beta);
  const T one = from_int<T>(1);
  switch (p.kind) {
    case DilemmaKind::kTravelersDilemma: {
      CooperationVerdict<T> v;
      v.threshold = p.bonus.as<T>();
      const T spread = from_int<T>(p.h - p.l);
      T denom = one - alpha * beta;
      if (denom > from_int<T>(0)) v.binding = T(spread * beta / denom);
      if (alpha < from_rational<T>(Rational(1, 2))) {
        T other = (spread - one) / (one - from_int<T>(2) * alpha);
        if (!v.binding || other < *v.binding) v.binding = other;
      }
      v.rational = !v.binding || weakly_greater(*v.binding, v.threshold);
      return v;
    }
    case DilemmaKind::kBertrand: {
      T gamma = (one - alpha) * beta;
      T threshold = f_gamma(gamma, p.n) * from_int<T>(p.l) * from_int<T>(p.n) / from_int<T>(p.h);
      return detail::compare<T>(ipow(beta, p.n - 1), threshold);
    }
    default:
      return cooperation_condition(p, alpha, beta);
  }
}

/// Exact verdict from exact inputs.
inline CooperationVerdict<Rational> cooperation_condition_exact(const DilemmaParams& p, const Rational& alpha,
                                                                const Rational& beta) {
  return cooperation_condition<Rational>(p, alpha, beta);
}

/// beta^(N-1) < L/H: cooperation is irrational for every alpha, since
/// f >= 1/N.
template <Scalar T>
bool bertrand_lower_bound_check(const T& beta, int l, int h, int n) {
  if (n < 2 || l < 2 || h <= l) throw InputError("bertrand: need n >= 2 and 2 <= l < h");
  if (beta < from_int<T>(0) || beta > from_int<T>(1)) throw InputError("beta must lie in [0,1]");
  return ipow(beta, n - 1) * from_int<T>(h) < from_int<T>(l);
}

}  // namespace translucent
