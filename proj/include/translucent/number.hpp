#pragma once

// Scalar plumbing shared by every module.
//
// Game-theoretic verdicts in this library are weak inequalities, and many of
// the interesting parameter points sit exactly on a boundary (alpha*beta*b == c
// and friends). Everything numeric is therefore templated on a scalar type:
// `double` for speed, `Rational` (GMP) when the answer must be exact. Inputs
// that arrive as decimals are converted to the rational they denote, so 0.05
// means 1/20 and not the nearest binary double.

#include <gmpxx.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <type_traits>

namespace translucent {

using Rational = mpq_class;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, Rational>;

/// Thrown for malformed parameters or inputs (bad game parameters, bad JSON).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an exhaustive enumeration would exceed its configured budget.
class BudgetExceeded : public std::runtime_error {
 public:
  BudgetExceeded(const std::string& what, std::uint64_t required,
                 std::uint64_t budget)
      : std::runtime_error(what + ": requires " + std::to_string(required) +
                           " evaluations, budget is " +
                           std::to_string(budget)),
        required_(required),
        budget_(budget) {}
  std::uint64_t required() const { return required_; }
  std::uint64_t budget() const { return budget_; }

 private:
  std::uint64_t required_;
  std::uint64_t budget_;
};

inline constexpr std::uint64_t kDefaultBudget = 10'000'000;

/// Relative tolerance used when a verdict is decided in floating point.
inline constexpr double kVerdictTolerance = 1e-9;

/// Parses a decimal literal ("0.05", "-3", "1e-3", "2.5E+2") into the exact
/// rational it denotes.
inline Rational parse_decimal(std::string_view text) {
  auto fail = [&] {
    throw InputError("not a decimal number: '" + std::string(text) + "'");
  };
  if (text.empty()) fail();
  std::size_t pos = 0;
  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  std::string digits;
  long exponent = 0;
  bool seen_digit = false;
  bool seen_point = false;
  for (; pos < text.size(); ++pos) {
    char ch = text[pos];
    if (ch >= '0' && ch <= '9') {
      digits.push_back(ch);
      seen_digit = true;
      if (seen_point) --exponent;
    } else if (ch == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail();
  if (pos < text.size()) {
    if (text[pos] != 'e' && text[pos] != 'E') fail();
    ++pos;
    long e = 0;
    auto first = text.data() + pos;
    auto last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, e);
    if (ec != std::errc() || ptr != last) fail();
    exponent += e;
  }
  if (exponent > 4000 || exponent < -4000) fail();
  mpz_class numerator(digits, 10);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(
                                          exponent < 0 ? -exponent : exponent));
  Rational value = exponent < 0 ? Rational(numerator, scale)
                                : Rational(numerator * scale, 1);
  value.canonicalize();
  return negative ? Rational(-value) : value;
}

/// The rational denoted by the shortest decimal that round-trips to `x`.
inline Rational exact_decimal(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite number");
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x);
  if (ec != std::errc()) throw InputError("cannot format number");
  return parse_decimal(std::string_view(buffer, ptr - buffer));
}

inline double to_double(double x) { return x; }

/// Nearest double to x. mpq_get_d truncates toward zero, so the neighbour
/// away from zero is compared as well.
inline double to_double(const Rational& x) {
  double d = x.get_d();
  if (!std::isfinite(d) || Rational(d) == x) return d;
  double away = std::nextafter(d, x > 0 ? std::numeric_limits<double>::infinity()
                                        : -std::numeric_limits<double>::infinity());
  Rational gap_d = abs(Rational(x - Rational(d)));
  Rational gap_away = abs(Rational(x - Rational(away)));
  return gap_away < gap_d ? away : d;
}

template <Scalar T>
T from_rational(const Rational& q) {
  if constexpr (std::same_as<T, double>) {
    return to_double(q);
  } else {
    return q;
  }
}

template <Scalar T>
T from_int(long long v) {
  if constexpr (std::same_as<T, double>) {
    return static_cast<double>(v);
  } else {
    return Rational(static_cast<long>(v));
  }
}

template <Scalar T>
T ipow(const T& base, int exponent) {
  T result = from_int<T>(1);
  T b = base;
  while (exponent > 0) {
    if (exponent & 1) result *= b;
    exponent >>= 1;
    if (exponent > 0) b *= b;
  }
  return result;
}

template <Scalar T>
T abs_value(const T& x) {
  if constexpr (std::same_as<T, double>) {
    return std::fabs(x);
  } else {
    return abs(x);
  }
}

/// Weak inequality lhs >= rhs. Exact for Rational; within kVerdictTolerance
/// (relative to the larger magnitude, floored at 1) for double.
template <Scalar T>
bool weakly_greater(const T& lhs, const T& rhs) {
  if constexpr (std::same_as<T, double>) {
    double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
    return lhs >= rhs - kVerdictTolerance * scale;
  } else {
    return lhs >= rhs;
  }
}

/// True when a double comparison is too close to call and must be redone
/// exactly.
inline bool near_tie(double lhs, double rhs, double slack = 1e-7) {
  double scale = std::max({1.0, std::fabs(lhs), std::fabs(rhs)});
  return std::fabs(lhs - rhs) <= slack * scale;
}

/// A parameter value kept both exactly and as a double.
class Number {
 public:
  Number() : exact_(0), approx_(0.0) {}
  Number(const Rational& q) : exact_(q), approx_(to_double(q)) {}  // NOLINT
  Number(long long v) : Number(from_int<Rational>(v)) {}          // NOLINT
  Number(int v) : Number(static_cast<long long>(v)) {}            // NOLINT
  static Number from_double(double x) { return Number(exact_decimal(x)); }

  const Rational& exact() const { return exact_; }
  double value() const { return approx_; }

  template <Scalar T>
  const T& as() const {
    if constexpr (std::same_as<T, double>) {
      return approx_;
    } else {
      return exact_;
    }
  }

  friend bool operator==(const Number& a, const Number& b) {
    return a.exact_ == b.exact_;
  }

 private:
  Rational exact_;
  double approx_;
};

/// Formats a double with 12 significant digits, '.' separator, no locale.
inline std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), x,
                                 std::chars_format::general, 12);
  if (ec != std::errc()) return "nan";
  return std::string(buffer, ptr);
}

/// A double rounded to 12 significant digits, for JSON reports.
inline double round_real(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x;
  std::string text = format_real(x);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

/// Formats a rational as its 12-significant-digit decimal approximation.
inline std::string format_real(const Rational& x) {
  return format_real(to_double(x));
}

}  // namespace translucent
