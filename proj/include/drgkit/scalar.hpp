#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cmath>
#include <cstdint>
#include <string>
#include <type_traits>

#include "drgkit/errors.hpp"

namespace drgkit {

// Two scalar fields are supported throughout the library:
//   Rational  exact arithmetic, all tolerances are zero
//   double    floating point, tolerance-based rank and containment decisions
// The field is a template parameter, so mixing modes is a type error.
using Rational = mpq_class;

template <class S>
inline constexpr bool is_exact_v = std::is_same_v<S, Rational>;

// mpq_class(num, den) does not reduce; this always returns lowest terms
// with positive denominator.
inline Rational rat(long num, long den = 1) {
  if (den == 0) fail(errc::bad_argument, "rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

inline bool scalar_is_zero(const Rational& x) { return sgn(x) == 0; }
inline bool scalar_is_zero(double x) { return x == 0.0; }

inline Rational scalar_abs(const Rational& x) { return abs(x); }
inline double scalar_abs(double x) { return std::fabs(x); }

template <class S>
inline S scalar_from_int(long v) {
  if constexpr (is_exact_v<S>) {
    return rat(v);
  } else {
    return static_cast<double>(v);
  }
}

inline std::string scalar_str(const Rational& x) { return x.get_str(); }
inline std::string scalar_str(double x) { return std::to_string(x); }

// Accepts "a/b", integers, decimal literals and e-notation; everything is
// read exactly (decimals become fractions over powers of ten).
inline Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) fail(errc::parse_error, "empty scalar");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (num.empty() || den.empty())
      fail(errc::parse_error, "malformed fraction '" + text + "'");
    try {
      mpz_class top(num), bottom(den);
      if (sgn(bottom) == 0)
        fail(errc::parse_error, "zero denominator in '" + text + "'");
      Rational q(top, bottom);
      q.canonicalize();
      return q;
    } catch (const std::invalid_argument&) {
      fail(errc::parse_error, "malformed fraction '" + text + "'");
    }
  }

  std::size_t pos = 0;
  bool neg = false;
  if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
    neg = (s[pos] == '-');
    ++pos;
  }
  std::string digits;
  long frac_digits = 0;
  bool seen_digit = false, seen_dot = false;
  for (; pos < s.size(); ++pos) {
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_dot) ++frac_digits;
    } else if (c == '.' && !seen_dot) {
      seen_dot = true;
    } else {
      break;
    }
  }
  if (!seen_digit) fail(errc::parse_error, "malformed scalar '" + text + "'");
  long exp10 = 0;
  if (pos < s.size() && (s[pos] == 'e' || s[pos] == 'E')) {
    ++pos;
    bool eneg = false;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
      eneg = (s[pos] == '-');
      ++pos;
    }
    if (pos >= s.size()) fail(errc::parse_error, "malformed exponent in '" + text + "'");
    long e = 0;
    for (; pos < s.size(); ++pos) {
      if (!std::isdigit(static_cast<unsigned char>(s[pos])))
        fail(errc::parse_error, "malformed exponent in '" + text + "'");
      e = e * 10 + (s[pos] - '0');
      if (e > 100000) fail(errc::parse_error, "exponent too large in '" + text + "'");
    }
    exp10 = eneg ? -e : e;
  }
  if (pos != s.size()) fail(errc::parse_error, "trailing characters in '" + text + "'");

  mpz_class mant(digits.empty() ? "0" : digits);
  if (neg) mant = -mant;
  long net = exp10 - frac_digits;
  mpz_class pow10;
  mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(net < 0 ? -net : net));
  Rational q = net >= 0 ? Rational(mant * pow10) : Rational(mant, pow10);
  q.canonicalize();
  return q;
}

template <class S>
inline S parse_scalar(const std::string& text) {
  if constexpr (is_exact_v<S>) {
    return parse_rational(text);
  } else {
    try {
      std::size_t used = 0;
      // reuse the exact parser for a/b forms
      if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
      double v = std::stod(text, &used);
      while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
      if (used != text.size())
        fail(errc::parse_error, "trailing characters in '" + text + "'");
      return v;
    } catch (const std::invalid_argument&) {
      fail(errc::parse_error, "malformed scalar '" + text + "'");
    } catch (const std::out_of_range&) {
      fail(errc::parse_error, "scalar out of range '" + text + "'");
    }
  }
}

// Floating-point tolerances used by the double instantiation.  The exact
// instantiation ignores them (every comparison is exact there).
struct Tols {
  double rank = 1e-8;     // relative singular value cutoff
  double contain = 1e-7;  // relative containment residual cutoff
};

inline const char* mode_name(bool exact) { return exact ? "exact" : "float"; }

// splitmix64, used to derive retry seeds and per-task seeds deterministically
inline std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace drgkit
