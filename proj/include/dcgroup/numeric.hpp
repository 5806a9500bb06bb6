#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <variant>

#include <gmpxx.h>

#include "dcgroup/error.hpp"

namespace dcg {

using BigInt = mpz_class;
using Rational = mpq_class;

// Coordinates are 64-bit; every operation is checked and overflow raises
// a ResourceError instead of wrapping.
inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw ResourceError("coordinate overflow in addition");
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_sub_overflow(a, b, &r)) throw ResourceError("coordinate overflow in subtraction");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw ResourceError("coordinate overflow in multiplication");
  return r;
}

inline std::int64_t checked_neg(std::int64_t a) { return checked_sub(0, a); }

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

inline Rational make_rational(long num, long den) { return make_rational(BigInt(num), BigInt(den)); }

inline std::string to_string(const Rational& q) { return q.get_str(); }
inline std::string to_string(const BigInt& z) { return z.get_str(); }

inline BigInt ceil(const Rational& q) {
  BigInt r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

/// num/den as a double without forming the (possibly huge) canonical fraction.
inline double ratio_to_double(const BigInt& num, const BigInt& den) {
  if (sgn(num) == 0) return 0.0;
  long en = 0, ed = 0;
  double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return std::ldexp(mn / md, static_cast<int>(en - ed));
}

/// Parses "p/q", an integer, or a decimal such as "0.1" or "2.5e-3" exactly.
inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  if (s.empty()) throw ConfigError("empty number");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      BigInt num(s.substr(0, slash)), den(s.substr(slash + 1));
      if (den == 0) throw ConfigError("zero denominator in '" + s + "'");
      return make_rational(num, den);
    }
    long exp10 = 0;
    if (auto e = s.find_first_of("eE"); e != std::string::npos) {
      exp10 = std::stol(s.substr(e + 1));
      s = s.substr(0, e);
    }
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
      negative = s[0] == '-';
      s = s.substr(1);
    }
    std::string digits;
    for (char ch : s) {
      if (ch == '.') {
        continue;
      }
      if (ch < '0' || ch > '9') throw ConfigError("not a number: '" + std::string(text) + "'");
      digits.push_back(ch);
    }
    if (digits.empty()) throw ConfigError("not a number: '" + std::string(text) + "'");
    if (auto dot = s.find('.'); dot != std::string::npos) {
      exp10 -= static_cast<long>(s.size() - dot - 1);
    }
    BigInt num(digits);
    if (negative) num = -num;
    BigInt pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    return exp10 >= 0 ? make_rational(num * pow10, BigInt(1)) : make_rational(num, pow10);
  } catch (const std::invalid_argument&) {
    throw ConfigError("not a number: '" + std::string(text) + "'");
  }
}

/// Neumaier-compensated summation; deterministic for a fixed summation order.
class CompensatedSum {
 public:
  void add(double x) {
    double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// A probability-like value: exact when derived from exact inputs, float otherwise.
class Number {
 public:
  Number() : value_(Rational(0)) {}
  Number(Rational q) : value_(std::move(q)) {}  // NOLINT(google-explicit-constructor)
  Number(double d) : value_(d) {}               // NOLINT(google-explicit-constructor)

  bool is_exact() const { return std::holds_alternative<Rational>(value_); }
  const Rational& exact() const {
    if (!is_exact()) throw PreconditionError("value is not exact");
    return std::get<Rational>(value_);
  }
  double to_double() const {
    return is_exact() ? std::get<Rational>(value_).get_d() : std::get<double>(value_);
  }
  std::string to_string() const {
    if (is_exact()) return std::get<Rational>(value_).get_str();
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", std::get<double>(value_));
    return buf;
  }

  friend bool operator==(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
    return a.to_double() == b.to_double();
  }
  friend bool operator<(const Number& a, const Number& b) {
    if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
    return a.to_double() < b.to_double();
  }
  friend bool operator<=(const Number& a, const Number& b) { return !(b < a); }
  friend bool operator>(const Number& a, const Number& b) { return b < a; }
  friend bool operator>=(const Number& a, const Number& b) { return !(a < b); }

 private:
  std::variant<Rational, double> value_;
};

inline Number abs_diff(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return Number(Rational(abs(a.exact() - b.exact())));
  return Number(std::fabs(a.to_double() - b.to_double()));
}

/// A subgroup index: finite, or a lower bound reached when enumeration hit its cap.
class Index {
 public:
  static Index finite(std::uint64_t value) { return Index(value, true); }
  static Index at_least(std::uint64_t cap) { return Index(cap, false); }

  bool is_finite() const { return finite_; }
  std::uint64_t value() const { return value_; }

  /// Target coset mass 1/[G:H], taking 1/infinity to be zero.
  Rational reciprocal() const { return finite_ ? make_rational(1, static_cast<long>(value_)) : Rational(0); }

  std::string to_string() const {
    return finite_ ? std::to_string(value_) : ">=" + std::to_string(value_);
  }

  friend bool operator==(const Index&, const Index&) = default;

 private:
  Index(std::uint64_t v, bool f) : value_(v), finite_(f) {}
  std::uint64_t value_;
  bool finite_;
};

}  // namespace dcg
