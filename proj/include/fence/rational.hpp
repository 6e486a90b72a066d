#pragma once

// Exact rational numbers for schedule coordinates and coverage decisions.
//
// Backed by GMP's mpq_class, which keeps every value in canonical form
// (positive denominator, gcd(|num|, den) = 1) after each operation.

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fence {

class Rational {
public:
  Rational() = default;
  Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
  Rational(int value) : value_(static_cast<long>(value)) {}  // NOLINT
  /// Throws std::invalid_argument when den == 0.
  Rational(long num, long den);
  Rational(const mpz_class& num, const mpz_class& den);
  explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

  /// Parses "[-]?digits(/digits)?". Throws std::invalid_argument on malformed
  /// input or a zero denominator.
  static Rational parse(std::string_view text);
  /// Exact conversion of a finite double.
  static Rational from_double(double value);

  [[nodiscard]] mpz_class numerator() const { return value_.get_num(); }
  [[nodiscard]] mpz_class denominator() const { return value_.get_den(); }
  [[nodiscard]] const mpq_class& raw() const { return value_; }

  [[nodiscard]] int sign() const { return sgn(value_); }
  [[nodiscard]] bool is_zero() const { return sign() == 0; }
  [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }

  [[nodiscard]] double to_double() const { return value_.get_d(); }
  /// "n" for integers, "n/d" otherwise.
  [[nodiscard]] std::string to_string() const;
  /// Fixed-point decimal, rounded half away from zero.
  [[nodiscard]] std::string to_decimal(int places) const;

  /// Largest integer <= value.
  [[nodiscard]] mpz_class floor() const;
  [[nodiscard]] mpz_class ceil() const;
  [[nodiscard]] Rational abs() const;

  Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
  Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
  Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }
  /// Throws std::domain_error on division by zero.
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { return Rational(mpq_class(-value_)); }

  friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.value_, b.value_) == 0; }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    const int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  [[nodiscard]] std::size_t hash() const;

private:
  mpq_class value_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

[[nodiscard]] inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
[[nodiscard]] inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Smallest positive r with r/a and r/b both integers:
/// lcm(num_a, num_b) / gcd(den_a, den_b). Throws std::domain_error unless a, b > 0.
[[nodiscard]] Rational rational_lcm(const Rational& a, const Rational& b);

/// value reduced into [0, modulus). modulus must be positive.
[[nodiscard]] Rational mod_positive(const Rational& value, const Rational& modulus);

/// True when value / unit is an integer. unit must be nonzero.
[[nodiscard]] bool is_multiple_of(const Rational& value, const Rational& unit);

}  // namespace fence

template <>
struct std::hash<fence::Rational> {
  std::size_t operator()(const fence::Rational& r) const noexcept { return r.hash(); }
};
