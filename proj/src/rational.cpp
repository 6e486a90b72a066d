#include "fence/rational.hpp"

#include <cmath>
#include <ostream>

namespace fence {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw std::invalid_argument("rational: zero denominator");
  value_ = mpq_class(num, den);
  value_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  const auto slash = body.find('/');
  const std::string_view num_text = body.substr(0, slash);
  const std::string_view den_text =
      slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
  if (!all_digits(num_text) || !all_digits(den_text)) {
    throw std::invalid_argument("rational: malformed \"" + std::string(text) + "\"");
  }
  mpz_class num(std::string(num_text), 10);
  mpz_class den(std::string(den_text), 10);
  if (den == 0) {
    throw std::invalid_argument("rational: zero denominator in \"" + std::string(text) + "\"");
  }
  if (negative) num = -num;
  return Rational(num, den);
}

Rational Rational::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("rational: non-finite double");
  return Rational(mpq_class(value));
}

std::string Rational::to_string() const {
  if (is_integer()) return value_.get_num().get_str();
  return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

std::string Rational::to_decimal(int places) const {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  const mpz_class num = abs().value_.get_num() * scale * 2 + value_.get_den();
  const mpz_class den = value_.get_den() * 2;
  mpz_class scaled;
  mpz_fdiv_q(scaled.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());

  std::string digits = scaled.get_str();
  if (places > 0) {
    if (digits.size() <= static_cast<std::size_t>(places)) {
      digits.insert(0, static_cast<std::size_t>(places) + 1 - digits.size(), '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(places), ".");
  }
  if (sign() < 0 && scaled != 0) digits.insert(0, "-");
  return digits;
}

mpz_class Rational::floor() const {
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

mpz_class Rational::ceil() const {
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
  return q;
}

Rational Rational::abs() const { return sign() < 0 ? -*this : *this; }

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw std::domain_error("rational: division by zero");
  value_ /= o.value_;
  return *this;
}

std::size_t Rational::hash() const {
  const std::size_t h1 = std::hash<std::string>{}(value_.get_num().get_str(16));
  const std::size_t h2 = std::hash<std::string>{}(value_.get_den().get_str(16));
  return h1 ^ (h2 * 0x9e3779b97f4a7c15ULL);
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

Rational rational_lcm(const Rational& a, const Rational& b) {
  if (a.sign() <= 0 || b.sign() <= 0) {
    throw std::domain_error("rational_lcm: arguments must be positive");
  }
  mpz_class num;
  mpz_class den;
  mpz_lcm(num.get_mpz_t(), a.raw().get_num_mpz_t(), b.raw().get_num_mpz_t());
  mpz_gcd(den.get_mpz_t(), a.raw().get_den_mpz_t(), b.raw().get_den_mpz_t());
  return Rational(num, den);
}

Rational mod_positive(const Rational& value, const Rational& modulus) {
  const Rational q = value / modulus;
  return value - modulus * Rational(q.floor(), mpz_class(1));
}

bool is_multiple_of(const Rational& value, const Rational& unit) {
  return (value / unit).is_integer();
}

}  // namespace fence
