#pragma once

#include <gmpxx.h>

#include <compare>
#include <iosfwd>
#include <string>

namespace osp {

// Exact rational scalar backed by GMP. Values are always in canonical form
// (reduced, positive denominator); arithmetic and comparisons are exact.
class Rational {
 public:
  Rational() = default;
  Rational(int value) : value_(static_cast<long>(value)) {}
  Rational(long value) : value_(value) {}
  Rational(long num, long den);

  // Accepts an optionally signed integer "n" or a fraction "n/d", d != 0.
  // The result is canonicalized, so "2/4" parses to 1/2.
  static Rational parse(const std::string& text);

  Rational operator-() const;
  Rational& operator+=(const Rational& rhs);
  Rational& operator-=(const Rational& rhs);
  Rational& operator*=(const Rational& rhs);
  Rational& operator/=(const Rational& rhs);  // throws std::domain_error on rhs == 0

  friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
  friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
  friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
  friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }

  friend bool operator==(const Rational& lhs, const Rational& rhs) {
    return mpq_equal(lhs.value_.get_mpq_t(), rhs.value_.get_mpq_t()) != 0;
  }
  friend std::strong_ordering operator<=>(const Rational& lhs, const Rational& rhs) {
    const int c = mpq_cmp(lhs.value_.get_mpq_t(), rhs.value_.get_mpq_t());
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

  int sign() const { return sgn(value_); }
  bool is_integer() const { return value_.get_den() == 1; }

  std::string str() const { return value_.get_str(); }
  const mpq_class& raw() const { return value_; }

 private:
  mpq_class value_;
};

Rational abs(const Rational& value);
const Rational& min(const Rational& a, const Rational& b);
const Rational& max(const Rational& a, const Rational& b);

std::ostream& operator<<(std::ostream& out, const Rational& value);

}  // namespace osp
