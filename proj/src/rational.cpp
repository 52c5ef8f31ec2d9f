#include "osp/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace osp {

namespace {

bool looks_like_integer(const std::string& s) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

std::string strip(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// mpz_set_str understands "-3" but not "+3".
std::string drop_plus(const std::string& s) {
  return !s.empty() && s.front() == '+' ? s.substr(1) : s;
}

}  // namespace

Rational::Rational(long num, long den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  value_ = mpq_class(mpz_class(num)) / mpq_class(mpz_class(den));
}

Rational Rational::parse(const std::string& text) {
  const std::string s = strip(text);
  const std::size_t slash = s.find('/');
  const std::string num_part = slash == std::string::npos ? s : strip(s.substr(0, slash));
  const std::string den_part = slash == std::string::npos ? "" : strip(s.substr(slash + 1));
  if (!looks_like_integer(num_part) || (slash != std::string::npos && !looks_like_integer(den_part))) {
    throw std::invalid_argument("cannot parse rational from '" + text + "'");
  }
  Rational out;
  if (slash == std::string::npos) {
    out.value_ = mpq_class(mpz_class(drop_plus(num_part)));
    return out;
  }
  const mpz_class den(drop_plus(den_part));
  if (den == 0) throw std::domain_error("rational with zero denominator: '" + text + "'");
  out.value_ = mpq_class(mpz_class(drop_plus(num_part))) / mpq_class(den);
  return out;
}

Rational Rational::operator-() const {
  Rational out;
  out.value_ = -value_;
  return out;
}

Rational& Rational::operator+=(const Rational& rhs) {
  value_ += rhs.value_;
  return *this;
}

Rational& Rational::operator-=(const Rational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

Rational& Rational::operator*=(const Rational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

Rational& Rational::operator/=(const Rational& rhs) {
  if (sgn(rhs.value_) == 0) throw std::domain_error("rational division by zero");
  value_ /= rhs.value_;
  return *this;
}

Rational abs(const Rational& value) { return value.sign() < 0 ? -value : value; }

const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }

const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& out, const Rational& value) { return out << value.str(); }

}  // namespace osp
