#ifndef CQ_RATIONAL_HPP
#define CQ_RATIONAL_HPP

// Exact rational scalars. Values are always stored in lowest terms with a
// positive denominator; arithmetic never rounds.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace cq {

using BigInt = boost::multiprecision::cpp_int;

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(long long n) : v_(n) {}  // implicit on purpose: 2 * p, p / 3, ...
  Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}
  Rational(BigInt n, BigInt d) {
    if (d == 0) throw std::domain_error("Rational: zero denominator");
    if (d < 0) {
      n = -n;
      d = -d;
    }
    v_ = boost::multiprecision::cpp_rational(std::move(n), std::move(d));
  }

  /// Parses "n" or "n/d" with d > 0. Throws std::invalid_argument otherwise.
  static Rational parse(const std::string& s) {
    const auto slash = s.find('/');
    const std::string num = s.substr(0, slash);
    if (!is_integer_literal(num, /*allow_sign=*/true))
      throw std::invalid_argument("Rational::parse: bad numerator in '" + s + "'");
    if (slash == std::string::npos) return Rational(BigInt(num), BigInt(1));
    const std::string den = s.substr(slash + 1);
    if (!is_integer_literal(den, /*allow_sign=*/false) || BigInt(den) == 0)
      throw std::invalid_argument("Rational::parse: bad denominator in '" + s + "'");
    return Rational(BigInt(num), BigInt(den));
  }

  BigInt num() const { return boost::multiprecision::numerator(v_); }
  BigInt den() const { return boost::multiprecision::denominator(v_); }

  bool is_zero() const { return v_ == 0; }
  bool is_integer() const { return den() == 1; }
  int sign() const { return v_ < 0 ? -1 : (v_ > 0 ? 1 : 0); }

  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("Rational: division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  Rational operator-() const { Rational r; r.v_ = -v_; return r; }

  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  /// Canonical text: "n" for integers, "n/d" otherwise.
  std::string str() const {
    return is_integer() ? num().str() : num().str() + "/" + den().str();
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static bool is_integer_literal(const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && i < s.size() && s[i] == '-') ++i;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  }

  boost::multiprecision::cpp_rational v_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

/// Exact square root of a nonnegative rational, when it exists.
inline bool rational_sqrt(const Rational& r, Rational* root) {
  if (r.sign() < 0) return false;
  const BigInt sn = boost::multiprecision::sqrt(r.num());
  const BigInt sd = boost::multiprecision::sqrt(r.den());
  if (sn * sn != r.num() || sd * sd != r.den()) return false;
  *root = Rational(sn, sd);
  return true;
}

}  // namespace cq

#endif  // CQ_RATIONAL_HPP
