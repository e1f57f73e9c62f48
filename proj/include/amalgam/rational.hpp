#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <iosfwd>
#include <string>
#include <string_view>

namespace amalgam {

/// Exact rational number used for every exponent and smoothness threshold.
///
/// A value wrapper over boost::rational<long long>. Boost 1.74's mixed
/// (rational, integer) equality recurses forever under C++20 rewritten
/// comparisons, so all comparisons here go through rational-rational
/// operators and integers convert implicitly.
class Rational {
 public:
  using Base = boost::rational<long long>;

  Rational() = default;
  Rational(long long n) : v_(n) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : v_(n, d) {}
  explicit Rational(const Base& b) : v_(b) {}

  long long numerator() const { return v_.numerator(); }
  long long denominator() const { return v_.denominator(); }
  const Base& base() const { return v_; }

  Rational operator-() const { return Rational(-v_); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) { v_ /= o.v_; return *this; }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.v_.numerator() == b.v_.numerator() && a.v_.denominator() == b.v_.denominator();
  }
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
    if (a.v_ < b.v_) return std::strong_ordering::less;
    if (b.v_ < a.v_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  Base v_{0};
};

/// Parses "a", "-a", "a/b". Decimal notation is rejected so that exactness
/// survives every interface. Throws std::invalid_argument on malformed input.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& r);

inline double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace amalgam
