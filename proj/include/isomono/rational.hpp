#ifndef ISOMONO_RATIONAL_HPP
#define ISOMONO_RATIONAL_HPP

#include <gmpxx.h>

#include <cstdint>
#include <ostream>
#include <string>

#include "isomono/errors.hpp"

namespace isomono {

// Arbitrary-precision rational, canonical form (reduced, positive denominator).
// Wraps mpq_class so every constructor path canonicalizes.
class Rational {
public:
  Rational() : v_(0) {}
  Rational(long n) : v_(n) {} // NOLINT: implicit by design
  Rational(long num, long den) : v_(num, den) {
    if (den == 0)
      throw Error("Rational: zero denominator");
    v_.canonicalize();
  }
  explicit Rational(const mpq_class &q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const mpz_class &z) : v_(z) {}

  static Rational parse(const std::string &s);
  // Doubles are dyadic rationals; the conversion is exact.
  static Rational from_double(double x);

  std::string str() const { return v_.get_str(); }
  double to_double() const { return v_.get_d(); }
  const mpq_class &raw() const { return v_; }
  mpz_class numerator() const { return v_.get_num(); }
  mpz_class denominator() const { return v_.get_den(); }

  bool is_zero() const { return sgn(v_) == 0; }
  bool is_one() const { return v_ == 1; }
  bool is_integer() const { return v_.get_den() == 1; }
  int sign() const { return sgn(v_); }

  Rational operator-() const { return Rational(mpq_class(-v_)); }

  friend Rational operator+(const Rational &a, const Rational &b) {
    return Rational(mpq_class(a.v_ + b.v_));
  }
  friend Rational operator-(const Rational &a, const Rational &b) {
    return Rational(mpq_class(a.v_ - b.v_));
  }
  friend Rational operator*(const Rational &a, const Rational &b) {
    return Rational(mpq_class(a.v_ * b.v_));
  }
  friend Rational operator/(const Rational &a, const Rational &b) {
    if (b.is_zero())
      throw Error("Rational: division by zero");
    return Rational(mpq_class(a.v_ / b.v_));
  }

  Rational &operator+=(const Rational &b) {
    v_ += b.v_;
    return *this;
  }
  Rational &operator-=(const Rational &b) {
    v_ -= b.v_;
    return *this;
  }
  Rational &operator*=(const Rational &b) {
    v_ *= b.v_;
    return *this;
  }
  Rational &operator/=(const Rational &b) {
    if (b.is_zero())
      throw Error("Rational: division by zero");
    v_ /= b.v_;
    return *this;
  }

  friend bool operator==(const Rational &a, const Rational &b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational &a, const Rational &b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational &a, const Rational &b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational &a, const Rational &b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational &a, const Rational &b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational &a, const Rational &b) { return a.v_ >= b.v_; }

  friend std::ostream &operator<<(std::ostream &os, const Rational &r) {
    return os << r.v_;
  }

  // Rough size measure; used for pivot selection in exact elimination.
  std::size_t bitsize() const {
    return mpz_sizeinbase(v_.get_num_mpz_t(), 2) + mpz_sizeinbase(v_.get_den_mpz_t(), 2);
  }

private:
  mpq_class v_;
};

inline Rational Rational::parse(const std::string &s) {
  if (s.empty())
    throw ParseError("empty rational literal");
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw ParseError("bad rational literal: '" + s + "'");
  if (q.get_den() == 0)
    throw ParseError("zero denominator in rational literal: '" + s + "'");
  q.canonicalize();
  return Rational(q);
}

inline Rational Rational::from_double(double x) {
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return Rational(q);
}

inline Rational abs(const Rational &r) { return r.sign() < 0 ? -r : r; }

inline Rational pow_int(const Rational &base, long e) {
  if (e < 0)
    return Rational(1) / pow_int(base, -e);
  Rational acc(1), b = base;
  long k = e;
  while (k > 0) {
    if (k & 1)
      acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

inline bool is_zero(const Rational &r) { return r.is_zero(); }
inline bool is_unit(const Rational &r) { return !r.is_zero(); }
inline Rational inverse(const Rational &r) { return Rational(1) / r; }

} // namespace isomono

#endif
