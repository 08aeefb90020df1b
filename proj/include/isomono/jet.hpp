#ifndef ISOMONO_JET_HPP
#define ISOMONO_JET_HPP

#include <ostream>

#include "isomono/errors.hpp"
#include "isomono/rational.hpp"

namespace isomono {

// First-order jet a + eps*b with eps^2 = 0. Carries exact directional
// derivatives through every rational operation.
template <typename T> struct Jet {
  T val;
  T eps;

  Jet() : val(), eps() {}
  Jet(const T &x) : val(x), eps() {} // NOLINT: implicit by design
  Jet(const T &x, const T &dx) : val(x), eps(dx) {}

  friend Jet operator+(const Jet &x) { return x; }
  friend Jet operator-(const Jet &x) { return {-x.val, -x.eps}; }

  friend Jet operator+(const Jet &x, const Jet &y) {
    return {x.val + y.val, x.eps + y.eps};
  }
  friend Jet operator-(const Jet &x, const Jet &y) {
    return {x.val - y.val, x.eps - y.eps};
  }
  friend Jet operator*(const Jet &x, const Jet &y) {
    return {x.val * y.val, x.val * y.eps + x.eps * y.val};
  }
  friend Jet operator/(const Jet &x, const Jet &y) {
    T inv_v = inverse(y.val);
    T q = x.val * inv_v;
    return {q, (x.eps - q * y.eps) * inv_v};
  }

  Jet &operator+=(const Jet &x) { return *this = *this + x; }
  Jet &operator-=(const Jet &x) { return *this = *this - x; }
  Jet &operator*=(const Jet &x) { return *this = *this * x; }
  Jet &operator/=(const Jet &x) { return *this = *this / x; }

  friend bool operator==(const Jet &x, const Jet &y) {
    return x.val == y.val && x.eps == y.eps;
  }
  friend bool operator!=(const Jet &x, const Jet &y) { return !(x == y); }

  friend std::ostream &operator<<(std::ostream &os, const Jet &x) {
    return os << x.val << "+eps*" << x.eps;
  }
};

using JetQ = Jet<Rational>;

template <typename T> bool is_zero(const Jet<T> &x) {
  return is_zero(x.val) && is_zero(x.eps);
}
// Units of the jet ring are exactly the elements with invertible value part.
template <typename T> bool is_unit(const Jet<T> &x) { return is_unit(x.val); }
template <typename T> Jet<T> inverse(const Jet<T> &x) {
  T inv_v = inverse(x.val);
  return {inv_v, -(inv_v * x.eps * inv_v)};
}

// Scalar traits shared by the templated pipeline.
template <typename S> struct scalar_traits;
template <> struct scalar_traits<Rational> {
  static Rational value_part(const Rational &x) { return x; }
  static Rational eps_part(const Rational &) { return Rational(0); }
  static Rational make(long n) { return Rational(n); }
};
template <> struct scalar_traits<JetQ> {
  static Rational value_part(const JetQ &x) { return x.val; }
  static Rational eps_part(const JetQ &x) { return x.eps; }
  static JetQ make(long n) { return JetQ(Rational(n)); }
};

} // namespace isomono

#endif
