#ifndef ISOMONO_MAT2_HPP
#define ISOMONO_MAT2_HPP

#include <ostream>

#include "isomono/errors.hpp"
#include "isomono/jet.hpp"

namespace isomono {

template <typename T> struct Mat2 {
  T a11{}, a12{}, a21{}, a22{};

  Mat2() = default;
  Mat2(T m11, T m12, T m21, T m22)
      : a11(std::move(m11)), a12(std::move(m12)), a21(std::move(m21)), a22(std::move(m22)) {}

  static Mat2 identity() { return Mat2(T(1), T(0), T(0), T(1)); }
  static Mat2 diag(const T &x, const T &y) { return Mat2(x, T(0), T(0), y); }

  T trace() const { return a11 + a22; }
  T det() const { return a11 * a22 - a12 * a21; }

  friend Mat2 operator+(const Mat2 &x, const Mat2 &y) {
    return {x.a11 + y.a11, x.a12 + y.a12, x.a21 + y.a21, x.a22 + y.a22};
  }
  friend Mat2 operator-(const Mat2 &x, const Mat2 &y) {
    return {x.a11 - y.a11, x.a12 - y.a12, x.a21 - y.a21, x.a22 - y.a22};
  }
  Mat2 operator-() const { return {-a11, -a12, -a21, -a22}; }
  friend Mat2 operator*(const Mat2 &x, const Mat2 &y) {
    return {x.a11 * y.a11 + x.a12 * y.a21, x.a11 * y.a12 + x.a12 * y.a22,
            x.a21 * y.a11 + x.a22 * y.a21, x.a21 * y.a12 + x.a22 * y.a22};
  }
  friend Mat2 operator*(const Mat2 &x, const T &s) {
    return {x.a11 * s, x.a12 * s, x.a21 * s, x.a22 * s};
  }
  friend Mat2 operator*(const T &s, const Mat2 &x) { return x * s; }

  friend bool operator==(const Mat2 &x, const Mat2 &y) {
    return x.a11 == y.a11 && x.a12 == y.a12 && x.a21 == y.a21 && x.a22 == y.a22;
  }
  friend bool operator!=(const Mat2 &x, const Mat2 &y) { return !(x == y); }

  friend std::ostream &operator<<(std::ostream &os, const Mat2 &m) {
    return os << "[[" << m.a11 << ", " << m.a12 << "], [" << m.a21 << ", " << m.a22 << "]]";
  }
};

template <typename T> bool is_zero(const Mat2<T> &m) {
  return is_zero(m.a11) && is_zero(m.a12) && is_zero(m.a21) && is_zero(m.a22);
}

// integer scaling, usable uniformly for scalars and matrices in Series code
template <typename C> C mul_int(const C &c, long k) { return c * C(static_cast<long>(k)); }
template <typename T> Mat2<T> mul_int(const Mat2<T> &m, long k) {
  T s(static_cast<long>(k));
  return m * s;
}

template <typename T> Mat2<T> inverse(const Mat2<T> &m) {
  T d = m.det();
  if (!is_unit(d))
    throw Error("Mat2: singular matrix");
  T di = inverse(d);
  return {m.a22 * di, -(m.a12 * di), -(m.a21 * di), m.a11 * di};
}

template <typename T> Mat2<T> commutator(const Mat2<T> &x, const Mat2<T> &y) {
  return x * y - y * x;
}

inline Mat2<Rational> value_part(const Mat2<JetQ> &m) {
  return {m.a11.val, m.a12.val, m.a21.val, m.a22.val};
}
inline Mat2<Rational> eps_part(const Mat2<JetQ> &m) {
  return {m.a11.eps, m.a12.eps, m.a21.eps, m.a22.eps};
}
inline Mat2<JetQ> lift_mat(const Mat2<Rational> &m) {
  return {JetQ(m.a11), JetQ(m.a12), JetQ(m.a21), JetQ(m.a22)};
}

} // namespace isomono

#endif
