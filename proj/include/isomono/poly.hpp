#ifndef ISOMONO_POLY_HPP
#define ISOMONO_POLY_HPP

#include <initializer_list>
#include <ostream>
#include <utility>
#include <vector>

#include "isomono/errors.hpp"
#include "isomono/jet.hpp"
#include "isomono/rational.hpp"

namespace isomono {

// Univariate polynomial, ascending coefficients, trailing zeros stripped.
// K must be a commutative ring with is_zero(); field ops (divrem, gcd) are
// only instantiated for K = Rational.
template <typename K> struct Poly {
  std::vector<K> c;

  Poly() = default;
  explicit Poly(std::vector<K> coeffs) : c(std::move(coeffs)) { normalize(); }
  Poly(std::initializer_list<K> coeffs) : c(coeffs) { normalize(); }

  static Poly zero() { return Poly(); }
  static Poly constant(const K &a) { return Poly(std::vector<K>{a}); }
  // x - a
  static Poly linear_root(const K &a) { return Poly(std::vector<K>{-a, K(1)}); }
  static Poly monomial(int k, const K &a = K(1)) {
    std::vector<K> v(static_cast<std::size_t>(k) + 1, K());
    v.back() = a;
    return Poly(std::move(v));
  }

  void normalize() {
    while (!c.empty() && is_zero(c.back()))
      c.pop_back();
  }

  bool is_zero_poly() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; } // -1 for 0
  const K &leading() const {
    if (c.empty())
      throw Error("Poly: leading coefficient of zero polynomial");
    return c.back();
  }
  K coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(c.size()))
      return K();
    return c[static_cast<std::size_t>(k)];
  }

  K eval(const K &x) const {
    K acc{};
    for (auto it = c.rbegin(); it != c.rend(); ++it)
      acc = acc * x + *it;
    return acc;
  }

  Poly derivative() const {
    if (c.size() <= 1)
      return Poly();
    std::vector<K> d(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k)
      d[k - 1] = c[k] * K(static_cast<long>(k));
    return Poly(std::move(d));
  }

  // p(x) -> p(x + a), repeated synthetic division.
  Poly shift(const K &a) const {
    std::vector<K> w = c;
    const int n = static_cast<int>(w.size());
    for (int i = 0; i < n; ++i)
      for (int j = n - 2; j >= i; --j)
        w[static_cast<std::size_t>(j)] =
            w[static_cast<std::size_t>(j)] + a * w[static_cast<std::size_t>(j) + 1];
    return Poly(std::move(w));
  }

  // x^d * p(1/x) for a fixed container degree d >= degree().
  Poly reversed(int d) const {
    if (degree() > d)
      throw Error("Poly: reversal degree too small");
    std::vector<K> r(static_cast<std::size_t>(d) + 1, K());
    for (int k = 0; k <= degree(); ++k)
      r[static_cast<std::size_t>(d - k)] = coeff(k);
    return Poly(std::move(r));
  }

  Poly truncated(int k) const { // mod x^k
    if (k <= 0)
      return Poly();
    std::vector<K> r(c.begin(),
                     c.begin() + std::min<std::size_t>(c.size(), static_cast<std::size_t>(k)));
    return Poly(std::move(r));
  }

  friend Poly operator+(const Poly &a, const Poly &b) {
    std::vector<K> r(std::max(a.c.size(), b.c.size()), K());
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (i < a.c.size())
        r[i] = r[i] + a.c[i];
      if (i < b.c.size())
        r[i] = r[i] + b.c[i];
    }
    return Poly(std::move(r));
  }
  friend Poly operator-(const Poly &a, const Poly &b) { return a + (-b); }
  Poly operator-() const {
    std::vector<K> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i)
      r[i] = -c[i];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly &a, const Poly &b) {
    if (a.is_zero_poly() || b.is_zero_poly())
      return Poly();
    std::vector<K> r(a.c.size() + b.c.size() - 1, K());
    for (std::size_t i = 0; i < a.c.size(); ++i)
      for (std::size_t j = 0; j < b.c.size(); ++j)
        r[i + j] = r[i + j] + a.c[i] * b.c[j];
    return Poly(std::move(r));
  }
  friend Poly operator*(const Poly &a, const K &s) {
    std::vector<K> r(a.c.size());
    for (std::size_t i = 0; i < a.c.size(); ++i)
      r[i] = a.c[i] * s;
    return Poly(std::move(r));
  }
  friend Poly operator*(const K &s, const Poly &a) { return a * s; }

  friend bool operator==(const Poly &a, const Poly &b) { return a.c == b.c; }
  friend bool operator!=(const Poly &a, const Poly &b) { return !(a == b); }

  friend std::ostream &operator<<(std::ostream &os, const Poly &p) {
    if (p.is_zero_poly())
      return os << "0";
    for (int k = 0; k <= p.degree(); ++k) {
      if (k)
        os << " + ";
      os << "(" << p.coeff(k) << ")x^" << k;
    }
    return os;
  }
};

using PolyQ = Poly<Rational>;
using PolyJ = Poly<JetQ>;

template <typename K> bool is_zero(const Poly<K> &p) { return p.is_zero_poly(); }

// Exact division with remainder over a field.
inline std::pair<PolyQ, PolyQ> divrem(const PolyQ &a, const PolyQ &b) {
  if (b.is_zero_poly())
    throw Error("Poly: division by zero polynomial");
  PolyQ q, r = a;
  std::vector<Rational> qc;
  int db = b.degree();
  if (r.degree() >= db)
    qc.assign(static_cast<std::size_t>(r.degree() - db) + 1, Rational(0));
  while (r.degree() >= db) {
    int k = r.degree() - db;
    Rational f = r.leading() / b.leading();
    qc[static_cast<std::size_t>(k)] = f;
    r = r - PolyQ::monomial(k, f) * b;
  }
  return {PolyQ(std::move(qc)), r};
}

inline PolyQ monic(const PolyQ &p) {
  if (p.is_zero_poly())
    return p;
  return p * (Rational(1) / p.leading());
}

inline PolyQ gcd(const PolyQ &a, const PolyQ &b) {
  PolyQ x = a, y = b;
  while (!y.is_zero_poly()) {
    PolyQ r = divrem(x, y).second;
    x = y;
    y = r;
  }
  return monic(x);
}

// Unique interpolating polynomial of degree < #nodes; nodes must be distinct
// (units after differencing). Works over Rational and over jets.
template <typename K>
Poly<K> lagrange_interpolate(const std::vector<K> &xs, const std::vector<K> &ys) {
  if (xs.size() != ys.size())
    throw Error("lagrange_interpolate: size mismatch");
  Poly<K> acc;
  for (std::size_t j = 0; j < xs.size(); ++j) {
    Poly<K> numer = Poly<K>::constant(K(1));
    K denom(1);
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k == j)
        continue;
      numer = numer * Poly<K>::linear_root(xs[k]);
      K d = xs[j] - xs[k];
      if (!is_unit(d))
        throw DegenerateConfiguration("lagrange_interpolate: coincident nodes");
      denom = denom * d;
    }
    acc = acc + numer * (ys[j] / denom);
  }
  return acc;
}

template <typename K> Poly<K> pow_poly(const Poly<K> &p, int e) {
  Poly<K> acc = Poly<K>::constant(K(1));
  for (int i = 0; i < e; ++i)
    acc = acc * p;
  return acc;
}

inline PolyJ lift_poly(const PolyQ &p) {
  std::vector<JetQ> c(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i)
    c[i] = JetQ(p.c[i]);
  return PolyJ(std::move(c));
}

inline PolyQ value_part(const PolyJ &p) {
  std::vector<Rational> c(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i)
    c[i] = p.c[i].val;
  return PolyQ(std::move(c));
}

inline PolyQ eps_part(const PolyJ &p) {
  std::vector<Rational> c(p.c.size());
  for (std::size_t i = 0; i < p.c.size(); ++i)
    c[i] = p.c[i].eps;
  return PolyQ(std::move(c));
}

} // namespace isomono

#endif
