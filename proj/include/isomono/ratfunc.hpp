#ifndef ISOMONO_RATFUNC_HPP
#define ISOMONO_RATFUNC_HPP

#include <ostream>
#include <utility>

#include "isomono/errors.hpp"
#include "isomono/poly.hpp"
#include "isomono/series.hpp"

namespace isomono {

// Reduced rational function over Q: gcd(num, den) = 1, den monic.
struct RatFunc {
  PolyQ num, den;

  RatFunc() : num(), den(PolyQ::constant(Rational(1))) {}
  explicit RatFunc(PolyQ n) : num(std::move(n)), den(PolyQ::constant(Rational(1))) {}
  RatFunc(PolyQ n, PolyQ d) : num(std::move(n)), den(std::move(d)) { reduce(); }
  explicit RatFunc(const Rational &x)
      : num(PolyQ::constant(x)), den(PolyQ::constant(Rational(1))) {}

  void reduce() {
    if (den.is_zero_poly())
      throw Error("RatFunc: zero denominator");
    if (num.is_zero_poly()) {
      den = PolyQ::constant(Rational(1));
      return;
    }
    PolyQ g = gcd(num, den);
    if (g.degree() > 0) {
      num = divrem(num, g).first;
      den = divrem(den, g).first;
    }
    Rational lead = den.leading();
    if (!lead.is_one()) {
      Rational inv = Rational(1) / lead;
      num = num * inv;
      den = den * inv;
    }
  }

  bool is_zero_fn() const { return num.is_zero_poly(); }
  bool is_polynomial() const { return den.degree() == 0; }

  Rational eval(const Rational &x) const {
    Rational d = den.eval(x);
    if (d.is_zero())
      throw PoleCollision("RatFunc: evaluation at a pole");
    return num.eval(x) / d;
  }

  RatFunc derivative() const {
    return RatFunc(num.derivative() * den - num * den.derivative(), den * den);
  }

  friend RatFunc operator+(const RatFunc &f, const RatFunc &g) {
    return RatFunc(f.num * g.den + g.num * f.den, f.den * g.den);
  }
  friend RatFunc operator-(const RatFunc &f, const RatFunc &g) {
    return RatFunc(f.num * g.den - g.num * f.den, f.den * g.den);
  }
  RatFunc operator-() const {
    RatFunc r = *this;
    r.num = -r.num;
    return r;
  }
  friend RatFunc operator*(const RatFunc &f, const RatFunc &g) {
    return RatFunc(f.num * g.num, f.den * g.den);
  }
  friend RatFunc operator/(const RatFunc &f, const RatFunc &g) {
    if (g.is_zero_fn())
      throw Error("RatFunc: division by zero");
    return RatFunc(f.num * g.den, f.den * g.num);
  }

  friend bool operator==(const RatFunc &f, const RatFunc &g) {
    return f.num == g.num && f.den == g.den;
  }
  friend bool operator!=(const RatFunc &f, const RatFunc &g) { return !(f == g); }

  friend std::ostream &operator<<(std::ostream &os, const RatFunc &f) {
    return os << "(" << f.num << ") / (" << f.den << ")";
  }

  // Order of vanishing at a finite point (negative at a pole).
  int order_at(const Rational &t) const {
    if (is_zero_fn())
      throw Error("RatFunc: order of zero function");
    auto mult = [&t](const PolyQ &p) {
      int m = 0;
      PolyQ q = p.shift(t);
      while (q.coeff(m).is_zero())
        ++m;
      return m;
    };
    return mult(num) - mult(den);
  }

  int pole_order_at(const Rational &t) const {
    if (is_zero_fn())
      return 0;
    int o = order_at(t);
    return o < 0 ? -o : 0;
  }

  // Order of vanishing at infinity in w = 1/x (negative for growth).
  int order_at_infinity() const {
    if (is_zero_fn())
      throw Error("RatFunc: order of zero function");
    return den.degree() - num.degree();
  }
};

inline bool is_zero(const RatFunc &f) { return f.is_zero_fn(); }
inline bool is_unit(const RatFunc &f) { return !f.is_zero_fn(); }
inline RatFunc inverse(const RatFunc &f) { return RatFunc(PolyQ::constant(Rational(1))) / f; }

// Rational function over jets: value part and directional-derivative part,
// each reduced over Q. Division stays exact.
using JetRF = Jet<RatFunc>;

inline JetRF jet_rf(const PolyJ &p) {
  return JetRF(RatFunc(value_part(p)), RatFunc(eps_part(p)));
}
inline JetRF jet_rf(const PolyJ &num, const PolyJ &den) {
  return jet_rf(num) / jet_rf(den);
}
inline JetRF derivative(const JetRF &f) { return {f.val.derivative(), f.eps.derivative()}; }
inline RatFunc derivative(const RatFunc &f) { return f.derivative(); }

// Laurent expansion of num/den at a finite point, exact coefficients through
// u^hi, u = x - t. Works for Rational and jet scalars (den value part != 0).
template <typename S>
Series<S> expand_fraction_at(const Poly<S> &num, const Poly<S> &den, const S &t, int hi) {
  if (is_zero(den))
    throw Unexpandable("expand_fraction_at: zero denominator");
  if (is_zero(num))
    return Series<S>();
  Poly<S> n = num.shift(t), d = den.shift(t);
  int vn = 0, vd = 0;
  while (vn <= n.degree() && is_zero(n.coeff(vn)))
    ++vn;
  while (vd <= d.degree() && is_zero(d.coeff(vd)))
    ++vd;
  if (vd > d.degree())
    throw Unexpandable("expand_fraction_at: denominator vanishes identically");
  // shift out common powers of u
  std::vector<S> nc, dc;
  for (int k = vn; k <= n.degree(); ++k)
    nc.push_back(n.coeff(k));
  for (int k = vd; k <= d.degree(); ++k)
    dc.push_back(d.coeff(k));
  if (!is_unit(dc[0]))
    throw Unexpandable("expand_fraction_at: leading denominator coefficient not invertible");
  int extra = hi - (vn - vd); // series terms needed beyond the valuation
  if (extra < 0)
    return Series<S>(hi + 1, hi, {});
  auto take = [extra](const std::vector<S> &src) {
    std::vector<S> v(static_cast<std::size_t>(extra) + 1, S());
    for (int k = 0; k <= extra && k < static_cast<int>(src.size()); ++k)
      v[static_cast<std::size_t>(k)] = src[static_cast<std::size_t>(k)];
    return v;
  };
  Series<S> ns(0, extra, take(nc));
  Series<S> ds(0, extra, take(dc));
  Series<S> r = ns * inverse_series(ds);
  return r.shifted(vn - vd).truncated(hi);
}

// Expansion in w = 1/x at infinity: f(1/w) as a Laurent series in w.
template <typename S>
Series<S> expand_fraction_at_infinity(const Poly<S> &num, const Poly<S> &den, int hi) {
  if (is_zero(den))
    throw Unexpandable("expand_fraction_at_infinity: zero denominator");
  if (is_zero(num))
    return Series<S>();
  int dn = num.degree(), dd = den.degree();
  // f(1/w) = w^(dd-dn) * rev(num)(w) / rev(den)(w)
  Poly<S> rn = num.reversed(dn), rd = den.reversed(dd);
  Series<S> s = expand_fraction_at(rn, rd, S(0), hi - (dd - dn));
  return s.shifted(dd - dn).truncated(hi);
}

inline SeriesQ laurent_expand(const RatFunc &f, const Rational &t, int hi) {
  return expand_fraction_at(f.num, f.den, t, hi);
}
inline SeriesQ laurent_expand_at_infinity(const RatFunc &f, int hi) {
  return expand_fraction_at_infinity(f.num, f.den, hi);
}

inline Rational residue_at(const RatFunc &f, const Rational &t) {
  if (f.is_zero_fn())
    return Rational(0);
  return laurent_expand(f, t, 0).residue();
}

// Residue of the 1-form f dx at infinity: res_{w=0} of -f(1/w)/w^2 dw.
inline Rational residue_at_infinity(const RatFunc &f) {
  if (f.is_zero_fn())
    return Rational(0);
  SeriesQ s = laurent_expand_at_infinity(f, 1);
  return -s.coeff(1);
}

} // namespace isomono

#endif
