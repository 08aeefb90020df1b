#ifndef ISOMONO_SERIES_HPP
#define ISOMONO_SERIES_HPP

#include <algorithm>
#include <ostream>
#include <vector>

#include "isomono/errors.hpp"
#include "isomono/mat2.hpp"
#include "isomono/poly.hpp"

namespace isomono {

// Truncated Laurent series sum_{k=lo}^{hi} a[k-lo] u^k. The truncation order
// `hi` is hard metadata: reading past it throws rather than zero-padding.
template <typename C> struct Series {
  int lo = 0;
  int hi = -1; // hi < lo encodes "identically zero to infinite order"
  std::vector<C> a;

  Series() : lo(0), hi(1 << 28) {} // exact zero
  Series(int lo_, int hi_, std::vector<C> coeffs) : lo(lo_), hi(hi_), a(std::move(coeffs)) {
    if (static_cast<int>(a.size()) != hi - lo + 1)
      throw Error("Series: coefficient count mismatch");
    trim_front();
  }

  static Series zero() { return Series(); }
  static Series constant(const C &x, int hi_) {
    if (hi_ < 0)
      throw TruncationError("Series: constant beyond truncation");
    std::vector<C> v(static_cast<std::size_t>(hi_) + 1, C());
    v[0] = x;
    return Series(0, hi_, std::move(v));
  }

  bool exact_zero() const { return a.empty() && hi >= (1 << 27); }

  void trim_front() {
    std::size_t k = 0;
    while (k < a.size() && is_zero(a[k]))
      ++k;
    if (k) {
      a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(k));
      lo += static_cast<int>(k);
    }
    if (a.empty()) {
      // nothing known below hi; treat as zero through hi
      lo = hi + 1;
    }
  }

  // Valuation of the nonzero part; throws on (truncated) zero series.
  int order() const {
    if (a.empty())
      throw Error("Series: order of zero series");
    return lo;
  }

  C coeff(int k) const {
    if (k > hi)
      throw TruncationError("Series: coefficient beyond truncation order");
    if (k < lo || a.empty())
      return C();
    return a[static_cast<std::size_t>(k - lo)];
  }

  C residue() const { return coeff(-1); }

  Series truncated(int new_hi) const {
    if (exact_zero())
      return *this;
    if (new_hi > hi)
      throw TruncationError("Series: cannot extend truncation");
    if (new_hi < lo)
      return Series(new_hi + 1, new_hi, {});
    std::vector<C> v(a.begin(), a.begin() + (new_hi - lo + 1));
    return Series(lo, new_hi, std::move(v));
  }

  Series shifted(int k) const { // multiply by u^k
    Series r = *this;
    if (r.exact_zero())
      return r;
    r.lo += k;
    r.hi += k;
    return r;
  }

  Series derivative() const { // d/du
    if (exact_zero())
      return *this;
    std::vector<C> v;
    v.reserve(a.size());
    for (int k = lo; k <= hi; ++k)
      v.push_back(mul_int(coeff(k), static_cast<long>(k)));
    return Series(lo - 1, hi - 1, std::move(v));
  }

  friend Series operator+(const Series &x, const Series &y) {
    if (x.exact_zero())
      return y;
    if (y.exact_zero())
      return x;
    int lo_ = std::min(x.lo, y.lo), hi_ = std::min(x.hi, y.hi);
    if (hi_ < lo_)
      return Series(hi_ + 1, hi_, {});
    std::vector<C> v;
    v.reserve(static_cast<std::size_t>(hi_ - lo_ + 1));
    for (int k = lo_; k <= hi_; ++k)
      v.push_back(x.coeff(k) + y.coeff(k));
    return Series(lo_, hi_, std::move(v));
  }
  friend Series operator-(const Series &x, const Series &y) { return x + (-y); }
  Series operator-() const {
    Series r = *this;
    for (auto &c : r.a)
      c = -c;
    return r;
  }

  friend Series operator*(const Series &x, const Series &y) {
    if (x.exact_zero() || y.exact_zero())
      return Series();
    if (x.a.empty() || y.a.empty()) {
      int hi_ = x.a.empty() ? (x.hi + y.order()) : (y.hi + x.order());
      // zero-through-truncation times something
      if (x.a.empty() && y.a.empty())
        hi_ = std::min(x.hi + y.lo, y.hi + x.lo);
      return Series(hi_ + 1, hi_, {});
    }
    int lo_ = x.lo + y.lo;
    int hi_ = std::min(x.hi + y.lo, y.hi + x.lo);
    if (hi_ < lo_)
      return Series(hi_ + 1, hi_, {});
    std::vector<C> v(static_cast<std::size_t>(hi_ - lo_ + 1), C());
    for (int i = x.lo; i <= x.hi && i + y.lo <= hi_; ++i) {
      const C &xc = x.a[static_cast<std::size_t>(i - x.lo)];
      if (is_zero(xc))
        continue;
      for (int j = y.lo; j <= y.hi && i + j <= hi_; ++j)
        v[static_cast<std::size_t>(i + j - lo_)] =
            v[static_cast<std::size_t>(i + j - lo_)] + xc * y.a[static_cast<std::size_t>(j - y.lo)];
    }
    return Series(lo_, hi_, std::move(v));
  }

  friend Series operator*(const Series &x, const C &s) {
    Series r = x;
    for (auto &c : r.a)
      c = c * s;
    r.trim_front();
    return r;
  }
  friend Series operator*(const C &s, const Series &x) { return x * s; }

  friend std::ostream &operator<<(std::ostream &os, const Series &s) {
    if (s.a.empty())
      return os << "O(u^" << (s.hi + 1) << ")";
    for (int k = s.lo; k <= s.hi; ++k)
      os << (k > s.lo ? " + " : "") << "(" << s.coeff(k) << ")u^" << k;
    return os << " + O(u^" << (s.hi + 1) << ")";
  }
};

// Inverse of a series with unit leading coefficient (scalar or matrix ring).
template <typename C> Series<C> inverse_series(const Series<C> &x) {
  if (x.a.empty())
    throw Error("Series: inverse of zero series");
  const int v = x.lo;
  const int m = x.hi - x.lo; // coefficients available beyond leading
  C lead_inv = inverse(x.a[0]);
  std::vector<C> b(static_cast<std::size_t>(m) + 1, C());
  b[0] = lead_inv;
  for (int k = 1; k <= m; ++k) {
    C acc{};
    for (int j = 1; j <= k; ++j)
      acc = acc + x.a[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(k - j)];
    b[static_cast<std::size_t>(k)] = -(lead_inv * acc);
  }
  return Series<C>(-v, -v + m, std::move(b));
}

// Substitute u = z^2 (exponents double, truncation tightens accordingly).
template <typename C> Series<C> substitute_square(const Series<C> &x) {
  if (x.exact_zero())
    return x;
  if (x.a.empty())
    return Series<C>(2 * x.hi + 2, 2 * x.hi + 1, {});
  int lo_ = 2 * x.lo, hi_ = 2 * x.hi + 1;
  std::vector<C> v(static_cast<std::size_t>(hi_ - lo_ + 1), C());
  for (int k = x.lo; k <= x.hi; ++k)
    v[static_cast<std::size_t>(2 * (k - x.lo))] = x.coeff(k);
  return Series<C>(lo_, hi_, std::move(v));
}

template <typename S> Series<S> series_from_poly(const Poly<S> &p, int hi) {
  std::vector<S> v(static_cast<std::size_t>(hi) + 1, S());
  for (int k = 0; k <= std::min(hi, p.degree()); ++k)
    v[static_cast<std::size_t>(k)] = p.coeff(k);
  return Series<S>(0, hi, std::move(v));
}

using SeriesQ = Series<Rational>;
using MatSeriesQ = Series<Mat2<Rational>>;
using MatSeriesJ = Series<Mat2<JetQ>>;

template <typename T> Series<T> trace_series(const Series<Mat2<T>> &m) {
  if (m.exact_zero())
    return Series<T>();
  std::vector<T> v;
  v.reserve(m.a.size());
  for (auto &c : m.a)
    v.push_back(c.trace());
  return Series<T>(m.lo, m.hi, std::move(v));
}

inline MatSeriesQ value_part(const MatSeriesJ &s) {
  if (s.exact_zero())
    return MatSeriesQ();
  std::vector<Mat2<Rational>> v;
  v.reserve(s.a.size());
  for (auto &c : s.a)
    v.push_back(value_part(c));
  return MatSeriesQ(s.lo, s.hi, std::move(v));
}

inline MatSeriesQ eps_part(const MatSeriesJ &s) {
  if (s.exact_zero())
    return MatSeriesQ();
  std::vector<Mat2<Rational>> v;
  v.reserve(s.a.size());
  for (auto &c : s.a)
    v.push_back(eps_part(c));
  return MatSeriesQ(s.lo, s.hi, std::move(v));
}

inline MatSeriesJ lift_series(const MatSeriesQ &s) {
  if (s.exact_zero())
    return MatSeriesJ();
  std::vector<Mat2<JetQ>> v;
  v.reserve(s.a.size());
  for (auto &c : s.a)
    v.push_back(lift_mat(c));
  return MatSeriesJ(s.lo, s.hi, std::move(v));
}

} // namespace isomono

#endif
