#include "isomono/roots.hpp"

#include <cmath>

#include "isomono/errors.hpp"

namespace isomono {

std::vector<std::complex<double>> complex_roots(const PolyQ &p) {
  const int d = p.degree();
  if (d < 1)
    return {};
  std::vector<std::complex<double>> c(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k)
    c[static_cast<std::size_t>(k)] = p.coeff(k).to_double();
  for (auto &x : c)
    x /= c.back();
  // Durand-Kerner from a non-real geometric start
  std::vector<std::complex<double>> z(static_cast<std::size_t>(d));
  std::complex<double> seed(0.4, 0.9);
  std::complex<double> acc(1.0, 0.0);
  for (int k = 0; k < d; ++k) {
    acc *= seed;
    z[static_cast<std::size_t>(k)] = acc;
  }
  auto eval = [&](std::complex<double> x) {
    std::complex<double> v = 0;
    for (int k = d; k >= 0; --k)
      v = v * x + c[static_cast<std::size_t>(k)];
    return v;
  };
  for (int it = 0; it < 400; ++it) {
    double moved = 0;
    for (int i = 0; i < d; ++i) {
      std::complex<double> denom = 1;
      for (int j = 0; j < d; ++j)
        if (j != i)
          denom *= z[static_cast<std::size_t>(i)] - z[static_cast<std::size_t>(j)];
      std::complex<double> step = eval(z[static_cast<std::size_t>(i)]) / denom;
      z[static_cast<std::size_t>(i)] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-14)
      break;
  }
  return z;
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x))
    throw Error("rationalize: non-finite input");
  // continued fraction with denominator bound
  long sign = x < 0 ? -1 : 1;
  double y = std::fabs(x);
  long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int it = 0; it < 64; ++it) {
    double fl = std::floor(y);
    if (fl > 9e17)
      break;
    long a = static_cast<long>(fl);
    long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > max_den || q2 < 0)
      break;
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    double frac = y - fl;
    if (frac < 1e-15)
      break;
    y = 1.0 / frac;
  }
  if (q1 == 0)
    return Rational(sign * p0, q0);
  return Rational(sign * p1, q1);
}

std::optional<std::vector<Rational>> rational_roots_certified(const PolyQ &p) {
  const int d = p.degree();
  if (d <= 0)
    return std::vector<Rational>{};
  std::vector<Rational> out;
  PolyQ rem = p;
  auto roots = complex_roots(p);
  for (auto &z : roots) {
    if (std::fabs(z.imag()) > 1e-6)
      return std::nullopt;
    bool found = false;
    for (long bound : {100L, 100000L, 100000000L, 4000000000000L}) {
      Rational cand = rationalize(z.real(), bound);
      if (p.eval(cand).is_zero()) {
        out.push_back(cand);
        found = true;
        break;
      }
    }
    if (!found)
      return std::nullopt;
  }
  // certify multiplicity structure: the certified roots must exactly divide
  for (auto &r : out) {
    auto [q, rest] = divrem(rem, PolyQ::linear_root(r));
    if (!rest.is_zero_poly())
      return std::nullopt;
    rem = q;
  }
  if (rem.degree() != 0)
    return std::nullopt;
  return out;
}

} // namespace isomono
