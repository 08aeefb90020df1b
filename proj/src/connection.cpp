#include "isomono/connection.hpp"

#include <algorithm>

#include "isomono/roots.hpp"

namespace isomono {

namespace {

// Entry times P must be a polynomial for a reduced E_1 connection.
PolyQ entry_times_p(const RatFunc &f, const PolyQ &bigp, const char *what) {
  RatFunc g = f * RatFunc(bigp);
  if (!g.is_polynomial())
    throw InternalInconsistency(std::string("E1 entry ") + what +
                                " has poles outside the divisor");
  return g.num;
}

} // namespace

std::vector<DarbouxPair<Rational>> apparent_data(const ConnQ &conn) {
  if (conn.bundle != Bundle::kE1)
    throw Error("apparent_data: expected an E1 connection");
  PolyQ bigp = conn.pole_poly();
  RatFunc a12 = to_ratfunc(conn.om.a12);
  if (a12.is_zero_fn())
    throw InvariantSubbundle("the degree-one subbundle is invariant (B = 0)");
  PolyQ b = entry_times_p(a12, bigp, "(1,2)");
  const int m = conn.n - 3;
  if (b.degree() > m)
    throw InternalInconsistency("deg B exceeds n-3");
  if (b.degree() < m)
    throw NonGenericApparentDivisor("apparent divisor meets infinity (deg B < n-3)");
  if (m == 0)
    return {};
  if (gcd(b, b.derivative()).degree() > 0)
    throw NonGenericApparentDivisor("apparent divisor is not reduced");
  auto roots = rational_roots_certified(monic(b));
  if (!roots)
    throw NonGenericApparentDivisor("apparent singularities are not rational");
  for (auto &q : *roots)
    for (auto &[t, k] : conn.fin_div) {
      (void)k;
      if (q == t)
        throw NonGenericApparentDivisor("apparent divisor meets the polar divisor");
    }
  PolyQ a = entry_times_p(to_ratfunc(conn.om.a11), bigp, "(1,1)");
  std::vector<DarbouxPair<Rational>> out;
  for (auto &q : *roots)
    out.push_back({q, a.eval(q)});
  std::sort(out.begin(), out.end(),
            [](const DarbouxPair<Rational> &x, const DarbouxPair<Rational> &y) {
              return x.q < y.q;
            });
  return out;
}

void check_pole_divisor(const ConnQ &conn, const Instance &inst) {
  PolyQ bigp = conn.pole_poly();
  RatFunc entries[4] = {to_ratfunc(conn.om.a11), to_ratfunc(conn.om.a12),
                        to_ratfunc(conn.om.a21), to_ratfunc(conn.om.a22)};
  for (auto &e : entries) {
    if (e.is_zero_fn())
      continue;
    if (!divrem(bigp, e.den).second.is_zero_poly())
      throw InternalInconsistency("entry denominator does not divide P(x)");
  }
  for (auto &pt : inst.pts) {
    if (pt.at_infinity)
      continue;
    int worst = 0;
    for (auto &e : entries)
      worst = std::max(worst, e.is_zero_fn() ? 0 : e.pole_order_at(pt.pos));
    if (worst != pt.order)
      throw InternalInconsistency("pole order at t = " + pt.pos.str() + " is " +
                                  std::to_string(worst) + ", expected " +
                                  std::to_string(pt.order));
  }
  Mat2<FracQ> w = w_chart(conn);
  int worst = 0;
  const FracQ *we[4] = {&w.a11, &w.a12, &w.a21, &w.a22};
  for (auto *e : we) {
    RatFunc r = to_ratfunc(*e);
    if (r.is_zero_fn())
      continue;
    worst = std::max(worst, r.pole_order_at(Rational(0)));
  }
  int want = 0;
  for (auto &pt : inst.pts)
    if (pt.at_infinity)
      want = pt.order;
  if (worst != want)
    throw InternalInconsistency("pole order at infinity is " + std::to_string(worst) +
                                ", expected " + std::to_string(want));
}

} // namespace isomono
