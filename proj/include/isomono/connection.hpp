#ifndef ISOMONO_CONNECTION_HPP
#define ISOMONO_CONNECTION_HPP

#include <utility>
#include <vector>

#include "isomono/linalg.hpp"
#include "isomono/mat2.hpp"
#include "isomono/ratfunc.hpp"
#include "isomono/series.hpp"
#include "isomono/singularity.hpp"

namespace isomono {

// Unreduced fraction of polynomials; the workhorse for templated assembly.
// Reduction to RatFunc happens only at the Rational level when needed.
template <typename S> struct Frac {
  Poly<S> num, den;

  Frac() : num(), den(Poly<S>::constant(S(1))) {}
  explicit Frac(Poly<S> n) : num(std::move(n)), den(Poly<S>::constant(S(1))) {}
  Frac(Poly<S> n, Poly<S> d) : num(std::move(n)), den(std::move(d)) {
    if (den.is_zero_poly())
      throw Error("Frac: zero denominator");
  }
  explicit Frac(const S &x) : Frac(Poly<S>::constant(x)) {}

  friend Frac operator+(const Frac &f, const Frac &g) {
    return Frac(f.num * g.den + g.num * f.den, f.den * g.den);
  }
  friend Frac operator-(const Frac &f, const Frac &g) {
    return Frac(f.num * g.den - g.num * f.den, f.den * g.den);
  }
  Frac operator-() const { return Frac(-num, den); }
  friend Frac operator*(const Frac &f, const Frac &g) {
    return Frac(f.num * g.num, f.den * g.den);
  }
  friend Frac operator/(const Frac &f, const Frac &g) {
    if (g.num.is_zero_poly())
      throw Error("Frac: division by zero");
    return Frac(f.num * g.den, f.den * g.num);
  }

  Frac derivative() const {
    return Frac(num.derivative() * den - num * den.derivative(), den * den);
  }

  S eval(const S &x) const {
    S d = den.eval(x);
    if (!is_unit(d))
      throw PoleCollision("Frac: evaluation at a pole");
    return num.eval(x) / d;
  }

  Series<S> expand_at(const S &t, int hi) const { return expand_fraction_at(num, den, t, hi); }
  Series<S> expand_at_infinity(int hi) const {
    return expand_fraction_at_infinity(num, den, hi);
  }

  // f(1/w) as a fraction in w.
  Frac at_inverse() const {
    int dn = num.degree(), dd = den.degree();
    if (num.is_zero_poly())
      return Frac();
    Poly<S> rn = num.reversed(dn), rd = den.reversed(dd);
    if (dd >= dn)
      return Frac(rn * Poly<S>::monomial(dd - dn), rd);
    return Frac(rn, rd * Poly<S>::monomial(dn - dd));
  }
};

using FracQ = Frac<Rational>;
using FracJ = Frac<JetQ>;

inline RatFunc to_ratfunc(const FracQ &f) { return RatFunc(f.num, f.den); }
inline RatFunc value_part(const FracJ &f) { return RatFunc(value_part(f.num), value_part(f.den)); }
// d/ds (num/den) as a reduced rational function.
inline RatFunc eps_part(const FracJ &f) {
  RatFunc nv(value_part(f.num)), ne(eps_part(f.num));
  RatFunc dv(value_part(f.den)), de(eps_part(f.den));
  return (ne * dv - nv * de) / (dv * dv);
}

enum class Bundle { kEn2, kE1 };

// A rank-2 connection matrix (the dx coefficient) on U_0, plus the divisor
// metadata needed to read the connection without its instance.
template <typename S> struct Conn {
  Bundle bundle = Bundle::kEn2;
  int n = 0;          // deg D
  Mat2<Frac<S>> om;   // dx-stripped connection matrix in the x chart
  std::vector<std::pair<S, int>> fin_div; // finite (position, order) pairs
  int n_inf = 0;

  Poly<S> pole_poly() const {
    Poly<S> p = Poly<S>::constant(S(1));
    for (auto &[t, k] : fin_div)
      p = p * pow_poly(Poly<S>::linear_root(t), k);
    return p;
  }
};

using ConnQ = Conn<Rational>;
using ConnJ = Conn<JetQ>;

// Closed-form C_i, D_i per point (x-basis polynomials; infinity reversed from
// the w-chart forms).
template <typename S> struct CDData {
  std::vector<Poly<S>> c_fin, d_fin; // one per finite point, in input order
  Poly<S> c_inf, d_inf;              // deg <= n_inf-1 / n_inf-2
};

template <typename S> CDData<S> build_cd(const InstData<S> &inst);

// The unique deg <= n-4 polynomial making every q_j apparent; assembled by
// expanding the elementary-transformed matrix at each q_j and demanding the
// residue vanish.
template <typename S>
Poly<S> solve_ctilde(const InstData<S> &inst, const CDData<S> &cd);

template <typename S>
Conn<S> assemble_normal_form(const InstData<S> &inst, const CDData<S> &cd,
                             const Poly<S> &ctilde);
template <typename S> Conn<S> assemble_normal_form(const InstData<S> &inst) {
  CDData<S> cd = build_cd(inst);
  return assemble_normal_form(inst, cd, solve_ctilde(inst, cd));
}

template <typename S> Conn<S> to_e1(const Conn<S> &conn, const InstData<S> &inst);

// Connection matrix in the w chart (includes the G_k twist for the bundle).
template <typename S> Mat2<Frac<S>> w_chart(const Conn<S> &conn);

// Apparent singularities and dual parameters of an E_1 connection (exact).
std::vector<DarbouxPair<Rational>> apparent_data(const ConnQ &conn);

// Checks the E_1 pole divisor matches the instance exactly.
void check_pole_divisor(const ConnQ &conn, const Instance &inst);

// ---------------------------------------------------------------------------
// template implementations

template <typename S> CDData<S> build_cd(const InstData<S> &inst) {
  CDData<S> out;
  const S half = S(1) / S(2);
  for (auto &pt : inst.pts) {
    if (pt.at_infinity)
      continue;
    // local variable u = x - t; other-point product shifted into u
    Poly<S> other = Poly<S>::constant(S(1));
    for (auto &pj : inst.pts)
      if (!pj.at_infinity && &pj != &pt)
        other = other * pow_poly(Poly<S>::linear_root(pj.pos), pj.order);
    Poly<S> other_u = other.shift(pt.pos);
    Poly<S> c_u, d_u;
    if (pt.kind == PointKind::kRamified) {
      std::vector<S> ac(static_cast<std::size_t>(pt.order), S());
      std::vector<S> bc(static_cast<std::size_t>(pt.order), S());
      for (int l = 0; l < pt.order; ++l)
        ac[static_cast<std::size_t>(l)] = pt.theta_ra[static_cast<std::size_t>(2 * l)] * half;
      for (int l = 0; l + 1 < pt.order; ++l)
        bc[static_cast<std::size_t>(l)] =
            pt.theta_ra[static_cast<std::size_t>(2 * l + 1)] * half;
      Poly<S> a(std::move(ac)), b(std::move(bc));
      Poly<S> un = Poly<S>::monomial(pt.order - 1, half);
      Poly<S> x1 = Poly<S>::monomial(1);
      c_u = (-((a * a - un * a - x1 * (b * b)) * other_u)).truncated(pt.order);
      d_u = a * S(2) - un;
    } else {
      Poly<S> thp(std::vector<S>(pt.theta_plus.begin(), pt.theta_plus.end()));
      Poly<S> thm(std::vector<S>(pt.theta_minus.begin(), pt.theta_minus.end()));
      c_u = (-(thp * thm * other_u)).truncated(pt.order);
      d_u = thp + thm;
    }
    out.c_fin.push_back(c_u.shift(-pt.pos));
    out.d_fin.push_back(d_u.shift(-pt.pos));
  }

  const auto &inf = inst.infinity();
  const int ni = inf.order;
  Poly<S> pinf = Poly<S>::constant(S(1)); // prod (1 - t_j w)^{n_j}
  for (auto &pj : inst.pts)
    if (!pj.at_infinity)
      pinf = pinf * pow_poly(Poly<S>{S(1), -pj.pos}, pj.order);
  Poly<S> chat, dhat_full;
  if (inf.kind == PointKind::kRamified) {
    std::vector<S> ac(static_cast<std::size_t>(ni), S());
    std::vector<S> bc(static_cast<std::size_t>(ni), S());
    for (int l = 0; l < ni; ++l)
      ac[static_cast<std::size_t>(l)] = inf.theta_ra[static_cast<std::size_t>(2 * l)] * half;
    for (int l = 0; l + 1 < ni; ++l)
      bc[static_cast<std::size_t>(l)] =
          inf.theta_ra[static_cast<std::size_t>(2 * l + 1)] * half;
    Poly<S> a(std::move(ac)), b(std::move(bc));
    Poly<S> wn = Poly<S>::monomial(ni - 1, half);
    Poly<S> w1 = Poly<S>::monomial(1);
    chat = (-((a * a - wn * a - w1 * (b * b)) * pinf)).truncated(ni);
    dhat_full = -(a * S(2) - wn);
  } else {
    Poly<S> thp(std::vector<S>(inf.theta_plus.begin(), inf.theta_plus.end()));
    Poly<S> thm(std::vector<S>(inf.theta_minus.begin(), inf.theta_minus.end()));
    chat = (-(thp * thm * pinf)).truncated(ni);
    dhat_full = -(thp + thm);
  }
  // the w^{n_inf-1} coefficient of the trace is pinned by the Fuchs relation
  Poly<S> dhat = dhat_full.truncated(ni - 1);
  out.c_inf = chat.reversed(ni - 1);
  out.d_inf = ni >= 2 ? dhat.reversed(ni - 2) : Poly<S>();
  return out;
}

namespace detail {

// c_0 and d_0 of the normal form as explicit fractions over P * Q_1.
template <typename S>
std::pair<Frac<S>, Frac<S>> c0_d0(const InstData<S> &inst, const CDData<S> &cd,
                                  const Poly<S> &ctilde) {
  Poly<S> bigp = inst.pole_poly();
  Poly<S> q1 = inst.apparent_poly();
  Poly<S> den = bigp * q1;
  Poly<S> c_num, d_num;
  std::size_t fin = 0;
  for (auto &pt : inst.pts) {
    if (pt.at_infinity)
      continue;
    Poly<S> cof = q1;
    for (auto &pj : inst.pts)
      if (!pj.at_infinity && &pj != &pt)
        cof = cof * pow_poly(Poly<S>::linear_root(pj.pos), pj.order);
    c_num = c_num + cd.c_fin[fin] * cof;
    d_num = d_num + cd.d_fin[fin] * cof;
    ++fin;
  }
  for (std::size_t j = 0; j < inst.dar.size(); ++j) {
    Poly<S> cof = bigp;
    for (std::size_t k = 0; k < inst.dar.size(); ++k)
      if (k != j)
        cof = cof * Poly<S>::linear_root(inst.dar[k].q);
    c_num = c_num + cof * inst.dar[j].p;
    d_num = d_num - cof;
  }
  int n = inst.n();
  Poly<S> xpow = n >= 3 ? Poly<S>::monomial(n - 3) : Poly<S>::constant(S(1));
  c_num = c_num + (ctilde + xpow * cd.c_inf) * den;
  d_num = d_num + cd.d_inf * den;
  return {Frac<S>(c_num, den), Frac<S>(d_num, den)};
}

// Residue at q_j of the (2,1) entry of the elementary transform by
// Phi_{q_j} = [[1,0],[p_j, x-q_j]]; zero iff q_j is apparent.
template <typename S>
S apparent_residue(const InstData<S> &inst, const Frac<S> &c0, const Frac<S> &d0,
                   std::size_t j) {
  const S &q = inst.dar[j].q;
  const S &p = inst.dar[j].p;
  Poly<S> bigp = inst.pole_poly();
  Frac<S> inv_p(Poly<S>::constant(S(1)), bigp);
  Frac<S> expr = c0 + Frac<S>(p) * d0 - Frac<S>(p * p) * inv_p;
  Frac<S> t21 = expr / Frac<S>(Poly<S>::linear_root(q));
  return t21.expand_at(q, 0).residue();
}

} // namespace detail

template <typename S>
Poly<S> solve_ctilde(const InstData<S> &inst, const CDData<S> &cd) {
  const std::size_t m = inst.dar.size(); // = n-3 unknown coefficients
  if (m == 0)
    return Poly<S>();
  std::vector<std::vector<S>> a(m, std::vector<S>(m, S()));
  std::vector<S> rhs(m, S());
  {
    auto [c0, d0] = detail::c0_d0(inst, cd, Poly<S>());
    for (std::size_t j = 0; j < m; ++j)
      rhs[j] = -detail::apparent_residue(inst, c0, d0, j);
  }
  for (std::size_t col = 0; col < m; ++col) {
    auto [c0, d0] = detail::c0_d0(inst, cd, Poly<S>::monomial(static_cast<int>(col)));
    for (std::size_t j = 0; j < m; ++j)
      a[j][col] = detail::apparent_residue(inst, c0, d0, j) + rhs[j];
  }
  auto sol = solve_linear(a, rhs);
  if (sol.status == SolveStatus::kInconsistent)
    throw DegenerateConfiguration("apparent-singularity system inconsistent");
  if (sol.status == SolveStatus::kUnderdetermined)
    throw DegenerateConfiguration("apparent-singularity system degenerate");
  return Poly<S>(std::move(sol.x));
}

template <typename S>
Conn<S> assemble_normal_form(const InstData<S> &inst, const CDData<S> &cd,
                             const Poly<S> &ctilde) {
  Conn<S> conn;
  conn.bundle = Bundle::kEn2;
  conn.n = inst.n();
  auto [c0, d0] = detail::c0_d0(inst, cd, ctilde);
  conn.om.a11 = Frac<S>();
  conn.om.a12 = Frac<S>(Poly<S>::constant(S(1)), inst.pole_poly());
  conn.om.a21 = c0;
  conn.om.a22 = d0;
  for (auto &pt : inst.pts) {
    if (pt.at_infinity)
      conn.n_inf = pt.order;
    else
      conn.fin_div.push_back({pt.pos, pt.order});
  }
  return conn;
}

template <typename S> Mat2<Frac<S>> w_chart(const Conn<S> &conn) {
  const int k = conn.bundle == Bundle::kEn2 ? conn.n - 2 : 1;
  Frac<S> jac(Poly<S>::constant(S(-1)), Poly<S>::monomial(2)); // dx = -dw/w^2
  Mat2<Frac<S>> m;
  Frac<S> wk(Poly<S>::monomial(k));
  m.a11 = conn.om.a11.at_inverse() * jac;
  m.a12 = conn.om.a12.at_inverse() * jac / wk;
  m.a21 = conn.om.a21.at_inverse() * jac * wk;
  m.a22 = conn.om.a22.at_inverse() * jac -
          Frac<S>(Poly<S>::constant(S(k)), Poly<S>::monomial(1));
  return m;
}

template <typename S> Conn<S> to_e1(const Conn<S> &conn, const InstData<S> &inst) {
  if (conn.bundle != Bundle::kEn2)
    throw Error("to_e1: expected a normal-form connection");
  Poly<S> q1 = inst.apparent_poly();
  std::vector<S> xs, ys;
  for (auto &d : inst.dar) {
    xs.push_back(d.q);
    ys.push_back(d.p);
  }
  Poly<S> q2 = lagrange_interpolate(xs, ys); // deg <= n-4, Q_2(q_j) = p_j
  const Frac<S> fq1(q1), fq2(q2);
  const Frac<S> c0 = conn.om.a21, d0 = conn.om.a22, invp = conn.om.a12;
  Conn<S> out;
  out.bundle = Bundle::kE1;
  out.n = conn.n;
  out.fin_div = conn.fin_div;
  out.n_inf = conn.n_inf;
  out.om.a11 = fq2 * invp;
  out.om.a12 = fq1 * invp;
  out.om.a21 = (c0 + fq2 * d0 + Frac<S>(q2.derivative())) / fq1 - fq2 * fq2 * invp / fq1;
  out.om.a22 = d0 + Frac<S>(q1.derivative()) / fq1 - fq2 * invp;
  return out;
}

} // namespace isomono

#endif
