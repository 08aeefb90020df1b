#ifndef ISOMONO_LOCALFORM_HPP
#define ISOMONO_LOCALFORM_HPP

#include <vector>

#include "isomono/connection.hpp"
#include "isomono/linalg.hpp"
#include "isomono/series.hpp"

namespace isomono {

// ---------------------------------------------------------------------------
// Local Laurent data of a connection at one point (dx- resp. dw-coefficient).

template <typename S>
Series<Mat2<S>> mat_series(const Series<S> &e11, const Series<S> &e12, const Series<S> &e21,
                           const Series<S> &e22) {
  int lo = 1 << 28, hi = 1 << 28;
  for (auto *e : {&e11, &e12, &e21, &e22}) {
    if (!e->a.empty())
      lo = std::min(lo, e->lo);
    hi = std::min(hi, e->hi);
  }
  if (lo == (1 << 28))
    lo = hi + 1;
  if (hi < lo)
    return Series<Mat2<S>>(hi + 1, hi, {});
  std::vector<Mat2<S>> v;
  v.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int k = lo; k <= hi; ++k)
    v.push_back(Mat2<S>(e11.coeff(k), e12.coeff(k), e21.coeff(k), e22.coeff(k)));
  return Series<Mat2<S>>(lo, hi, std::move(v));
}

template <typename S>
Series<Mat2<S>> local_matrix(const Mat2<Frac<S>> &om, const S &t, int hi) {
  return mat_series(om.a11.expand_at(t, hi), om.a12.expand_at(t, hi),
                    om.a21.expand_at(t, hi), om.a22.expand_at(t, hi));
}

template <typename S> Series<Mat2<S>> local_matrix_infinity(const Conn<S> &conn, int hi) {
  Mat2<Frac<S>> w = w_chart(conn);
  return mat_series(w.a11.expand_at(S(0), hi), w.a12.expand_at(S(0), hi),
                    w.a21.expand_at(S(0), hi), w.a22.expand_at(S(0), hi));
}

template <typename S>
Series<Mat2<S>> conjugate_series(const Series<Mat2<S>> &s, const Mat2<S> &g_inv,
                                 const Mat2<S> &g) {
  if (s.exact_zero() || s.a.empty())
    return s;
  std::vector<Mat2<S>> v;
  v.reserve(s.a.size());
  for (auto &c : s.a)
    v.push_back(g_inv * c * g);
  return Series<Mat2<S>>(s.lo, s.hi, std::move(v));
}

// ---------------------------------------------------------------------------
// Compatible framings.

// Columns are eigenvectors of the leading coefficient, ordered (theta+,
// theta-); first column normalized to leading entry 1, second to trailing
// entry 1 (with the obvious fallback when the entry vanishes).
template <typename S>
Mat2<S> framing_unramified(const Mat2<S> &leading, const S &thp0, const S &thm0) {
  if (!is_unit(thp0 - thm0))
    throw KindMismatch("framing_unramified: equal leading eigenvalues");
  auto eigencol = [&](const S &other) {
    Mat2<S> m = leading - Mat2<S>::diag(other, other);
    if (is_unit(m.a11) || is_unit(m.a21))
      return std::pair<S, S>{m.a11, m.a21};
    if (is_unit(m.a12) || is_unit(m.a22))
      return std::pair<S, S>{m.a12, m.a22};
    throw KindMismatch("framing_unramified: leading coefficient is scalar");
  };
  auto [v1, v2] = eigencol(thm0); // theta+ eigenvector
  auto [w1, w2] = eigencol(thp0); // theta- eigenvector
  S one(1);
  std::pair<S, S> colp = is_unit(v1) ? std::pair<S, S>{one, v2 / v1}
                                     : std::pair<S, S>{v1 / v2, one};
  std::pair<S, S> colm = is_unit(w2) ? std::pair<S, S>{w1 / w2, one}
                                     : std::pair<S, S>{one, w2 / w1};
  Mat2<S> phi(colp.first, colm.first, colp.second, colm.second);
  if (!is_unit(phi.det()))
    throw KindMismatch("framing_unramified: eigenvectors do not span");
  Mat2<S> check = inverse(phi) * leading * phi;
  if (!is_zero(check.a12) || !is_zero(check.a21) || check.a11 != thp0 || check.a22 != thm0)
    throw KindMismatch("framing_unramified: leading coefficient has wrong spectrum");
  return phi;
}

// The explicit framing of the ramified reduction; cap_pi is
// prod_{j != i} (t_i - t_j)^{n_j} at a finite point and -1 at infinity.
template <typename S>
Mat2<S> framing_ramified(const Mat2<S> &leading, const S &th0, const S &th1, const S &cap_pi) {
  if (!is_unit(th1))
    throw KindMismatch("framing_ramified: theta_1 must be nonzero");
  S half = S(1) / S(2);
  S a = th0 * half;
  Mat2<S> phi(S(1), a * cap_pi, a * cap_pi, (a * a * cap_pi + th1 * half) * cap_pi);
  Mat2<S> check = inverse(phi) * leading * phi;
  if (check.a11 != a || check.a22 != a || check.a12 != th1 * half || !is_zero(check.a21))
    throw KindMismatch("framing_ramified: leading coefficient is not the expected "
                       "Jordan block");
  return phi;
}

// ---------------------------------------------------------------------------
// Reductions.

template <typename S> struct UnramifiedReduction {
  Mat2<S> framing;
  std::vector<Mat2<S>> xi;              // xi[0] = I, zero diagonals above
  std::vector<S> theta_plus, theta_minus; // diagonal data, l = 0..xi_order
  int pole_order = 0;

  Series<Mat2<S>> xi_series() const {
    return Series<Mat2<S>>(0, static_cast<int>(xi.size()) - 1, xi);
  }
};

// Order-by-order commutator recursion; assumes `om` is the local matrix at
// the point with pole order n, framed data (thp0, thm0) its leading
// eigenvalues. xi_order counts how many xi coefficients beyond the identity.
template <typename S>
UnramifiedReduction<S> reduce_unramified(const Series<Mat2<S>> &om, int n, const S &thp0,
                                         const S &thm0, int xi_order) {
  if (om.a.empty() || om.order() != -n)
    throw KindMismatch("reduce_unramified: pole order mismatch");
  if (om.hi < xi_order - n)
    throw TruncationError("reduce_unramified: connection series too shallow");
  UnramifiedReduction<S> red;
  red.pole_order = n;
  red.framing = framing_unramified(om.coeff(-n), thp0, thm0);
  Mat2<S> phi_inv = inverse(red.framing);
  auto w = [&](int k) { return phi_inv * om.coeff(k - n) * red.framing; };

  const S delta = thp0 - thm0;
  red.xi.assign(static_cast<std::size_t>(xi_order) + 1, Mat2<S>());
  red.xi[0] = Mat2<S>::identity();
  std::vector<Mat2<S>> tdiag(static_cast<std::size_t>(xi_order) + 1, Mat2<S>());
  tdiag[0] = Mat2<S>::diag(thp0, thm0);
  for (int m = 1; m <= xi_order; ++m) {
    Mat2<S> acc = w(m);
    for (int k = 1; k <= m - 1; ++k)
      acc = acc + w(k) * red.xi[static_cast<std::size_t>(m - k)] -
            red.xi[static_cast<std::size_t>(m - k)] * tdiag[static_cast<std::size_t>(k)];
    int j = m - n + 1; // index hit by the derivative term
    if (j >= 1 && j <= m - 1)
      acc = acc + red.xi[static_cast<std::size_t>(j)] * S(static_cast<long>(j));
    Mat2<S> xi_m;
    if (n == 1) {
      // the derivative term lands on xi_m itself
      xi_m.a12 = -(acc.a12 / (S(static_cast<long>(m)) + delta));
      xi_m.a21 = -(acc.a21 / (S(static_cast<long>(m)) - delta));
    } else {
      xi_m.a12 = -(acc.a12 / delta);
      xi_m.a21 = acc.a21 / delta;
    }
    red.xi[static_cast<std::size_t>(m)] = xi_m;
    tdiag[static_cast<std::size_t>(m)] = Mat2<S>::diag(acc.a11, acc.a22);
  }
  for (int m = 0; m <= xi_order; ++m) {
    red.theta_plus.push_back(tdiag[static_cast<std::size_t>(m)].a11);
    red.theta_minus.push_back(tdiag[static_cast<std::size_t>(m)].a22);
  }
  // certify: Xi' + W Xi - Xi T vanishes through every computed order
  {
    Series<Mat2<S>> w_s = conjugate_series(om, phi_inv, red.framing);
    Series<Mat2<S>> xi_s = red.xi_series();
    int hi = std::min(om.hi, xi_order - n);
    Series<Mat2<S>> t_s(-n, xi_order - n, [&] {
      std::vector<Mat2<S>> v;
      for (int k = 0; k <= xi_order; ++k)
        v.push_back(tdiag[static_cast<std::size_t>(k)]);
      return v;
    }());
    Series<Mat2<S>> resid = xi_s.derivative() + w_s * xi_s - xi_s * t_s;
    for (int k = -n; k <= hi; ++k)
      if (!is_zero(resid.coeff(k)))
        throw InternalInconsistency("reduce_unramified: nonzero gauge residual");
  }
  return red;
}

// Gauge hooks for the ramified reduction: the row-one entries of each xi
// coefficient and the (1,2) slot of xi_0 are free; they default to zero and
// stay base-only constants.
template <typename S> struct RamifiedGauge {
  S c2{};
  std::vector<S> xi11, xi12;
  S hook11(int s) const {
    return s >= 1 && s <= static_cast<int>(xi11.size()) ? xi11[static_cast<std::size_t>(s - 1)]
                                                        : S(0);
  }
  S hook12(int s) const {
    return s >= 1 && s <= static_cast<int>(xi12.size()) ? xi12[static_cast<std::size_t>(s - 1)]
                                                        : S(0);
  }
};

template <typename S> struct RamifiedReduction {
  Mat2<S> framing;
  std::vector<Mat2<S>> xi;    // xi[0] = [[1, c2],[0, 1]]
  std::vector<S> alpha, beta; // a_k, b_k of the reduced shape
  std::vector<S> theta_zeta;  // theta_{l'}, l' = 0..2*len-1
  int pole_order = 0;

  Series<Mat2<S>> xi_series() const {
    return Series<Mat2<S>>(0, static_cast<int>(xi.size()) - 1, xi);
  }
};

template <typename S>
RamifiedReduction<S> reduce_ramified(const Series<Mat2<S>> &om, int n, const S &th0,
                                     const S &th1, const S &cap_pi, int xi_order,
                                     const RamifiedGauge<S> &gauge = {}) {
  if (n < 2)
    throw KindMismatch("reduce_ramified: ramified points have order >= 2");
  if (om.a.empty() || om.order() != -n)
    throw KindMismatch("reduce_ramified: pole order mismatch");
  const int last = xi_order; // a_k, b_k resolved through k = last - 1
  if (om.hi < last - n)
    throw TruncationError("reduce_ramified: connection series too shallow");
  RamifiedReduction<S> red;
  red.pole_order = n;
  red.framing = framing_ramified(om.coeff(-n), th0, th1, cap_pi);
  Mat2<S> phi_inv = inverse(red.framing);
  auto w = [&](int k) { return phi_inv * om.coeff(k - n) * red.framing; };

  const S half = S(1) / S(2);
  const S a0 = th0 * half, b0 = th1 * half;
  red.xi.assign(static_cast<std::size_t>(last) + 1, Mat2<S>());
  red.xi[0] = Mat2<S>(S(1), gauge.c2, S(0), S(1));
  for (int s = 1; s <= last; ++s) {
    red.xi[static_cast<std::size_t>(s)].a11 = gauge.hook11(s);
    red.xi[static_cast<std::size_t>(s)].a12 = gauge.hook12(s);
  }
  red.alpha.assign(static_cast<std::size_t>(last) + 1, S());
  red.beta.assign(static_cast<std::size_t>(last) + 1, S());
  red.alpha[0] = a0;
  red.beta[0] = b0;

  // T_k of the target shape [[alpha, beta],[x beta, alpha - dx/2x]]
  auto tmat = [&](int k) {
    Mat2<S> t(red.alpha[static_cast<std::size_t>(k)], red.beta[static_cast<std::size_t>(k)],
              k >= 1 ? red.beta[static_cast<std::size_t>(k - 1)] : S(0),
              red.alpha[static_cast<std::size_t>(k)]);
    if (k == n - 1)
      t.a22 -= half;
    return t;
  };
  // E_m = coefficient of u^{m-n} in Xi' + W Xi - Xi T, with current arrays
  auto equation = [&](int m) {
    Mat2<S> acc;
    for (int k = 0; k <= m; ++k)
      acc = acc + w(k) * red.xi[static_cast<std::size_t>(m - k)] -
            red.xi[static_cast<std::size_t>(m - k)] * tmat(k);
    int j = m - n + 1;
    if (j >= 1 && j <= m)
      acc = acc + red.xi[static_cast<std::size_t>(j)] * S(static_cast<long>(j));
    return acc;
  };

  // mini-solve per order; unknown slots patched into the state
  for (int m = 1; m <= last; ++m) {
    std::vector<S *> unknowns;
    if (m >= 2) {
      unknowns.push_back(&red.xi[static_cast<std::size_t>(m - 1)].a22);
      unknowns.push_back(&red.beta[static_cast<std::size_t>(m - 1)]);
    }
    unknowns.push_back(&red.xi[static_cast<std::size_t>(m)].a21);
    unknowns.push_back(&red.alpha[static_cast<std::size_t>(m)]);
    // equations: the previous order's (1,2) entry (now fully determined) and
    // the current order's (1,1), (2,1), (2,2)
    auto collect = [&]() {
      std::vector<S> rows;
      if (m >= 2) {
        Mat2<S> prev = equation(m - 1);
        rows.push_back(prev.a12);
      }
      Mat2<S> cur = equation(m);
      rows.push_back(cur.a11);
      rows.push_back(cur.a21);
      rows.push_back(cur.a22);
      return rows;
    };
    for (auto *u : unknowns)
      *u = S(0);
    std::vector<S> base = collect();
    std::vector<std::vector<S>> cols;
    for (auto *u : unknowns) {
      *u = S(1);
      std::vector<S> shifted = collect();
      *u = S(0);
      std::vector<S> col;
      for (std::size_t r = 0; r < base.size(); ++r)
        col.push_back(shifted[r] - base[r]);
      cols.push_back(std::move(col));
    }
    std::vector<std::vector<S>> a(base.size(), std::vector<S>(unknowns.size(), S()));
    std::vector<S> rhs(base.size(), S());
    for (std::size_t r = 0; r < base.size(); ++r) {
      rhs[r] = -base[r];
      for (std::size_t c = 0; c < unknowns.size(); ++c)
        a[r][c] = cols[c][r];
    }
    auto sol = solve_linear(a, rhs);
    if (!sol.ok())
      throw InternalInconsistency(
          "reduce_ramified: local data is not of the declared ramified type");
    if (sol.status == SolveStatus::kUnderdetermined)
      throw InternalInconsistency("reduce_ramified: gauge not fully pinned");
    for (std::size_t c = 0; c < unknowns.size(); ++c)
      *unknowns[c] = sol.x[c];
  }
  // the last pending pair (xi[last].a22, beta[last]) stays unresolved; drop it
  red.xi[static_cast<std::size_t>(last)].a22 = S(0);
  red.beta[static_cast<std::size_t>(last)] = S(0);
  red.xi.pop_back();
  red.alpha.pop_back();
  red.beta.pop_back();

  // certify the shape identity through the resolved orders
  {
    int top = last - 1;
    Series<Mat2<S>> w_s = conjugate_series(om, phi_inv, red.framing);
    Series<Mat2<S>> xi_s(0, top, std::vector<Mat2<S>>(red.xi.begin(), red.xi.end()));
    std::vector<Mat2<S>> tv;
    for (int k = 0; k <= top; ++k)
      tv.push_back(tmat(k));
    Series<Mat2<S>> t_s(-n, top - n, std::move(tv));
    Series<Mat2<S>> resid = xi_s.derivative() + w_s * xi_s - xi_s * t_s;
    for (int k = -n; k <= std::min(om.hi, top - n); ++k)
      if (!is_zero(resid.coeff(k)))
        throw InternalInconsistency("reduce_ramified: nonzero shape residual");
  }
  // zeta-tail: theta_{2k} = 2 a_k, theta_{2k+1} = 2 b_k
  for (std::size_t k = 0; k < red.alpha.size(); ++k) {
    red.theta_zeta.push_back(red.alpha[k] * S(2));
    red.theta_zeta.push_back(red.beta[k] * S(2));
  }
  return red;
}

// ---------------------------------------------------------------------------
// Per-point driver.

// prod_{j != i} (t_i - t_j)^{n_j} at a finite point; -1 at infinity (the
// leading coefficient of the chart section there).
template <typename S> S local_pi(const InstData<S> &inst, std::size_t pt_index) {
  const auto &pt = inst.pts[pt_index];
  if (pt.at_infinity)
    return S(-1);
  S acc(1);
  for (std::size_t j = 0; j < inst.pts.size(); ++j) {
    if (j == pt_index || inst.pts[j].at_infinity)
      continue;
    S d = pt.pos - inst.pts[j].pos;
    for (int k = 0; k < inst.pts[j].order; ++k)
      acc = acc * d;
  }
  return acc;
}

template <typename S> struct PointReduction {
  PointKind kind = PointKind::kRegular;
  bool at_infinity = false;
  int pole_order = 0;
  UnramifiedReduction<S> un; // valid for reg/un
  RamifiedReduction<S> ra;   // valid for ra
};

// Reduces the normal-form connection at point `pt_index`. xi_order defaults
// to 2 n_i + extra coefficients, enough for every Hamiltonian and residue
// computation downstream.
template <typename S>
PointReduction<S> reduce_point(const Conn<S> &conn, const InstData<S> &inst,
                               std::size_t pt_index, int extra = 3,
                               const RamifiedGauge<S> &gauge = {}) {
  const auto &pt = inst.pts[pt_index];
  const int n = pt.order;
  PointReduction<S> out;
  out.kind = pt.kind;
  out.at_infinity = pt.at_infinity;
  out.pole_order = n;
  if (pt.kind == PointKind::kRamified) {
    const int xi_order = 2 * n + std::max(extra, 1);
    Series<Mat2<S>> om = pt.at_infinity
                             ? local_matrix_infinity(conn, xi_order - n)
                             : local_matrix(conn.om, pt.pos, xi_order - n);
    out.ra = reduce_ramified(om, n, pt.theta_ra[0], pt.theta_ra[1],
                             local_pi(inst, pt_index), xi_order, gauge);
    for (int lp = 0; lp <= 2 * n - 2; ++lp)
      if (out.ra.theta_zeta[static_cast<std::size_t>(lp)] !=
          pt.theta_ra[static_cast<std::size_t>(lp)])
        throw InternalInconsistency("reduce_point: local data disagrees with the "
                                    "declared ramified theta tuple");
  } else {
    const int xi_order = 2 * n + std::max(extra, 1);
    Series<Mat2<S>> om = pt.at_infinity
                             ? local_matrix_infinity(conn, xi_order - n)
                             : local_matrix(conn.om, pt.pos, xi_order - n);
    out.un = reduce_unramified(om, n, pt.theta_plus[0], pt.theta_minus[0], xi_order);
    for (int l = 0; l < n; ++l)
      if (out.un.theta_plus[static_cast<std::size_t>(l)] !=
              pt.theta_plus[static_cast<std::size_t>(l)] ||
          out.un.theta_minus[static_cast<std::size_t>(l)] !=
              pt.theta_minus[static_cast<std::size_t>(l)])
        throw InternalInconsistency("reduce_point: local data disagrees with the "
                                    "declared theta tuple");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Holomorphic solutions at apparent singularities.

template <typename S> struct ApparentSolution {
  Mat2<S> framing; // [[1,0],[p,1]]
  std::vector<Mat2<S>> xi;

  Series<Mat2<S>> xi_series() const {
    return Series<Mat2<S>>(0, static_cast<int>(xi.size()) - 1, xi);
  }
};

template <typename S>
ApparentSolution<S> apparent_solution(const Series<Mat2<S>> &om, const S &p, int xi_order,
                                      const S &xi1_21_hook = S(0)) {
  if (om.a.empty() || om.order() != -1)
    throw NotApparent("apparent_solution: expected a simple pole");
  ApparentSolution<S> sol;
  sol.framing = Mat2<S>(S(1), S(0), p, S(1));
  Mat2<S> phi_inv = inverse(sol.framing);
  Mat2<S> res = phi_inv * om.coeff(-1) * sol.framing;
  if (!is_zero(res.a11) || !is_zero(res.a12) || !is_zero(res.a21) || res.a22 != S(-1))
    throw NotApparent("apparent_solution: residue is not diag(0,-1) in this frame");
  auto w = [&](int k) { return phi_inv * om.coeff(k) * sol.framing; };
  sol.xi.assign(static_cast<std::size_t>(xi_order) + 1, Mat2<S>());
  sol.xi[0] = Mat2<S>::identity();
  for (int m = 1; m <= xi_order; ++m) {
    Mat2<S> r;
    for (int k = 0; k <= m - 1; ++k)
      r = r + w(k) * sol.xi[static_cast<std::size_t>(m - 1 - k)];
    Mat2<S> xi_m;
    xi_m.a11 = -(r.a11 / S(static_cast<long>(m)));
    xi_m.a12 = -(r.a12 / S(static_cast<long>(m + 1)));
    xi_m.a22 = -(r.a22 / S(static_cast<long>(m)));
    if (m == 1) {
      if (!is_zero(r.a21))
        throw NotApparent("apparent_solution: obstruction at first order");
      xi_m.a21 = xi1_21_hook;
    } else {
      xi_m.a21 = -(r.a21 / S(static_cast<long>(m - 1)));
    }
    sol.xi[static_cast<std::size_t>(m)] = xi_m;
  }
  return sol;
}

} // namespace isomono

#endif
