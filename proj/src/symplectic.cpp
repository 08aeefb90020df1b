#include "isomono/symplectic.hpp"

#include "isomono/connection.hpp"

namespace isomono {

namespace {

// sum_i D_i(q)/(q-t_i)^{n_i} + D_inf(q)
template <typename S>
S d_tail_at(const InstData<S> &inst, const CDData<S> &cd, const S &q) {
  S acc(0);
  std::size_t fin = 0;
  for (auto &pt : inst.pts) {
    if (pt.at_infinity)
      continue;
    S d = q - pt.pos;
    if (!is_unit(d))
      throw PoleCollision("eta: apparent point collides with a singular point");
    S den(1);
    for (int k = 0; k < pt.order; ++k)
      den = den * d;
    acc = acc + cd.d_fin[fin].eval(q) / den;
    ++fin;
  }
  acc = acc + cd.d_inf.eval(q);
  return acc;
}

} // namespace

EtaCoordinates eta_from_p(const Instance &inst) {
  CDData<Rational> cd = build_cd(inst);
  PolyQ bigp = inst.pole_poly();
  EtaCoordinates out;
  for (auto &d : inst.dar) {
    Rational pq = bigp.eval(d.q);
    if (pq.is_zero())
      throw PoleCollision("eta: apparent point collides with a singular point");
    out.pairs.push_back({d.q, d.p / pq - d_tail_at(inst, cd, d.q)});
  }
  return out;
}

std::vector<DarbouxPair<Rational>> p_from_eta(const Instance &inst,
                                              const EtaCoordinates &eta) {
  CDData<Rational> cd = build_cd(inst);
  PolyQ bigp = inst.pole_poly();
  std::vector<DarbouxPair<Rational>> out;
  for (auto &[q, e] : eta.pairs) {
    Rational pq = bigp.eval(q);
    if (pq.is_zero())
      throw PoleCollision("eta: apparent point collides with a singular point");
    out.push_back({q, pq * (e + d_tail_at(inst, cd, q))});
  }
  return out;
}

Rational hamiltonian(const Instance &inst, const Coord &c, int extra) {
  auto conn = assemble_normal_form<Rational>(inst);
  return hamiltonian(inst, conn, c, extra);
}

// ---------------------------------------------------------------------------
// Krichever 2-form machinery.

namespace {

// eps part at fixed x of a series in the moving local variable u = x - pos
MatSeriesQ fixed_x_eps(const MatSeriesJ &s, const Rational &dpos) {
  MatSeriesQ e = eps_part(s);
  if (dpos.is_zero())
    return e;
  MatSeriesQ v = value_part(s);
  return e - v.derivative() * Mat2<Rational>::diag(dpos, dpos);
}

MatSeriesJ frac_matrix_series(const Mat2<Frac<JetQ>> &om, const JetQ &t, int hi) {
  return mat_series(om.a11.expand_at(t, hi), om.a12.expand_at(t, hi),
                    om.a21.expand_at(t, hi), om.a22.expand_at(t, hi));
}

// Phi * Xi as a jet matrix series.
MatSeriesJ dressed_series(const Mat2<JetQ> &phi, const MatSeriesJ &xi) {
  std::vector<Mat2<JetQ>> v;
  v.reserve(xi.a.size());
  for (auto &c : xi.a)
    v.push_back(phi * c);
  return MatSeriesJ(xi.lo, xi.hi, std::move(v));
}

// delta(Lambda) at fixed x for an unramified/regular point:
//   diag over +,- of  sum_{l != n-1} eps(theta_l) u^{l-n+1}/(l-n+1)
//                   - dpos * sum_l val(theta_l) u^{l-n}.
MatSeriesQ lambda_variation(const std::vector<JetQ> &tp, const std::vector<JetQ> &tm,
                            int n, const Rational &dpos, int hi) {
  const int lmax = static_cast<int>(tp.size()) - 1;
  int lo = -n;
  std::vector<Mat2<Rational>> v(static_cast<std::size_t>(hi - lo + 1));
  auto add = [&](int e, const Rational &x, bool plus) {
    if (e < lo || e > hi)
      return;
    auto &m = v[static_cast<std::size_t>(e - lo)];
    if (plus)
      m.a11 += x;
    else
      m.a22 += x;
  };
  for (int l = 0; l <= lmax; ++l) {
    if (l != n - 1) {
      Rational c(1, l - n + 1);
      add(l - n + 1, tp[static_cast<std::size_t>(l)].eps * c, true);
      add(l - n + 1, tm[static_cast<std::size_t>(l)].eps * c, false);
    }
    if (!dpos.is_zero()) {
      add(l - n, -(dpos * tp[static_cast<std::size_t>(l)].val), true);
      add(l - n, -(dpos * tm[static_cast<std::size_t>(l)].val), false);
    }
  }
  return MatSeriesQ(lo, hi, std::move(v));
}

// delta(Lambda) in the zeta chart of a ramified point (positions frozen):
//   diag entries sum_{l' != 2n-2} (+-1)^{l'} eps(theta_{l'}) z^{l'-2n+2}/(l'-2n+2).
MatSeriesQ lambda_variation_zeta(const std::vector<JetQ> &tz, int n, int hi) {
  const int lmax = static_cast<int>(tz.size()) - 1;
  int lo = -2 * n + 2;
  std::vector<Mat2<Rational>> v(static_cast<std::size_t>(hi - lo + 1));
  for (int lp = 0; lp <= lmax; ++lp) {
    if (lp == 2 * n - 2)
      continue;
    int e = lp - 2 * n + 2;
    if (e < lo || e > hi)
      continue;
    Rational x = tz[static_cast<std::size_t>(lp)].eps * Rational(1, e);
    auto &m = v[static_cast<std::size_t>(e - lo)];
    m.a11 += x;
    m.a22 += (lp % 2 == 0) ? x : -x;
  }
  return MatSeriesQ(lo, hi, std::move(v));
}

// substitute u = z^2 into a du-coefficient series and convert to the
// dz-coefficient: f(z^2) * 2z.
MatSeriesJ to_zeta_chart(const MatSeriesJ &s) {
  MatSeriesJ sq = substitute_square(s);
  std::vector<Mat2<JetQ>> v;
  v.reserve(sq.a.size());
  for (auto &c : sq.a)
    v.push_back(c * JetQ(Rational(2)));
  return MatSeriesJ(sq.lo + 1, sq.hi + 1, std::move(v));
}

MatSeriesJ mzeta_series(int hi) {
  std::vector<Mat2<JetQ>> v(static_cast<std::size_t>(hi) + 1);
  v[0] = Mat2<JetQ>(JetQ(Rational(1)), JetQ(Rational(1)), JetQ(Rational(0)),
                    JetQ(Rational(0)));
  if (hi >= 1)
    v[1] = Mat2<JetQ>(JetQ(Rational(0)), JetQ(Rational(0)), JetQ(Rational(1)),
                      JetQ(Rational(-1)));
  return MatSeriesJ(0, hi, std::move(v));
}

// M_zeta^{-1} = [[1/2, 1/(2z)],[1/2, -1/(2z)]] as an exact Laurent series.
MatSeriesQ mzeta_inverse_series(int hi) {
  std::vector<Mat2<Rational>> v(static_cast<std::size_t>(hi + 2));
  v[0] = Mat2<Rational>(Rational(0), Rational(1, 2), Rational(0), Rational(-1, 2));
  v[1] = Mat2<Rational>(Rational(1, 2), Rational(0), Rational(1, 2), Rational(0));
  return MatSeriesQ(-1, hi, std::move(v));
}

OmegaData::PointBlock block_from(const MatSeriesJ &om, const MatSeriesJ &v_series,
                                 const MatSeriesQ &vinv, const MatSeriesQ &dlam,
                                 const Rational &dpos, bool ramified) {
  OmegaData::PointBlock b;
  b.ramified = ramified;
  b.a = fixed_x_eps(om, dpos);
  MatSeriesQ vval = value_part(v_series);
  MatSeriesQ dv = fixed_x_eps(v_series, dpos);
  b.u = dv * vinv - vval * dlam * vinv;
  return b;
}

} // namespace

OmegaData omega_data(const Instance &inst, const TangentDirection &dir, int extra,
                     const OmegaGauge &gauge) {
  InstanceJ lifted = lift(inst, dir);
  auto connJ = assemble_normal_form<JetQ>(lifted);
  OmegaData out;
  for (std::size_t i = 0; i < lifted.pts.size(); ++i) {
    const auto &pt = lifted.pts[i];
    const int n = pt.order;
    const int xi_order = 2 * n + std::max(extra, 2);
    MatSeriesJ om = pt.at_infinity
                        ? local_matrix_infinity(connJ, xi_order - n)
                        : frac_matrix_series(connJ.om, pt.pos, xi_order - n);
    const Rational dpos = pt.at_infinity ? Rational(0) : pt.pos.eps;
    if (pt.kind == PointKind::kRamified) {
      RamifiedGauge<JetQ> rg;
      rg.xi11.assign(static_cast<std::size_t>(xi_order), JetQ(gauge.ramified_hook11));
      auto red = reduce_ramified(om, n, pt.theta_ra[0], pt.theta_ra[1],
                                 local_pi(lifted, i), xi_order, rg);
      MatSeriesJ om_z = to_zeta_chart(om);
      MatSeriesJ xi_z = substitute_square(red.xi_series());
      MatSeriesJ v = dressed_series(red.framing, xi_z) * mzeta_series(xi_z.hi);
      // V^{-1} = M_zeta^{-1} Xi(z^2)^{-1} Phi^{-1}; M_zeta's leading term is
      // singular, so invert the factors separately
      MatSeriesQ xi_inv = inverse_series(value_part(xi_z));
      Mat2<Rational> phi_inv = inverse(value_part(red.framing));
      std::vector<Mat2<Rational>> tailv;
      for (auto &c : xi_inv.a)
        tailv.push_back(c * phi_inv);
      MatSeriesQ vinv = mzeta_inverse_series(xi_z.hi) *
                        MatSeriesQ(xi_inv.lo, xi_inv.hi, std::move(tailv));
      MatSeriesQ dlam = lambda_variation_zeta(red.theta_zeta, n, v.hi - 2 * n + 2);
      out.sing.push_back(block_from(om_z, v, vinv, dlam, Rational(0), true));
    } else {
      auto red = reduce_unramified(om, n, pt.theta_plus[0], pt.theta_minus[0], xi_order);
      MatSeriesJ v = dressed_series(red.framing, red.xi_series());
      MatSeriesQ vinv = inverse_series(value_part(v));
      MatSeriesQ dlam = lambda_variation(red.theta_plus, red.theta_minus, n, dpos,
                                         v.hi - n + 1);
      out.sing.push_back(block_from(om, v, vinv, dlam, dpos, false));
    }
  }
  const int app_order = 4 + std::max(extra, 0);
  for (std::size_t j = 0; j < lifted.dar.size(); ++j) {
    const JetQ q = lifted.dar[j].q;
    MatSeriesJ om = frac_matrix_series(connJ.om, q, app_order);
    auto sol = apparent_solution(om, lifted.dar[j].p, app_order,
                                 JetQ(gauge.apparent_hook));
    MatSeriesJ v = dressed_series(sol.framing, sol.xi_series());
    // delta(Lambda) Lambda^{-1} for Lambda = diag(1, u) is diag(0, -dq/u);
    // block_from applies dlam with a minus sign, so store diag(0, +dq/u).
    const Rational dq = q.eps;
    std::vector<Mat2<Rational>> dl(static_cast<std::size_t>(v.hi + 2));
    dl[0].a22 = dq;
    MatSeriesQ dlam(-1, v.hi, std::move(dl));
    MatSeriesQ vinv = inverse_series(value_part(v));
    out.app.push_back(block_from(om, v, vinv, dlam, dq, false));
  }
  return out;
}

Rational krichever_pair(const OmegaData &d1, const OmegaData &d2) {
  if (d1.sing.size() != d2.sing.size() || d1.app.size() != d2.app.size())
    throw Error("krichever_pair: mismatched variation data");
  Rational total(0);
  auto pair_res = [](const OmegaData::PointBlock &x, const OmegaData::PointBlock &y) {
    MatSeriesQ m = x.a * y.u - x.u * y.a;
    return trace_series(m).residue();
  };
  for (std::size_t i = 0; i < d1.sing.size(); ++i) {
    Rational w = d1.sing[i].ramified ? Rational(1, 4) : Rational(1, 2);
    total += w * pair_res(d1.sing[i], d2.sing[i]);
  }
  for (std::size_t j = 0; j < d1.app.size(); ++j)
    total += Rational(1, 2) * pair_res(d1.app[j], d2.app[j]);
  return total;
}

Rational krichever_omega(const Instance &inst, const TangentDirection &dir1,
                         const TangentDirection &dir2, OmegaMode mode, int extra) {
  if (mode == OmegaMode::kFiber)
    for (auto *d : {&dir1, &dir2})
      for (auto &[c, w] : d->weights) {
        (void)w;
        if (c.kind != Coord::kQ && c.kind != Coord::kP && c.kind != Coord::kEta)
          throw NotADeformationDirection(
              "fiber-mode omega accepts only Darboux directions");
      }
  OmegaData d1 = omega_data(inst, dir1, extra);
  OmegaData d2 = omega_data(inst, dir2, extra);
  return krichever_pair(d1, d2);
}

// ---------------------------------------------------------------------------
// Canonical comparison form.

CanonicalData canonical_data(const Instance &inst, const TangentDirection &dir,
                             int extra) {
  InstanceJ lifted = lift(inst, dir);
  auto connJ = assemble_normal_form<JetQ>(lifted);
  CDData<JetQ> cdJ = build_cd(lifted);
  PolyJ bigpJ = lifted.pole_poly();
  CanonicalData out;
  for (std::size_t j = 0; j < lifted.dar.size(); ++j) {
    const JetQ q = lifted.dar[j].q, p = lifted.dar[j].p;
    JetQ eta = p / bigpJ.eval(q) - d_tail_at(lifted, cdJ, q);
    out.dq.push_back(q.eps);
    out.deta.push_back(eta.eps);
  }
  // Hamiltonians for every admissible base coordinate, one reduction per point
  std::vector<Coord> basis = coordinate_basis(inst, false);
  std::map<std::size_t, PointReduction<JetQ>> reductions;
  for (auto &c : basis) {
    if (c.kind == Coord::kQ || c.kind == Coord::kP)
      continue;
    if (!reductions.count(c.point))
      reductions.emplace(c.point, reduce_point(connJ, lifted, c.point, extra));
    const auto &red = reductions.at(c.point);
    const auto &pt = lifted.pts[c.point];
    JetQ h;
    switch (c.kind) {
    case Coord::kThetaUn:
      h = hamiltonian_theta_un(c.sign > 0 ? red.un.theta_plus : red.un.theta_minus,
                               pt.order, c.level);
      break;
    case Coord::kThetaRa:
      h = hamiltonian_theta_ra(red.ra.theta_zeta, pt.order, c.level);
      break;
    case Coord::kT:
      h = hamiltonian_t_from_tails(red.un.theta_plus, red.un.theta_minus, pt.order);
      break;
    default:
      break;
    }
    out.dh.push_back(h.eps);
    Rational w(0);
    switch (c.kind) {
    case Coord::kThetaUn:
      w = (c.sign > 0 ? lifted.pts[c.point].theta_plus
                      : lifted.pts[c.point].theta_minus)[static_cast<std::size_t>(c.level)]
              .eps;
      break;
    case Coord::kThetaRa:
      w = lifted.pts[c.point].theta_ra[static_cast<std::size_t>(c.level)].eps;
      break;
    case Coord::kT:
      w = lifted.pts[c.point].pos.eps;
      break;
    default:
      break;
    }
    out.w.push_back(w);
  }
  return out;
}

Rational canonical_pair(const CanonicalData &d1, const CanonicalData &d2) {
  Rational total(0);
  for (std::size_t j = 0; j < d1.dq.size(); ++j)
    total += d1.deta[j] * d2.dq[j] - d2.deta[j] * d1.dq[j];
  for (std::size_t c = 0; c < d1.dh.size(); ++c)
    total += d1.dh[c] * d2.w[c] - d2.dh[c] * d1.w[c];
  return total;
}

Rational canonical_omega_hat(const Instance &inst, const TangentDirection &dir1,
                             const TangentDirection &dir2, int extra) {
  CanonicalData d1 = canonical_data(inst, dir1, extra);
  CanonicalData d2 = canonical_data(inst, dir2, extra);
  return canonical_pair(d1, d2);
}

} // namespace isomono
