#include "isomono/reproduce.hpp"

#include <sstream>

#include "isomono/localform.hpp"
#include "isomono/sampling.hpp"
#include "isomono/symplectic.hpp"

namespace isomono {

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

void push(ReproResult &r, const std::string &name, bool ok, const std::string &detail = "") {
  r.checks.push_back({name, ok, detail});
}

std::string diff_str(const Rational &got, const Rational &want) {
  std::ostringstream os;
  os << "got " << got << ", expected " << want;
  return os.str();
}

} // namespace

Instance sample_triple_unramified(std::uint64_t seed) {
  Sampler s(seed);
  Instance inst;
  for (int i = 0; i < 3; ++i) {
    PointData<Rational> p;
    p.order = 2;
    p.kind = PointKind::kUnramified;
    p.at_infinity = (i == 2);
    if (i == 1)
      p.pos = Q(1);
    p.theta_plus = {s.rational(9, 6), s.rational(9, 6)};
    p.theta_minus = {s.nonzero_rational(9, 6), s.rational(9, 6)};
    while (p.theta_plus[0] == p.theta_minus[0])
      p.theta_plus[0] = s.nonzero_rational(9, 6);
    inst.pts.push_back(p);
  }
  auto &inf = inst.pts[2];
  inf.theta_minus[1] = Q(0);
  inf.theta_minus[1] = Q(-1) - fuchs_sum(inst);
  for (int j = 0; j < 3; ++j) {
    for (;;) {
      Rational q = s.rational(9, 4);
      bool fresh = q != Q(0) && q != Q(1);
      for (auto &d : inst.dar)
        if (d.q == q)
          fresh = false;
      if (fresh) {
        inst.dar.push_back({q, s.rational(9, 6)});
        break;
      }
    }
  }
  require_valid(inst);
  return inst;
}

Instance sample_kimura(std::uint64_t seed) {
  Sampler s(seed);
  Rational t1 = s.nonzero_rational(9, 6), t2 = s.nonzero_rational(9, 6);
  Instance inst;
  PointData<Rational> inf;
  inf.at_infinity = true;
  inf.order = 5;
  inf.kind = PointKind::kRamified;
  inf.theta_ra = {Q(0), Q(6), Q(0), Q(0), Q(0), Q(3) * t1, Q(0), t2, Q(-1, 2)};
  inst.pts.push_back(inf);
  for (int j = 0; j < 2; ++j) {
    for (;;) {
      Rational q = s.rational(9, 4);
      bool fresh = q != Q(0) && q != Q(1);
      for (auto &d : inst.dar)
        if (d.q == q)
          fresh = false;
      if (fresh) {
        inst.dar.push_back({q, s.nonzero_rational(9, 6)});
        break;
      }
    }
  }
  require_valid(inst);
  return inst;
}

ReproResult reproduce_triple_unramified(std::uint64_t seed, int samples) {
  ReproResult out;
  for (int trial = 0; trial < samples; ++trial) {
    Instance inst = sample_triple_unramified(seed + static_cast<std::uint64_t>(trial));
    auto cd = build_cd(inst);
    PolyQ ct = solve_ctilde(inst, cd);
    auto conn = assemble_normal_form(inst, cd, ct);
    // coefficients in the local bases the closed forms are written in
    PolyQ c0b = cd.c_fin[0], d0b = cd.d_fin[0];
    PolyQ c1b = cd.c_fin[1].shift(Q(1)), d1b = cd.d_fin[1].shift(Q(1));
    const Rational dinf0 = cd.d_inf.coeff(0);
    const Rational cinf0 = cd.c_inf.coeff(0), cinf1 = cd.c_inf.coeff(1);
    const std::string tag = "sample " + std::to_string(trial) + ": ";

    for (int which = 0; which < 3; ++which) { // points at 0, 1, infinity
      auto red = reduce_point(conn, inst, static_cast<std::size_t>(which));
      const auto &pt = inst.pts[static_cast<std::size_t>(which)];
      for (int sign = 0; sign < 2; ++sign) {
        const Rational a0 = sign ? pt.theta_minus[0] : pt.theta_plus[0];
        const Rational a1 = sign ? pt.theta_minus[1] : pt.theta_plus[1];
        const Rational b0 = sign ? pt.theta_plus[0] : pt.theta_minus[0];
        const Rational b1 = sign ? pt.theta_plus[1] : pt.theta_minus[1];
        Rational sym = a0 * b0 + a1 * b1;
        Rational cross = a0 * b1 + a1 * b0;
        Rational expect;
        if (which == 0) {
          Rational acc = sym - Q(2) * cross + ct.coeff(0) + (c1b.coeff(0) - c1b.coeff(1)) +
                         (d1b.coeff(0) - d1b.coeff(1) + dinf0) * a0;
          for (auto &d : inst.dar)
            acc -= (d.p - a0) / d.q;
          expect = acc / (a0 - b0);
        } else if (which == 1) {
          Rational acc = sym + Q(2) * cross + (ct.coeff(0) + ct.coeff(1) + ct.coeff(2)) +
                         (c0b.coeff(0) + c0b.coeff(1)) + (cinf0 + cinf1) +
                         (d0b.coeff(0) + d0b.coeff(1) + dinf0) * a0;
          for (auto &d : inst.dar)
            acc -= (d.p - a0) / (d.q - Q(1));
          expect = acc / (a0 - b0);
        } else {
          Rational acc = sym - Q(2) * cross + ct.coeff(2) -
                         (d0b.coeff(0) + d1b.coeff(0) + d1b.coeff(1)) * a0;
          for (auto &d : inst.dar)
            acc += d.q * a0;
          expect = acc / (a0 - b0);
        }
        Rational got = sign ? red.un.theta_minus[2] : red.un.theta_plus[2];
        std::string name = tag + std::string("H_theta") + (sign ? "-" : "+") +
                           "_0 at point " + (which == 0 ? "1" : which == 1 ? "2" : "inf");
        push(out, name, got == expect, got == expect ? "" : diff_str(got, expect));
      }
    }
  }
  return out;
}

ReproResult reproduce_kimura(std::uint64_t seed, int samples) {
  ReproResult out;
  for (int trial = 0; trial < samples; ++trial) {
    Instance inst = sample_kimura(seed + static_cast<std::uint64_t>(trial));
    const Rational t1 = inst.pts[0].theta_ra[5] / Q(3);
    const Rational t2 = inst.pts[0].theta_ra[7];
    auto cd = build_cd(inst);
    PolyQ ct = solve_ctilde(inst, cd);
    auto conn = assemble_normal_form(inst, cd, ct);
    const Rational k1 = ct.coeff(0) / Q(3), k2 = ct.coeff(1) / Q(3);
    const std::string tag = "sample " + std::to_string(trial) + ": ";

    // (a) accessory parameters exist and the apparent conditions hold
    {
      bool ok = true;
      for (auto &d : inst.dar) {
        FracQ expr = conn.om.a21 + FracQ(d.p) * conn.om.a22 -
                     FracQ(d.p * d.p) * conn.om.a12;
        FracQ t21 = expr / FracQ(PolyQ::linear_root(d.q));
        if (!t21.expand_at(d.q, 0).residue().is_zero())
          ok = false;
      }
      push(out, tag + "accessory parameters from apparent conditions", ok,
           "K1 = " + k1.str() + ", K2 = " + k2.str());
    }

    // (d) reduced-form data in the displayed normalization
    {
      RamifiedGauge<Rational> display_gauge;
      display_gauge.xi11.assign(16, Q(1));
      auto om = local_matrix_infinity(conn, 12 - 5);
      auto red = reduce_ramified(om, 5, Q(0), Q(6), Q(-1), 12, display_gauge);
      Rational q1 = inst.dar[0].q, q2 = inst.dar[1].q;
      push(out, tag + "residue entries (-1/4, -3/4)",
           red.alpha[4] == Q(-1, 4) && red.alpha[4] - Q(1, 2) == Q(-3, 4));
      push(out, tag + "a_1 = 1 + q1/2 + q2/2",
           red.alpha[5] == Q(1) + q1 / Q(2) + q2 / Q(2));
      push(out, tag + "b_3 = -3 t1^2/8 + K2/2",
           red.beta[4] == Q(-3) * t1 * t1 / Q(8) + k2 / Q(2));
      push(out, tag + "b_4 = -t1 t2/4 + K1/2",
           red.beta[5] == -(t1 * t2) / Q(4) + k1 / Q(2));
    }

    // (b) the Hamiltonians against the accessory parameters
    const Coord c_h1 = Coord::theta_ra(0, 5), c_h2 = Coord::theta_ra(0, 7);
    {
      Rational h1 = hamiltonian(inst, c_h1);
      Rational h2 = hamiltonian(inst, c_h2);
      Rational w1 = k1 / Q(3) - t1 * t2 / Q(6);
      Rational w2 = k2 - Q(3) * t1 * t1 / Q(4);
      push(out, tag + "H1 = K1/3 - t1 t2/6", h1 == w1, h1 == w1 ? "" : diff_str(h1, w1));
      push(out, tag + "H2 = K2 - 3 t1^2/4", h2 == w2, h2 == w2 ? "" : diff_str(h2, w2));
    }

    // (c) the commutation identity, in the chart eta_i = -p_i, with the time
    // identification dt1 = 3 d theta_5 and dt2 = d theta_7:
    //   d(3H1)/dt2 - dH2/dt1
    //     - sum_i (d(3H1)/d eta_i dH2/dq_i - d(3H1)/dq_i dH2/d eta_i) = 0
    {
      auto partial = [&](const Coord &hc, const Coord &along) {
        InstanceJ lifted = lift(inst, TangentDirection::basis(along));
        auto connJ = assemble_normal_form<JetQ>(lifted);
        return hamiltonian(lifted, connJ, hc).eps;
      };
      Rational d3h1_dt2 = Q(3) * partial(c_h1, c_h2);
      Rational dh2_dt1 = Q(3) * partial(c_h2, c_h1);
      Rational bracket(0);
      for (std::size_t i = 0; i < inst.dar.size(); ++i) {
        Rational h1_p = partial(c_h1, Coord::p(i)), h1_q = partial(c_h1, Coord::q(i));
        Rational h2_p = partial(c_h2, Coord::p(i)), h2_q = partial(c_h2, Coord::q(i));
        bracket += (-(Q(3) * h1_p)) * h2_q - (Q(3) * h1_q) * (-h2_p);
      }
      Rational lhs = d3h1_dt2 - dh2_dt1 - bracket;
      push(out, tag + "commutation identity", lhs.is_zero(),
           lhs.is_zero() ? "" : "residual " + lhs.str());
    }
  }
  return out;
}

} // namespace isomono
