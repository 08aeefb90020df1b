#include <doctest.h>

#include <algorithm>

#include "isomono/connection.hpp"
#include "isomono/sampling.hpp"

using namespace isomono;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

// nu = 2, all three points unramified of order 2 (0, 1, infinity).
Instance make_triple_unramified(Sampler &s) {
  Instance inst;
  for (int i = 0; i < 3; ++i) {
    PointData<Rational> p;
    p.order = 2;
    p.kind = PointKind::kUnramified;
    p.at_infinity = (i == 2);
    if (i == 1)
      p.pos = Q(1);
    p.theta_plus = {s.rational(9, 6), s.rational(9, 6)};
    p.theta_minus = {s.rational(9, 6), s.rational(9, 6)};
    while (p.theta_plus[0] == p.theta_minus[0])
      p.theta_minus[0] = s.rational(9, 6);
    inst.pts.push_back(p);
  }
  // Fuchs: residues sum to -1
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
  REQUIRE(all_ok(validate(inst)));
  return inst;
}

// D = 5*infinity, ramified, theta tail carrying the two time parameters.
Instance make_ramified_quintic(const Rational &t1, const Rational &t2, const Rational &q1,
                               const Rational &p1, const Rational &q2, const Rational &p2) {
  Instance inst;
  PointData<Rational> inf;
  inf.at_infinity = true;
  inf.order = 5;
  inf.kind = PointKind::kRamified;
  inf.theta_ra = {Q(0), Q(6), Q(0), Q(0), Q(0), Q(3) * t1, Q(0), t2, Q(-1, 2)};
  inst.pts.push_back(inf);
  inst.dar.push_back({q1, p1});
  inst.dar.push_back({q2, p2});
  return inst;
}

bool same_darboux(std::vector<DarbouxPair<Rational>> a, std::vector<DarbouxPair<Rational>> b) {
  auto by_q = [](const DarbouxPair<Rational> &x, const DarbouxPair<Rational> &y) {
    return x.q < y.q;
  };
  std::sort(a.begin(), a.end(), by_q);
  std::sort(b.begin(), b.end(), by_q);
  if (a.size() != b.size())
    return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].q != b[i].q || a[i].p != b[i].p)
      return false;
  return true;
}

} // namespace

TEST_CASE("build_cd: regular point gives constant C_i") {
  Sampler s(7);
  Sampler::Options opt;
  opt.n = 4;
  opt.allow_ramified = false;
  opt.need_regular = true;
  Instance inst = s.instance(opt);
  auto cd = build_cd(inst);
  std::size_t fin = 0;
  for (auto &p : inst.pts) {
    if (p.at_infinity)
      continue;
    if (p.kind == PointKind::kRegular) {
      CHECK(cd.c_fin[fin].degree() <= 0);
      PolyQ other = PolyQ::constant(Q(1));
      for (auto &pj : inst.pts)
        if (!pj.at_infinity && pj.pos != p.pos)
          other = other * pow_poly(PolyQ::linear_root(pj.pos), pj.order);
      CHECK(cd.c_fin[fin].coeff(0) ==
            -(p.theta_plus[0] * p.theta_minus[0] * other.eval(p.pos)));
      CHECK(cd.d_fin[fin].coeff(0) == p.theta_plus[0] + p.theta_minus[0]);
    }
    ++fin;
  }
}

TEST_CASE("build_cd: closed forms for the three-point order-2 case") {
  Sampler s(41);
  for (int trial = 0; trial < 5; ++trial) {
    Instance inst = make_triple_unramified(s);
    auto cd = build_cd(inst);
    const auto &p0 = inst.pts[0], &p1 = inst.pts[1], &pi = inst.pts[2];

    // point 0: C = -th+0 th-0 + (2 th+0 th-0 - th+0 th-1 - th-0 th+1) x
    PolyQ c0_expect{-(p0.theta_plus[0] * p0.theta_minus[0]),
                    Q(2) * p0.theta_plus[0] * p0.theta_minus[0] -
                        p0.theta_plus[0] * p0.theta_minus[1] -
                        p0.theta_minus[0] * p0.theta_plus[1]};
    CHECK(cd.c_fin[0] == c0_expect);
    PolyQ d0_expect{p0.theta_plus[0] + p0.theta_minus[0],
                    p0.theta_plus[1] + p0.theta_minus[1]};
    CHECK(cd.d_fin[0] == d0_expect);

    // point 1 (u = x-1): C = -th+0 th-0 - (2 th+0 th-0 + th+0 th-1 + th-0 th+1) u
    PolyQ c1_u{-(p1.theta_plus[0] * p1.theta_minus[0]),
               -(Q(2) * p1.theta_plus[0] * p1.theta_minus[0] +
                 p1.theta_plus[0] * p1.theta_minus[1] + p1.theta_minus[0] * p1.theta_plus[1])};
    CHECK(cd.c_fin[1] == c1_u.shift(Q(-1)));

    // infinity: D = -th+0 - th-0 ; C = (2 th+0 th-0 - th-0 th+1 - th+0 th-1) - th+0 th-0 x
    CHECK(cd.d_inf == PolyQ{-(pi.theta_plus[0] + pi.theta_minus[0])});
    PolyQ cinf_expect{Q(2) * pi.theta_plus[0] * pi.theta_minus[0] -
                          pi.theta_minus[0] * pi.theta_plus[1] -
                          pi.theta_plus[0] * pi.theta_minus[1],
                      -(pi.theta_plus[0] * pi.theta_minus[0])};
    CHECK(cd.c_inf == cinf_expect);
  }
}

TEST_CASE("build_cd: ramified quintic at infinity matches the displayed data") {
  Rational t1 = Q(2, 3), t2 = Q(-1, 2);
  Instance inst = make_ramified_quintic(t1, t2, Q(3), Q(1, 5), Q(-2), Q(4));
  REQUIRE(all_ok(validate(inst)));
  auto cd = build_cd(inst);
  CHECK(cd.d_inf.is_zero_poly());
  CHECK(cd.c_inf == PolyQ{Q(3) * t2, Q(9) * t1, Q(0), Q(9)});
}

TEST_CASE("solve_ctilde: single apparent point, transform is pole-free") {
  Sampler s(11);
  Sampler::Options opt;
  opt.n = 4;
  Instance inst = s.instance(opt);
  auto cd = build_cd(inst);
  PolyQ ct = solve_ctilde(inst, cd);
  CHECK(ct.degree() <= 0);
  auto conn = assemble_normal_form(inst, cd, ct);
  // direct substitution oracle: expand the elementary transform at q_1
  const Rational q = inst.dar[0].q, p = inst.dar[0].p;
  FracQ expr = conn.om.a21 + FracQ(p) * conn.om.a22 - FracQ(p * p) * conn.om.a12;
  FracQ t21 = expr / FracQ(PolyQ::linear_root(q));
  CHECK(t21.expand_at(q, 0).residue() == Q(0));
}

TEST_CASE("solve_ctilde: closed form for the three-point order-2 case") {
  Sampler s(0x51);
  for (int trial = 0; trial < 3; ++trial) {
    Instance inst = make_triple_unramified(s);
    auto cd = build_cd(inst);
    PolyQ ct = solve_ctilde(inst, cd);
    PolyQ bigp = inst.pole_poly();
    PolyQ expect;
    for (std::size_t j = 0; j < 3; ++j) {
      const Rational qj = inst.dar[j].q, pj = inst.dar[j].p;
      Rational acc = pj * pj / bigp.eval(qj);
      std::size_t fin = 0;
      for (auto &pt : inst.pts) {
        if (pt.at_infinity)
          continue;
        Rational dt = qj - pt.pos;
        acc -= (cd.d_fin[fin].eval(qj) * pj + cd.c_fin[fin].eval(qj)) / (dt * dt);
        ++fin;
      }
      for (std::size_t k = 0; k < 3; ++k)
        if (k != j)
          acc += (pj - inst.dar[k].p) / (qj - inst.dar[k].q);
      acc -= cd.d_inf.coeff(0) * pj;
      acc -= cd.c_inf.coeff(0) * pow_int(qj, 3);
      acc -= cd.c_inf.coeff(1) * pow_int(qj, 4);
      PolyQ lag = PolyQ::constant(Q(1));
      Rational qprime(1);
      for (std::size_t k = 0; k < 3; ++k)
        if (k != j) {
          lag = lag * PolyQ::linear_root(inst.dar[k].q);
          qprime *= qj - inst.dar[k].q;
        }
      expect = expect + lag * (acc / qprime);
    }
    CHECK(ct == expect);
  }
}

TEST_CASE("assemble_normal_form: shape and degree guards") {
  Sampler s(29);
  Sampler::Options opt;
  opt.n = 6;
  Instance inst = s.instance(opt);
  auto cd = build_cd(inst);
  PolyQ ct = solve_ctilde(inst, cd);
  auto conn = assemble_normal_form(inst, cd, ct);

  CHECK(to_ratfunc(conn.om.a11).is_zero_fn());
  RatFunc a12 = to_ratfunc(conn.om.a12);
  CHECK(a12.num == PolyQ::constant(Q(1)));
  CHECK(a12.den == inst.pole_poly());

  std::size_t fin = 0;
  for (auto &p : inst.pts) {
    if (p.at_infinity) {
      CHECK(cd.c_inf.degree() <= p.order - 1);
      CHECK(cd.d_inf.degree() <= p.order - 2);
    } else {
      CHECK(cd.c_fin[fin].degree() <= p.order - 1);
      CHECK(cd.d_fin[fin].degree() <= p.order - 1);
      ++fin;
    }
  }
  CHECK(ct.degree() <= inst.n() - 4);

  // w-chart pole order equals n_inf
  auto w = w_chart(conn);
  int worst = 0;
  for (auto *e : {&w.a11, &w.a12, &w.a21, &w.a22}) {
    RatFunc r = to_ratfunc(*e);
    if (!r.is_zero_fn())
      worst = std::max(worst, r.pole_order_at(Q(0)));
  }
  CHECK(worst == inst.infinity().order);
}

TEST_CASE("assemble_normal_form: the quintic-at-infinity chart display") {
  Rational t1 = Q(1, 3), t2 = Q(5, 7);
  Instance inst = make_ramified_quintic(t1, t2, Q(2), Q(-1, 2), Q(1, 2), Q(3));
  auto cd = build_cd(inst);
  PolyQ ct = solve_ctilde(inst, cd);
  auto conn = assemble_normal_form(inst, cd, ct);
  auto w = w_chart(conn);
  Rational k1 = ct.coeff(0) / Q(3), k2 = ct.coeff(1) / Q(3);

  // expected chart coefficients: c0w = -9/w^4 - 9 t1/w^2 - 3 t2/w - 3 K2
  //                                      - 3 K1 w - sum p_i w^2/(1 - q_i w)
  for (Rational wv : {Q(1, 5), Q(-2, 3), Q(3)}) {
    Rational expect_c = Q(-9) / pow_int(wv, 4) - Q(9) * t1 / pow_int(wv, 2) -
                        Q(3) * t2 / wv - Q(3) * k2 - Q(3) * k1 * wv;
    Rational expect_d(0);
    for (auto &d : inst.dar) {
      expect_c -= d.p * wv * wv / (Q(1) - d.q * wv);
      expect_d += Q(1) / (wv * (Q(1) - d.q * wv));
    }
    expect_d -= Q(3) / wv;
    CHECK(w.a21.eval(wv) == expect_c);
    CHECK(w.a22.eval(wv) == expect_d);
    CHECK(w.a12.eval(wv) == Q(-1) / pow_int(wv, 5));
  }
}

TEST_CASE("to_e1: upper row, pole divisor, and round trip") {
  Sampler s(63);
  for (int n = 4; n <= 7; ++n) {
    Sampler::Options opt;
    opt.n = n;
    Instance inst = s.instance(opt);
    auto conn = assemble_normal_form<Rational>(inst);
    auto e1 = to_e1(conn, inst);
    PolyQ q1 = inst.apparent_poly();
    std::vector<Rational> xs, ys;
    for (auto &d : inst.dar) {
      xs.push_back(d.q);
      ys.push_back(d.p);
    }
    PolyQ q2 = lagrange_interpolate(xs, ys);
    RatFunc a11 = to_ratfunc(e1.om.a11), a12 = to_ratfunc(e1.om.a12);
    CHECK(a12 == RatFunc(q1, inst.pole_poly()));
    CHECK(a11 == RatFunc(q2, inst.pole_poly()));
    check_pole_divisor(e1, inst); // throws on any q_j pole or wrong order
    CHECK(same_darboux(apparent_data(e1), inst.dar));
  }
}

TEST_CASE("apparent_data: residue of the normal form at q_j has trace -1") {
  Sampler s(17);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  for (auto &d : inst.dar) {
    Mat2<Rational> res(conn.om.a11.expand_at(d.q, 0).residue(),
                       conn.om.a12.expand_at(d.q, 0).residue(),
                       conn.om.a21.expand_at(d.q, 0).residue(),
                       conn.om.a22.expand_at(d.q, 0).residue());
    CHECK(res.trace() == Q(-1));
    CHECK(res.det() == Q(0)); // eigenvalues 0 and -1
    // (1, p_j) spans the 0-eigendirection
    CHECK(res.a11 + res.a12 * d.p == Q(0));
    CHECK(res.a21 + res.a22 * d.p == Q(0));
  }
}

TEST_CASE("apparent_data: degenerate inputs are rejected") {
  // double root in B
  ConnQ conn;
  conn.bundle = Bundle::kE1;
  conn.n = 5;
  conn.fin_div = {{Q(0), 2}, {Q(1), 2}};
  conn.n_inf = 1;
  PolyQ bigp = conn.pole_poly();
  PolyQ b = PolyQ::linear_root(Q(2)) * PolyQ::linear_root(Q(2));
  conn.om.a12 = FracQ(b, bigp);
  conn.om.a11 = FracQ(PolyQ::constant(Q(1)), bigp);
  conn.om.a21 = FracQ(PolyQ::constant(Q(1)), bigp);
  conn.om.a22 = FracQ(PolyQ::constant(Q(1)), bigp);
  CHECK_THROWS_AS(apparent_data(conn), NonGenericApparentDivisor);

  conn.om.a12 = FracQ(); // B = 0: invariant subbundle
  CHECK_THROWS_AS(apparent_data(conn), InvariantSubbundle);
}

TEST_CASE("apparent_data: n = 3 has an empty Darboux list") {
  Sampler s(5);
  Sampler::Options opt;
  opt.n = 3;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  auto e1 = to_e1(conn, inst);
  CHECK(apparent_data(e1).empty());
}

TEST_CASE("round trip on random instances mixing all kinds") {
  Sampler s(20260810);
  for (int trial = 0; trial < 12; ++trial) {
    Sampler::Options opt;
    opt.n = 4 + trial % 5;
    Instance inst = s.instance(opt);
    auto conn = assemble_normal_form<Rational>(inst);
    auto e1 = to_e1(conn, inst);
    CHECK(same_darboux(apparent_data(e1), inst.dar));
  }
}

TEST_CASE("validate: diagnostics") {
  Sampler s(3);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  CHECK(all_ok(validate(inst)));

  Instance bad = inst;
  // break the Fuchs relation
  for (auto &p : bad.pts)
    if (!p.at_infinity && p.kind != PointKind::kRamified) {
      p.theta_plus.back() += Q(1);
      break;
    }
  bool fuchs_failed = false;
  for (auto &d : validate(bad))
    if (d.check == "fuchs-relation" && !d.ok)
      fuchs_failed = true;
  CHECK(fuchs_failed);

  Instance ram = make_ramified_quintic(Q(1), Q(2), Q(3), Q(1), Q(4), Q(1));
  ram.pts[0].theta_ra[1] = Q(0);
  bool theta1_failed = false;
  for (auto &d : validate(ram))
    if (!d.ok && d.detail.find("theta_{1") != std::string::npos)
      theta1_failed = true;
  CHECK(theta1_failed);

  Instance ok52 = make_ramified_quintic(Q(1, 2), Q(2), Q(3), Q(1), Q(4), Q(1));
  CHECK(all_ok(validate(ok52)));
}
