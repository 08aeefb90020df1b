#include <doctest.h>

#include "isomono/localform.hpp"
#include "isomono/sampling.hpp"

using namespace isomono;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

Instance quintic_instance(const Rational &t1, const Rational &t2) {
  Instance inst;
  PointData<Rational> inf;
  inf.at_infinity = true;
  inf.order = 5;
  inf.kind = PointKind::kRamified;
  inf.theta_ra = {Q(0), Q(6), Q(0), Q(0), Q(0), Q(3) * t1, Q(0), t2, Q(-1, 2)};
  inst.pts.push_back(inf);
  inst.dar.push_back({Q(3), Q(1, 4)});
  inst.dar.push_back({Q(-1, 2), Q(2)});
  return inst;
}

// (Phi Xi)^{-1} d(Phi Xi) + (Phi Xi)^{-1} Om (Phi Xi)
template <typename S>
Series<Mat2<S>> gauge_transform(const Series<Mat2<S>> &om, const Mat2<S> &phi,
                                const Series<Mat2<S>> &xi) {
  std::vector<Mat2<S>> coeffs;
  for (int k = xi.lo; k <= xi.hi; ++k)
    coeffs.push_back(phi * xi.coeff(k));
  Series<Mat2<S>> big(xi.lo, xi.hi, std::move(coeffs));
  Series<Mat2<S>> inv = inverse_series(big);
  return inv * big.derivative() + inv * om * big;
}

} // namespace

TEST_CASE("framing_unramified: display for the order-two point at zero") {
  // leading coefficient [[0, 1/Pi],[-th+ th- Pi, th+ + th-]] with Pi = 1
  Rational tp = Q(3, 2), tm = Q(-1, 3);
  Mat2<Rational> lead(Q(0), Q(1), -(tp * tm), tp + tm);
  Mat2<Rational> phi = framing_unramified(lead, tp, tm);
  CHECK(phi == Mat2<Rational>(Q(1), Q(1) / tm, tp, Q(1)));
}

TEST_CASE("framing_unramified: diagonal leading matrix gives the identity") {
  Mat2<Rational> lead = Mat2<Rational>::diag(Q(2), Q(5));
  Mat2<Rational> phi = framing_unramified(lead, Q(2), Q(5));
  CHECK(phi == Mat2<Rational>::identity());
}

TEST_CASE("framing_unramified: coincident eigenvalues rejected") {
  Mat2<Rational> lead(Q(1), Q(1), Q(0), Q(1));
  CHECK_THROWS_AS(framing_unramified(lead, Q(1), Q(1)), KindMismatch);
}

TEST_CASE("framing_ramified: quintic example and failure modes") {
  Instance inst = quintic_instance(Q(1, 2), Q(2, 3));
  auto conn = assemble_normal_form<Rational>(inst);
  auto om = local_matrix_infinity(conn, 2);
  Mat2<Rational> lead = om.coeff(-5);
  Mat2<Rational> phi = framing_ramified(lead, Q(0), Q(6), Q(-1));
  CHECK(phi == Mat2<Rational>(Q(1), Q(0), Q(0), Q(-3)));
  // semisimple leading matrix must be rejected
  Mat2<Rational> diag = Mat2<Rational>::diag(Q(1), Q(2));
  CHECK_THROWS_AS(framing_ramified(diag, Q(1), Q(1), Q(1)), KindMismatch);
}

TEST_CASE("reduce_point: local data reproduces the declared theta tuples") {
  Sampler s(314);
  Sampler::Options opt;
  opt.n = 6;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  for (std::size_t i = 0; i < inst.pts.size(); ++i)
    CHECK_NOTHROW((void)reduce_point(conn, inst, i)); // throws on disagreement
}

TEST_CASE("reduce_unramified: first-order matrix of the three-point example") {
  Sampler s(999);
  Instance inst;
  for (int i = 0; i < 3; ++i) {
    PointData<Rational> p;
    p.order = 2;
    p.kind = PointKind::kUnramified;
    p.at_infinity = (i == 2);
    if (i == 1)
      p.pos = Q(1);
    p.theta_plus = {s.rational(7, 4), s.rational(7, 4)};
    p.theta_minus = {s.nonzero_rational(7, 4), s.rational(7, 4)};
    while (p.theta_plus[0] == p.theta_minus[0] || p.theta_minus[0].is_zero())
      p.theta_minus[0] = s.rational(7, 4);
    inst.pts.push_back(p);
  }
  auto &inf = inst.pts[2];
  inf.theta_minus[1] = Q(0);
  inf.theta_minus[1] = Q(-1) - fuchs_sum(inst);
  for (int j = 0; j < 3; ++j)
    inst.dar.push_back({Q(2 + j), s.rational(7, 4)});
  REQUIRE(all_ok(validate(inst)));

  auto conn = assemble_normal_form<Rational>(inst);
  auto red = reduce_point(conn, inst, 0);
  const Rational tp0 = inst.pts[0].theta_plus[0], tp1 = inst.pts[0].theta_plus[1];
  const Rational tm0 = inst.pts[0].theta_minus[0], tm1 = inst.pts[0].theta_minus[1];
  const Mat2<Rational> &xi1 = red.un.xi[1];
  CHECK(xi1.a11 == Q(0));
  CHECK(xi1.a22 == Q(0));
  CHECK(xi1.a12 == -((Q(2) * tm0 - tm1) / ((tp0 - tm0) * tm0)));
  CHECK(xi1.a21 == (Q(2) * tp0 - tp1) * tm0 / (tp0 - tm0));
}

TEST_CASE("reduce_unramified: gauge transform is diagonal with the theta tail") {
  Sampler s(2718);
  Sampler::Options opt;
  opt.n = 5;
  opt.allow_ramified = false;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    const auto &pt = inst.pts[i];
    int n = pt.order;
    int xi_order = 2 * n + 3;
    auto om = pt.at_infinity ? local_matrix_infinity(conn, xi_order - n)
                             : local_matrix(conn.om, pt.pos, xi_order - n);
    auto red = reduce_unramified(om, n, pt.theta_plus[0], pt.theta_minus[0], xi_order);
    auto diag = gauge_transform(om, red.framing, red.xi_series());
    for (int k = -n; k <= diag.hi; ++k) {
      Mat2<Rational> c = diag.coeff(k);
      CHECK(c.a12 == Q(0));
      CHECK(c.a21 == Q(0));
      CHECK(c.a11 == red.theta_plus[static_cast<std::size_t>(k + n)]);
      CHECK(c.a22 == red.theta_minus[static_cast<std::size_t>(k + n)]);
    }
  }
}

TEST_CASE("reduce_ramified: quintic example reproduces the displayed reduction") {
  Rational t1 = Q(1, 3), t2 = Q(-3, 5);
  Instance inst = quintic_instance(t1, t2);
  REQUIRE(all_ok(validate(inst)));
  auto cd = build_cd(inst);
  PolyQ ct = solve_ctilde(inst, cd);
  Rational k1 = ct.coeff(0) / Q(3), k2 = ct.coeff(1) / Q(3);
  auto conn = assemble_normal_form(inst, cd, ct);

  // the displayed normalization keeps all row-one (1,1) entries equal to 1
  RamifiedGauge<Rational> display_gauge;
  display_gauge.xi11.assign(16, Q(1));
  auto om = local_matrix_infinity(conn, 12 - 5);
  auto red = reduce_ramified(om, 5, Q(0), Q(6), Q(-1), 12, display_gauge);

  CHECK(red.xi[1] == Mat2<Rational>::identity());
  CHECK(red.xi[2].a22 == Q(1) + t1 / Q(2));
  CHECK(red.xi[2].a21 == Q(0));
  CHECK(red.xi[3].a22 == Q(1) + t1 / Q(2) + t2 / Q(6));
  CHECK(red.xi[4].a21 == Q(-1, 12));
  CHECK(red.xi[5].a21 == Q(-1, 12) + inst.dar[0].q / Q(6) + inst.dar[1].q / Q(6));

  // residue entries -1/4 and -3/4 of the reduced shape
  CHECK(red.alpha[4] == Q(-1, 4));
  CHECK(red.alpha[4] - Q(1, 2) == Q(-3, 4));
  // a_1 = 1 + q_1/2 + q_2/2, b_3 = -3 t1^2/8 + K2/2, b_4 = -t1 t2/4 + K1/2
  CHECK(red.alpha[5] == Q(1) + inst.dar[0].q / Q(2) + inst.dar[1].q / Q(2));
  CHECK(red.beta[4] == Q(-3) * t1 * t1 / Q(8) + k2 / Q(2));
  CHECK(red.beta[5] == -(t1 * t2) / Q(4) + k1 / Q(2));

  // zeta tail: theta_8 = -1/2, theta_9 = 2 b_3, theta_10 = 2 a_1, theta_11 = 2 b_4
  CHECK(red.theta_zeta[8] == Q(-1, 2));
  CHECK(red.theta_zeta[9] == Q(2) * red.beta[4]);
  CHECK(red.theta_zeta[10] == Q(2) * red.alpha[5]);
  CHECK(red.theta_zeta[11] == Q(2) * red.beta[5]);
}

TEST_CASE("reduce_ramified: gauge choice shifts only the expected tail slot") {
  Rational t1 = Q(2, 7), t2 = Q(1, 2);
  Instance inst = quintic_instance(t1, t2);
  auto conn = assemble_normal_form<Rational>(inst);
  auto om = local_matrix_infinity(conn, 12 - 5);
  RamifiedGauge<Rational> ones;
  ones.xi11.assign(16, Q(1));
  auto red_zero = reduce_ramified(om, 5, Q(0), Q(6), Q(-1), 12);
  auto red_ones = reduce_ramified(om, 5, Q(0), Q(6), Q(-1), 12, ones);
  // residue part and the odd tail slots are normalization independent
  for (int lp = 0; lp <= 9; ++lp)
    CHECK(red_zero.theta_zeta[static_cast<std::size_t>(lp)] ==
          red_ones.theta_zeta[static_cast<std::size_t>(lp)]);
  CHECK(red_zero.theta_zeta[11] == red_ones.theta_zeta[11]);
  // the even slot right above the residue shifts by twice the first hook
  CHECK(red_ones.theta_zeta[10] - red_zero.theta_zeta[10] == Q(2));
}

TEST_CASE("reduce_point: ramified residue slot matches the declared value") {
  Sampler s(555);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_ramified = true;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    if (inst.pts[i].kind != PointKind::kRamified)
      continue;
    auto red = reduce_point(conn, inst, i);
    const auto &pt = inst.pts[i];
    CHECK(red.ra.theta_zeta[static_cast<std::size_t>(2 * pt.order - 2)] ==
          pt.theta_ra[static_cast<std::size_t>(2 * pt.order - 2)]);
  }
}

TEST_CASE("apparent_solution: first-order data and the transformed matrix") {
  Sampler s(31337);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  PolyQ bigp = inst.pole_poly();
  auto cd = build_cd(inst);
  for (std::size_t j = 0; j < inst.dar.size(); ++j) {
    const Rational q = inst.dar[j].q, p = inst.dar[j].p;
    auto om = local_matrix(conn.om, q, 6);
    auto sol = apparent_solution(om, p, 6);
    const Rational pq = bigp.eval(q);
    CHECK(sol.xi[1].a21 == Q(0));
    CHECK(sol.xi[1].a11 == -(p / pq));
    CHECK(sol.xi[1].a12 == Q(-1) / (Q(2) * pq));
    // (xi_1)_{22} = p/P(q) - sum_i D_i(q)/(q-t_i)^{n_i} + sum_{k!=j} 1/(q-q_k)
    //              - D_inf(q)
    Rational expect = p / pq;
    std::size_t fin = 0;
    for (auto &pt : inst.pts) {
      if (pt.at_infinity)
        continue;
      expect -= cd.d_fin[fin].eval(q) / pow_int(q - pt.pos, pt.order);
      ++fin;
    }
    for (std::size_t k = 0; k < inst.dar.size(); ++k)
      if (k != j)
        expect += Q(1) / (q - inst.dar[k].q);
    expect -= cd.d_inf.eval(q);
    CHECK(sol.xi[1].a22 == expect);

    auto diag = gauge_transform(om, sol.framing, sol.xi_series());
    CHECK(diag.coeff(-1) == Mat2<Rational>::diag(Q(0), Q(-1)));
    for (int k = 0; k <= diag.hi; ++k)
      CHECK(is_zero(diag.coeff(k)));
  }
}

TEST_CASE("apparent_solution: rejects non-apparent points") {
  Sampler s(8080);
  Sampler::Options opt;
  opt.n = 4;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  auto om = local_matrix(conn.om, inst.dar[0].q, 4);
  CHECK_THROWS_AS(apparent_solution(om, inst.dar[0].p + Q(1), 4), NotApparent);
}

TEST_CASE("apparent_solution: free entry does not disturb the gauge identity") {
  Sampler s(4242);
  Sampler::Options opt;
  opt.n = 4;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  auto om = local_matrix(conn.om, inst.dar[0].q, 5);
  auto alt = apparent_solution(om, inst.dar[0].p, 5, Q(7, 3));
  auto diag = gauge_transform(om, alt.framing, alt.xi_series());
  CHECK(diag.coeff(-1) == Mat2<Rational>::diag(Q(0), Q(-1)));
  for (int k = 0; k <= diag.hi; ++k)
    CHECK(is_zero(diag.coeff(k)));
}
