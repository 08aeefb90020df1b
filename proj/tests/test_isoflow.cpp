#include <doctest.h>

#include <cmath>

#include "isomono/isoflow.hpp"
#include "isomono/sampling.hpp"

using namespace isomono;

namespace {

Rational Q(long n, long d = 1) { return Rational(n, d); }

// H as a function on the (q, eta) chart, for finite-difference probing.
double h_at(const Instance &base, const Coord &hc, const std::vector<double> &q,
            const std::vector<double> &eta) {
  Instance inst = base;
  EtaCoordinates ec;
  for (std::size_t j = 0; j < q.size(); ++j)
    ec.pairs.push_back({Rational::from_double(q[j]), Rational::from_double(eta[j])});
  inst.dar = p_from_eta(inst, ec);
  return hamiltonian(inst, hc).to_double();
}

} // namespace

TEST_CASE("vector_field matches central finite differences of H") {
  Sampler s(808);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  auto dirs = deformation_directions(inst);
  REQUIRE(!dirs.empty());
  Coord dir = dirs.front();
  Velocity vel = vector_field(inst, dir);

  std::vector<double> q, eta;
  for (auto &[qq, ee] : eta_from_p(inst).pairs) {
    q.push_back(qq.to_double());
    eta.push_back(ee.to_double());
  }
  const double delta = 1e-6;
  for (std::size_t j = 0; j < q.size(); ++j) {
    auto qp = q, qm = q;
    qp[j] += delta;
    qm[j] -= delta;
    double dh_dq = (h_at(inst, dir, qp, eta) - h_at(inst, dir, qm, eta)) / (2 * delta);
    auto ep = eta, em = eta;
    ep[j] += delta;
    em[j] -= delta;
    double dh_de = (h_at(inst, dir, q, ep) - h_at(inst, dir, q, em)) / (2 * delta);
    CHECK(std::abs(vel.dq[j].to_double() + dh_de) < 1e-5);
    CHECK(std::abs(vel.deta[j].to_double() - dh_dq) < 1e-5);
  }
}

TEST_CASE("delta_omega: the trace residues sum to zero") {
  Sampler s(117);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_ramified = true;
  Instance inst = s.instance(opt);
  for (auto &dir : deformation_directions(inst)) {
    Mat2<RatFunc> d = delta_omega(inst, dir);
    RatFunc tr = d.a11 + d.a22;
    if (tr.is_zero_fn())
      continue;
    Rational total = residue_at_infinity(tr);
    for (auto &pt : inst.pts)
      if (!pt.at_infinity)
        total += residue_at(tr, pt.pos);
    CHECK(total == Q(0));
  }
}

TEST_CASE("solve_upsilon recovers planted admissible lifts") {
  Sampler s(12);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  auto e1 = to_e1(conn, inst);
  // plant a random Upsilon inside the budget
  Sampler coeffs(99);
  Mat2<RatFunc> up0;
  {
    RatFunc acc11, acc12, acc21, acc22;
    for (auto &[t, n] : e1.fin_div)
      for (int k = 1; k <= n - 1; ++k) {
        acc11 = acc11 + RatFunc(PolyQ::constant(coeffs.rational(5, 3)),
                                pow_poly(PolyQ::linear_root(t), k));
        acc21 = acc21 + RatFunc(PolyQ::constant(coeffs.rational(5, 3)),
                                pow_poly(PolyQ::linear_root(t), k));
      }
    acc11 = acc11 + RatFunc(PolyQ{coeffs.rational(5, 3)});
    acc12 = RatFunc(PolyQ{coeffs.rational(5, 3), coeffs.rational(5, 3)});
    acc22 = RatFunc(PolyQ{coeffs.rational(5, 3)});
    up0 = Mat2<RatFunc>(acc11, acc12, acc21, acc22);
  }
  Mat2<RatFunc> om(to_ratfunc(e1.om.a11), to_ratfunc(e1.om.a12), to_ratfunc(e1.om.a21),
                   to_ratfunc(e1.om.a22));
  Mat2<RatFunc> dup(up0.a11.derivative(), up0.a12.derivative(), up0.a21.derivative(),
                    up0.a22.derivative());
  Mat2<RatFunc> delta = dup + om * up0 - up0 * om;
  auto res = solve_upsilon(e1, delta);
  CHECK(res.ok); // any zero-residual lift is acceptable, not up0 itself
}

TEST_CASE("integrability certificate along every admissible direction") {
  Sampler s(2025);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_ramified = true;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  for (auto &dir : deformation_directions(inst)) {
    auto res = certify_direction(inst, dir);
    CHECK(res.ok);
  }
}

TEST_CASE("non-isomonodromic perturbations are rejected") {
  Sampler s(31);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  auto conn = assemble_normal_form<Rational>(inst);
  auto e1 = to_e1(conn, inst);
  Mat2<RatFunc> delta = delta_omega_raw(inst, TangentDirection::basis(Coord::p(0)));
  auto res = solve_upsilon(e1, delta);
  CHECK(!res.ok);
  CHECK(!res.failure.empty());
}

TEST_CASE("isospectrality: frozen theta slots do not drift along the flow") {
  Sampler s(47);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  for (auto &dir : deformation_directions(inst)) {
    Velocity vel = vector_field(inst, dir);
    TangentDirection full = TangentDirection::basis(dir);
    for (std::size_t j = 0; j < inst.dar.size(); ++j) {
      full.add(Coord::q(j), vel.dq[j]);
      full.add(Coord::p(j), vel.dp[j]);
    }
    InstanceJ lifted = lift(inst, full);
    auto connJ = assemble_normal_form<JetQ>(lifted);
    // reduce_point certifies computed theta == declared theta as jets; the
    // declared jets carry the drift exactly in the driven slot and zero in
    // every frozen slot, so a clean pass is the isospectrality statement
    for (std::size_t i = 0; i < lifted.pts.size(); ++i)
      CHECK_NOTHROW((void)reduce_point(connJ, lifted, i));
    break;
  }
}

TEST_CASE("flow: zero steps echoes the initial state") {
  Sampler s(3);
  Sampler::Options opt;
  opt.n = 4;
  Instance inst = s.instance(opt);
  auto dirs = deformation_directions(inst);
  REQUIRE(!dirs.empty());
  FlowOptions fo;
  fo.steps = 0;
  auto traj = flow(inst, dirs.front(), fo);
  REQUIRE(traj.size() == 1);
  auto st0 = initial_state(inst);
  CHECK(traj[0].q == st0.q);
  CHECK(traj[0].eta == st0.eta);
}

TEST_CASE("flow: a few RK4 steps stay finite and advance the parameter") {
  Sampler s(58);
  Sampler::Options opt;
  opt.n = 4;
  opt.need_unramified = true;
  Instance inst = s.instance(opt);
  auto dirs = deformation_directions(inst);
  REQUIRE(!dirs.empty());
  FlowOptions fo;
  fo.steps = 5;
  fo.h = 1e-3;
  auto traj = flow(inst, dirs.front(), fo);
  REQUIRE(traj.size() == 6);
  CHECK(std::abs(traj.back().s - 5e-3) < 1e-12);
  for (double v : traj.back().q)
    CHECK(std::isfinite(v));
}

TEST_CASE("monodromy: a loop around nothing transports trivially") {
  Sampler s(91);
  Sampler::Options opt;
  opt.n = 4;
  Instance inst = s.instance(opt);
  auto e1 = to_e1(assemble_normal_form<Rational>(inst), inst);
  std::vector<std::complex<double>> sq = {
      {100.0, 1.0}, {99.0, 1.0}, {99.0, 0.0}, {100.0, 0.0}};
  auto tr = loop_trace(e1, sq, 1e-10);
  CHECK(std::abs(tr - std::complex<double>(2.0, 0.0)) < 1e-8);
}

TEST_CASE("monodromy: diagonal model matches the closed form") {
  // d + diag(th+, th-) dx/(x - 1/2): the counterclockwise monodromy trace is
  // e^{-2 pi i th+} + e^{-2 pi i th-}
  Rational tp = Q(1, 3), tm = Q(-1, 4);
  ConnQ conn;
  conn.bundle = Bundle::kE1;
  conn.n = 2;
  conn.fin_div = {{Q(1, 2), 1}};
  conn.n_inf = 1;
  PolyQ den = PolyQ::linear_root(Q(1, 2));
  conn.om.a11 = FracQ(PolyQ::constant(tp), den);
  conn.om.a22 = FracQ(PolyQ::constant(tm), den);
  auto tr = monodromy_trace(conn, 0);
  const double pi = 3.14159265358979323846;
  std::complex<double> expect = std::exp(std::complex<double>(0, -2 * pi * tp.to_double())) +
                                std::exp(std::complex<double>(0, -2 * pi * tm.to_double()));
  CHECK(std::abs(tr - expect) < 1e-7);
}

TEST_CASE("direction guards: frozen and unknown coordinates are rejected") {
  Sampler s(64);
  Sampler::Options opt;
  opt.n = 5;
  opt.need_ramified = true;
  Instance inst = s.instance(opt);
  // q index out of range
  CHECK_THROWS_AS(lift(inst, TangentDirection::basis(Coord::q(99))), UnknownDirection);
  // positions of the first two finite points are fixed by normalization
  std::size_t first_finite = 0;
  while (inst.pts[first_finite].at_infinity)
    ++first_finite;
  CHECK_THROWS_AS(lift(inst, TangentDirection::basis(Coord::t(first_finite))),
                  NotADeformationDirection);
  // ramified positions are frozen
  for (std::size_t i = 0; i < inst.pts.size(); ++i)
    if (inst.pts[i].kind == PointKind::kRamified && !inst.pts[i].at_infinity)
      CHECK_THROWS_AS(lift(inst, TangentDirection::basis(Coord::t(i))),
                      NotADeformationDirection);
  // residue-level theta slots are not deformation directions
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    if (inst.pts[i].kind == PointKind::kUnramified)
      CHECK_THROWS_AS(
          lift(inst, TangentDirection::basis(
                         Coord::theta_un(i, inst.pts[i].order - 1, +1))),
          NotADeformationDirection);
    if (inst.pts[i].kind == PointKind::kRamified)
      CHECK_THROWS_AS(
          lift(inst, TangentDirection::basis(
                         Coord::theta_ra(i, 2 * inst.pts[i].order - 2))),
          NotADeformationDirection);
  }
  // fiber-mode omega rejects base directions
  CHECK_THROWS_AS(krichever_omega(inst, TangentDirection::basis(Coord::q(0)),
                                  TangentDirection::basis(deformation_directions(inst)[0]),
                                  OmegaMode::kFiber),
                  NotADeformationDirection);
  // direction spec parsing
  CHECK_THROWS_AS(parse_direction(inst, "bogus:1"), UnknownDirection);
}

TEST_CASE("build_cd ignores the Darboux data") {
  Sampler s(1001);
  Sampler::Options opt;
  opt.n = 5;
  Instance inst = s.instance(opt);
  auto cd1 = build_cd(inst);
  Instance moved = inst;
  moved.dar[0].p += Q(7);
  auto cd2 = build_cd(moved);
  CHECK(cd1.c_inf == cd2.c_inf);
  CHECK(cd1.d_inf == cd2.d_inf);
  for (std::size_t i = 0; i < cd1.c_fin.size(); ++i) {
    CHECK(cd1.c_fin[i] == cd2.c_fin[i]);
    CHECK(cd1.d_fin[i] == cd2.d_fin[i]);
  }
}

TEST_CASE("the isomonodromic field lies in the kernel of the extended 2-form") {
  Sampler s(515);
  Sampler::Options opt;
  opt.n = 4;
  opt.need_ramified = true;
  Instance inst = s.instance(opt);
  for (auto &dir : deformation_directions(inst)) {
    Velocity vel = vector_field(inst, dir);
    TangentDirection full = TangentDirection::basis(dir);
    for (std::size_t j = 0; j < inst.dar.size(); ++j) {
      full.add(Coord::q(j), vel.dq[j]);
      full.add(Coord::p(j), vel.dp[j]);
    }
    OmegaData dfull = omega_data(inst, full);
    for (auto &c : coordinate_basis(inst, false)) {
      OmegaData db = omega_data(inst, TangentDirection::basis(c));
      CHECK(krichever_pair(dfull, db) == Q(0));
    }
  }
}
