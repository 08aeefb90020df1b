#include "isomono/isoflow.hpp"

#include <sstream>

namespace isomono {

std::vector<Coord> deformation_directions(const Instance &inst) {
  std::vector<Coord> out;
  for (auto &c : coordinate_basis(inst, false))
    if (c.kind == Coord::kT || c.kind == Coord::kThetaUn || c.kind == Coord::kThetaRa)
      out.push_back(c);
  return out;
}

Coord parse_direction(const Instance &inst, const std::string &spec) {
  // forms: theta_un:<pt>:<l>:<+|-> | theta_ra:<pt>:<l'> | t:<pt>
  // <pt> is the 1-based finite index or "inf"
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : spec) {
    if (ch == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  auto point_index = [&](const std::string &label) -> std::size_t {
    if (label == "inf") {
      for (std::size_t i = 0; i < inst.pts.size(); ++i)
        if (inst.pts[i].at_infinity)
          return i;
      throw UnknownDirection("no infinity point");
    }
    std::size_t want = std::stoul(label), fin = 0;
    for (std::size_t i = 0; i < inst.pts.size(); ++i) {
      if (inst.pts[i].at_infinity)
        continue;
      ++fin;
      if (fin == want)
        return i;
    }
    throw UnknownDirection("point index out of range: " + label);
  };
  Coord c;
  if (parts.size() == 4 && parts[0] == "theta_un") {
    c = Coord::theta_un(point_index(parts[1]), std::stoi(parts[2]),
                        parts[3] == "+" ? +1 : -1);
  } else if (parts.size() == 3 && parts[0] == "theta_ra") {
    c = Coord::theta_ra(point_index(parts[1]), std::stoi(parts[2]));
  } else if (parts.size() == 2 && parts[0] == "t") {
    c = Coord::t(point_index(parts[1]));
  } else {
    throw UnknownDirection("unrecognized direction spec '" + spec + "'");
  }
  check_direction(inst, TangentDirection::basis(c));
  return c;
}

// ---------------------------------------------------------------------------

namespace {

// dH/d(coordinate c2), H attached to c
Rational h_partial(const Instance &inst, const Coord &h_coord, const Coord &along,
                   int extra) {
  InstanceJ lifted = lift(inst, TangentDirection::basis(along));
  auto connJ = assemble_normal_form<JetQ>(lifted);
  JetQ h = hamiltonian(lifted, connJ, h_coord, extra);
  return h.eps;
}

} // namespace

Velocity vector_field(const Instance &inst, const Coord &dir, int extra) {
  check_direction(inst, TangentDirection::basis(dir));
  if (dir.kind != Coord::kT && dir.kind != Coord::kThetaUn && dir.kind != Coord::kThetaRa)
    throw NotADeformationDirection("vector_field: expected a base direction");
  Velocity out;
  out.dir = dir;
  PolyQ bigp = inst.pole_poly();
  PolyQ bigp_dx = bigp.derivative();
  CDData<Rational> cd = build_cd(inst);
  const std::size_t m = inst.dar.size();
  std::vector<Rational> dh_dp(m), dh_dq(m);
  for (std::size_t j = 0; j < m; ++j) {
    dh_dp[j] = h_partial(inst, dir, Coord::p(j), extra);
    dh_dq[j] = h_partial(inst, dir, Coord::q(j), extra);
  }
  // d p_j / ds at fixed (q, eta): differentiate p = P(q)(eta + S(q)) along the
  // drift only
  InstanceJ drifted = lift(inst, TangentDirection::basis(dir));
  CDData<JetQ> cdJ = build_cd(drifted);
  PolyJ bigpJ = drifted.pole_poly();
  EtaCoordinates eta = eta_from_p(inst);
  for (std::size_t j = 0; j < m; ++j) {
    const Rational q = inst.dar[j].q;
    const Rational pq = bigp.eval(q);
    // q_dot = -dH/deta = -P(q) dH/dp
    Rational qdot = -(pq * dh_dp[j]);
    // eta_dot = dH/dq|eta = dH/dq|p + dH/dp * dp/dq|eta,
    //   dp/dq|eta = P'(q)/P(q) * p + P(q) * S'(q)
    JetQ qj{q, Rational(1)};
    // S(q) and S'(q) via a jet in q (exact derivative of the tail)
    JetQ tail_jet(Rational(0));
    {
      std::size_t fin = 0;
      for (auto &pt : inst.pts) {
        if (pt.at_infinity)
          continue;
        JetQ d = qj - JetQ(pt.pos);
        JetQ den(Rational(1));
        for (int k = 0; k < pt.order; ++k)
          den = den * d;
        tail_jet = tail_jet + lift_poly(cd.d_fin[fin]).eval(qj) / den;
        ++fin;
      }
      tail_jet = tail_jet + lift_poly(cd.d_inf).eval(qj);
    }
    Rational dp_dq_eta = bigp_dx.eval(q) / pq * inst.dar[j].p + pq * tail_jet.eps;
    Rational etadot = dh_dq[j] + dh_dp[j] * dp_dq_eta;
    // dp/ds at fixed (q, eta): drift of P and of the D tails
    JetQ qfix(q);
    JetQ sJ(Rational(0));
    {
      std::size_t fin = 0;
      for (auto &pt : drifted.pts) {
        if (pt.at_infinity)
          continue;
        JetQ d = qfix - pt.pos;
        JetQ den(Rational(1));
        for (int k = 0; k < pt.order; ++k)
          den = den * d;
        sJ = sJ + cdJ.d_fin[fin].eval(qfix) / den;
        ++fin;
      }
      sJ = sJ + cdJ.d_inf.eval(qfix);
    }
    JetQ pdrift = bigpJ.eval(qfix) * (JetQ(eta.pairs[j].second) + sJ);
    Rational pdot = pq * dh_dq[j] + pdrift.eps;
    out.dq.push_back(qdot);
    out.deta.push_back(etadot);
    out.dp.push_back(pdot);
  }
  return out;
}

Mat2<RatFunc> delta_omega_raw(const Instance &inst, const TangentDirection &dir) {
  InstanceJ lifted = lift(inst, dir);
  auto connJ = assemble_normal_form<JetQ>(lifted);
  auto e1 = to_e1(connJ, lifted);
  return Mat2<RatFunc>(eps_part(e1.om.a11), eps_part(e1.om.a12), eps_part(e1.om.a21),
                       eps_part(e1.om.a22));
}

Mat2<RatFunc> delta_omega(const Instance &inst, const Coord &dir, int extra) {
  Velocity vel = vector_field(inst, dir, extra);
  TangentDirection full = TangentDirection::basis(dir);
  for (std::size_t j = 0; j < inst.dar.size(); ++j) {
    full.add(Coord::q(j), vel.dq[j]);
    full.add(Coord::p(j), vel.dp[j]);
  }
  return delta_omega_raw(inst, full);
}

// ---------------------------------------------------------------------------
// Upsilon.

namespace {

struct Budget {
  std::vector<std::pair<Rational, int>> fin; // (position, max pole order)
  int d11, d12, d21, d22;                    // polynomial degree caps, -1 = none
};

Budget make_budget(const ConnQ &conn, int bump) {
  Budget b;
  for (auto &[t, n] : conn.fin_div)
    b.fin.push_back({t, n - 1 + bump});
  // the O(-1)/O(1) twists of End(E_1) shift the degree caps of the
  // off-diagonal entries in opposite directions
  int ni = conn.n_inf + bump;
  b.d11 = ni - 1;
  b.d12 = ni - 2;
  b.d21 = ni;
  b.d22 = ni - 1;
  return b;
}

using Basis = std::vector<Mat2<RatFunc>>;

Basis ansatz_basis(const Budget &b) {
  Basis out;
  auto push_entry = [&out](int which, const RatFunc &f) {
    Mat2<RatFunc> m;
    (which == 0 ? m.a11 : which == 1 ? m.a12 : which == 2 ? m.a21 : m.a22) = f;
    out.push_back(m);
  };
  for (auto &[t, kmax] : b.fin)
    for (int k = 1; k <= kmax; ++k) {
      RatFunc f(PolyQ::constant(Rational(1)), pow_poly(PolyQ::linear_root(t), k));
      for (int e = 0; e < 4; ++e)
        push_entry(e, f);
    }
  int caps[4] = {b.d11, b.d12, b.d21, b.d22};
  for (int e = 0; e < 4; ++e)
    for (int d = 0; d <= caps[e]; ++d)
      push_entry(e, RatFunc(PolyQ::monomial(d)));
  return out;
}

Mat2<RatFunc> lhs_operator(const ConnQ &conn, const Mat2<RatFunc> &b) {
  // d/dx b + [Omega, b]
  Mat2<RatFunc> om(to_ratfunc(conn.om.a11), to_ratfunc(conn.om.a12),
                   to_ratfunc(conn.om.a21), to_ratfunc(conn.om.a22));
  Mat2<RatFunc> db(b.a11.derivative(), b.a12.derivative(), b.a21.derivative(),
                   b.a22.derivative());
  return db + om * b - b * om;
}

const RatFunc &entry(const Mat2<RatFunc> &m, int e) {
  return e == 0 ? m.a11 : e == 1 ? m.a12 : e == 2 ? m.a21 : m.a22;
}

} // namespace

UpsilonResult solve_upsilon(const ConnQ &conn, const Mat2<RatFunc> &delta) {
  if (conn.bundle != Bundle::kE1)
    throw Error("solve_upsilon: expected an E1 connection");
  UpsilonResult out;
  for (int bump = 0; bump <= 1; ++bump) {
    Budget budget = make_budget(conn, bump);
    Basis basis = ansatz_basis(budget);
    // common denominator covering every pole that can appear
    PolyQ den = PolyQ::constant(Rational(1));
    for (auto &[t, n] : conn.fin_div)
      den = den * pow_poly(PolyQ::linear_root(t), 2 * n + bump);
    std::vector<Mat2<RatFunc>> cols;
    cols.reserve(basis.size());
    for (auto &b : basis)
      cols.push_back(lhs_operator(conn, b));
    // polynomial rows: entry e, coefficient of x^k in (expr * den)
    auto clear_den = [&den](const RatFunc &f) {
      RatFunc g = f * RatFunc(den);
      if (!g.is_polynomial())
        throw InternalInconsistency("solve_upsilon: unexpected pole structure");
      return g.num;
    };
    int max_deg = 0;
    std::vector<std::array<PolyQ, 4>> col_polys(cols.size());
    std::array<PolyQ, 4> rhs_polys;
    for (int e = 0; e < 4; ++e) {
      rhs_polys[static_cast<std::size_t>(e)] = clear_den(entry(delta, e));
      max_deg = std::max(max_deg, rhs_polys[static_cast<std::size_t>(e)].degree());
    }
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (int e = 0; e < 4; ++e) {
        col_polys[c][static_cast<std::size_t>(e)] = clear_den(entry(cols[c], e));
        max_deg = std::max(max_deg, col_polys[c][static_cast<std::size_t>(e)].degree());
      }
    const std::size_t rows = 4 * static_cast<std::size_t>(max_deg + 1);
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols.size()));
    std::vector<Rational> rhs(rows);
    for (int e = 0; e < 4; ++e)
      for (int k = 0; k <= max_deg; ++k) {
        std::size_t r = static_cast<std::size_t>(e) * static_cast<std::size_t>(max_deg + 1) +
                        static_cast<std::size_t>(k);
        rhs[r] = rhs_polys[static_cast<std::size_t>(e)].coeff(k);
        for (std::size_t c = 0; c < cols.size(); ++c)
          a[r][c] = col_polys[c][static_cast<std::size_t>(e)].coeff(k);
      }
    auto sol = solve_linear(a, rhs);
    if (sol.status == SolveStatus::kInconsistent) {
      if (bump == 0)
        continue;
      std::size_t r = sol.bad_row;
      static const char *names[4] = {"(1,1)", "(1,2)", "(2,1)", "(2,2)"};
      std::ostringstream os;
      os << "entry " << names[r / static_cast<std::size_t>(max_deg + 1)]
         << ", coefficient x^" << (r % static_cast<std::size_t>(max_deg + 1))
         << ", residual " << sol.residual;
      out.failure = os.str();
      return out;
    }
    Mat2<RatFunc> ups;
    for (std::size_t c = 0; c < basis.size(); ++c) {
      if (sol.x[c].is_zero())
        continue;
      RatFunc w(PolyQ::constant(sol.x[c]));
      ups = ups + Mat2<RatFunc>(entry(basis[c], 0) * w, entry(basis[c], 1) * w,
                                entry(basis[c], 2) * w, entry(basis[c], 3) * w);
    }
    // certify: the residual must vanish identically
    Mat2<RatFunc> resid = delta - lhs_operator(conn, ups);
    if (!resid.a11.is_zero_fn() || !resid.a12.is_zero_fn() || !resid.a21.is_zero_fn() ||
        !resid.a22.is_zero_fn())
      throw InternalInconsistency("solve_upsilon: nonzero certified residual");
    out.ok = true;
    out.upsilon = ups;
    out.budget_bumped = bump > 0;
    return out;
  }
  return out;
}

UpsilonResult certify_direction(const Instance &inst, const Coord &dir, int extra) {
  auto conn = assemble_normal_form<Rational>(inst);
  auto e1 = to_e1(conn, inst);
  Mat2<RatFunc> delta = delta_omega(inst, dir, extra);
  return solve_upsilon(e1, delta);
}

// ---------------------------------------------------------------------------
// Numeric flows.

Instance instance_at(const Instance &base, const Coord &dir, const FloatState &state) {
  Instance inst = base;
  Rational offset = Rational::from_double(state.s);
  switch (dir.kind) {
  case Coord::kT:
    inst.pts[dir.point].pos += offset;
    break;
  case Coord::kThetaUn: {
    auto &v = dir.sign > 0 ? inst.pts[dir.point].theta_plus
                           : inst.pts[dir.point].theta_minus;
    v[static_cast<std::size_t>(dir.level)] += offset;
    break;
  }
  case Coord::kThetaRa:
    inst.pts[dir.point].theta_ra[static_cast<std::size_t>(dir.level)] += offset;
    break;
  default:
    throw NotADeformationDirection("instance_at: expected a base direction");
  }
  EtaCoordinates eta;
  for (std::size_t j = 0; j < base.dar.size(); ++j)
    eta.pairs.push_back(
        {Rational::from_double(state.q[j]), Rational::from_double(state.eta[j])});
  inst.dar = p_from_eta(inst, eta);
  return inst;
}

FloatState initial_state(const Instance &inst) {
  FloatState st;
  EtaCoordinates eta = eta_from_p(inst);
  for (auto &[q, e] : eta.pairs) {
    st.q.push_back(q.to_double());
    st.eta.push_back(e.to_double());
  }
  return st;
}

namespace {

void check_margin(const Instance &base, const Coord &dir, const FloatState &st,
                  double margin, long step) {
  for (std::size_t i = 0; i < st.q.size(); ++i)
    for (std::size_t j = i + 1; j < st.q.size(); ++j)
      if (std::abs(st.q[i] - st.q[j]) < margin)
        throw FlowSingular("apparent points collided", step);
  for (auto &pt : base.pts) {
    if (pt.at_infinity)
      continue;
    double t = pt.pos.to_double();
    if (dir.kind == Coord::kT && &base.pts[dir.point] == &pt)
      t += st.s;
    for (double q : st.q)
      if (std::abs(q - t) < margin)
        throw FlowSingular("apparent point hit a singular point", step);
  }
}

std::pair<std::vector<double>, std::vector<double>>
rhs_floats(const Instance &base, const Coord &dir, const FloatState &st, int extra) {
  Instance inst = instance_at(base, dir, st);
  Velocity vel = vector_field(inst, dir, extra);
  std::vector<double> dq, deta;
  for (auto &x : vel.dq)
    dq.push_back(x.to_double());
  for (auto &x : vel.deta)
    deta.push_back(x.to_double());
  return {dq, deta};
}

} // namespace

std::vector<FloatState> flow(const Instance &inst, const Coord &dir,
                             const FlowOptions &opt) {
  check_direction(inst, TangentDirection::basis(dir));
  std::vector<FloatState> traj;
  FloatState st = initial_state(inst);
  traj.push_back(st);
  const std::size_t m = st.q.size();
  for (long step = 0; step < opt.steps; ++step) {
    check_margin(inst, dir, st, opt.margin, step);
    auto stage = [&](const FloatState &base_state, double ds,
                     const std::pair<std::vector<double>, std::vector<double>> &k) {
      FloatState next = base_state;
      next.s += ds;
      for (std::size_t j = 0; j < m; ++j) {
        next.q[j] += ds * k.first[j];
        next.eta[j] += ds * k.second[j];
      }
      return next;
    };
    auto k1 = rhs_floats(inst, dir, st, opt.extra);
    auto k2 = rhs_floats(inst, dir, stage(st, opt.h / 2, k1), opt.extra);
    auto k3 = rhs_floats(inst, dir, stage(st, opt.h / 2, k2), opt.extra);
    auto k4 = rhs_floats(inst, dir, stage(st, opt.h, k3), opt.extra);
    FloatState next = st;
    next.s += opt.h;
    for (std::size_t j = 0; j < m; ++j) {
      next.q[j] += opt.h / 6 * (k1.first[j] + 2 * k2.first[j] + 2 * k3.first[j] + k4.first[j]);
      next.eta[j] +=
          opt.h / 6 * (k1.second[j] + 2 * k2.second[j] + 2 * k3.second[j] + k4.second[j]);
    }
    st = next;
    traj.push_back(st);
  }
  check_margin(inst, dir, st, opt.margin, opt.steps);
  return traj;
}

} // namespace isomono
