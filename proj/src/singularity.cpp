#include "isomono/singularity.hpp"

#include <set>
#include <sstream>

namespace isomono {

namespace {

std::string point_label(const Instance &inst, std::size_t idx) {
  if (inst.pts[idx].at_infinity)
    return "inf";
  std::size_t k = 0;
  for (std::size_t i = 0; i < idx; ++i)
    if (!inst.pts[i].at_infinity)
      ++k;
  return std::to_string(k + 1);
}

bool integer_difference(const Rational &a, const Rational &b) {
  return (a - b).is_integer();
}

} // namespace

std::vector<Diagnostic> validate(const Instance &inst) {
  std::vector<Diagnostic> out;
  auto fail = [&out](const std::string &check, const std::string &detail) {
    out.push_back({check, false, detail});
  };
  auto pass = [&out](const std::string &check) { out.push_back({check, true, ""}); };

  std::size_t n_inf = 0;
  for (auto &p : inst.pts)
    if (p.at_infinity)
      ++n_inf;
  if (n_inf != 1)
    fail("infinity-point", "expected exactly one point at infinity, found " +
                               std::to_string(n_inf));
  else if (!inst.pts.back().at_infinity)
    fail("infinity-point", "the infinity point must be listed last");
  else
    pass("infinity-point");

  std::vector<Rational> fin;
  for (auto &p : inst.pts)
    if (!p.at_infinity)
      fin.push_back(p.pos);
  bool pos_ok = true;
  for (std::size_t i = 0; i < fin.size() && pos_ok; ++i)
    for (std::size_t j = i + 1; j < fin.size(); ++j)
      if (fin[i] == fin[j]) {
        fail("positions-distinct", "t_" + std::to_string(i + 1) + " = t_" +
                                       std::to_string(j + 1));
        pos_ok = false;
        break;
      }
  if (pos_ok)
    pass("positions-distinct");
  if (!fin.empty() && fin[0] != Rational(0))
    fail("position-normalization", "t_1 must be 0, got " + fin[0].str());
  else if (fin.size() >= 2 && fin[1] != Rational(1))
    fail("position-normalization", "t_2 must be 1, got " + fin[1].str());
  else {
    bool ok = true;
    for (std::size_t i = 2; i < fin.size(); ++i)
      if (fin[i] == Rational(0) || fin[i] == Rational(1)) {
        fail("position-normalization", "t_" + std::to_string(i + 1) + " collides with 0/1");
        ok = false;
      }
    if (ok)
      pass("position-normalization");
  }

  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    const auto &p = inst.pts[i];
    const std::string tag = "point-" + point_label(inst, i);
    if (p.order < 1) {
      fail(tag, "order must be >= 1");
      continue;
    }
    if (p.kind == PointKind::kRamified) {
      if (p.order < 2) {
        fail(tag, "ramified point needs order > 1");
        continue;
      }
      if (p.theta_ra.size() != static_cast<std::size_t>(2 * p.order - 1)) {
        fail(tag, "theta tuple must have length 2n-1");
        continue;
      }
      if (p.theta_ra[1].is_zero()) {
        fail(tag, "theta_{1,t_i} != 0 required at a ramified point");
        continue;
      }
    } else {
      if (p.theta_plus.size() != static_cast<std::size_t>(p.order) ||
          p.theta_minus.size() != static_cast<std::size_t>(p.order)) {
        fail(tag, "theta tuples must have length n_i");
        continue;
      }
      if (p.kind == PointKind::kRegular) {
        if (p.order != 1) {
          fail(tag, "regular point must have order 1");
          continue;
        }
        if (integer_difference(p.theta_plus[0], p.theta_minus[0])) {
          fail(tag, "theta^+_0 - theta^-_0 must not be an integer");
          continue;
        }
      } else {
        if (p.order < 2) {
          fail(tag, "unramified irregular point needs order > 1");
          continue;
        }
        if (p.theta_plus[0] == p.theta_minus[0]) {
          fail(tag, "theta^+_0 != theta^-_0 required");
          continue;
        }
      }
    }
    pass(tag);
  }

  const int n = inst.n();
  if (n < 3)
    fail("degree", "deg D = " + std::to_string(n) + " < 3");
  else
    pass("degree");

  if (n_inf == 1) {
    Rational fs = fuchs_sum(inst);
    if (fs != Rational(-1))
      fail("fuchs-relation", "sum is " + fs.str() + ", expected -1");
    else
      pass("fuchs-relation");
  }

  if (static_cast<int>(inst.dar.size()) != n - 3)
    fail("darboux-count", "expected n-3 = " + std::to_string(n - 3) + " points, got " +
                              std::to_string(inst.dar.size()));
  else
    pass("darboux-count");
  bool dar_ok = true;
  for (std::size_t j = 0; j < inst.dar.size(); ++j) {
    const Rational &q = inst.dar[j].q;
    if (q == Rational(0) || q == Rational(1)) {
      fail("darboux-positions", "q collides with 0/1");
      dar_ok = false;
      break;
    }
    for (auto &t : fin)
      if (q == t) {
        fail("darboux-positions", "q collides with a singular point");
        dar_ok = false;
        break;
      }
    for (std::size_t k = j + 1; k < inst.dar.size() && dar_ok; ++k)
      if (q == inst.dar[k].q) {
        fail("darboux-positions", "repeated apparent point");
        dar_ok = false;
      }
    if (!dar_ok)
      break;
  }
  if (dar_ok)
    pass("darboux-positions");
  return out;
}

void check_direction(const Instance &inst, const TangentDirection &dir) {
  std::size_t nfin = inst.num_finite();
  for (auto &[c, w] : dir.weights) {
    (void)w;
    switch (c.kind) {
    case Coord::kQ:
    case Coord::kP:
    case Coord::kEta:
      if (c.point >= inst.dar.size())
        throw UnknownDirection("darboux index out of range");
      break;
    case Coord::kT: {
      if (c.point >= inst.pts.size())
        throw UnknownDirection("point index out of range");
      const auto &p = inst.pts[c.point];
      if (p.at_infinity)
        throw NotADeformationDirection("the position of infinity is fixed");
      if (p.kind == PointKind::kRamified)
        throw NotADeformationDirection("positions of ramified points are frozen");
      std::size_t fin_idx = 0;
      for (std::size_t i = 0; i < c.point; ++i)
        if (!inst.pts[i].at_infinity)
          ++fin_idx;
      if (fin_idx < 2)
        throw NotADeformationDirection("t_1 = 0 and t_2 = 1 are fixed by normalization");
      (void)nfin;
      break;
    }
    case Coord::kThetaUn: {
      if (c.point >= inst.pts.size())
        throw UnknownDirection("point index out of range");
      const auto &p = inst.pts[c.point];
      if (p.kind != PointKind::kUnramified)
        throw NotADeformationDirection("theta_un direction at a non-unramified point");
      if (c.level < 0 || c.level > p.order - 2)
        throw NotADeformationDirection("theta level out of the deformable range");
      if (c.sign != 1 && c.sign != -1)
        throw UnknownDirection("theta_un sign must be +1/-1");
      break;
    }
    case Coord::kThetaRa: {
      if (c.point >= inst.pts.size())
        throw UnknownDirection("point index out of range");
      const auto &p = inst.pts[c.point];
      if (p.kind != PointKind::kRamified)
        throw NotADeformationDirection("theta_ra direction at a non-ramified point");
      if (c.level < 0 || c.level > 2 * p.order - 3)
        throw NotADeformationDirection("theta level out of the deformable range");
      break;
    }
    }
  }
}

InstanceJ lift(const Instance &inst, const TangentDirection &dir) {
  check_direction(inst, dir);
  InstanceJ out;
  out.pts.reserve(inst.pts.size());
  for (auto &p : inst.pts) {
    PointData<JetQ> q;
    q.at_infinity = p.at_infinity;
    q.pos = JetQ(p.pos);
    q.order = p.order;
    q.kind = p.kind;
    for (auto &x : p.theta_plus)
      q.theta_plus.push_back(JetQ(x));
    for (auto &x : p.theta_minus)
      q.theta_minus.push_back(JetQ(x));
    for (auto &x : p.theta_ra)
      q.theta_ra.push_back(JetQ(x));
    out.pts.push_back(std::move(q));
  }
  for (auto &d : inst.dar)
    out.dar.push_back({JetQ(d.q), JetQ(d.p)});
  PolyQ bigp = inst.pole_poly();
  for (auto &[c, w] : dir.weights) {
    switch (c.kind) {
    case Coord::kQ:
      out.dar[c.point].q.eps += w;
      break;
    case Coord::kP:
      out.dar[c.point].p.eps += w;
      break;
    case Coord::kEta:
      out.dar[c.point].p.eps += w * bigp.eval(inst.dar[c.point].q);
      break;
    case Coord::kT:
      out.pts[c.point].pos.eps += w;
      break;
    case Coord::kThetaUn: {
      auto &vec = c.sign > 0 ? out.pts[c.point].theta_plus : out.pts[c.point].theta_minus;
      vec[static_cast<std::size_t>(c.level)].eps += w;
      break;
    }
    case Coord::kThetaRa:
      out.pts[c.point].theta_ra[static_cast<std::size_t>(c.level)].eps += w;
      break;
    }
  }
  return out;
}

std::vector<Coord> coordinate_basis(const Instance &inst, bool fiber_only) {
  std::vector<Coord> out;
  for (std::size_t j = 0; j < inst.dar.size(); ++j)
    out.push_back(Coord::q(j));
  for (std::size_t j = 0; j < inst.dar.size(); ++j)
    out.push_back(Coord::p(j));
  if (fiber_only)
    return out;
  std::size_t fin_idx = 0;
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    const auto &p = inst.pts[i];
    if (!p.at_infinity) {
      if (fin_idx >= 2 && p.kind != PointKind::kRamified)
        out.push_back(Coord::t(i));
      ++fin_idx;
    }
  }
  for (std::size_t i = 0; i < inst.pts.size(); ++i) {
    const auto &p = inst.pts[i];
    if (p.kind == PointKind::kUnramified)
      for (int l = 0; l <= p.order - 2; ++l) {
        out.push_back(Coord::theta_un(i, l, +1));
        out.push_back(Coord::theta_un(i, l, -1));
      }
    else if (p.kind == PointKind::kRamified)
      for (int lp = 0; lp <= 2 * p.order - 3; ++lp)
        out.push_back(Coord::theta_ra(i, lp));
  }
  return out;
}

std::string coord_name(const Instance &inst, const Coord &c) {
  std::ostringstream os;
  switch (c.kind) {
  case Coord::kQ:
    os << "q" << (c.point + 1);
    break;
  case Coord::kP:
    os << "p" << (c.point + 1);
    break;
  case Coord::kEta:
    os << "eta" << (c.point + 1);
    break;
  case Coord::kT:
    os << "t:" << point_label(inst, c.point);
    break;
  case Coord::kThetaUn:
    os << "theta_un:" << point_label(inst, c.point) << ":" << c.level << ":"
       << (c.sign > 0 ? "+" : "-");
    break;
  case Coord::kThetaRa:
    os << "theta_ra:" << point_label(inst, c.point) << ":" << c.level;
    break;
  }
  return os.str();
}

} // namespace isomono
