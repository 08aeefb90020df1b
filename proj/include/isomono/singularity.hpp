#ifndef ISOMONO_SINGULARITY_HPP
#define ISOMONO_SINGULARITY_HPP

#include <optional>
#include <string>
#include <vector>

#include "isomono/errors.hpp"
#include "isomono/jet.hpp"
#include "isomono/poly.hpp"
#include "isomono/rational.hpp"

namespace isomono {

enum class PointKind { kRegular, kUnramified, kRamified };

inline const char *kind_name(PointKind k) {
  switch (k) {
  case PointKind::kRegular:
    return "reg";
  case PointKind::kUnramified:
    return "un";
  case PointKind::kRamified:
    return "ra";
  }
  return "?";
}

// One singular point with its spectral tuple. Scalar type S is Rational for
// ground data and Jet<Rational> when a tangent direction is attached.
template <typename S> struct PointData {
  bool at_infinity = false;
  S pos{};      // meaningless when at_infinity
  int order = 1; // n_i >= 1
  PointKind kind = PointKind::kRegular;
  // regular/unramified: theta^+_l, theta^-_l for l = 0..order-1
  std::vector<S> theta_plus, theta_minus;
  // ramified: theta_{l'} for l' = 0..2*order-2
  std::vector<S> theta_ra;
};

template <typename S> struct DarbouxPair {
  S q{}, p{};
};

// Full exact instance: divisor + spectral data + Darboux points. Finite
// points come first (t_1, t_2, ...), the infinity point is last and required.
template <typename S> struct InstData {
  std::vector<PointData<S>> pts;
  std::vector<DarbouxPair<S>> dar;

  int n() const {
    int s = 0;
    for (auto &p : pts)
      s += p.order;
    return s;
  }
  std::size_t num_finite() const {
    std::size_t k = 0;
    for (auto &p : pts)
      if (!p.at_infinity)
        ++k;
    return k;
  }
  const PointData<S> &infinity() const {
    for (auto &p : pts)
      if (p.at_infinity)
        return p;
    throw ValidationError("instance has no point at infinity");
  }
  // P(x) = prod over finite points of (x - t_i)^{n_i}
  Poly<S> pole_poly() const {
    Poly<S> p = Poly<S>::constant(S(1));
    for (auto &pt : pts)
      if (!pt.at_infinity)
        p = p * pow_poly(Poly<S>::linear_root(pt.pos), pt.order);
    return p;
  }
  // Q_1(x) = prod (x - q_j)
  Poly<S> apparent_poly() const {
    Poly<S> p = Poly<S>::constant(S(1));
    for (auto &d : dar)
      p = p * Poly<S>::linear_root(d.q);
    return p;
  }
};

using Instance = InstData<Rational>;
using InstanceJ = InstData<JetQ>;

struct Diagnostic {
  std::string check;
  bool ok = true;
  std::string detail;
};

// Fuchs sum: sum over reg/un of (th+_{n-1} + th-_{n-1}) plus sum over ra of
// (th_{2n-2} - 1/2); must equal -1 exactly.
inline Rational fuchs_sum(const Instance &inst) {
  Rational s(0);
  for (auto &p : inst.pts) {
    if (p.kind == PointKind::kRamified)
      s += p.theta_ra.at(static_cast<std::size_t>(2 * p.order - 2)) - Rational(1, 2);
    else
      s += p.theta_plus.at(static_cast<std::size_t>(p.order - 1)) +
           p.theta_minus.at(static_cast<std::size_t>(p.order - 1));
  }
  return s;
}

std::vector<Diagnostic> validate(const Instance &inst);
inline bool all_ok(const std::vector<Diagnostic> &ds) {
  for (auto &d : ds)
    if (!d.ok)
      return false;
  return true;
}
inline void require_valid(const Instance &inst) {
  for (auto &d : validate(inst))
    if (!d.ok)
      throw ValidationError(d.check + ": " + d.detail);
}

// ---------------------------------------------------------------------------
// Tangent directions on the extended moduli coordinates.

struct Coord {
  enum Kind { kQ, kP, kEta, kT, kThetaUn, kThetaRa } kind;
  std::size_t point = 0; // index into pts (kT/kTheta*) or dar (kQ/kP/kEta)
  int level = 0;         // l or l'
  int sign = +1;         // +1 / -1 selects theta^+ / theta^- (kThetaUn)

  static Coord q(std::size_t j) { return {kQ, j, 0, 0}; }
  static Coord p(std::size_t j) { return {kP, j, 0, 0}; }
  static Coord eta(std::size_t j) { return {kEta, j, 0, 0}; }
  static Coord t(std::size_t i) { return {kT, i, 0, 0}; }
  static Coord theta_un(std::size_t i, int l, int sign) { return {kThetaUn, i, l, sign}; }
  static Coord theta_ra(std::size_t i, int lp) { return {kThetaRa, i, lp, 0}; }

  bool operator==(const Coord &o) const {
    return kind == o.kind && point == o.point && level == o.level && sign == o.sign;
  }
};

struct TangentDirection {
  std::vector<std::pair<Coord, Rational>> weights;

  static TangentDirection basis(const Coord &c) { return {{{c, Rational(1)}}}; }
  TangentDirection &add(const Coord &c, const Rational &w) {
    weights.push_back({c, w});
    return *this;
  }
};

// Rejects directions along frozen parameters: positions of ramified points or
// of t_1, t_2, infinity; residue-level thetas.
void check_direction(const Instance &inst, const TangentDirection &dir);

// Jet lift of the whole instance along a direction (eps slots filled from the
// direction's weights; kEta weights are converted to the p-chart).
InstanceJ lift(const Instance &inst, const TangentDirection &dir);
inline InstanceJ lift(const Instance &inst) { return lift(inst, TangentDirection{}); }

// Extended-coordinate basis used by the omega evaluators: q_j, p_j first,
// then admissible t_i, then admissible theta directions.
std::vector<Coord> coordinate_basis(const Instance &inst, bool fiber_only);
std::string coord_name(const Instance &inst, const Coord &c);

} // namespace isomono

#endif
