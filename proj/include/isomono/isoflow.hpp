#ifndef ISOMONO_ISOFLOW_HPP
#define ISOMONO_ISOFLOW_HPP

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "isomono/connection.hpp"
#include "isomono/symplectic.hpp"

namespace isomono {

// ---------------------------------------------------------------------------
// Admissible deformation directions and their Hamiltonian vector fields.

std::vector<Coord> deformation_directions(const Instance &inst);
Coord parse_direction(const Instance &inst, const std::string &spec);

struct Velocity {
  Coord dir;                        // the unit drift
  std::vector<Rational> dq, dp, deta;
};

// dq_j/ds = -dH/d eta_j, d eta_j/ds = +dH/dq_j, plus unit drift along `dir`;
// dp is the induced motion of the p coordinates.
Velocity vector_field(const Instance &inst, const Coord &dir, int extra = 3);

// Exact variation of the E_1 connection matrix along the isomonodromic field
// (drift + Hamiltonian motion), entrywise d/ds as rational functions.
Mat2<RatFunc> delta_omega(const Instance &inst, const Coord &dir, int extra = 3);
// Variation along an arbitrary tangent direction (no Hamiltonian motion).
Mat2<RatFunc> delta_omega_raw(const Instance &inst, const TangentDirection &dir);

// ---------------------------------------------------------------------------
// Horizontal lift: solve delta(Omega) = d Upsilon + [Omega, Upsilon] within
// the sheaf-prescribed pole budget.

struct UpsilonResult {
  bool ok = false;
  Mat2<RatFunc> upsilon;
  bool budget_bumped = false; // solved only after raising every budget by one
  std::string failure;        // first obstructed coefficient when !ok
};

UpsilonResult solve_upsilon(const ConnQ &conn, const Mat2<RatFunc> &delta);

// Convenience: certify one direction end to end.
UpsilonResult certify_direction(const Instance &inst, const Coord &dir, int extra = 3);

// ---------------------------------------------------------------------------
// Numeric flows.

struct FloatState {
  std::vector<double> q, eta;
  double s = 0; // current value of the driven parameter offset
};

struct FlowOptions {
  double h = 1e-3;
  long steps = 100;
  double margin = 1e-6;
  int extra = 3;
};

// The instance moved to parameter offset s along `dir` with Darboux data
// replaced by the float state (exactly rationalized).
Instance instance_at(const Instance &base, const Coord &dir, const FloatState &state);

FloatState initial_state(const Instance &inst);

// Classical RK4 on (q, eta) with the deformation parameter advancing at unit
// rate; emits the trajectory including the initial state.
std::vector<FloatState> flow(const Instance &inst, const Coord &dir,
                             const FlowOptions &opt);

// ---------------------------------------------------------------------------
// Monodromy.

struct MonodromyOptions {
  double rtol = 1e-9;
  double radius_scale = 0.5; // loop radius as a fraction of the safe distance
};

// Trace of the transport of d Psi = -Omega Psi around a small square loop
// encircling the finite singular point `pt_index`, adaptive embedded RK.
std::complex<double> monodromy_trace(const ConnQ &conn, std::size_t pt_index,
                                     const MonodromyOptions &opt = {});

// Transport around an explicit polygonal loop in the x chart.
std::complex<double> loop_trace(const ConnQ &conn,
                                const std::vector<std::complex<double>> &polygon,
                                double rtol);

} // namespace isomono

#endif
