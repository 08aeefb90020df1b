#ifndef ISOMONO_SYMPLECTIC_HPP
#define ISOMONO_SYMPLECTIC_HPP

#include <map>
#include <vector>

#include "isomono/localform.hpp"
#include "isomono/singularity.hpp"

namespace isomono {

// ---------------------------------------------------------------------------
// eta coordinates: eta_j = p_j/P(q_j) - sum_i D_i(q_j)/(q_j-t_i)^{n_i} - D_inf(q_j)

struct EtaCoordinates {
  std::vector<std::pair<Rational, Rational>> pairs; // (q_j, eta_j)
};

EtaCoordinates eta_from_p(const Instance &inst);
// inverse at fixed (t, theta, q)
std::vector<DarbouxPair<Rational>> p_from_eta(const Instance &inst,
                                              const EtaCoordinates &eta);

// ---------------------------------------------------------------------------
// Hamiltonians from the local theta tails.

template <typename S>
S hamiltonian_theta_un(const std::vector<S> &tail, int n, int l) {
  if (l < 0 || l > n - 2)
    throw BadIndex("theta Hamiltonian: level out of range");
  return tail.at(static_cast<std::size_t>(2 * n - l - 2)) / S(static_cast<long>(n - l - 1));
}

template <typename S>
S hamiltonian_t_from_tails(const std::vector<S> &plus, const std::vector<S> &minus, int n) {
  S acc(0);
  for (int l = 0; l <= n - 1; ++l)
    acc = acc +
          plus.at(static_cast<std::size_t>(l)) * plus.at(static_cast<std::size_t>(2 * n - 1 - l)) +
          minus.at(static_cast<std::size_t>(l)) * minus.at(static_cast<std::size_t>(2 * n - 1 - l));
  return acc;
}

template <typename S>
S hamiltonian_theta_ra(const std::vector<S> &zeta_tail, int n, int lp) {
  if (lp < 0 || lp > 2 * n - 3)
    throw BadIndex("theta Hamiltonian: level out of range");
  S h = zeta_tail.at(static_cast<std::size_t>(4 * (n - 1) - lp)) /
        S(static_cast<long>(2 * (n - 1) - lp));
  if (lp == 0)
    h = h - zeta_tail.at(static_cast<std::size_t>(2 * n - 1)) /
                (S(2) * zeta_tail.at(1));
  return h;
}

// The Hamiltonian attached to a base coordinate (kT / kThetaUn / kThetaRa),
// evaluated from a full reduction of the instance's normal form.
template <typename S>
S hamiltonian(const InstData<S> &inst, const Conn<S> &conn, const Coord &c, int extra = 3) {
  const auto &pt = inst.pts.at(c.point);
  PointReduction<S> red = reduce_point(conn, inst, c.point, extra);
  switch (c.kind) {
  case Coord::kThetaUn:
    return hamiltonian_theta_un(c.sign > 0 ? red.un.theta_plus : red.un.theta_minus,
                                pt.order, c.level);
  case Coord::kThetaRa:
    return hamiltonian_theta_ra(red.ra.theta_zeta, pt.order, c.level);
  case Coord::kT:
    return hamiltonian_t_from_tails(red.un.theta_plus, red.un.theta_minus, pt.order);
  default:
    throw NotADeformationDirection("no Hamiltonian attached to a fiber coordinate");
  }
}

Rational hamiltonian(const Instance &inst, const Coord &c, int extra = 3);

// ---------------------------------------------------------------------------
// Krichever residue 2-forms.

enum class OmegaMode { kFiber, kExtended };

// Per-direction variation data: at every singular point the fixed-x
// variations A = delta(Omega) and U = delta(psi) psi^{-1} as local Laurent
// series (zeta chart at ramified points), and the same at apparent points.
struct OmegaData {
  struct PointBlock {
    bool ramified = false;
    MatSeriesQ a, u;
  };
  std::vector<PointBlock> sing;
  std::vector<PointBlock> app;
};

// Alternative gauge normalizations for the independence checks: constant
// hooks fed to the local reductions and apparent solutions.
struct OmegaGauge {
  Rational apparent_hook;   // (xi_1)_{21} at every apparent point
  Rational ramified_hook11; // row-one hook at every ramified point
};

OmegaData omega_data(const Instance &inst, const TangentDirection &dir, int extra = 3,
                     const OmegaGauge &gauge = {});

// (1/2) sum res Tr(A1 U2 - U1 A2), ramified points entering with weight 1/4.
Rational krichever_pair(const OmegaData &d1, const OmegaData &d2);

Rational krichever_omega(const Instance &inst, const TangentDirection &dir1,
                         const TangentDirection &dir2, OmegaMode mode, int extra = 3);

// ---------------------------------------------------------------------------
// The canonical comparison form
//   omega' = sum d eta_j ^ dq_j + sum dH_theta ^ d theta + sum dH_t ^ dt.

struct CanonicalData {
  std::vector<Rational> dq, deta;          // X(q_j), X(eta_j)
  std::vector<Rational> dh;                // X(H_c), c over coordinate_basis base part
  std::vector<Rational> w;                 // X(c) for the same base coordinates
};

CanonicalData canonical_data(const Instance &inst, const TangentDirection &dir,
                             int extra = 3);
Rational canonical_pair(const CanonicalData &d1, const CanonicalData &d2);
Rational canonical_omega_hat(const Instance &inst, const TangentDirection &dir1,
                             const TangentDirection &dir2, int extra = 3);

} // namespace isomono

#endif
