#include <array>
#include <cmath>
#include <complex>

#include "isomono/isoflow.hpp"

namespace isomono {

namespace {

using C = std::complex<double>;
using CMat = std::array<C, 4>; // row major 2x2

struct CRat {
  std::vector<C> num, den;
  C eval(C x) const {
    auto horner = [&x](const std::vector<C> &c) {
      C acc = 0;
      for (auto it = c.rbegin(); it != c.rend(); ++it)
        acc = acc * x + *it;
      return acc;
    };
    return horner(num) / horner(den);
  }
};

CRat to_crat(const RatFunc &f) {
  CRat out;
  for (int k = 0; k <= f.num.degree(); ++k)
    out.num.push_back(C(f.num.coeff(k).to_double(), 0.0));
  for (int k = 0; k <= f.den.degree(); ++k)
    out.den.push_back(C(f.den.coeff(k).to_double(), 0.0));
  if (out.num.empty())
    out.num.push_back(C(0, 0));
  return out;
}

struct CMatFun {
  CRat a11, a12, a21, a22;
  CMat eval(C x) const { return {a11.eval(x), a12.eval(x), a21.eval(x), a22.eval(x)}; }
};

CMat mul(const CMat &x, const CMat &y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

CMat axpy(const CMat &x, double a, const CMat &y) {
  CMat r;
  for (int i = 0; i < 4; ++i)
    r[i] = x[i] + a * y[i];
  return r;
}

double norm1(const CMat &x) {
  double s = 0;
  for (auto &c : x)
    s += std::abs(c);
  return s;
}

// Dormand-Prince 5(4) on Psi' = -Omega(x(tau)) dx/dtau Psi over tau in [0,1].
CMat transport_edge(const CMatFun &om, C a, C b, CMat psi, double rtol) {
  const C dx = b - a;
  auto f = [&](double tau, const CMat &y) {
    CMat m = om.eval(a + tau * dx);
    CMat r = mul(m, y);
    for (auto &c : r)
      c *= -dx;
    return r;
  };
  static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                      a54 = -212.0 / 729;
  static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                      a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                      b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                      e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                      e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  double tau = 0, h = 0.05;
  int guard = 0;
  while (tau < 1.0) {
    if (++guard > 2000000)
      throw IntegrationFailure("monodromy: step limit exceeded");
    if (tau + h > 1.0)
      h = 1.0 - tau;
    CMat k1 = f(tau, psi);
    CMat k2 = f(tau + c2 * h, axpy(psi, h * a21, k1));
    CMat y3 = axpy(axpy(psi, h * a31, k1), h * a32, k2);
    CMat k3 = f(tau + c3 * h, y3);
    CMat y4 = axpy(axpy(axpy(psi, h * a41, k1), h * a42, k2), h * a43, k3);
    CMat k4 = f(tau + c4 * h, y4);
    CMat y5 = axpy(axpy(axpy(axpy(psi, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
    CMat k5 = f(tau + c5 * h, y5);
    CMat y6 = axpy(axpy(axpy(axpy(axpy(psi, h * a61, k1), h * a62, k2), h * a63, k3),
                        h * a64, k4),
                   h * a65, k5);
    CMat k6 = f(tau + h, y6);
    CMat y7 = axpy(axpy(axpy(axpy(axpy(psi, h * b1, k1), h * b3, k3), h * b4, k4), h * b5, k5),
                   h * b6, k6);
    CMat k7 = f(tau + h, y7);
    CMat err{};
    err = axpy(err, h * e1, k1);
    err = axpy(err, h * e3, k3);
    err = axpy(err, h * e4, k4);
    err = axpy(err, h * e5, k5);
    err = axpy(err, h * e6, k6);
    err = axpy(err, h * e7, k7);
    double scale = rtol * std::max(1.0, norm1(psi));
    double errn = norm1(err) / scale;
    if (errn <= 1.0) {
      tau += h;
      psi = y7;
    }
    double factor = errn > 0 ? 0.9 * std::pow(errn, -0.2) : 5.0;
    factor = std::min(5.0, std::max(0.2, factor));
    h *= factor;
    if (h < 1e-14)
      throw IntegrationFailure("monodromy: step size underflow");
  }
  return psi;
}

} // namespace

std::complex<double> loop_trace(const ConnQ &conn,
                                const std::vector<std::complex<double>> &polygon,
                                double rtol) {
  if (conn.bundle != Bundle::kE1)
    throw Error("loop_trace: expected an E1 connection");
  CMatFun om{to_crat(to_ratfunc(conn.om.a11)), to_crat(to_ratfunc(conn.om.a12)),
             to_crat(to_ratfunc(conn.om.a21)), to_crat(to_ratfunc(conn.om.a22))};
  CMat psi{C(1, 0), C(0, 0), C(0, 0), C(1, 0)};
  for (std::size_t k = 0; k + 1 <= polygon.size(); ++k) {
    C a = polygon[k];
    C b = polygon[(k + 1) % polygon.size()];
    psi = transport_edge(om, a, b, psi, rtol);
  }
  return psi[0] + psi[3];
}

std::complex<double> monodromy_trace(const ConnQ &conn, std::size_t pt_index,
                                     const MonodromyOptions &opt) {
  if (pt_index >= conn.fin_div.size())
    throw BadIndex("monodromy_trace: point index out of range");
  const double t = conn.fin_div[pt_index].first.to_double();
  double safe = 1e30;
  for (std::size_t i = 0; i < conn.fin_div.size(); ++i)
    if (i != pt_index)
      safe = std::min(safe, std::abs(conn.fin_div[i].first.to_double() - t));
  if (safe > 1e29)
    safe = 1.0;
  const double r = opt.radius_scale * safe;
  std::vector<std::complex<double>> square = {
      {t + r, r}, {t - r, r}, {t - r, -r}, {t + r, -r}};
  return loop_trace(conn, square, opt.rtol);
}

} // namespace isomono
