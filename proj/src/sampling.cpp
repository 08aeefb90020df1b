#include "isomono/sampling.hpp"

#include <algorithm>

namespace isomono {

Rational Sampler::rational(long num_bound, long den_bound) {
  std::uniform_int_distribution<long> num(-num_bound, num_bound), den(1, den_bound);
  return Rational(num(gen), den(gen));
}

Rational Sampler::nonzero_rational(long num_bound, long den_bound) {
  for (;;) {
    Rational r = rational(num_bound, den_bound);
    if (!r.is_zero())
      return r;
  }
}

Instance Sampler::instance(const Options &opt) {
  if (opt.n < 3)
    throw Error("Sampler: n must be >= 3");
  for (int attempt = 0; attempt < 1000; ++attempt) {
    // split n into point orders; regular points get order 1
    std::vector<int> orders;
    std::vector<PointKind> kinds;
    int remaining = opt.n;
    auto push_point = [&](PointKind k, int ord) {
      kinds.push_back(k);
      orders.push_back(ord);
      remaining -= ord;
    };
    std::uniform_int_distribution<int> coin(0, 1);
    if (opt.need_ramified && remaining >= 2)
      push_point(PointKind::kRamified, 2);
    if (opt.need_unramified && remaining >= 2)
      push_point(PointKind::kUnramified, 2);
    if (opt.need_regular && remaining >= 1)
      push_point(PointKind::kRegular, 1);
    while (remaining > 0) {
      std::uniform_int_distribution<int> ord_d(1, std::min(3, remaining));
      int ord = ord_d(gen);
      PointKind k;
      if (ord == 1)
        k = PointKind::kRegular;
      else
        k = (opt.allow_ramified && coin(gen)) ? PointKind::kRamified : PointKind::kUnramified;
      push_point(k, ord);
    }
    // shuffle which point sits at infinity
    std::uniform_int_distribution<std::size_t> pick(0, orders.size() - 1);
    std::size_t inf_at = pick(gen);
    std::swap(orders[inf_at], orders.back());
    std::swap(kinds[inf_at], kinds.back());

    Instance inst;
    std::vector<Rational> used_pos;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      PointData<Rational> p;
      p.order = orders[i];
      p.kind = kinds[i];
      p.at_infinity = (i + 1 == orders.size());
      if (!p.at_infinity) {
        std::size_t fin_idx = used_pos.size();
        if (fin_idx == 0)
          p.pos = Rational(0);
        else if (fin_idx == 1)
          p.pos = Rational(1);
        else {
          for (;;) {
            Rational t = rational(9, 4);
            bool fresh = t != Rational(0) && t != Rational(1);
            for (auto &u : used_pos)
              if (u == t)
                fresh = false;
            if (fresh) {
              p.pos = t;
              break;
            }
          }
        }
        used_pos.push_back(p.pos);
      }
      if (p.kind == PointKind::kRamified) {
        p.theta_ra.resize(static_cast<std::size_t>(2 * p.order - 1));
        for (auto &x : p.theta_ra)
          x = rational(9, 6);
        p.theta_ra[1] = nonzero_rational(9, 6);
      } else {
        p.theta_plus.resize(static_cast<std::size_t>(p.order));
        p.theta_minus.resize(static_cast<std::size_t>(p.order));
        for (auto &x : p.theta_plus)
          x = rational(9, 6);
        for (auto &x : p.theta_minus)
          x = rational(9, 6);
        if (p.kind == PointKind::kRegular) {
          while ((p.theta_plus[0] - p.theta_minus[0]).is_integer())
            p.theta_minus[0] = rational(9, 6);
        } else {
          while (p.theta_plus[0] == p.theta_minus[0])
            p.theta_minus[0] = rational(9, 6);
        }
      }
      inst.pts.push_back(std::move(p));
    }

    // Fuchs relation: absorb into a residue slot at infinity.
    auto &inf = inst.pts.back();
    if (inf.kind == PointKind::kRamified)
      inf.theta_ra[static_cast<std::size_t>(2 * inf.order - 2)] = Rational(0);
    else
      inf.theta_minus[static_cast<std::size_t>(inf.order - 1)] = Rational(0);
    Rational gap = Rational(-1) - fuchs_sum(inst);
    if (inf.kind == PointKind::kRamified)
      inf.theta_ra[static_cast<std::size_t>(2 * inf.order - 2)] = gap;
    else
      inf.theta_minus[static_cast<std::size_t>(inf.order - 1)] += gap;
    if (inf.kind == PointKind::kRegular &&
        (inf.theta_plus[0] - inf.theta_minus[0]).is_integer())
      continue; // the Fuchs fix-up broke non-resonance; resample

    // Darboux points
    const int m = opt.n - 3;
    for (int j = 0; j < m; ++j) {
      for (;;) {
        Rational q = rational(9, 4);
        bool fresh = q != Rational(0) && q != Rational(1);
        for (auto &u : used_pos)
          if (u == q)
            fresh = false;
        for (auto &d : inst.dar)
          if (d.q == q)
            fresh = false;
        if (fresh) {
          inst.dar.push_back({q, rational(9, 6)});
          break;
        }
      }
    }
    if (!all_ok(validate(inst)))
      continue;
    return inst;
  }
  throw Error("Sampler: failed to draw a valid instance");
}

} // namespace isomono
