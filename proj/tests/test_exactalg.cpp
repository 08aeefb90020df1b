#include <doctest.h>

#include <random>

#include "isomono/jet.hpp"
#include "isomono/linalg.hpp"
#include "isomono/poly.hpp"
#include "isomono/ratfunc.hpp"
#include "isomono/series.hpp"

using namespace isomono;

namespace {

Rational rnd_rat(std::mt19937_64 &g) {
  std::uniform_int_distribution<long> num(-20, 20), den(1, 12);
  return Rational(num(g), den(g));
}

PolyQ rnd_poly(std::mt19937_64 &g, int max_deg) {
  std::uniform_int_distribution<int> d(0, max_deg);
  int deg = d(g);
  std::vector<Rational> c;
  for (int k = 0; k <= deg; ++k)
    c.push_back(rnd_rat(g));
  return PolyQ(std::move(c));
}

// Residue via the derivative formula on a known factored denominator; kept
// independent of the Laurent-expansion path.
Rational residue_oracle(const PolyQ &num, const std::vector<std::pair<Rational, int>> &factors,
                        std::size_t which) {
  auto [r, m] = factors[which];
  PolyQ rest = PolyQ::constant(Rational(1));
  for (std::size_t i = 0; i < factors.size(); ++i)
    if (i != which)
      rest = rest * pow_poly(PolyQ::linear_root(factors[i].first), factors[i].second);
  // g = num/rest, res = g^{(m-1)}(r) / (m-1)!
  RatFunc gfun{num, rest};
  Rational fact(1);
  for (int k = 1; k < m; ++k) {
    gfun = gfun.derivative();
    fact *= Rational(k);
  }
  return gfun.eval(r) / fact;
}

} // namespace

TEST_CASE("rational parsing and canonical form") {
  CHECK(Rational::parse("6/4") == Rational(3, 2));
  CHECK(Rational::parse("-6/4").str() == "-3/2");
  CHECK(Rational::parse("7").str() == "7");
  CHECK(Rational(4, -6) == Rational(-2, 3));
  CHECK_THROWS_AS(Rational::parse("1/0"), ParseError);
  CHECK_THROWS_AS(Rational::parse("abc"), ParseError);
}

TEST_CASE("residue_at: spec examples") {
  RatFunc inv_x{PolyQ::constant(Rational(1)), PolyQ::monomial(1)};
  CHECK(residue_at(inv_x, Rational(0)) == Rational(1));

  // 1/(x^2 (x-1)) at 0 -> -1
  RatFunc f{PolyQ::constant(Rational(1)),
            PolyQ::monomial(2) * PolyQ::linear_root(Rational(1))};
  CHECK(residue_at(f, Rational(0)) == Rational(-1));

  RatFunc poly{PolyQ{Rational(-3), Rational(1)}};
  CHECK(residue_at(poly, Rational(0)) == Rational(0));
}

TEST_CASE("laurent_expand: spec examples") {
  // 1/(x-1) at 0 to order 2: -1 - x - x^2
  RatFunc f{PolyQ::constant(Rational(1)), PolyQ::linear_root(Rational(1))};
  SeriesQ s = laurent_expand(f, Rational(0), 2);
  CHECK(s.coeff(0) == Rational(-1));
  CHECK(s.coeff(1) == Rational(-1));
  CHECK(s.coeff(2) == Rational(-1));

  // x^2 in the w chart: w^{-2}
  RatFunc x2{PolyQ::monomial(2)};
  SeriesQ t = laurent_expand_at_infinity(x2, 0);
  CHECK(t.order() == -2);
  CHECK(t.coeff(-2) == Rational(1));
  CHECK(t.coeff(0) == Rational(0));

  RatFunc invx{PolyQ::constant(Rational(1)), PolyQ::monomial(1)};
  SeriesQ u = laurent_expand(invx, Rational(0), 1);
  CHECK(u.order() == -1);
  CHECK(u.coeff(-1) == Rational(1));
  CHECK(u.coeff(1) == Rational(0));
}

TEST_CASE("residue agrees with partial-fraction oracle on random inputs") {
  std::mt19937_64 g(12345);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<std::pair<Rational, int>> factors;
    std::uniform_int_distribution<int> nf(1, 3), mult(1, 3);
    int k = nf(g);
    for (int i = 0; i < k; ++i) {
      Rational r = rnd_rat(g);
      bool fresh = true;
      for (auto &fc : factors)
        if (fc.first == r)
          fresh = false;
      if (fresh)
        factors.push_back({r, mult(g)});
    }
    PolyQ den = PolyQ::constant(Rational(1));
    for (auto &[r, m] : factors)
      den = den * pow_poly(PolyQ::linear_root(r), m);
    PolyQ num = rnd_poly(g, den.degree() - 1);
    RatFunc f{num, den};
    for (std::size_t i = 0; i < factors.size(); ++i)
      CHECK(residue_at(f, factors[i].first) == residue_oracle(num, factors, i));
  }
}

TEST_CASE("residue theorem: finite residues plus infinity sum to zero") {
  std::mt19937_64 g(777);
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<Rational> roots;
    std::uniform_int_distribution<int> nf(1, 4);
    int k = nf(g);
    for (int i = 0; i < k; ++i) {
      Rational r = rnd_rat(g);
      bool fresh = true;
      for (auto &x : roots)
        if (x == r)
          fresh = false;
      if (fresh)
        roots.push_back(r);
    }
    PolyQ den = PolyQ::constant(Rational(1));
    for (auto &r : roots)
      den = den * pow_poly(PolyQ::linear_root(r), 2);
    PolyQ num = rnd_poly(g, den.degree() + 1);
    RatFunc f{num, den};
    Rational total = residue_at_infinity(f);
    for (auto &r : roots)
      total += residue_at(f, r);
    CHECK(total == Rational(0));
  }
}

TEST_CASE("solve_linear: spec examples") {
  using M = std::vector<std::vector<Rational>>;
  {
    M a{{Rational(1), Rational(0)}, {Rational(0), Rational(1)}};
    auto s = solve_linear(a, {Rational(1), Rational(2)});
    REQUIRE(s.status == SolveStatus::kUnique);
    CHECK(s.x[0] == Rational(1));
    CHECK(s.x[1] == Rational(2));
  }
  {
    M a{{Rational(1), Rational(1)}, {Rational(2), Rational(2)}};
    auto s = solve_linear(a, {Rational(1), Rational(2)});
    REQUIRE(s.status == SolveStatus::kUnderdetermined);
    CHECK(s.nullity == 1);
    CHECK(s.x[0] + s.x[1] == Rational(1));
  }
  {
    M a{{Rational(1), Rational(1)}, {Rational(2), Rational(2)}};
    auto s = solve_linear(a, {Rational(1), Rational(3)});
    CHECK(s.status == SolveStatus::kInconsistent);
    CHECK(!s.residual.is_zero());
  }
}

TEST_CASE("solve_linear recovers planted solutions up to nullspace") {
  std::mt19937_64 g(2024);
  std::uniform_int_distribution<int> dim(1, 6);
  for (int trial = 0; trial < 30; ++trial) {
    int rows = dim(g), cols = dim(g);
    std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(cols));
    std::vector<Rational> v(cols);
    for (auto &row : a)
      for (auto &x : row)
        x = rnd_rat(g);
    for (auto &x : v)
      x = rnd_rat(g);
    std::vector<Rational> b(rows, Rational(0));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j)
        b[i] += a[i][j] * v[j];
    auto s = solve_linear(a, b);
    REQUIRE(s.ok());
    // A x == b exactly
    for (int i = 0; i < rows; ++i) {
      Rational acc(0);
      for (int j = 0; j < cols; ++j)
        acc += a[i][j] * s.x[j];
      CHECK(acc == b[i]);
    }
  }
}

TEST_CASE("jets: spec examples") {
  // x - t in direction t, at x=5, t=2
  JetQ t{Rational(2), Rational(1)};
  JetQ x{Rational(5)};
  JetQ r = x - t;
  CHECK(r.val == Rational(3));
  CHECK(r.eps == Rational(-1));

  // q^2 in direction q at q=3
  JetQ q{Rational(3), Rational(1)};
  JetQ s = q * q;
  CHECK(s.val == Rational(9));
  CHECK(s.eps == Rational(6));

  // p/P(q) in direction p: derivative slot is 1/P(q)
  PolyJ pq = lift_poly(PolyQ::linear_root(Rational(7)) * PolyQ::linear_root(Rational(-1)));
  JetQ p{Rational(1), Rational(1)};
  JetQ val = p / pq.eval(JetQ(Rational(2)));
  CHECK(val.eps == Rational(1) / (Rational(2 - 7) * Rational(2 + 1)));
}

TEST_CASE("jet chain rule on random polynomial compositions") {
  std::mt19937_64 g(99);
  for (int trial = 0; trial < 25; ++trial) {
    PolyQ f = rnd_poly(g, 4), h = rnd_poly(g, 3);
    Rational x0 = rnd_rat(g);
    JetQ x{x0, Rational(1)};
    JetQ inner = lift_poly(h).eval(x);
    JetQ outer = lift_poly(f).eval(inner);
    // exact derivative: f'(h(x0)) h'(x0)
    Rational expect = f.derivative().eval(h.eval(x0)) * h.derivative().eval(x0);
    CHECK(outer.eps == expect);
    CHECK(outer.val == f.eval(h.eval(x0)));
  }
}

TEST_CASE("series truncation is loud, not silent") {
  RatFunc f{PolyQ::constant(Rational(1)), PolyQ::linear_root(Rational(1))};
  SeriesQ s = laurent_expand(f, Rational(0), 2);
  CHECK_THROWS_AS((void)s.coeff(3), TruncationError);
  SeriesQ prod = s * s; // truncation order shrinks with multiplication
  CHECK(prod.hi == 2);
  CHECK_THROWS_AS((void)prod.coeff(3), TruncationError);
}

TEST_CASE("matrix series inversion") {
  using M = Mat2<Rational>;
  std::vector<M> coeffs = {M::identity(), M(Rational(1), Rational(2), Rational(3), Rational(4)),
                           M(Rational(0), Rational(1), Rational(1), Rational(0))};
  MatSeriesQ a(0, 2, coeffs);
  MatSeriesQ b = inverse_series(a);
  MatSeriesQ prod = a * b;
  CHECK(prod.coeff(0) == M::identity());
  CHECK(is_zero(prod.coeff(1)));
  CHECK(is_zero(prod.coeff(2)));
}

TEST_CASE("polynomial gcd and interpolation") {
  PolyQ a = PolyQ::linear_root(Rational(1)) * PolyQ::linear_root(Rational(2));
  PolyQ b = PolyQ::linear_root(Rational(2)) * PolyQ::linear_root(Rational(5));
  CHECK(gcd(a, b) == PolyQ::linear_root(Rational(2)));

  std::vector<Rational> xs{Rational(0), Rational(1), Rational(3)};
  std::vector<Rational> ys{Rational(2), Rational(0), Rational(8)};
  PolyQ p = lagrange_interpolate(xs, ys);
  CHECK(p.degree() <= 2);
  for (std::size_t i = 0; i < xs.size(); ++i)
    CHECK(p.eval(xs[i]) == ys[i]);
}
