#ifndef ISOMONO_ROOTS_HPP
#define ISOMONO_ROOTS_HPP

#include <complex>
#include <optional>
#include <vector>

#include "isomono/poly.hpp"
#include "isomono/rational.hpp"

namespace isomono {

// All complex roots of a nonconstant polynomial, Durand-Kerner iteration.
std::vector<std::complex<double>> complex_roots(const PolyQ &p);

// Nearest rational with denominator <= max_den (continued fractions).
Rational rationalize(double x, long max_den = 1000000);

// Exact rational roots of a squarefree polynomial, found numerically and
// certified by exact evaluation; nullopt if any root fails to rationalize.
std::optional<std::vector<Rational>> rational_roots_certified(const PolyQ &p);

} // namespace isomono

#endif
