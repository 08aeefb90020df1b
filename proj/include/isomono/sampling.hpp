#ifndef ISOMONO_SAMPLING_HPP
#define ISOMONO_SAMPLING_HPP

#include <cstdint>
#include <random>

#include "isomono/singularity.hpp"

namespace isomono {

// Seeded sampling of valid instances. Rationals are small-height (numerator
// and denominator bounded by 50) to keep exact arithmetic fast.
struct Sampler {
  explicit Sampler(std::uint64_t seed) : gen(seed) {}

  std::mt19937_64 gen;

  Rational rational(long num_bound = 50, long den_bound = 50);
  Rational nonzero_rational(long num_bound = 50, long den_bound = 50);

  struct Options {
    int n = 5;
    bool need_regular = false;
    bool need_unramified = false;
    bool need_ramified = false;
    bool allow_ramified = true;
  };

  Instance instance(const Options &opt);
};

} // namespace isomono

#endif
