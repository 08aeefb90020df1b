#ifndef ISOMONO_REPRODUCE_HPP
#define ISOMONO_REPRODUCE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "isomono/singularity.hpp"

namespace isomono {

struct CheckLine {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct ReproResult {
  std::vector<CheckLine> checks;
  bool ok() const {
    for (auto &c : checks)
      if (!c.ok)
        return false;
    return true;
  }
};

// Three unramified order-2 points at 0, 1, infinity: the theta tails against
// their closed forms, at seeded rational samples.
ReproResult reproduce_triple_unramified(std::uint64_t seed, int samples = 10);

// The degree-five ramified point at infinity (Kimura's H(9/2) system): the
// accessory parameters from the apparent conditions, the reduced-form data,
// the two Hamiltonians, and the commutation identity of the closing remark.
ReproResult reproduce_kimura(std::uint64_t seed, int samples = 10);

// A valid sample instance of the triple-unramified family (shipped golden
// shape); also used by the CLI to seed instance files.
Instance sample_triple_unramified(std::uint64_t seed);
Instance sample_kimura(std::uint64_t seed);

} // namespace isomono

#endif
