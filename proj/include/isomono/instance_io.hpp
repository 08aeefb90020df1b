#ifndef ISOMONO_INSTANCE_IO_HPP
#define ISOMONO_INSTANCE_IO_HPP

#include <string>

#include <json.hpp>

#include "isomono/connection.hpp"
#include "isomono/singularity.hpp"

namespace isomono {

struct InstanceOptions {
  int truncation_extra = 3; // local reduction depth beyond 2n_i - 1
  double margin = 1e-6;     // float-state collision margin
  double rtol = 1e-9;       // monodromy integrator tolerance
};

struct InstanceFile {
  int schema_version = 1;
  Instance inst;
  InstanceOptions options;
};

InstanceFile parse_instance(const nlohmann::json &j);
InstanceFile load_instance(const std::string &path);
nlohmann::json instance_to_json(const Instance &inst);

// Serialization helpers shared by the CLI reports.
nlohmann::json poly_to_json(const PolyQ &p);          // ascending coefficients
nlohmann::json ratfunc_to_json(const RatFunc &f);     // {"num": [...], "den": [...]}
nlohmann::json conn_to_json(const ConnQ &conn);
nlohmann::json darboux_to_json(const std::vector<DarbouxPair<Rational>> &dar);

} // namespace isomono

#endif
