#ifndef ISOMONO_ERRORS_HPP
#define ISOMONO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace isomono {

struct Error : std::runtime_error {
  explicit Error(const std::string &what) : std::runtime_error(what) {}
};

struct Unexpandable : Error {
  using Error::Error;
};
struct TruncationError : Error {
  using Error::Error;
};
struct UnknownDirection : Error {
  using Error::Error;
};
struct KindMismatch : Error {
  using Error::Error;
};
struct NotApparent : Error {
  using Error::Error;
};
struct NonGenericApparentDivisor : Error {
  using Error::Error;
};
struct InvariantSubbundle : Error {
  using Error::Error;
};
struct DegenerateConfiguration : Error {
  using Error::Error;
};
struct InternalInconsistency : Error {
  using Error::Error;
};
struct NotADeformationDirection : Error {
  using Error::Error;
};
struct BadIndex : Error {
  using Error::Error;
};
struct PoleCollision : Error {
  using Error::Error;
};
struct FlowSingular : Error {
  explicit FlowSingular(const std::string &what, long step_index)
      : Error(what), step(step_index) {}
  long step;
};
struct IntegrationFailure : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

} // namespace isomono

#endif
