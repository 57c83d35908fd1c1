#ifndef QFLQ_ERRORS_HPP
#define QFLQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qflq {

// Mismatched dimensions, frequency vectors or malformed inputs.
struct StructuralError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A documented precondition was violated by the caller.
struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

struct IndexError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// Integrator self-check failed; a smaller step is needed.
struct AccuracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config file rejected; message carries the offending key path.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qflq

#endif
