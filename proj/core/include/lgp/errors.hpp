// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <stdexcept>
#include <string>

namespace lgp {

// Invalid argument or out-of-range input.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// Linear algebra or floating point failure.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mixture sum truncated before enough weight mass was covered.
struct TruncationError : NumericalError {
  using NumericalError::NumericalError;
};

// Truncation interval carries less than 1e-300 probability mass.
struct DegenerateRegionError : NumericalError {
  using NumericalError::NumericalError;
};

// Raised by a sampler step; carries the sweep index at which it failed.
struct SamplerError : std::runtime_error {
  SamplerError(long sweep, const std::string& what)
      : std::runtime_error("sweep " + std::to_string(sweep) + ": " + what),
        sweep(sweep) {}
  long sweep;
};

}  // namespace lgp
