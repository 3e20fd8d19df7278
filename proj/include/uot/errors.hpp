#pragma once

#include <stdexcept>
#include <string>

namespace uot {

// Error taxonomy used across the library. The CLI maps these to exit codes:
// ParseError -> 2, UnsupportedError -> 3, ConvergenceError -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct DomainError : Error {
  using Error::Error;
};

// A projection or update cannot proceed for this instance (e.g. zero cost
// entry with a violated constraint, zero marginal under KL).
struct DegenerateError : Error {
  using Error::Error;
};

// Method/penalty combination has no safe construction.
struct UnsupportedError : Error {
  using Error::Error;
};

// Caller broke an API contract (screening an already screened index,
// passing an infeasible dual point where feasibility is required).
struct ContractError : Error {
  using Error::Error;
};

struct ConvergenceError : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

}  // namespace uot
