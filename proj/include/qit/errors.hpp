#pragma once

#include <stdexcept>
#include <string>

namespace qit {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NonHermitian : Error {
  using Error::Error;
};
struct NotPsd : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct FunctionDomainError : Error {
  using Error::Error;
};
struct BadDims : Error {
  using Error::Error;
};
struct NotCp : Error {
  using Error::Error;
};
struct NotClassical : Error {
  using Error::Error;
};
struct SolverError : Error {
  using Error::Error;
};
struct NonConvergence : SolverError {
  using SolverError::SolverError;
};
struct RangeError : Error {
  using Error::Error;
};
struct TooLarge : Error {
  using Error::Error;
};
struct EpsTooLarge : Error {
  using Error::Error;
};
struct LambdaTooLarge : Error {
  using Error::Error;
};
struct BasisNotON : Error {
  using Error::Error;
};
struct ParseError : Error {
  using Error::Error;
};

}  // namespace qit
