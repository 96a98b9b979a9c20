#pragma once

#include <stdexcept>
#include <string>

namespace gridext {

/// Bad caller input: out-of-domain parameters, malformed data.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that should succeed did not (quadrature, eigenvalues, LP).
class NumericFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The extremal problem is trivial or ill-posed for the given size,
/// e.g. a degree that allows a polynomial vanishing on the whole grid.
class DegenerateProblem : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace gridext
