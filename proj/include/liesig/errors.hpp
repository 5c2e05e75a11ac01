#ifndef LIESIG_ERRORS_HPP
#define LIESIG_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace liesig {

// Bad user input: group strings, depths, formats. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Operand shapes disagree (dimension/depth mismatch, index out of range).
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A tensor would exceed the coefficient budget.
struct BudgetExceeded : std::length_error {
  using std::length_error::length_error;
};

// Anything that went wrong numerically. Maps to CLI exit code 3.
struct NumericalFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// log requested at (or within tolerance of) the cut locus of the identity.
struct CutLocusError : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

// A path chord has no unique shortest geodesic; sample the path more finely.
struct RefineMeshError : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

struct AmbiguousDimension : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

struct FitFailure : NumericalFailure {
  using NumericalFailure::NumericalFailure;
};

}  // namespace liesig

#endif
