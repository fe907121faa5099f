#pragma once

#include <stdexcept>
#include <string>

namespace qmplab {

// Operand shapes incompatible with the requested operation.
class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Scalar argument outside its admissible range (epsilon, rank, sample counts, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Input failed a structural gate: hermiticity, positivity, unit trace,
// normalization, orthonormality, effect bounds, expectation conditions.
// The message names the violated gate.
class ValidationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An iterative kernel failed to converge or produced non-finite output.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace qmplab
