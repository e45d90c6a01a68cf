#pragma once

#include <stdexcept>
#include <string>

namespace polya {

// Malformed user input: bad JSON, missing fields, values outside the model.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A distribution collapsed to something the model forbids, e.g. an
// inter-arrival law with all of its mass at zero.
struct DegenerateError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration was asked for a state space we refuse to walk.
struct TooLargeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of the function.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An integral did not reach its accuracy target.
struct QuadratureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Two supposedly equal internal evaluation paths disagreed beyond tolerance.
struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

// A moment needed by a construction was not supplied.
struct MissingMomentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A set of weights that must form a probability distribution failed to sum
// to 1 within tolerance.
struct NormalizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weighted resampling found the usable weight mass concentrated on a single
// point; the batch is too small or too heavy-tailed for the requested bias.
struct DegenerateWeights : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Operation on an empty sample batch.
struct EmptyBatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Exact integer computation would overflow 64 bits.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

}  // namespace polya
