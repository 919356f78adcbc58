#pragma once

#include <stdexcept>
#include <string>

namespace scenav {

// Malformed input document: bad syntax, unknown field, wrong type/shape.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Structurally valid input that violates an invariant (degenerate segment,
// window outside bounds, missing referenced file, ...).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Rejection sampler hit its draw cap without finding a free point.
struct SamplingExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite loss or gradient during an update.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace scenav
