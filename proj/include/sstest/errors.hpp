#pragma once

#include <stdexcept>
#include <string>

namespace sstest {

// Input that violates a precondition (non-finite values, bad dimensions, NaN p-values).
struct invalid_input_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scale vector with a nonpositive entry.
struct invalid_scale_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A probability level outside (0,1).
struct invalid_level_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A scenario or scatter specification that fails validation.
struct invalid_spec_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An observation coincides with the (estimated) center, so a radius is zero.
struct degenerate_sample_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A column with zero sample variance where studentization is required.
struct degenerate_column_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Moment-based initialization is impossible (e.g. a constant column).
struct initialization_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct sample_too_small_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct dimension_too_small_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// An experiment plan that fails validation before any computation runs.
struct plan_validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct insufficient_replications_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed input file (CSV data or JSON plan); the message carries the location.
struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sstest
