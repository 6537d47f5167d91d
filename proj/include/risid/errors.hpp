#pragma once

#include <stdexcept>
#include <string>

namespace risid {

// Malformed input document (syntax level).
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Well-formed input that violates a domain invariant. The message names the
// offending field.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scheme incompatible with the scenario (e.g. waveform mismatch).
class ConfigurationError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

// Internal consistency check failed; indicates a bug rather than bad input.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace risid
