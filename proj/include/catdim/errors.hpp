#pragma once

#include <stdexcept>
#include <string>

namespace catdim {

/// Malformed or inconsistent user input (bad shapes, unknown labels, wrong ring).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An internally produced proof object failed its own exact recheck.
/// Always a bug in the library, never a user error.
class SoundnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace catdim
