#pragma once

#include <stdexcept>
#include <string>

namespace spectratile {

// Malformed or out-of-contract input: bad dimensions, non-prime modulus,
// duplicate points, mismatched certificates.
class InputError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// An enumeration would exceed the configured cell budget.
class GuardError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A constructed certificate failed its own verifier. Always an internal
// fault; never swallowed.
class VerificationError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

} // namespace spectratile
