#pragma once

#include <stdexcept>
#include <string>

namespace pkf {

// A sampler exhausted its rejection/retry budget. Retrying with another seed
// may succeed; callers that aggregate trials should record this, not crash.
class RetryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// An enumeration or search exceeded its node budget or instance-size cap.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A postcondition the code promises to uphold failed; indicates a bug or a
// malformed object handed across a trusted boundary.
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace pkf
