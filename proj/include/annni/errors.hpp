#pragma once

#include <stdexcept>
#include <string>

namespace annni {

// Semantic/validation failures (bad domain input, odd N, empty sets, ...).
// Structural misuse (index out of range, size mismatch) is reported through
// std::out_of_range / std::invalid_argument; formula-domain violations
// through std::domain_error.
class validation_error : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

// Problem size exceeds what this toolkit is willing to allocate.
class resource_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Non-finite energy or gradient during an optimization loop.
class optimization_error : public std::runtime_error {
  public:
    optimization_error(const std::string& what, long step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"),
          step_(step) {}
    long step() const { return step_; }

  private:
    long step_;
};

} // namespace annni
