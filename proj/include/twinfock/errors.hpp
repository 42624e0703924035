#pragma once

#include <stdexcept>
#include <string>

namespace twinfock {

/// Raised when a computation's support leaks past the Fock cutoff by more
/// than the caller's tail budget. Carries the offending tail mass so callers
/// can report or re-run at a larger cutoff.
class truncation_error : public std::runtime_error {
 public:
  truncation_error(const std::string& what, double tail_mass)
      : std::runtime_error(what + " (tail mass " + std::to_string(tail_mass) + ")"),
        tail_mass_(tail_mass) {}

  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

}  // namespace twinfock
