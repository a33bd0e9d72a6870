#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace horizonlab {

/// A no-hair vector (or a daughter candidate) violating the state-space
/// invariants: negative mass, negative spin magnitude, or super-extremality.
struct InvalidState : std::domain_error {
    using std::domain_error::domain_error;
};

/// Exhaustive enumeration grew past its configured budget.
struct SizeBudgetExceeded : std::runtime_error {
    std::size_t count;
    explicit SizeBudgetExceeded(std::size_t n)
        : std::runtime_error("stream enumeration exceeded budget at " + std::to_string(n)),
          count(n)
    {
    }
};

}  // namespace horizonlab
