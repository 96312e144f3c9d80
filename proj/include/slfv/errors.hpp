#pragma once

#include <stdexcept>
#include <string>

namespace slfv {

/// Invalid parameters (non-positive axes, bad tilt, t1 < t0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A simulation exceeded its jump budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal invariant or caller contract was violated.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed experiment configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace slfv
