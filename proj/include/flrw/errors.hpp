#pragma once

#include <stdexcept>
#include <string>

namespace flrw {

// Argument outside the mathematical domain of a formula (d <= 0, q < 2, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Parameters outside the hypotheses under which a rate or root is stated.
class RegimeError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Evaluation at a singular point (Y at x = 0, psi at xi = 0, ...).
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Inconsistent run or grid configuration, detected before any compute.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Decay fit could not be performed (too few samples, non-positive norms).
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace flrw
