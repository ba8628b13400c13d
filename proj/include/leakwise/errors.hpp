#pragma once

#include <stdexcept>
#include <string>

namespace leakwise {

/// Invalid parameter or argument outside an operation's domain.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Covariance matrix too close to singular for a finite entropy.
class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A scenario whose answer is not a finite number (e.g. continuous inputs with no spectators).
class DegenerateScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Relative loss requested where the prior entropy is not positive.
class IllDefinedRelativeLossError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Tabulation or enumeration would exceed a fixed resource bound.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Monotone search ran past its upper bound without meeting the budget.
class UnboundedSearchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace leakwise
