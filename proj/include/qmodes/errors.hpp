#pragma once

#include <stdexcept>
#include <string>

namespace qmodes {

// Base class for every failure raised by the library. The CLI maps
// ConfigError to exit code 2 and everything else to exit code 3.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Query outside the validity domain of a dispersion set, table or surrogate.
struct RangeError : Error {
    using Error::Error;
};

// Guided mode below cutoff in the metallic waveguide model.
struct CutoffError : Error {
    using Error::Error;
};

// Mathematically ill-posed request (negative gate frequency, no photons, ...).
struct DomainError : Error {
    using Error::Error;
};

// Filter window that removes the whole amplitude.
struct EmptyFilterError : DomainError {
    using DomainError::DomainError;
};

// SVD failure, non-finite values, failed convergence, Fock truncation leakage.
struct NumericalError : Error {
    using Error::Error;
};

// API misuse, e.g. selecting on a population without cached fitness.
struct ContractError : Error {
    using Error::Error;
};

// Malformed or schema-violating configuration / input files.
struct ConfigError : Error {
    using Error::Error;
};

// Gene bounds that rejection sampling cannot satisfy.
struct InfeasibleBoundsError : ConfigError {
    using ConfigError::ConfigError;
};

}  // namespace qmodes
