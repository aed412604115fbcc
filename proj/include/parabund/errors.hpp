// include/parabund/errors.hpp - exception types shared by every module.

#pragma once

#include <stdexcept>
#include <string>

namespace parabund {

/// Malformed input: bad rational literal, schema violation, unknown descriptor key.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

/// A calculus precondition failed (rank zero, length mismatch, m <= 0, ...).
class CalculusError : public std::domain_error {
public:
    explicit CalculusError(const std::string& what) : std::domain_error(what) {}
};

/// A numeric evaluation left its domain or hit a singular matrix.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

/// The operation is defined but deliberately refused for this input
/// (e.g. predicting the filtered bundle of a perturbed metric).
class RefusedError : public std::runtime_error {
public:
    explicit RefusedError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace parabund
