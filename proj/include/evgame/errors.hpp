#pragma once

#include <stdexcept>
#include <string>

namespace evgame {

// Malformed input: wrong shape, missing key, bad type. `field` is a path such
// as "alpha" or "nominal_profiles[2]".
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A mathematical hypothesis does not hold (b <= 0, non-rank-1 nominal
// profiles for Case A, ...).
class PreconditionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Factorization failure. Carries the smallest eigenvalue estimate of the
// offending matrix.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double min_eigenvalue)
        : std::runtime_error(what), min_eigenvalue_(min_eigenvalue) {}
    double min_eigenvalue() const noexcept { return min_eigenvalue_; }

private:
    double min_eigenvalue_;
};

}  // namespace evgame
