#pragma once

#include <stdexcept>
#include <string>

namespace srm {

// Argument outside an operation's domain (beta outside (0,1), n = 0, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Operation not defined for the given family (e.g. density of a point mass).
class UnsupportedOperation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// Zero density at a quantile where its reciprocal is required.
class SingularityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Spectrum does not declare a derivative bound a bound formula needs.
class MissingConstantError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed distribution/spectrum/config strings or files.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Quadrature that failed to reach its tolerance. Carries the error estimate
// that was actually achieved.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double achieved_error)
        : std::runtime_error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

}  // namespace srm
