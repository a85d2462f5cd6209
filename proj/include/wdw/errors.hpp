#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wdw {

class Error : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid or inconsistent run/problem configuration.
class ConfigError : public Error {
    using Error::Error;
};

// A computation produced a non-finite value (overflow, 0/0, ...).
class NumericRangeError : public Error {
    using Error::Error;
};

// Argument outside the validity region of a formula (turning points,
// negative Bessel arguments, ...).
class DomainError : public Error {
    using Error::Error;
};

// Family-parameter violations: lambda outside the admissible set or
// I + lambda crossing zero on the grid.
class ParameterDomainError : public Error {
    using Error::Error;
};

// Pole of a special function (1F1 with non-positive integer alpha).
class PoleError : public Error {
    using Error::Error;
};

// The two printed branches of a solution basis coincide.
class DegenerateBasisError : public Error {
    using Error::Error;
};

// Indicial roots closer than tolerance; the log-solution branch is not
// implemented.
class DegenerateIndicialError : public Error {
    using Error::Error;
};

// Bessel order would be pure imaginary; no closed form is provided and the
// caller should fall back to numerical integration.
class ImaginaryOrderError : public Error {
    using Error::Error;
};

// Two algebraically equivalent computation routes disagreed beyond
// tolerance; indicates a derivative-stencil or construction problem.
class InternalConsistencyError : public Error {
    using Error::Error;
};

class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, double last_good_a)
        : Error(what), last_good_a_(last_good_a) {}

    double last_good_a() const noexcept { return last_good_a_; }

private:
    double last_good_a_;
};

// The seed changes sign inside the requested interval. Carries the pairs of
// grid indices bracketing each detected sign change.
class NodeInDomainError : public Error {
public:
    NodeInDomainError(const std::string& what,
                      std::vector<std::pair<std::size_t, std::size_t>> brackets)
        : Error(what), brackets_(std::move(brackets)) {}

    const std::vector<std::pair<std::size_t, std::size_t>>& brackets() const noexcept {
        return brackets_;
    }

private:
    std::vector<std::pair<std::size_t, std::size_t>> brackets_;
};

}  // namespace wdw
