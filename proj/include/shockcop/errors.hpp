#pragma once

#include <stdexcept>
#include <string>

namespace shockcop {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed descriptor, CSV file, or command-line value.
class ParseError : public Error {
public:
    using Error::Error;
};

// Parameter outside its admissible range, or an operation applied to an
// object of the wrong kind (e.g. psi_star of an RMM generator).
class DomainError : public Error {
public:
    using Error::Error;
};

// Combination of coupling and combiner that has no associated copula family.
class IllegalConfiguration : public Error {
public:
    using Error::Error;
};

// A checked mathematical precondition, hypothesis, or postcondition failed.
// `condition` names the failed condition; `witness` is a point where the
// failure is reproducible by direct evaluation.
class ContractViolation : public Error {
public:
    ContractViolation(std::string condition, double witness, const std::string& detail)
        : Error(condition + " violated at " + std::to_string(witness) + ": " + detail),
          condition_(std::move(condition)),
          witness_(witness) {}

    const std::string& condition() const noexcept { return condition_; }
    double witness() const noexcept { return witness_; }

private:
    std::string condition_;
    double witness_;
};

}  // namespace shockcop
