#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace spoofgrid {

/// A caller broke an operation's precondition.
class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A tabular model failed validation (non-stochastic rows, bad dimensions).
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An internal solver invariant broke; indicates a bug, not bad input.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Bayes update received an observation with zero probability under the model.
class ImpossibleObservation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input file. `line` is 1-based; 0 when the error is not tied to a line.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace spoofgrid
