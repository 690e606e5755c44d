#pragma once

#include <stdexcept>
#include <string>

namespace polya {

/// Base of every error raised by the library. `code()` is the short
/// machine-readable tag the CLI puts in its error JSON.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    [[nodiscard]] const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Nonpositive lengths, cutoffs and similar out-of-domain arguments.
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error("domain_error", m) {}
};

// Malformed user data (unsorted tabulated spectra, duplicate values, ...).
struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("validation_error", m) {}
};

// A query reaches past what a stream covers. Never silently truncated.
struct RangeError : Error {
    explicit RangeError(const std::string& m) : Error("range_error", m) {}
};

struct PreconditionError : Error {
    explicit PreconditionError(const std::string& m) : Error("precondition_error", m) {}
};

// Missing or inconsistent configuration (threshold inputs, CLI specs).
struct ConfigError : Error {
    explicit ConfigError(const std::string& m) : Error("config_error", m) {}
};

// An operation was asked to run in a mode its input does not support,
// e.g. exact-integer verification of a floating-point stream.
struct ModeError : Error {
    explicit ModeError(const std::string& m) : Error("mode_error", m) {}
};

// Boundary-condition mismatch (Neumann checks on a Dirichlet stream, ...).
struct BoundaryConditionError : Error {
    explicit BoundaryConditionError(const std::string& m) : Error("bc_mismatch", m) {}
};

// A hypothesis of a lemma/inequality is not met by the arguments.
struct HypothesisError : Error {
    explicit HypothesisError(const std::string& m) : Error("hypothesis_violation", m) {}
};

// An empirical estimate has nothing to estimate from (no jumps in window).
struct UndefinedEstimateError : Error {
    explicit UndefinedEstimateError(const std::string& m) : Error("undefined_estimate", m) {}
};

// Internal consistency failure; indicates a bug, not bad input.
struct InternalError : Error {
    explicit InternalError(const std::string& m) : Error("internal_error", m) {}
};

}  // namespace polya
