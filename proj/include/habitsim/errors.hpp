#pragma once

#include <stdexcept>
#include <string>

namespace habitsim {

// Configuration file is malformed or a parameter violates its stated domain.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A model restriction failed; the message names the threshold that was violated.
struct RestrictionError : std::runtime_error {
    explicit RestrictionError(const std::string& what) : std::runtime_error(what) {}
};

// A scenario cannot be run because its preconditions do not hold.
struct ScenarioInfeasible : std::runtime_error {
    explicit ScenarioInfeasible(const std::string& what) : std::runtime_error(what) {}
};

// Root finding: the residual does not change sign on the supplied interval.
struct NoBracketError : std::runtime_error {
    explicit NoBracketError(const std::string& what) : std::runtime_error(what) {}
};

// A transitory subsidy cannot restore viability (the long-run price stays below the floor).
struct NeverViableError : std::runtime_error {
    explicit NeverViableError(const std::string& what) : std::runtime_error(what) {}
};

// Quadratic interpolation grid is degenerate.
struct SingularFitError : std::runtime_error {
    explicit SingularFitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace habitsim
