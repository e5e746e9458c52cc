#pragma once

#include <stdexcept>
#include <string>

namespace wavelab {

/// Invalid configuration or precondition (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Requested point/slice leaves the valid domain (box, slab, budget).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver failed to converge.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wavelab
