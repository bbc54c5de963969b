#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace stagflow {

using Vec2 = std::array<double, 2>;

/// Raised when a configuration or construction precondition is violated.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a discrete consistency hypothesis (e.g. a mass balance) fails.
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when a state leaves the admissible set (rho <= 0, e < 0).
class PositivityError : public std::runtime_error {
public:
    explicit PositivityError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised when an iterative linear solve does not reach its tolerance.
class SolverError : public std::runtime_error {
public:
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

inline double sqr(double x) { return x * x; }

} // namespace stagflow
