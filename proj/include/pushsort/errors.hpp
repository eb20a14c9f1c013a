#pragma once

#include <stdexcept>
#include <string>

namespace pushsort {

// Invalid geometric or structural input (bad polygon, bad direction, malformed file).
struct StructuralError : std::runtime_error {
  explicit StructuralError(const std::string& what) : std::runtime_error(what) {}
};

// Scene cannot be solved at all (capacity shortfall, overlapping input objects).
struct InfeasibleTaskError : std::runtime_error {
  explicit InfeasibleTaskError(const std::string& what) : std::runtime_error(what) {}
};

// Query outside the domain of an operation (unreachable point, empty interval).
struct QueryError : std::runtime_error {
  explicit QueryError(const std::string& what) : std::runtime_error(what) {}
};

// Simulation rejected an action or failed to converge.
struct SimulationError : std::runtime_error {
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// File I/O failure.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace pushsort
