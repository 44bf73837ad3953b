#pragma once
#include <stdexcept>
#include <string>
#include <vector>

namespace gpd {

// Error taxonomy maps onto the CLI exit codes: config -> 2, solver -> 3, io -> 4.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GeometryError : ConfigError {
  explicit GeometryError(const std::string& msg) : ConfigError(msg) {}
};

struct SolverError : std::runtime_error {
  explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Non-finite displacement during explicit stepping; names the first offending point.
struct DivergenceError : SolverError {
  int point_index;
  DivergenceError(const std::string& msg, int point)
      : SolverError(msg), point_index(point) {}
};

// Relaxation hit the iteration cap; carries the residual history tail.
struct NonConvergenceError : SolverError {
  std::vector<double> residual_history;
  NonConvergenceError(const std::string& msg, std::vector<double> history)
      : SolverError(msg), residual_history(std::move(history)) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

struct QueryError : std::runtime_error {
  explicit QueryError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gpd
