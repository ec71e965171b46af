#pragma once

// Mesh (h) and degree (p) refinement studies against exact solutions.

#include <iosfwd>
#include <span>
#include <vector>

#include "dgsem/driver/config.hpp"
#include "dgsem/driver/run.hpp"

namespace dgsem::driver {

struct ConvergenceRow {
  int elements = 0;  // per direction
  int degree = 0;
  long steps = 0;
  ErrorNorms errors;
};

struct ConvergenceReport {
  enum class Mode { mesh, degree } mode = Mode::mesh;
  std::vector<ConvergenceRow> rows;  // sorted by resolution
  /// Observed L2 orders log(e_k / e_{k+1}) / log(h_k / h_{k+1}) between consecutive rows
  /// (mesh mode only).
  std::vector<State> l2_orders;

  /// True if the density L2 error decreases strictly from row to row.
  bool monotone() const;
};

/// Runs the configured case for each number of elements per direction.
/// Throws ConfigError if the case has no exact solution or the mesh is a file.
ConvergenceReport convergence_study(const RunConfig& base, std::span<const int> elements_per_direction);

/// Runs the configured case on the configured mesh for each polynomial degree.
ConvergenceReport degree_study(const RunConfig& base, std::span<const int> degrees);

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report);

}  // namespace dgsem::driver
