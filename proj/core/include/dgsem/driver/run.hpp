#pragma once

// Time loop with conservation / entropy monitors, monitor CSV and state dumps.

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgsem/driver/config.hpp"
#include "dgsem/solver.hpp"

namespace dgsem::driver {

/// Errors against an exact solution, per conserved variable.
struct ErrorNorms {
  State l2{};
  State linf{};
};

/// L2 and Linf errors over the mesh, evaluated at the LGL points of degree 2N+8
/// with the solution and mapping interpolated from the nodal values.
ErrorNorms error_norms(const solver::SolutionField& u, const solver::Discretization& disc,
                       const solver::SpaceTimeFunction& exact, double t);

struct MonitorRow {
  long step = 0;
  double time = 0.0;
  double dt = 0.0;
  State totals{};
  double entropy = 0.0;
  double entropy_rate = 0.0;
  double entropy_rate_scale = 1.0;  // max(1, sum w J |W^T dU/dt|)
};

struct RunReport {
  std::string case_name;
  long steps = 0;
  double final_time = 0.0;
  std::vector<MonitorRow> monitors;
  double max_total_drift = 0.0;          // max over components and monitored states
  double max_entropy_rate = 0.0;         // most positive sampled dS/dt
  double max_relative_entropy_rate = 0.0;  // max |dS/dt| / scale
  double initial_max_residual = 0.0;     // max |dU/dt| at t = 0
  double max_deviation = 0.0;            // max |U - U(t=0)| (free-stream case)
  std::optional<ErrorNorms> errors;      // against the exact solution at the final time
  std::vector<std::string> check_failures;

  bool ok() const { return check_failures.empty(); }
};

/// Runs the configured case. Throws PositivityError on a positivity abort and
/// ConfigError / TopologyError / GeometryError on invalid input.
RunReport run_case(const RunConfig& config);

void write_monitor_csv(std::ostream& out, const std::vector<MonitorRow>& rows);

/// Self-describing text dump: header (degree, element count, node order, time), then one
/// line per node: element i j k x y z and the five conserved values.
void write_state(std::ostream& out, const solver::SolutionField& u, const solver::Discretization& disc);

/// Human-readable summary of a run.
void print_report(std::ostream& out, const RunReport& report);

}  // namespace dgsem::driver
