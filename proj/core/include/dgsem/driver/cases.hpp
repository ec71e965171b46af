#pragma once

// Registered test cases: initial data, exact solutions and manufactured sources.

#include <span>
#include <string>
#include <string_view>

#include "dgsem/driver/config.hpp"
#include "dgsem/solver.hpp"

namespace dgsem::driver {

struct CaseSetup {
  std::string name;
  solver::SpaceTimeFunction initial;
  solver::SpaceTimeFunction exact;   // empty if no exact solution is known
  solver::SpaceTimeFunction source;  // empty for homogeneous problems
};

/// Names accepted by make_case.
std::span<const std::string_view> case_names();

/// Throws ConfigError naming the valid cases.
CaseSetup make_case(const RunConfig& config);

/// rho = 1 + A sin(2 pi (x + y + z - 3 t)), v = (1, 1, 1), p = 1.
State density_wave(const Vec3& x, double t, double amplitude, const physics::GasModel& gas);

/// Manufactured solution (rho, rho v, rho E) = (g, g, g, g, g^2) with g = 4 + A sin(2 pi (x + y + z - t)),
/// and the source making it exact for the Navier-Stokes equations (or Euler when viscous = false).
State manufactured_state(const Vec3& x, double t, double amplitude);
State manufactured_source(const Vec3& x, double t, double amplitude, const physics::GasModel& gas, bool viscous);

/// Uniform state used by the free-stream case.
State freestream_state(const physics::GasModel& gas);

}  // namespace dgsem::driver
