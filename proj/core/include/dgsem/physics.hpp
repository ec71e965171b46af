#pragma once

// Compressible Euler / Navier-Stokes state algebra in free-stream scaled
// (nondimensional) variables.

#include <array>

#include "dgsem/types.hpp"

namespace dgsem::physics {

/// Ideal-gas and transport parameters. Viscous terms enter the residual
/// scaled by 1/Re; mu is the (constant) nondimensional dynamic viscosity.
struct GasModel {
  double gamma = 1.4;
  double mach = 1.0;
  double prandtl = 0.72;
  double reynolds = 100.0;
  double mu = 1.0;

  /// Thermal conductivity lambda = mu / ((gamma-1) Pr M^2).
  double conductivity() const { return mu / ((gamma - 1.0) * prandtl * mach * mach); }

  /// Throws std::invalid_argument unless gamma > 1 and all parameters are positive.
  void validate() const;
};

struct Primitive {
  double rho;
  Vec3 v;
  double p;
};

/// Throws PositivityError if rho <= 0 or p <= 0.
Primitive primitive_from_conservative(const State& u, const GasModel& gas);
State conservative_from_primitive(const Primitive& prim, const GasModel& gas);

/// p = (gamma-1)(rho E - rho |v|^2 / 2), no positivity check.
inline double pressure(const State& u, const GasModel& gas) {
  const double ke = 0.5 * (u[1] * u[1] + u[2] * u[2] + u[3] * u[3]) / u[0];
  return (gas.gamma - 1.0) * (u[4] - ke);
}

/// Temperature T = gamma M^2 p / rho.
inline double temperature(const Primitive& prim, const GasModel& gas) {
  return gas.gamma * gas.mach * gas.mach * prim.p / prim.rho;
}

inline double sound_speed(const Primitive& prim, const GasModel& gas) {
  return std::sqrt(gas.gamma * prim.p / prim.rho);
}

FluxTriple advective_flux(const State& u, const GasModel& gas);

/// Mathematical entropy s = -rho (ln p - gamma ln rho) / (gamma - 1).
double entropy(const State& u, const GasModel& gas);

/// Entropy variables w = ds/du. Always w[4] = -rho/p < 0.
State entropy_variables(const State& u, const GasModel& gas);
/// Inverse of entropy_variables; throws PositivityError if w[4] >= 0.
State conservative_from_entropy(const State& w, const GasModel& gas);

/// Entropy flux f^S = s v.
Vec3 entropy_flux(const State& u, const GasModel& gas);

/// Entropy-flux potential psi_i = w^T f_i - f^S_i, which equals rho v_i.
Vec3 entropy_potential(const State& u, const GasModel& gas);

/// Velocity and temperature gradients: velocity[i] = grad v_i.
struct PrimitiveGradients {
  std::array<Vec3, 3> velocity{};
  Vec3 temperature{};
};

/// Gradient of the entropy variables, one 5-vector per Cartesian direction.
using EntropyGradient = std::array<State, 3>;

/// Closed-form linear map from entropy-variable gradients to primitive gradients at one node.
PrimitiveGradients primitive_gradients_from_entropy(const State& w, const EntropyGradient& grad_w,
                                                    const GasModel& gas);

/// Same map from gradients of the conservative variables.
PrimitiveGradients primitive_gradients_from_conservative(const State& u, const EntropyGradient& grad_u,
                                                         const GasModel& gas);

/// Cartesian viscous flux triple (without the 1/Re factor).
FluxTriple viscous_flux(const State& u, const PrimitiveGradients& grad, const GasModel& gas);

/// Viscous flux directly from an entropy-variable gradient.
FluxTriple viscous_flux_from_entropy_gradient(const State& u, const EntropyGradient& grad_w, const GasModel& gas);

/// max over both states of |v.n| + c, with n a unit vector.
double max_wave_speed(const State& u_left, const State& u_right, const Vec3& unit_normal, const GasModel& gas);

}  // namespace dgsem::physics
