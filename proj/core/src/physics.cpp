#include "dgsem/physics.hpp"

#include <cmath>
#include <sstream>

namespace dgsem::physics {

namespace {

[[noreturn]] void positivity_failure(const char* what, double rho, double p) {
  std::ostringstream msg;
  msg.precision(17);
  msg << what << ": rho = " << rho << ", p = " << p;
  throw PositivityError(msg.str());
}

}  // namespace

void GasModel::validate() const {
  if (!(gamma > 1.0)) throw std::invalid_argument("gas: gamma must exceed 1");
  if (!(mach > 0.0) || !(prandtl > 0.0) || !(reynolds > 0.0) || !(mu > 0.0)) {
    throw std::invalid_argument("gas: mach, prandtl, reynolds and mu must be positive");
  }
}

Primitive primitive_from_conservative(const State& u, const GasModel& gas) {
  const double rho = u[0];
  if (!(rho > 0.0)) positivity_failure("non-positive density", rho, 0.0);
  const Vec3 v{u[1] / rho, u[2] / rho, u[3] / rho};
  const double p = (gas.gamma - 1.0) * (u[4] - 0.5 * rho * dot(v, v));
  if (!(p > 0.0)) positivity_failure("non-positive pressure", rho, p);
  return {rho, v, p};
}

State conservative_from_primitive(const Primitive& prim, const GasModel& gas) {
  if (!(prim.rho > 0.0) || !(prim.p > 0.0)) positivity_failure("invalid primitive state", prim.rho, prim.p);
  const double rho_e = prim.p / (gas.gamma - 1.0) + 0.5 * prim.rho * dot(prim.v, prim.v);
  return {prim.rho, prim.rho * prim.v.x, prim.rho * prim.v.y, prim.rho * prim.v.z, rho_e};
}

FluxTriple advective_flux(const State& u, const GasModel& gas) {
  const auto prim = primitive_from_conservative(u, gas);
  const double rho_h = u[4] + prim.p;
  FluxTriple f{};
  for (std::size_t d = 0; d < 3; ++d) {
    const double vd = prim.v[d];
    f[d][0] = u[0] * vd;
    f[d][1] = u[1] * vd;
    f[d][2] = u[2] * vd;
    f[d][3] = u[3] * vd;
    f[d][1 + d] += prim.p;
    f[d][4] = rho_h * vd;
  }
  return f;
}

double entropy(const State& u, const GasModel& gas) {
  const auto prim = primitive_from_conservative(u, gas);
  const double phys = std::log(prim.p) - gas.gamma * std::log(prim.rho);
  return -prim.rho * phys / (gas.gamma - 1.0);
}

State entropy_variables(const State& u, const GasModel& gas) {
  const auto prim = primitive_from_conservative(u, gas);
  const double phys = std::log(prim.p) - gas.gamma * std::log(prim.rho);
  const double rho_p = prim.rho / prim.p;
  return {(gas.gamma - phys) / (gas.gamma - 1.0) - 0.5 * rho_p * dot(prim.v, prim.v), rho_p * prim.v.x,
          rho_p * prim.v.y, rho_p * prim.v.z, -rho_p};
}

State conservative_from_entropy(const State& w, const GasModel& gas) {
  if (!(w[4] < 0.0)) {
    std::ostringstream msg;
    msg << "entropy variables with w5 = " << w[4] << " do not correspond to a positive state";
    throw PositivityError(msg.str());
  }
  const double rho_p = -w[4];
  const Vec3 v{w[1] / rho_p, w[2] / rho_p, w[3] / rho_p};
  const double phys = gas.gamma - (gas.gamma - 1.0) * (w[0] + 0.5 * rho_p * dot(v, v));
  // phys = ln p - gamma ln rho with p = rho / rho_p.
  const double rho = std::exp((phys + std::log(rho_p)) / (1.0 - gas.gamma));
  return conservative_from_primitive({rho, v, rho / rho_p}, gas);
}

Vec3 entropy_flux(const State& u, const GasModel& gas) {
  const double s = entropy(u, gas);
  return s * Vec3{u[1] / u[0], u[2] / u[0], u[3] / u[0]};
}

Vec3 entropy_potential(const State& u, const GasModel& gas) {
  const auto prim = primitive_from_conservative(u, gas);
  return prim.rho * prim.v;
}

PrimitiveGradients primitive_gradients_from_entropy(const State& w, const EntropyGradient& grad_w,
                                                    const GasModel& gas) {
  // rho/p = -w5, v_i = -w_{i+1}/w5, p/rho = -1/w5.
  const double w5 = w[4];
  const double inv_w5 = 1.0 / w5;
  const double inv_w5_sq = inv_w5 * inv_w5;
  const double t_scale = gas.gamma * gas.mach * gas.mach;
  PrimitiveGradients g;
  for (std::size_t d = 0; d < 3; ++d) {
    const auto& gw = grad_w[d];
    for (std::size_t i = 0; i < 3; ++i) {
      g.velocity[i][d] = -gw[1 + i] * inv_w5 + w[1 + i] * gw[4] * inv_w5_sq;
    }
    g.temperature[d] = t_scale * gw[4] * inv_w5_sq;
  }
  return g;
}

PrimitiveGradients primitive_gradients_from_conservative(const State& u, const EntropyGradient& grad_u,
                                                         const GasModel& gas) {
  const double inv_rho = 1.0 / u[0];
  const Vec3 v{u[1] * inv_rho, u[2] * inv_rho, u[3] * inv_rho};
  const double e_total = u[4] * inv_rho;
  const double t_scale = gas.gamma * gas.mach * gas.mach * (gas.gamma - 1.0);
  PrimitiveGradients g;
  for (std::size_t d = 0; d < 3; ++d) {
    const auto& gu = grad_u[d];
    double kinetic = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      g.velocity[i][d] = (gu[1 + i] - v[i] * gu[0]) * inv_rho;
      kinetic += v[i] * g.velocity[i][d];
    }
    const double de = (gu[4] - e_total * gu[0]) * inv_rho;
    g.temperature[d] = t_scale * (de - kinetic);
  }
  return g;
}

FluxTriple viscous_flux(const State& u, const PrimitiveGradients& grad, const GasModel& gas) {
  const auto prim = primitive_from_conservative(u, gas);
  const double mu = gas.mu;
  const double lambda = gas.conductivity();
  // grad.velocity[i][d] = d v_i / d x_d.
  const double div_v = grad.velocity[0][0] + grad.velocity[1][1] + grad.velocity[2][2];
  double tau[3][3];
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      tau[i][j] = mu * (grad.velocity[j][i] + grad.velocity[i][j]);
    }
    tau[i][i] -= 2.0 / 3.0 * mu * div_v;
  }
  FluxTriple f{};
  for (std::size_t i = 0; i < 3; ++i) {
    f[i][0] = 0.0;
    f[i][1] = tau[i][0];
    f[i][2] = tau[i][1];
    f[i][3] = tau[i][2];
    f[i][4] = prim.v.x * tau[i][0] + prim.v.y * tau[i][1] + prim.v.z * tau[i][2] + lambda * grad.temperature[i];
  }
  return f;
}

FluxTriple viscous_flux_from_entropy_gradient(const State& u, const EntropyGradient& grad_w, const GasModel& gas) {
  const auto w = entropy_variables(u, gas);
  return viscous_flux(u, primitive_gradients_from_entropy(w, grad_w, gas), gas);
}

double max_wave_speed(const State& u_left, const State& u_right, const Vec3& unit_normal, const GasModel& gas) {
  const auto left = primitive_from_conservative(u_left, gas);
  const auto right = primitive_from_conservative(u_right, gas);
  const double sl = std::abs(dot(left.v, unit_normal)) + sound_speed(left, gas);
  const double sr = std::abs(dot(right.v, unit_normal)) + sound_speed(right, gas);
  return std::max(sl, sr);
}

}  // namespace dgsem::physics
