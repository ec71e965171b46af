#include "dgsem/fluxes.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dgsem::fluxes {

double log_mean(double a_left, double a_right) {
  if (!(a_left > 0.0) || !(a_right > 0.0)) {
    throw std::domain_error("log_mean requires positive arguments");
  }
  const double f = (a_left - a_right) / (a_left + a_right);
  const double u = f * f;
  double scaled;
  if (u < 1e-4) {
    scaled = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
  } else {
    scaled = std::log(a_left / a_right) / (2.0 * f);
  }
  return (a_left + a_right) / (2.0 * scaled);
}

NodeState make_node_state(const State& u, const GasModel& gas) {
  const auto prim = physics::primitive_from_conservative(u, gas);
  NodeState s{u, prim.rho, prim.v, prim.p, 0.5 * prim.rho / prim.p, {}};
  const double rho_h = u[4] + prim.p;
  for (std::size_t d = 0; d < 3; ++d) {
    const double vd = prim.v[d];
    s.f[d] = {u[0] * vd, u[1] * vd, u[2] * vd, u[3] * vd, rho_h * vd};
    s.f[d][1 + d] += prim.p;
  }
  return s;
}

namespace {

State ec_contracted(const NodeState& a, const NodeState& b, const Vec3& n, const GasModel& gas) {
  const double rho_ln = log_mean(a.rho, b.rho);
  const double beta_ln = log_mean(a.beta, b.beta);
  const Vec3 v_avg = 0.5 * (a.v + b.v);
  const double rho_avg = 0.5 * (a.rho + b.rho);
  const double beta_avg = 0.5 * (a.beta + b.beta);
  const double p_hat = rho_avg / (2.0 * beta_avg);
  const double v2_avg = 0.5 * (dot(a.v, a.v) + dot(b.v, b.v));
  const double h_hat =
      1.0 / (2.0 * beta_ln * (gas.gamma - 1.0)) + p_hat / rho_ln + dot(v_avg, v_avg) - 0.5 * v2_avg;
  const double mass = rho_ln * dot(v_avg, n);
  return {mass, mass * v_avg.x + p_hat * n.x, mass * v_avg.y + p_hat * n.y, mass * v_avg.z + p_hat * n.z,
          mass * h_hat};
}

State central_contracted(const NodeState& a, const NodeState& b, const Vec3& n) {
  State r = contract(a.f, n);
  r += contract(b.f, n);
  r *= 0.5;
  return r;
}

FluxTriple full_triple(VolumeFlux kind, const State& u_left, const State& u_right, const GasModel& gas) {
  const auto a = make_node_state(u_left, gas);
  const auto b = make_node_state(u_right, gas);
  FluxTriple f{};
  for (std::size_t d = 0; d < 3; ++d) {
    Vec3 e{};
    e[d] = 1.0;
    f[d] = two_point_flux_contracted(kind, a, b, e, gas);
  }
  return f;
}

constexpr std::array<TwoPointFlux, 2> kRegistry{{
    {"central", VolumeFlux::central, &central_flux},
    {"ec", VolumeFlux::ec, &ec_flux},
}};

}  // namespace

State two_point_flux_contracted(VolumeFlux kind, const NodeState& a, const NodeState& b, const Vec3& n,
                                const GasModel& gas) {
  return kind == VolumeFlux::ec ? ec_contracted(a, b, n, gas) : central_contracted(a, b, n);
}

FluxTriple central_flux(const State& u_left, const State& u_right, const GasModel& gas) {
  return full_triple(VolumeFlux::central, u_left, u_right, gas);
}

FluxTriple ec_flux(const State& u_left, const State& u_right, const GasModel& gas) {
  return full_triple(VolumeFlux::ec, u_left, u_right, gas);
}

double kg_momentum_term(const State& u_left, const State& u_right) {
  const double rho_avg = 0.5 * (u_left[0] + u_right[0]);
  const double v1_avg = 0.5 * (u_left[1] / u_left[0] + u_right[1] / u_right[0]);
  const double v2_avg = 0.5 * (u_left[2] / u_left[0] + u_right[2] / u_right[0]);
  return rho_avg * v1_avg * v2_avg;
}

std::span<const TwoPointFlux> registered_two_point_fluxes() { return kRegistry; }

VolumeFlux volume_flux_from_name(std::string_view name) {
  for (const auto& f : kRegistry) {
    if (f.name == name) return f.kind;
  }
  throw ConfigError("volume_flux: unknown value '" + std::string(name) + "' (valid options: central, ec)");
}

Dissipation dissipation_from_name(std::string_view name) {
  if (name == "none") return Dissipation::none;
  if (name == "llf") return Dissipation::llf;
  throw ConfigError("surface_dissipation: unknown value '" + std::string(name) + "' (valid options: none, llf)");
}

std::string_view to_string(VolumeFlux kind) { return kind == VolumeFlux::ec ? "ec" : "central"; }
std::string_view to_string(Dissipation kind) { return kind == Dissipation::llf ? "llf" : "none"; }

State surface_flux_advective(const NodeState& left, const NodeState& right, const State& w_left,
                             const State& w_right, const Vec3& unit_normal, const GasModel& gas,
                             Dissipation dissipation, VolumeFlux volume) {
  State f = two_point_flux_contracted(volume, left, right, unit_normal, gas);
  if (dissipation == Dissipation::llf) {
    const double sl = std::abs(dot(left.v, unit_normal)) + std::sqrt(gas.gamma * left.p / left.rho);
    const double sr = std::abs(dot(right.v, unit_normal)) + std::sqrt(gas.gamma * right.p / right.rho);
    const double half_lambda = 0.5 * std::max(sl, sr);
    for (std::size_t v = 0; v < kNumVars; ++v) f[v] -= half_lambda * (w_right[v] - w_left[v]);
  }
  return f;
}

State surface_flux_advective(const State& u_left, const State& u_right, const Vec3& unit_normal,
                             const GasModel& gas, Dissipation dissipation, VolumeFlux volume) {
  const auto a = make_node_state(u_left, gas);
  const auto b = make_node_state(u_right, gas);
  const auto wl = physics::entropy_variables(u_left, gas);
  const auto wr = physics::entropy_variables(u_right, gas);
  return surface_flux_advective(a, b, wl, wr, unit_normal, gas, dissipation, volume);
}

ViscousInterface br1_viscous_interface(const State& fv_left_n, const State& fv_right_n, const State& w_left,
                                       const State& w_right) {
  ViscousInterface r;
  for (std::size_t v = 0; v < kNumVars; ++v) {
    r.flux_normal[v] = 0.5 * (fv_left_n[v] + fv_right_n[v]);
    r.w_star[v] = 0.5 * (w_left[v] + w_right[v]);
  }
  return r;
}

}  // namespace dgsem::fluxes
