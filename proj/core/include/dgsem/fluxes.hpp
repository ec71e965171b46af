#pragma once

// Two-point volume fluxes and interface numerical fluxes.

#include <span>
#include <string>
#include <string_view>

#include "dgsem/physics.hpp"
#include "dgsem/types.hpp"

namespace dgsem::fluxes {

using physics::GasModel;

/// Logarithmic mean (a - b) / (ln a - ln b), stable for a close to b.
/// Throws std::domain_error for non-positive arguments.
double log_mean(double a_left, double a_right);

/// Arithmetic mean of the physical fluxes.
FluxTriple central_flux(const State& u_left, const State& u_right, const GasModel& gas);

/// Entropy-conservative flux (Chandrashekar) in all three Cartesian directions.
FluxTriple ec_flux(const State& u_left, const State& u_right, const GasModel& gas);

/// <rho><v1><v2>: the x-momentum entry of the cubic (Kennedy-Gruber) split form
/// transported in x. Demonstrator only; no full flux vector is built on it.
double kg_momentum_term(const State& u_left, const State& u_right);

/// Per-node quantities reused by every two-point evaluation touching the node.
struct NodeState {
  State u;
  double rho;
  Vec3 v;
  double p;
  double beta;  // rho / (2 p)
  FluxTriple f;
};

NodeState make_node_state(const State& u, const GasModel& gas);

enum class VolumeFlux { central, ec };
enum class Dissipation { none, llf };

/// F#(a, b) . n for an arbitrary (not necessarily unit) direction n.
State two_point_flux_contracted(VolumeFlux kind, const NodeState& a, const NodeState& b, const Vec3& n,
                                const GasModel& gas);

/// A symmetric, consistent two-point volume flux selectable by name.
struct TwoPointFlux {
  std::string_view name;
  VolumeFlux kind;
  FluxTriple (*evaluate)(const State&, const State&, const GasModel&);
};

/// All registered two-point fluxes.
std::span<const TwoPointFlux> registered_two_point_fluxes();

/// Throws ConfigError naming the valid options.
VolumeFlux volume_flux_from_name(std::string_view name);
Dissipation dissipation_from_name(std::string_view name);
std::string_view to_string(VolumeFlux kind);
std::string_view to_string(Dissipation kind);

/// F*_n = F#(u_L, u_R).n - (lambda_max/2) [[w]], with n a unit outward normal of the L side.
State surface_flux_advective(const State& u_left, const State& u_right, const Vec3& unit_normal,
                             const GasModel& gas, Dissipation dissipation, VolumeFlux volume = VolumeFlux::ec);

/// Same as above on precomputed node states with the entropy variables supplied.
State surface_flux_advective(const NodeState& left, const NodeState& right, const State& w_left,
                             const State& w_right, const Vec3& unit_normal, const GasModel& gas,
                             Dissipation dissipation, VolumeFlux volume);

struct ViscousInterface {
  State flux_normal;  // F^{v,*}_n = <F^v>.n
  State w_star;       // W* = <W>
};

/// BR1: arithmetic means of the normal viscous fluxes and of the entropy variables.
ViscousInterface br1_viscous_interface(const State& fv_left_n, const State& fv_right_n, const State& w_left,
                                       const State& w_right);

}  // namespace dgsem::fluxes
