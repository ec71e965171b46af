#pragma once

// Semi-discrete split-form DGSEM on conforming curvilinear hexahedral meshes:
// flux-differencing volume terms, strong-form surface penalties, BR1 gradient
// lifting, explicit low-storage RK time stepping and entropy/conservation monitors.

#include <array>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "dgsem/fluxes.hpp"
#include "dgsem/geometry.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/physics.hpp"
#include "dgsem/spectral.hpp"

namespace dgsem::solver {

using fluxes::Dissipation;
using fluxes::VolumeFlux;
using geometry::ElementGeometry;
using geometry::FaceId;
using geometry::MetricForm;
using physics::GasModel;
using spectral::NodalBasis;

enum class GradientVariables { entropy, conservative };

struct FluxConfig {
  VolumeFlux volume_flux = VolumeFlux::ec;
  Dissipation surface_dissipation = Dissipation::llf;
  bool viscous = false;
  GradientVariables gradient_variables = GradientVariables::entropy;
};

/// Exterior state for Dirichlet faces and manufactured source terms, as functions of (x, t).
using SpaceTimeFunction = std::function<State(const Vec3&, double)>;

/// One interface (or boundary face) with node lookup tables resolved at construction.
/// Face points are enumerated in the master element's face-local order.
struct InterfaceFace {
  int master = -1;
  FaceId master_face = FaceId::minus_xi;
  int slave = -1;  // -1 for a Dirichlet boundary face
  FaceId slave_face = FaceId::minus_xi;
  mesh::BoundaryKind kind = mesh::BoundaryKind::dirichlet;
  std::vector<std::size_t> master_nodes;  // volume index in the master element
  std::vector<std::size_t> slave_nodes;   // volume index in the slave element
  std::vector<std::size_t> slave_local;   // face-local index on the slave face
};

/// Basis, element geometry and resolved face connectivity. Immutable after construction.
class Discretization {
 public:
  Discretization(const mesh::MeshTopology& mesh, int degree, MetricForm form = MetricForm::curl,
                 unsigned threads = 0);

  const NodalBasis& basis() const { return basis_; }
  int degree() const { return basis_.degree(); }
  std::size_t num_elements() const { return elements_.size(); }
  std::size_t nodes_per_element() const { return nodes_per_element_; }
  const ElementGeometry& element(std::size_t e) const { return elements_[e]; }
  const std::vector<InterfaceFace>& faces() const { return faces_; }
  unsigned threads() const { return threads_; }

  /// Reference: (face record, is_master) for each local face of an element.
  struct FaceRef {
    int record = -1;
    bool master = true;
  };
  const std::array<FaceRef, geometry::kNumFaces>& element_faces(std::size_t e) const { return element_faces_[e]; }

  /// LGL weight product w_i w_j w_k at a volume node.
  double volume_weight(std::size_t idx) const { return volume_weights_[idx]; }

  /// Largest surface-element mismatch between the two sides of any interface.
  double max_interface_mismatch() const;

 private:
  NodalBasis basis_;
  std::size_t nodes_per_element_;
  std::vector<ElementGeometry> elements_;
  std::vector<InterfaceFace> faces_;
  std::vector<std::array<FaceRef, geometry::kNumFaces>> element_faces_;
  std::vector<double> volume_weights_;
  unsigned threads_;
};

/// Conservative nodal states, element-major, (i, j, k) node order with i fastest.
struct SolutionField {
  std::size_t nodes_per_element = 0;
  std::vector<State> values;
  double time = 0.0;

  SolutionField() = default;
  SolutionField(std::size_t elements, std::size_t nodes_per_elem)
      : nodes_per_element(nodes_per_elem), values(elements * nodes_per_elem, State{}) {}

  std::size_t num_elements() const { return nodes_per_element ? values.size() / nodes_per_element : 0; }
  std::span<State> element(std::size_t e) { return {values.data() + e * nodes_per_element, nodes_per_element}; }
  std::span<const State> element(std::size_t e) const {
    return {values.data() + e * nodes_per_element, nodes_per_element};
  }
};

/// Lifted gradients, one Cartesian triple of 5-vectors per node.
struct GradientField {
  std::size_t nodes_per_element = 0;
  std::vector<std::array<State, 3>> values;
};

/// Initializes nodal values from f(x, t).
SolutionField project(const Discretization& disc, const SpaceTimeFunction& f, double t);

/// Two-point flux-differencing volume term of one element (not divided by J):
/// 2 sum_m D_im F#(U_ijk, U_mjk).<Ja^1>_(i,m)jk + eta and zeta analogues.
std::vector<State> split_divergence(std::span<const State> u, const ElementGeometry& geom, const NodalBasis& basis,
                                    VolumeFlux flux, const GasModel& gas);

/// Standard nodal flux divergence sum_m D_im (f.Ja^1)_mjk + ... (not divided by J).
std::vector<State> standard_divergence(std::span<const State> u, const ElementGeometry& geom,
                                       const NodalBasis& basis, const GasModel& gas);

/// BR1 lifted gradient Q ~ grad(W) (or grad(U)) in strong form.
GradientField lift_gradients(const SolutionField& u, const Discretization& disc, const GasModel& gas,
                             GradientVariables variables = GradientVariables::entropy,
                             const SpaceTimeFunction* exterior = nullptr);

/// Right-hand side dU/dt of the split-form DGSEM.
class SemiDiscretization {
 public:
  SemiDiscretization(std::shared_ptr<const Discretization> disc, GasModel gas, FluxConfig config,
                     SpaceTimeFunction exterior = {}, SpaceTimeFunction source = {});

  const Discretization& discretization() const { return *disc_; }
  const GasModel& gas() const { return gas_; }
  const FluxConfig& config() const { return config_; }

  /// Fills dudt (resized as needed). Throws PositivityError with element/node context.
  void residual(const SolutionField& u, SolutionField& dudt) const;
  SolutionField residual(const SolutionField& u) const;

 private:
  std::shared_ptr<const Discretization> disc_;
  GasModel gas_;
  FluxConfig config_;
  SpaceTimeFunction exterior_;
  SpaceTimeFunction source_;
};

/// sum_k sum_ijk w_ijk J_ijk W_ijk^T (dU/dt)_ijk.
double entropy_rate(const SolutionField& u, const SolutionField& dudt, const Discretization& disc,
                    const GasModel& gas);

/// sum_k sum_ijk w_ijk J_ijk |W_ijk^T (dU/dt)_ijk|: scale for relative entropy-rate checks.
double entropy_rate_scale(const SolutionField& u, const SolutionField& dudt, const Discretization& disc,
                          const GasModel& gas);

/// Totals of the five conserved quantities, sum <J U, 1>_N.
State conserved_totals(const SolutionField& u, const Discretization& disc);

/// Total entropy sum <J s(U), 1>_N.
double total_entropy(const SolutionField& u, const Discretization& disc, const GasModel& gas);

/// dt = CFL min_nodes 2 J / ((N+1)^2 sum_i (|v.Ja^i| + c |Ja^i|)).
double timestep_estimate(const SolutionField& u, const Discretization& disc, const GasModel& gas, double cfl);

using ResidualClosure = std::function<void(const SolutionField&, SolutionField&)>;

/// One low-storage RK4 step of dt. PositivityError is rethrown with stage diagnostics.
void rk_step(SolutionField& u, double dt, const ResidualClosure& residual);
void rk_step(SolutionField& u, double dt, const SemiDiscretization& rhs);

}  // namespace dgsem::solver
