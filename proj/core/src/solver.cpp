#include "dgsem/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "dgsem/parallel.hpp"
#include "dgsem/time_integration.hpp"

namespace dgsem::solver {

using fluxes::NodeState;
using geometry::face_direction;
using geometry::face_from_index;
using mesh::BoundaryKind;

namespace {

std::string node_context(std::size_t e, std::size_t idx, std::size_t n, const Vec3& x) {
  std::ostringstream msg;
  msg.precision(10);
  msg << "element " << e << " node (" << idx % n << ", " << (idx / n) % n << ", " << idx / (n * n) << ") at x = ("
      << x.x << ", " << x.y << ", " << x.z << ")";
  return msg.str();
}

[[noreturn]] void rethrow_with_context(const PositivityError& err, std::size_t e, std::size_t idx, std::size_t n,
                                       const Vec3& x) {
  throw PositivityError(node_context(e, idx, n, x) + ": " + err.what());
}

// Per-node states and the variables whose gradient is lifted.
struct NodeData {
  std::vector<NodeState> state;
  std::vector<State> w;  // entropy variables
};

NodeData evaluate_nodes(const SolutionField& u, const Discretization& disc, const GasModel& gas) {
  const std::size_t npe = disc.nodes_per_element();
  const std::size_t n = disc.basis().size();
  NodeData data;
  data.state.resize(u.values.size());
  data.w.resize(u.values.size());
  parallel_for(
      disc.num_elements(),
      [&](std::size_t e) {
        for (std::size_t idx = 0; idx < npe; ++idx) {
          const std::size_t g = e * npe + idx;
          try {
            data.state[g] = fluxes::make_node_state(u.values[g], gas);
            data.w[g] = physics::entropy_variables(u.values[g], gas);
          } catch (const PositivityError& err) {
            rethrow_with_context(err, e, idx, n, disc.element(e).x[idx]);
          }
        }
      },
      disc.threads());
  return data;
}

State exterior_state(const SpaceTimeFunction* exterior, const Discretization& disc, const InterfaceFace& face,
                     std::size_t l, double t) {
  const Vec3& x = disc.element(face.master).x[face.master_nodes[l]];
  if (exterior == nullptr || !*exterior) {
    throw ConfigError("mesh has Dirichlet faces but no exterior state was supplied");
  }
  return (*exterior)(x, t);
}

void split_divergence_states(std::span<const NodeState> ns, const ElementGeometry& geom, const NodalBasis& basis,
                             VolumeFlux flux, const GasModel& gas, std::span<State> out) {
  const std::size_t n = basis.size();
  const auto& d = basis.derivative();
  for (int dir = 0; dir < 3; ++dir) {
    const std::size_t stride = spectral::direction_stride(n, dir);
    const auto& ja = geom.ja[dir];
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t a = 0; a < n; ++a) {
        // First node of the line through (a, b) in direction dir.
        std::size_t base = 0;
        if (dir == 0) base = n * (a + n * b);
        if (dir == 1) base = a + n * n * b;
        if (dir == 2) base = a + n * b;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t ii = base + i * stride;
          // Consistency: F#(u, u).Ja = f(u).Ja.
          if (d(i, i) != 0.0) {
            State fi = contract(ns[ii].f, ja[ii]);
            fi *= 2.0 * d(i, i);
            out[ii] += fi;
          }
          for (std::size_t m = i + 1; m < n; ++m) {
            const std::size_t mm = base + m * stride;
            const Vec3 avg = 0.5 * (ja[ii] + ja[mm]);
            const State f = fluxes::two_point_flux_contracted(flux, ns[ii], ns[mm], avg, gas);
            out[ii] += (2.0 * d(i, m)) * f;
            out[mm] += (2.0 * d(m, i)) * f;
          }
        }
      }
    }
  }
}

// Nodal contravariant-flux divergence sum_i D_i (F . Ja^i) for a per-node Cartesian flux triple.
void contravariant_divergence(std::span<const FluxTriple> f, const ElementGeometry& geom, const NodalBasis& basis,
                              std::span<State> out) {
  const std::size_t n = basis.size();
  const auto& d = basis.derivative();
  std::vector<State> g(f.size());
  for (int dir = 0; dir < 3; ++dir) {
    const std::size_t stride = spectral::direction_stride(n, dir);
    for (std::size_t idx = 0; idx < f.size(); ++idx) g[idx] = contract(f[idx], geom.ja[dir][idx]);
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      const std::size_t pos = dir == 0 ? idx % n : (dir == 1 ? (idx / n) % n : idx / (n * n));
      const std::size_t base = idx - pos * stride;
      for (std::size_t m = 0; m < n; ++m) out[idx] += d(pos, m) * g[base + m * stride];
    }
  }
}

// Variables lifted by BR1 at one node.
State lifted_variables(const NodeData& nodes, std::size_t g, GradientVariables variables) {
  return variables == GradientVariables::entropy ? nodes.w[g] : nodes.state[g].u;
}

GradientField lift_from_nodes(const NodeData& nodes, const Discretization& disc, const GasModel& gas,
                              GradientVariables variables, const SpaceTimeFunction* exterior, double t) {
  const std::size_t npe = disc.nodes_per_element();
  const std::size_t n = disc.basis().size();
  const std::size_t nf = n * n;
  const auto& faces = disc.faces();
  const double w0 = disc.basis().weights()[0];

  // Jumps W* - W on both sides, stored in master face-local order.
  std::vector<std::vector<State>> master_jump(faces.size()), slave_jump(faces.size());
  parallel_for(
      faces.size(),
      [&](std::size_t r) {
        const auto& face = faces[r];
        master_jump[r].resize(nf);
        if (face.slave >= 0) slave_jump[r].resize(nf);
        for (std::size_t l = 0; l < nf; ++l) {
          const State va = lifted_variables(nodes, face.master * npe + face.master_nodes[l], variables);
          State vb;
          if (face.slave >= 0) {
            vb = lifted_variables(nodes, face.slave * npe + face.slave_nodes[l], variables);
          } else {
            const State ub = exterior_state(exterior, disc, face, l, t);
            vb = variables == GradientVariables::entropy ? physics::entropy_variables(ub, gas) : ub;
          }
          const State star = 0.5 * (va + vb);
          master_jump[r][l] = star - va;
          if (face.slave >= 0) slave_jump[r][l] = star - vb;
        }
      },
      disc.threads());

  GradientField q;
  q.nodes_per_element = npe;
  q.values.assign(disc.num_elements() * npe, std::array<State, 3>{});
  parallel_for(
      disc.num_elements(),
      [&](std::size_t e) {
        const auto& geom = disc.element(e);
        spectral::NodalField3D<State> v(disc.degree());
        for (std::size_t idx = 0; idx < npe; ++idx) v[idx] = lifted_variables(nodes, e * npe + idx, variables);
        const auto dv = spectral::tensor_gradient(disc.basis(), v);
        auto* out = q.values.data() + e * npe;
        for (std::size_t idx = 0; idx < npe; ++idx) {
          for (int i = 0; i < 3; ++i) {
            const Vec3& ja = geom.ja[i][idx];
            for (std::size_t c = 0; c < 3; ++c) out[idx][c] += ja[c] * dv[i][idx];
          }
        }
        const auto& refs = disc.element_faces(e);
        for (int f = 0; f < geometry::kNumFaces; ++f) {
          const auto& ref = refs[f];
          const auto& face = faces[ref.record];
          const auto& fg = geom.faces[f];
          const auto& jump = ref.master ? master_jump[ref.record] : slave_jump[ref.record];
          for (std::size_t l = 0; l < nf; ++l) {
            const std::size_t idx = ref.master ? face.master_nodes[l] : face.slave_nodes[l];
            const std::size_t own = ref.master ? l : face.slave_local[l];
            const Vec3 ns = (fg.surface[own] / w0) * fg.normal[own];
            for (std::size_t c = 0; c < 3; ++c) out[idx][c] += ns[c] * jump[l];
          }
        }
        for (std::size_t idx = 0; idx < npe; ++idx) {
          const double inv_j = 1.0 / geom.jacobian[idx];
          for (auto& comp : out[idx]) comp *= inv_j;
        }
      },
      disc.threads());
  return q;
}

physics::PrimitiveGradients primitive_gradients(const State& u, const State& w, const std::array<State, 3>& q,
                                                GradientVariables variables, const GasModel& gas) {
  return variables == GradientVariables::entropy ? physics::primitive_gradients_from_entropy(w, q, gas)
                                                 : physics::primitive_gradients_from_conservative(u, q, gas);
}

}  // namespace

Discretization::Discretization(const mesh::MeshTopology& mesh, int degree, MetricForm form, unsigned threads)
    : basis_(degree), threads_(threads) {
  mesh.validate();
  const std::size_t n = basis_.size();
  const std::size_t nf = n * n;
  nodes_per_element_ = n * n * n;
  const std::size_t k = mesh.size();
  if (k == 0) throw TopologyError("mesh has no elements");

  elements_.resize(k);
  parallel_for(
      k,
      [&](std::size_t e) {
        try {
          elements_[e] = geometry::build_element_geometry(basis_, mesh::element_faces(mesh.elements[e], basis_), form);
        } catch (const GeometryError& err) {
          throw GeometryError("element " + std::to_string(e) + ": " + err.what());
        }
      },
      threads_);

  element_faces_.resize(k);
  for (std::size_t e = 0; e < k; ++e) {
    for (int f = 0; f < geometry::kNumFaces; ++f) {
      const auto& conn = mesh.elements[e].faces[f];
      const auto face_id = face_from_index(f);
      const bool boundary = conn.kind == BoundaryKind::dirichlet;
      const auto nb = static_cast<std::size_t>(conn.neighbor);
      const bool master = boundary || e < nb || (e == nb && f < static_cast<int>(conn.neighbor_face));
      if (!master) continue;

      InterfaceFace face;
      face.master = static_cast<int>(e);
      face.master_face = face_id;
      face.kind = conn.kind;
      face.master_nodes.resize(nf);
      for (std::size_t q = 0; q < n; ++q) {
        for (std::size_t p = 0; p < n; ++p) face.master_nodes[p + n * q] = geometry::face_volume_index(n, face_id, p, q);
      }
      if (!boundary) {
        face.slave = conn.neighbor;
        face.slave_face = conn.neighbor_face;
        face.slave_nodes.resize(nf);
        face.slave_local.resize(nf);
        const auto& mine = elements_[e].faces[f];
        const auto& other = elements_[nb].faces[static_cast<int>(conn.neighbor_face)];
        for (std::size_t q = 0; q < n; ++q) {
          for (std::size_t p = 0; p < n; ++p) {
            const auto [a, b] = mesh::orient(conn.orientation, n, p, q);
            const std::size_t l = p + n * q;
            face.slave_local[l] = a + n * b;
            face.slave_nodes[l] = geometry::face_volume_index(n, conn.neighbor_face, a, b);
            const double sm = mine.surface[l];
            const double ss = other.surface[face.slave_local[l]];
            if (std::abs(sm - ss) > 1e-10 * std::max(1.0, std::abs(sm))) {
              std::ostringstream msg;
              msg.precision(17);
              msg << "surface elements disagree across the interface between element " << e << " face "
                  << geometry::to_string(face_id) << " and element " << nb << " face "
                  << geometry::to_string(conn.neighbor_face) << ": " << sm << " vs " << ss;
              throw GeometryError(msg.str());
            }
          }
        }
        element_faces_[nb][static_cast<int>(conn.neighbor_face)] = {static_cast<int>(faces_.size()), false};
      }
      element_faces_[e][f] = {static_cast<int>(faces_.size()), true};
      faces_.push_back(std::move(face));
    }
  }

  volume_weights_.resize(nodes_per_element_);
  const auto& w = basis_.weights();
  for (std::size_t idx = 0; idx < nodes_per_element_; ++idx) {
    volume_weights_[idx] = w[idx % n] * w[(idx / n) % n] * w[idx / (n * n)];
  }
}

double Discretization::max_interface_mismatch() const {
  double worst = 0.0;
  for (const auto& face : faces_) {
    if (face.slave < 0) continue;
    const auto& mg = elements_[face.master].faces[static_cast<int>(face.master_face)];
    const auto& sg = elements_[face.slave].faces[static_cast<int>(face.slave_face)];
    for (std::size_t l = 0; l < face.master_nodes.size(); ++l) {
      worst = std::max(worst, std::abs(mg.surface[l] - sg.surface[face.slave_local[l]]));
    }
  }
  return worst;
}

SolutionField project(const Discretization& disc, const SpaceTimeFunction& f, double t) {
  SolutionField u(disc.num_elements(), disc.nodes_per_element());
  u.time = t;
  parallel_for(
      disc.num_elements(),
      [&](std::size_t e) {
        const auto& geom = disc.element(e);
        auto values = u.element(e);
        for (std::size_t idx = 0; idx < values.size(); ++idx) values[idx] = f(geom.x[idx], t);
      },
      disc.threads());
  return u;
}

std::vector<State> split_divergence(std::span<const State> u, const ElementGeometry& geom, const NodalBasis& basis,
                                    VolumeFlux flux, const GasModel& gas) {
  std::vector<NodeState> ns;
  ns.reserve(u.size());
  for (const auto& s : u) ns.push_back(fluxes::make_node_state(s, gas));
  std::vector<State> out(u.size(), State{});
  split_divergence_states(ns, geom, basis, flux, gas, out);
  return out;
}

std::vector<State> standard_divergence(std::span<const State> u, const ElementGeometry& geom,
                                       const NodalBasis& basis, const GasModel& gas) {
  std::vector<FluxTriple> f;
  f.reserve(u.size());
  for (const auto& s : u) f.push_back(physics::advective_flux(s, gas));
  std::vector<State> out(u.size(), State{});
  contravariant_divergence(f, geom, basis, out);
  return out;
}

GradientField lift_gradients(const SolutionField& u, const Discretization& disc, const GasModel& gas,
                             GradientVariables variables, const SpaceTimeFunction* exterior) {
  const auto nodes = evaluate_nodes(u, disc, gas);
  return lift_from_nodes(nodes, disc, gas, variables, exterior, u.time);
}

SemiDiscretization::SemiDiscretization(std::shared_ptr<const Discretization> disc, GasModel gas, FluxConfig config,
                                       SpaceTimeFunction exterior, SpaceTimeFunction source)
    : disc_(std::move(disc)), gas_(gas), config_(config), exterior_(std::move(exterior)), source_(std::move(source)) {
  gas_.validate();
  if (!disc_) throw std::invalid_argument("SemiDiscretization: null discretization");
}

SolutionField SemiDiscretization::residual(const SolutionField& u) const {
  SolutionField dudt;
  residual(u, dudt);
  return dudt;
}

void SemiDiscretization::residual(const SolutionField& u, SolutionField& dudt) const {
  const auto& disc = *disc_;
  const std::size_t npe = disc.nodes_per_element();
  const std::size_t n = disc.basis().size();
  const std::size_t nf = n * n;
  const auto& faces = disc.faces();
  const double w0 = disc.basis().weights()[0];
  const double t = u.time;
  const bool viscous = config_.viscous;
  const double inv_re = 1.0 / gas_.reynolds;
  if (u.values.size() != disc.num_elements() * npe) throw std::invalid_argument("residual: field size mismatch");

  dudt.nodes_per_element = npe;
  dudt.time = t;
  dudt.values.assign(u.values.size(), State{});

  const auto nodes = evaluate_nodes(u, disc, gas_);
  const SpaceTimeFunction* exterior = exterior_ ? &exterior_ : nullptr;

  GradientField q;
  std::vector<FluxTriple> fv;
  if (viscous) {
    q = lift_from_nodes(nodes, disc, gas_, config_.gradient_variables, exterior, t);
    fv.resize(u.values.size());
    parallel_for(
        disc.num_elements(),
        [&](std::size_t e) {
          for (std::size_t idx = 0; idx < npe; ++idx) {
            const std::size_t g = e * npe + idx;
            const auto& s = nodes.state[g];
            fv[g] = physics::viscous_flux(
                s.u, primitive_gradients(s.u, nodes.w[g], q.values[g], config_.gradient_variables, gas_), gas_);
          }
        },
        disc.threads());
  }

  // Surface penalties per face, both sides, in master face-local order (not yet divided by w0 or J).
  std::vector<std::vector<State>> master_buf(faces.size()), slave_buf(faces.size());
  parallel_for(
      faces.size(),
      [&](std::size_t r) {
        const auto& face = faces[r];
        const auto& mg = disc.element(face.master).faces[static_cast<int>(face.master_face)];
        const bool has_slave = face.slave >= 0;
        master_buf[r].resize(nf);
        if (has_slave) slave_buf[r].resize(nf);
        for (std::size_t l = 0; l < nf; ++l) {
          const std::size_t ga = face.master * npe + face.master_nodes[l];
          const NodeState& a = nodes.state[ga];
          NodeState b_ext;
          State w_ext;
          const NodeState* b = nullptr;
          const State* wb = nullptr;
          std::size_t gb = 0;
          if (has_slave) {
            gb = face.slave * npe + face.slave_nodes[l];
            b = &nodes.state[gb];
            wb = &nodes.w[gb];
          } else {
            try {
              b_ext = fluxes::make_node_state(exterior_state(exterior, disc, face, l, t), gas_);
              w_ext = physics::entropy_variables(b_ext.u, gas_);
            } catch (const PositivityError& err) {
              throw PositivityError("exterior state on boundary of " +
                                    node_context(face.master, face.master_nodes[l], n,
                                                 disc.element(face.master).x[face.master_nodes[l]]) +
                                    ": " + err.what());
            }
            b = &b_ext;
            wb = &w_ext;
          }
          const Vec3 nm = mg.normal[l];
          const Vec3 nsm = mg.surface[l] * nm;
          State fstar;
          try {
            fstar = fluxes::surface_flux_advective(a, *b, nodes.w[ga], *wb, nm, gas_, config_.surface_dissipation,
                                                   config_.volume_flux);
          } catch (const PositivityError& err) {
            rethrow_with_context(err, face.master, face.master_nodes[l], n,
                                 disc.element(face.master).x[face.master_nodes[l]]);
          }
          fstar *= mg.surface[l];
          State pm = contract(a.f, nsm) - fstar;
          State ps{};
          Vec3 nss{};
          if (has_slave) {
            const auto& sg = disc.element(face.slave).faces[static_cast<int>(face.slave_face)];
            const std::size_t ls = face.slave_local[l];
            nss = sg.surface[ls] * sg.normal[ls];
            ps = fstar + contract(b->f, nss);
          }
          if (viscous) {
            const FluxTriple& fva = fv[ga];
            FluxTriple fvb;
            if (has_slave) {
              fvb = fv[gb];
            } else {
              fvb = physics::viscous_flux(
                  b->u, primitive_gradients(b->u, *wb, q.values[ga], config_.gradient_variables, gas_), gas_);
            }
            FluxTriple avg;
            for (int d = 0; d < 3; ++d) avg[d] = 0.5 * (fva[d] + fvb[d]);
            const State fv_star = contract(avg, nsm);
            pm += inv_re * (fv_star - contract(fva, nsm));
            if (has_slave) ps += inv_re * ((-1.0) * fv_star - contract(fvb, nss));
          }
          master_buf[r][l] = pm;
          if (has_slave) slave_buf[r][l] = ps;
        }
      },
      disc.threads());

  parallel_for(
      disc.num_elements(),
      [&](std::size_t e) {
        const auto& geom = disc.element(e);
        auto out = dudt.element(e);
        std::span<const NodeState> ns(nodes.state.data() + e * npe, npe);
        split_divergence_states(ns, geom, disc.basis(), config_.volume_flux, gas_, out);
        for (auto& s : out) s *= -1.0;
        if (viscous) {
          std::vector<State> visc(npe, State{});
          contravariant_divergence(std::span<const FluxTriple>(fv.data() + e * npe, npe), geom, disc.basis(), visc);
          for (std::size_t idx = 0; idx < npe; ++idx) out[idx] += inv_re * visc[idx];
        }
        const auto& refs = disc.element_faces(e);
        for (int f = 0; f < geometry::kNumFaces; ++f) {
          const auto& ref = refs[f];
          const auto& face = faces[ref.record];
          const auto& buf = ref.master ? master_buf[ref.record] : slave_buf[ref.record];
          const auto& local = ref.master ? face.master_nodes : face.slave_nodes;
          for (std::size_t l = 0; l < nf; ++l) out[local[l]] += (1.0 / w0) * buf[l];
        }
        for (std::size_t idx = 0; idx < npe; ++idx) {
          out[idx] *= 1.0 / geom.jacobian[idx];
          if (source_) out[idx] += source_(geom.x[idx], t);
        }
      },
      disc.threads());
}

double entropy_rate(const SolutionField& u, const SolutionField& dudt, const Discretization& disc,
                    const GasModel& gas) {
  const std::size_t npe = disc.nodes_per_element();
  double total = 0.0;
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    for (std::size_t idx = 0; idx < npe; ++idx) {
      const std::size_t g = e * npe + idx;
      total += disc.volume_weight(idx) * geom.jacobian[idx] *
               dot(physics::entropy_variables(u.values[g], gas), dudt.values[g]);
    }
  }
  return total;
}

double entropy_rate_scale(const SolutionField& u, const SolutionField& dudt, const Discretization& disc,
                          const GasModel& gas) {
  const std::size_t npe = disc.nodes_per_element();
  double total = 0.0;
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    for (std::size_t idx = 0; idx < npe; ++idx) {
      const std::size_t g = e * npe + idx;
      const State w = physics::entropy_variables(u.values[g], gas);
      double s = 0.0;
      for (std::size_t v = 0; v < kNumVars; ++v) s += std::abs(w[v] * dudt.values[g][v]);
      total += disc.volume_weight(idx) * geom.jacobian[idx] * s;
    }
  }
  return total;
}

State conserved_totals(const SolutionField& u, const Discretization& disc) {
  const std::size_t npe = disc.nodes_per_element();
  State total{};
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    for (std::size_t idx = 0; idx < npe; ++idx) {
      total += (disc.volume_weight(idx) * geom.jacobian[idx]) * u.values[e * npe + idx];
    }
  }
  return total;
}

double total_entropy(const SolutionField& u, const Discretization& disc, const GasModel& gas) {
  const std::size_t npe = disc.nodes_per_element();
  double total = 0.0;
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    for (std::size_t idx = 0; idx < npe; ++idx) {
      total += disc.volume_weight(idx) * geom.jacobian[idx] * physics::entropy(u.values[e * npe + idx], gas);
    }
  }
  return total;
}

double timestep_estimate(const SolutionField& u, const Discretization& disc, const GasModel& gas, double cfl) {
  const std::size_t npe = disc.nodes_per_element();
  const double np1 = static_cast<double>(disc.degree() + 1);
  double dt = std::numeric_limits<double>::infinity();
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    for (std::size_t idx = 0; idx < npe; ++idx) {
      const auto prim = physics::primitive_from_conservative(u.values[e * npe + idx], gas);
      const double c = physics::sound_speed(prim, gas);
      double rate = 0.0;
      for (int i = 0; i < 3; ++i) {
        const Vec3& ja = geom.ja[i][idx];
        rate += std::abs(dot(prim.v, ja)) + c * norm(ja);
      }
      dt = std::min(dt, 2.0 * geom.jacobian[idx] / (np1 * np1 * rate));
    }
  }
  return cfl * dt;
}

void rk_step(SolutionField& u, double dt, const ResidualClosure& residual) {
  SolutionField reg(u.num_elements(), u.nodes_per_element);
  SolutionField rate(u.num_elements(), u.nodes_per_element);
  time::lsrk_step(u, dt, residual, reg, rate);
}

void rk_step(SolutionField& u, double dt, const SemiDiscretization& rhs) {
  rk_step(u, dt, [&rhs](const SolutionField& v, SolutionField& r) { rhs.residual(v, r); });
}

}  // namespace dgsem::solver
