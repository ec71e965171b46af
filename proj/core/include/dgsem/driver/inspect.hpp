#pragma once

// Mesh audit and basis tables.

#include <iosfwd>
#include <vector>

#include "dgsem/mesh.hpp"

namespace dgsem::driver {

struct ElementAudit {
  std::size_t element = 0;
  double jacobian_min = 0.0;
  double jacobian_max = 0.0;
  double metric_residual_curl = 0.0;
  double metric_residual_cross = 0.0;
  double watertight_defect = 0.0;
};

struct MeshAudit {
  int degree = 0;
  std::vector<ElementAudit> elements;
  double max_interface_mismatch = 0.0;
};

/// Builds both metric forms for every element at degree N and reports J ranges and
/// metric-identity residuals. Throws GeometryError / TopologyError for invalid meshes.
MeshAudit audit_mesh(const mesh::MeshTopology& mesh, int degree);

void write_mesh_audit(std::ostream& out, const MeshAudit& audit);

/// CSV of nodes, weights, barycentric weights and rows of D for one degree.
void write_basis_csv(std::ostream& out, int degree);

}  // namespace dgsem::driver
