#include "dgsem/driver/inspect.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include "dgsem/solver.hpp"

namespace dgsem::driver {

MeshAudit audit_mesh(const mesh::MeshTopology& mesh, int degree) {
  const solver::Discretization disc(mesh, degree, geometry::MetricForm::curl);
  const auto& basis = disc.basis();
  MeshAudit audit;
  audit.degree = degree;
  audit.max_interface_mismatch = disc.max_interface_mismatch();
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    ElementAudit row;
    row.element = e;
    const auto& j = geom.jacobian.values();
    const auto [lo, hi] = std::minmax_element(j.begin(), j.end());
    row.jacobian_min = *lo;
    row.jacobian_max = *hi;
    row.metric_residual_curl = geometry::metric_identity_residual(basis, geom.ja);
    const auto cross = geometry::metrics_cross_product(geom.covariant);
    row.metric_residual_cross = geometry::metric_identity_residual(basis, cross.ja);
    row.watertight_defect = geometry::watertight_defect(mesh::element_faces(mesh.elements[e], basis));
    audit.elements.push_back(row);
  }
  return audit;
}

void write_mesh_audit(std::ostream& out, const MeshAudit& audit) {
  out << "element,jacobian_min,jacobian_max,metric_residual_curl,metric_residual_cross,watertight_defect\n";
  out << std::setprecision(6) << std::scientific;
  for (const auto& r : audit.elements) {
    out << r.element << ',' << r.jacobian_min << ',' << r.jacobian_max << ',' << r.metric_residual_curl << ','
        << r.metric_residual_cross << ',' << r.watertight_defect << '\n';
  }
  out << std::defaultfloat;
}

void write_basis_csv(std::ostream& out, int degree) {
  const spectral::NodalBasis basis(degree);
  const std::size_t n = basis.size();
  out << "j,node,weight,barycentric_weight";
  for (std::size_t c = 0; c < n; ++c) out << ",D_" << c;
  out << '\n' << std::setprecision(17);
  for (std::size_t j = 0; j < n; ++j) {
    out << j << ',' << basis.nodes()[j] << ',' << basis.weights()[j] << ',' << basis.barycentric_weights()[j];
    for (std::size_t c = 0; c < n; ++c) out << ',' << basis.derivative()(j, c);
    out << '\n';
  }
}

}  // namespace dgsem::driver
