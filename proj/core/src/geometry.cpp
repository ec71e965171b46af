#include "dgsem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dgsem::geometry {

namespace {

// Paper-style face names used by the blending formula.
constexpr FaceId kGamma1 = FaceId::minus_eta;   // eta = -1, (xi, zeta)
constexpr FaceId kGamma2 = FaceId::plus_eta;    // eta = +1, (xi, zeta)
constexpr FaceId kGamma3 = FaceId::minus_zeta;  // zeta = -1, (xi, eta)
constexpr FaceId kGamma4 = FaceId::plus_xi;     // xi = +1, (eta, zeta)
constexpr FaceId kGamma5 = FaceId::plus_zeta;   // zeta = +1, (xi, eta)
constexpr FaceId kGamma6 = FaceId::minus_xi;    // xi = -1, (eta, zeta)

class FaceEvaluator {
 public:
  FaceEvaluator(const FaceDefinition& faces, const NodalBasis& basis) : faces_(faces), basis_(basis) {}

  Vec3 operator()(FaceId f, double s, double t) const {
    const auto ls = basis_.lagrange_values(s);
    const auto lt = basis_.lagrange_values(t);
    const std::size_t n = basis_.size();
    Vec3 r{};
    for (std::size_t q = 0; q < n; ++q) {
      if (lt[q] == 0.0) continue;
      Vec3 row{};
      for (std::size_t p = 0; p < n; ++p) {
        if (ls[p] != 0.0) row += ls[p] * faces_.at(f, p, q);
      }
      r += lt[q] * row;
    }
    return r;
  }

 private:
  const FaceDefinition& faces_;
  const NodalBasis& basis_;
};

NodalField3D<double> component(const NodalField3D<Vec3>& f, int d) {
  NodalField3D<double> out(f.degree());
  for (std::size_t idx = 0; idx < f.size(); ++idx) out[idx] = f[idx][d];
  return out;
}

NodalField3D<double> product(const NodalField3D<double>& a, const NodalField3D<double>& b) {
  NodalField3D<double> out(a.degree());
  for (std::size_t idx = 0; idx < a.size(); ++idx) out[idx] = a[idx] * b[idx];
  return out;
}

void check_jacobian(const NodalField3D<double>& jac) {
  double max_abs = 0.0;
  for (double v : jac.values()) max_abs = std::max(max_abs, std::abs(v));
  for (std::size_t idx = 0; idx < jac.size(); ++idx) {
    if (!(jac[idx] > 1e-12 * max_abs)) {
      std::ostringstream msg;
      msg << "degenerate or inverted element: J = " << jac[idx] << " at node " << idx << " (max |J| = " << max_abs
          << ")";
      throw GeometryError(msg.str());
    }
  }
}

}  // namespace

std::string_view to_string(FaceId f) {
  switch (f) {
    case FaceId::minus_xi: return "-xi";
    case FaceId::plus_xi: return "+xi";
    case FaceId::minus_eta: return "-eta";
    case FaceId::plus_eta: return "+eta";
    case FaceId::minus_zeta: return "-zeta";
    case FaceId::plus_zeta: return "+zeta";
  }
  return "?";
}

std::size_t face_volume_index(std::size_t n, FaceId face, std::size_t p, std::size_t q) {
  const std::size_t fixed = face_is_plus(face) ? n - 1 : 0;
  switch (face_direction(face)) {
    case 0: return fixed + n * (p + n * q);
    case 1: return p + n * (fixed + n * q);
    default: return p + n * (q + n * fixed);
  }
}

Vec3 face_reference_point(FaceId face, double s, double t) {
  const double fixed = face_is_plus(face) ? 1.0 : -1.0;
  switch (face_direction(face)) {
    case 0: return {fixed, s, t};
    case 1: return {s, fixed, t};
    default: return {s, t, fixed};
  }
}

FaceDefinition faces_from_function(const std::function<Vec3(const Vec3&)>& map, const NodalBasis& basis) {
  const std::size_t n = basis.size();
  FaceDefinition def;
  def.degree = basis.degree();
  for (int f = 0; f < kNumFaces; ++f) {
    auto& pts = def.faces[f];
    pts.resize(n * n);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < n; ++p) {
        pts[p + n * q] = map(face_reference_point(face_from_index(f), basis.nodes()[p], basis.nodes()[q]));
      }
    }
  }
  return def;
}

FaceDefinition faces_from_corners(const HexCorners& corners, const NodalBasis& basis) {
  return faces_from_function([&](const Vec3& xi) { return hex_map(corners, xi); }, basis);
}

FaceDefinition resample_faces(const FaceDefinition& faces, const NodalBasis& basis) {
  if (faces.degree == basis.degree()) return faces;
  const NodalBasis source(faces.degree);
  const FaceEvaluator eval(faces, source);
  const std::size_t n = basis.size();
  FaceDefinition out;
  out.degree = basis.degree();
  for (int f = 0; f < kNumFaces; ++f) {
    out.faces[f].resize(n * n);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < n; ++p) {
        out.faces[f][p + n * q] = eval(face_from_index(f), basis.nodes()[p], basis.nodes()[q]);
      }
    }
  }
  return out;
}

HexCorners corners_of(const FaceDefinition& faces) {
  const auto m = static_cast<std::size_t>(faces.degree);
  return {faces.at(kGamma3, 0, 0), faces.at(kGamma3, m, 0), faces.at(kGamma3, m, m), faces.at(kGamma3, 0, m),
          faces.at(kGamma5, 0, 0), faces.at(kGamma5, m, 0), faces.at(kGamma5, m, m), faces.at(kGamma5, 0, m)};
}

double watertight_defect(const FaceDefinition& faces) {
  const auto n = static_cast<std::size_t>(faces.degree) + 1;
  double defect = 0.0;
  for (int f = 0; f < kNumFaces; ++f) {
    const auto face = face_from_index(f);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < n; ++p) {
        if (p != 0 && p != n - 1 && q != 0 && q != n - 1) continue;
        const std::size_t idx = face_volume_index(n, face, p, q);
        const std::array<std::size_t, 3> ijk{idx % n, (idx / n) % n, idx / (n * n)};
        for (int g = 0; g < kNumFaces; ++g) {
          if (g / 2 == f / 2) continue;
          const auto other = face_from_index(g);
          const int dir = face_direction(other);
          const std::size_t fixed = face_is_plus(other) ? n - 1 : 0;
          if (ijk[dir] != fixed) continue;
          const std::size_t a = dir == 0 ? ijk[1] : ijk[0];
          const std::size_t b = dir == 2 ? ijk[1] : ijk[2];
          defect = std::max(defect, norm(faces.at(face, p, q) - faces.at(other, a, b)));
        }
      }
    }
  }
  return defect;
}

Vec3 hex_map(const HexCorners& c, const Vec3& xi) {
  const double xm = 1.0 - xi.x, xp = 1.0 + xi.x;
  const double ym = 1.0 - xi.y, yp = 1.0 + xi.y;
  const double zm = 1.0 - xi.z, zp = 1.0 + xi.z;
  Vec3 r = (xm * ym * zm) * c[0];
  r += (xp * ym * zm) * c[1];
  r += (xp * yp * zm) * c[2];
  r += (xm * yp * zm) * c[3];
  r += (xm * ym * zp) * c[4];
  r += (xp * ym * zp) * c[5];
  r += (xp * yp * zp) * c[6];
  r += (xm * yp * zp) * c[7];
  return 0.125 * r;
}

Vec3 transfinite_map(const FaceDefinition& faces, const NodalBasis& face_basis, const Vec3& xi) {
  const FaceEvaluator g(faces, face_basis);
  const double x = xi.x, y = xi.y, z = xi.z;

  Vec3 sigma = (1.0 - x) * g(kGamma6, y, z);
  sigma += (1.0 + x) * g(kGamma4, y, z);
  sigma += (1.0 - y) * g(kGamma1, x, z);
  sigma += (1.0 + y) * g(kGamma2, x, z);
  sigma += (1.0 - z) * g(kGamma3, x, y);
  sigma += (1.0 + z) * g(kGamma5, x, y);
  sigma *= 0.5;

  auto c_xi_side = [&](double s) {
    return (1.0 - y) * g(kGamma1, s, z) + (1.0 + y) * g(kGamma2, s, z) + (1.0 - z) * g(kGamma3, s, y) +
           (1.0 + z) * g(kGamma5, s, y);
  };
  auto c_eta_side = [&](double s) {
    return (1.0 - x) * g(kGamma6, s, z) + (1.0 + x) * g(kGamma4, s, z) + (1.0 - z) * g(kGamma3, x, s) +
           (1.0 + z) * g(kGamma5, x, s);
  };
  auto c_zeta_side = [&](double s) {
    return (1.0 - y) * g(kGamma1, x, s) + (1.0 + y) * g(kGamma2, x, s) + (1.0 - x) * g(kGamma6, y, s) +
           (1.0 + x) * g(kGamma4, y, s);
  };
  const Vec3 c_xi = 0.25 * ((1.0 - x) * c_xi_side(-1.0) + (1.0 + x) * c_xi_side(1.0));
  const Vec3 c_eta = 0.25 * ((1.0 - y) * c_eta_side(-1.0) + (1.0 + y) * c_eta_side(1.0));
  const Vec3 c_zeta = 0.25 * ((1.0 - z) * c_zeta_side(-1.0) + (1.0 + z) * c_zeta_side(1.0));

  return sigma - 0.5 * (c_xi + c_eta + c_zeta) + hex_map(corners_of(faces), xi);
}

NodalField3D<Vec3> map_nodes(const FaceDefinition& faces, const NodalBasis& basis) {
  if (faces.degree != basis.degree()) {
    throw std::invalid_argument("map_nodes: face degree does not match the basis degree");
  }
  const std::size_t n = basis.size();
  const auto& r = basis.nodes();
  NodalField3D<Vec3> x(basis.degree());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) x(i, j, k) = transfinite_map(faces, basis, {r[i], r[j], r[k]});
    }
  }
  // Boundary nodes take the face data verbatim, so neighbors sharing a face see identical points.
  for (int f = 0; f < kNumFaces; ++f) {
    const auto face = face_from_index(f);
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t p = 0; p < n; ++p) x[face_volume_index(n, face, p, q)] = faces.at(face, p, q);
    }
  }
  return x;
}

std::array<NodalField3D<Vec3>, 3> covariant_basis(const NodalBasis& basis, const NodalField3D<Vec3>& x) {
  return spectral::tensor_gradient(basis, x);
}

CrossProductMetrics metrics_cross_product(const std::array<NodalField3D<Vec3>, 3>& a) {
  const int degree = a[0].degree();
  CrossProductMetrics m{{NodalField3D<Vec3>(degree), NodalField3D<Vec3>(degree), NodalField3D<Vec3>(degree)},
                        NodalField3D<double>(degree)};
  for (std::size_t idx = 0; idx < a[0].size(); ++idx) {
    m.ja[0][idx] = cross(a[1][idx], a[2][idx]);
    m.ja[1][idx] = cross(a[2][idx], a[0][idx]);
    m.ja[2][idx] = cross(a[0][idx], a[1][idx]);
    m.jacobian[idx] = dot(a[0][idx], m.ja[0][idx]);
  }
  check_jacobian(m.jacobian);
  return m;
}

std::array<NodalField3D<Vec3>, 3> metrics_curl_form(const NodalBasis& basis, const NodalField3D<Vec3>& x) {
  const int degree = x.degree();
  std::array<NodalField3D<double>, 3> coord{component(x, 0), component(x, 1), component(x, 2)};
  // The curl is translation invariant; working relative to the element centre keeps roundoff at the
  // scale of the element rather than of its distance from the origin.
  for (auto& c : coord) {
    double centre = 0.0;
    for (double v : c.values()) centre += v;
    centre /= static_cast<double>(c.size());
    for (double& v : c.values()) v -= centre;
  }
  // dcoord[c][dir] = d coord_c / d xi^dir
  std::array<std::array<NodalField3D<double>, 3>, 3> dcoord;
  for (int c = 0; c < 3; ++c) dcoord[c] = spectral::tensor_gradient(basis, coord[c]);

  std::array<NodalField3D<Vec3>, 3> ja{NodalField3D<Vec3>(degree), NodalField3D<Vec3>(degree),
                                       NodalField3D<Vec3>(degree)};
  for (int i = 0; i < 3; ++i) {
    const int j = (i + 1) % 3;
    const int k = (i + 2) % 3;
    for (int n = 0; n < 3; ++n) {
      // Cartesian component n uses the pair (A, B) = (X_{n+1}, X_{n+2}).
      const int a = (n + 1) % 3;
      const int b = (n + 2) % 3;
      const auto t1 = spectral::apply_derivative(basis, product(dcoord[a][j], coord[b]), k);
      const auto t2 = spectral::apply_derivative(basis, product(dcoord[a][k], coord[b]), j);
      for (std::size_t idx = 0; idx < t1.size(); ++idx) ja[i][idx][n] = t1[idx] - t2[idx];
    }
  }
  return ja;
}

double metric_identity_residual(const NodalBasis& basis, const std::array<NodalField3D<Vec3>, 3>& ja) {
  const auto div = spectral::tensor_divergence(basis, ja[0], ja[1], ja[2]);
  double r = 0.0;
  for (const auto& v : div.values()) r = std::max({r, std::abs(v.x), std::abs(v.y), std::abs(v.z)});
  return r;
}

FaceGeometry face_geometry(const ElementGeometry& geom, FaceId face) {
  const auto n = static_cast<std::size_t>(geom.degree) + 1;
  const int dir = face_direction(face);
  const double sign = face_is_plus(face) ? 1.0 : -1.0;
  FaceGeometry fg;
  fg.surface.resize(n * n);
  fg.normal.resize(n * n);
  for (std::size_t q = 0; q < n; ++q) {
    for (std::size_t p = 0; p < n; ++p) {
      const Vec3& ja = geom.ja[dir][face_volume_index(n, face, p, q)];
      const double s = norm(ja);
      if (!(s > 0.0)) {
        std::ostringstream msg;
        msg << "degenerate element: zero surface element on face " << to_string(face) << " at (" << p << ", " << q
            << ")";
        throw GeometryError(msg.str());
      }
      fg.surface[p + n * q] = s;
      fg.normal[p + n * q] = (sign / s) * ja;
    }
  }
  return fg;
}

ElementGeometry build_element_geometry(const NodalBasis& basis, NodalField3D<Vec3> x, MetricForm form) {
  if (x.degree() != basis.degree()) throw std::invalid_argument("build_element_geometry: degree mismatch");
  ElementGeometry g;
  g.degree = basis.degree();
  g.form = form;
  g.covariant = covariant_basis(basis, x);
  auto cross_metrics = metrics_cross_product(g.covariant);
  g.jacobian = std::move(cross_metrics.jacobian);
  g.ja = form == MetricForm::curl ? metrics_curl_form(basis, x) : std::move(cross_metrics.ja);
  g.x = std::move(x);
  for (int f = 0; f < kNumFaces; ++f) g.faces[f] = face_geometry(g, face_from_index(f));
  return g;
}

ElementGeometry build_element_geometry(const NodalBasis& basis, const FaceDefinition& faces, MetricForm form) {
  return build_element_geometry(basis, map_nodes(resample_faces(faces, basis), basis), form);
}

}  // namespace dgsem::geometry
