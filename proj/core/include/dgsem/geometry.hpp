#pragma once

// Hexahedral element mappings: transfinite interpolation with linear blending,
// covariant/contravariant metric terms, Jacobians, face normals and surface elements.

#include <array>
#include <functional>
#include <string_view>
#include <vector>

#include "dgsem/spectral.hpp"
#include "dgsem/types.hpp"

namespace dgsem::geometry {

using spectral::NodalBasis;
using spectral::NodalField3D;

/// Local faces of the reference cube. Face-local coordinates (p, q) are
/// (eta, zeta) on xi faces, (xi, zeta) on eta faces and (xi, eta) on zeta faces.
enum class FaceId : int { minus_xi = 0, plus_xi = 1, minus_eta = 2, plus_eta = 3, minus_zeta = 4, plus_zeta = 5 };

inline constexpr int kNumFaces = 6;

inline constexpr int face_direction(FaceId f) { return static_cast<int>(f) / 2; }
inline constexpr bool face_is_plus(FaceId f) { return static_cast<int>(f) % 2 == 1; }
inline constexpr FaceId face_from_index(int f) { return static_cast<FaceId>(f); }
std::string_view to_string(FaceId f);

/// Volume node index of face-local node (p, q).
std::size_t face_volume_index(std::size_t n, FaceId face, std::size_t p, std::size_t q);

/// Corners x1..x8 in the order (-,-,-), (+,-,-), (+,+,-), (-,+,-), (-,-,+), (+,-,+), (+,+,+), (-,+,+).
using HexCorners = std::array<Vec3, 8>;

/// Six boundary faces, each a degree-N tensor Lagrange surface on LGL points,
/// stored at index p + (N+1) q.
struct FaceDefinition {
  int degree = 0;
  std::array<std::vector<Vec3>, kNumFaces> faces;

  const Vec3& at(FaceId f, std::size_t p, std::size_t q) const {
    return faces[static_cast<int>(f)][p + static_cast<std::size_t>(degree + 1) * q];
  }
};

/// Reference-cube point on a face, for face-local coordinates (s, t).
Vec3 face_reference_point(FaceId face, double s, double t);

/// Straight-sided faces (bilinear in the corners).
FaceDefinition faces_from_corners(const HexCorners& corners, const NodalBasis& basis);

/// Samples an analytic map of the reference cube on the LGL face nodes.
FaceDefinition faces_from_function(const std::function<Vec3(const Vec3&)>& map, const NodalBasis& basis);

/// Re-samples faces of another degree onto the LGL points of `basis`.
FaceDefinition resample_faces(const FaceDefinition& faces, const NodalBasis& basis);

HexCorners corners_of(const FaceDefinition& faces);

/// Largest pointwise mismatch along the twelve shared edges.
double watertight_defect(const FaceDefinition& faces);

/// Evaluates X(xi) = Sigma - (C^xi + C^eta + C^zeta)/2 + X_H.
Vec3 transfinite_map(const FaceDefinition& faces, const NodalBasis& face_basis, const Vec3& xi);

/// Straight-sided hexahedron map X_H.
Vec3 hex_map(const HexCorners& corners, const Vec3& xi);

/// Mapping sampled at the volume LGL nodes of `basis` (which must match the face degree).
NodalField3D<Vec3> map_nodes(const FaceDefinition& faces, const NodalBasis& basis);

/// a_i = dX/dxi^i by spectral differentiation.
std::array<NodalField3D<Vec3>, 3> covariant_basis(const NodalBasis& basis, const NodalField3D<Vec3>& x);

struct CrossProductMetrics {
  std::array<NodalField3D<Vec3>, 3> ja;
  NodalField3D<double> jacobian;
};

/// Ja^i = a_j x a_k (cyclic), J = a_1 . (a_2 x a_3). Throws GeometryError if J is not positive.
CrossProductMetrics metrics_cross_product(const std::array<NodalField3D<Vec3>, 3>& covariant);

/// Curl-form contravariant vectors; their discrete divergence vanishes identically.
std::array<NodalField3D<Vec3>, 3> metrics_curl_form(const NodalBasis& basis, const NodalField3D<Vec3>& x);

/// max over nodes, i and Cartesian components of the discrete divergence of Ja^i.
double metric_identity_residual(const NodalBasis& basis, const std::array<NodalField3D<Vec3>, 3>& ja);

enum class MetricForm { curl, cross_product };

struct FaceGeometry {
  std::vector<double> surface;  // s_hat at face-local nodes
  std::vector<Vec3> normal;     // outward unit normal
};

/// Immutable per-element mapping data.
struct ElementGeometry {
  int degree = 0;
  MetricForm form = MetricForm::curl;
  NodalField3D<Vec3> x;
  std::array<NodalField3D<Vec3>, 3> covariant;
  std::array<NodalField3D<Vec3>, 3> ja;
  NodalField3D<double> jacobian;
  std::array<FaceGeometry, kNumFaces> faces;
};

/// Builds geometry from nodal mapping values (isoparametric).
ElementGeometry build_element_geometry(const NodalBasis& basis, NodalField3D<Vec3> x,
                                       MetricForm form = MetricForm::curl);
/// Builds geometry from boundary faces through the transfinite map.
ElementGeometry build_element_geometry(const NodalBasis& basis, const FaceDefinition& faces,
                                       MetricForm form = MetricForm::curl);

/// s_hat = |Ja^i| and n_hat = +-Ja^i / s_hat on one face. Throws GeometryError if s_hat vanishes.
FaceGeometry face_geometry(const ElementGeometry& geom, FaceId face);

}  // namespace dgsem::geometry
