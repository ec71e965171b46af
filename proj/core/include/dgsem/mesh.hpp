#pragma once

// Conforming hexahedral mesh topology, face orientation tables, built-in
// generators and the structured-text mesh file format.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dgsem/geometry.hpp"
#include "dgsem/types.hpp"

namespace dgsem::mesh {

using geometry::FaceDefinition;
using geometry::FaceId;
using geometry::HexCorners;

/// Orientation code 0..7 relating face-local node (p, q) on one side of an
/// interface to (p', q') on the other: bit 0 swaps (p, q), bit 1 reverses the
/// first resulting index, bit 2 reverses the second.
inline constexpr int kNumOrientations = 8;

struct FaceIndex {
  std::size_t p;
  std::size_t q;
};

FaceIndex orient(int code, std::size_t n, std::size_t p, std::size_t q);
int inverse_orientation(int code);

/// Finds the code with other[orient(code, p, q)] == mine[p, q] + offset to tolerance `tol`.
std::optional<int> match_orientation(const std::vector<Vec3>& mine, const std::vector<Vec3>& other, std::size_t n,
                                     const Vec3& offset, double tol = 1e-10);

enum class BoundaryKind { interior, periodic, dirichlet };

struct FaceConnection {
  BoundaryKind kind = BoundaryKind::dirichlet;
  int neighbor = -1;
  FaceId neighbor_face = FaceId::minus_xi;
  int orientation = 0;
};

struct ElementRecord {
  HexCorners corners{};
  std::optional<FaceDefinition> curved_faces;
  std::array<FaceConnection, geometry::kNumFaces> faces{};
};

/// Element set with face-to-face connectivity; face pairing must be involutive.
struct MeshTopology {
  std::vector<ElementRecord> elements;

  std::size_t size() const { return elements.size(); }
  /// Throws TopologyError if pairings are not involutive or orientations disagree.
  void validate() const;
};

/// Boundary faces of one element at the LGL points of `basis`.
FaceDefinition element_faces(const ElementRecord& element, const geometry::NodalBasis& basis);

/// Axis-aligned box [lo, hi] split into n[0] x n[1] x n[2] elements.
MeshTopology cartesian_box(std::array<int, 3> n, Vec3 lo, Vec3 hi, std::array<bool, 3> periodic);

/// Unit periodic box with X = xh + a (sin(pi y) sin(pi z), sin(pi x) sin(pi z), sin(pi x) sin(pi y)),
/// faces sampled isoparametrically at `face_degree`.
MeshTopology warped_box(int n_per_direction, double amplitude, int face_degree);

/// Connects elements by matching face node coordinates. Faces left unmatched become Dirichlet.
/// `periods` lists translations that identify periodic faces.
void connect_by_geometry(MeshTopology& mesh, const geometry::NodalBasis& basis, const std::vector<Vec3>& periods,
                         double tol = 1e-10);

void write_mesh(std::ostream& out, const MeshTopology& mesh);
MeshTopology read_mesh(std::istream& in);
MeshTopology read_mesh_file(const std::string& path);
void write_mesh_file(const std::string& path, const MeshTopology& mesh);

}  // namespace dgsem::mesh
