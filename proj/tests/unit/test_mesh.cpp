#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "dgsem/mesh.hpp"
#include "support.hpp"

using namespace dgsem;
using namespace dgsem::mesh;
using geometry::FaceId;

TEST(Orientation, CodesAreBijectionsAndInversesUndoThem) {
  const std::size_t n = 4;
  for (int code = 0; code < kNumOrientations; ++code) {
    std::vector<int> seen(n * n, 0);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p) {
        const auto a = orient(code, n, p, q);
        ++seen[a.p + n * a.q];
        const auto back = orient(inverse_orientation(code), n, a.p, a.q);
        EXPECT_EQ(back.p, p);
        EXPECT_EQ(back.q, q);
      }
    for (int s : seen) EXPECT_EQ(s, 1);
    EXPECT_EQ(inverse_orientation(inverse_orientation(code)), code);
  }
  EXPECT_EQ(orient(0, 3, 1, 2).p, 1u);
  EXPECT_EQ(orient(1, 3, 1, 2).p, 2u);
  EXPECT_EQ(orient(2, 3, 0, 2).p, 2u);
  EXPECT_EQ(orient(4, 3, 0, 0).q, 2u);
}

TEST(Orientation, MatchFindsRotatedFace) {
  const std::size_t n = 3;
  std::vector<Vec3> mine(n * n), other(n * n);
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p) mine[p + n * q] = {0.0, double(p), double(q) * 1.7};
  for (int code = 0; code < kNumOrientations; ++code) {
    const Vec3 shift{1, 0, 0};
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p) {
        const auto a = orient(code, n, p, q);
        other[a.p + n * a.q] = mine[p + n * q] + shift;
      }
    auto found = match_orientation(mine, other, n, shift);
    ASSERT_TRUE(found);
    EXPECT_EQ(*found, code);
    EXPECT_FALSE(match_orientation(mine, other, n, Vec3{}));
  }
}

TEST(Generators, CartesianBoxConnectivity) {
  auto m = cartesian_box({2, 3, 1}, {0, 0, 0}, {2, 3, 1}, {true, false, true});
  ASSERT_EQ(m.size(), 6u);
  EXPECT_NO_THROW(m.validate());
  const auto& f = m.elements[0].faces;
  EXPECT_EQ(f[1].kind, BoundaryKind::interior);
  EXPECT_EQ(f[1].neighbor, 1);
  EXPECT_EQ(f[0].kind, BoundaryKind::periodic);
  EXPECT_EQ(f[0].neighbor, 1);
  EXPECT_EQ(f[2].kind, BoundaryKind::dirichlet);
  EXPECT_EQ(f[4].kind, BoundaryKind::periodic);
  EXPECT_EQ(f[4].neighbor, 0);
  EXPECT_EQ(f[4].neighbor_face, FaceId::plus_zeta);
  EXPECT_THROW(cartesian_box({0, 1, 1}, {0, 0, 0}, {1, 1, 1}, {true, true, true}), std::invalid_argument);
}

TEST(Generators, WarpedBoxIsWatertightAndPeriodic) {
  auto m = warped_box(3, 0.05, 4);
  EXPECT_NO_THROW(m.validate());
  for (const auto& el : m.elements) {
    ASSERT_TRUE(el.curved_faces);
    EXPECT_LT(geometry::watertight_defect(*el.curved_faces), 1e-14);
    for (const auto& c : el.faces) EXPECT_NE(c.kind, BoundaryKind::dirichlet);
  }
}

TEST(Connect, RecoversStructuredConnectivity) {
  auto ref = cartesian_box({2, 2, 2}, {0, 0, 0}, {1, 1, 1}, {true, true, true});
  auto m = ref;
  connect_by_geometry(m, geometry::NodalBasis(2), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  // With two elements per direction each face pairs with the same neighbour, only the face roles match.
  for (std::size_t e = 0; e < m.size(); ++e)
    for (int f = 0; f < 6; ++f) {
      EXPECT_EQ(m.elements[e].faces[f].neighbor, ref.elements[e].faces[f].neighbor);
      EXPECT_EQ(m.elements[e].faces[f].neighbor_face, ref.elements[e].faces[f].neighbor_face);
      EXPECT_EQ(m.elements[e].faces[f].orientation, 0);
    }
  EXPECT_NO_THROW(m.validate());
}

TEST(Connect, RotatedElementsGetNontrivialOrientations) {
  auto m = testkit::rotated_box(2);
  EXPECT_NO_THROW(m.validate());
  bool nontrivial = false;
  for (const auto& el : m.elements)
    for (const auto& c : el.faces) {
      EXPECT_NE(c.kind, BoundaryKind::dirichlet);
      nontrivial = nontrivial || c.orientation != 0;
    }
  EXPECT_TRUE(nontrivial);
}

TEST(Connect, UnmatchedFacesBecomeDirichlet) {
  auto m = cartesian_box({1, 1, 1}, {0, 0, 0}, {1, 1, 1}, {true, true, true});
  connect_by_geometry(m, geometry::NodalBasis(2), {});
  for (const auto& c : m.elements[0].faces) EXPECT_EQ(c.kind, BoundaryKind::dirichlet);
}

TEST(Validate, DetectsBrokenPairings) {
  auto base = cartesian_box({2, 1, 1}, {0, 0, 0}, {2, 1, 1}, {false, false, false});
  {
    auto m = base;
    m.elements[0].faces[1].neighbor = 5;
    EXPECT_THROW(m.validate(), TopologyError);
  }
  {
    auto m = base;
    m.elements[1].faces[0].neighbor_face = FaceId::plus_eta;
    EXPECT_THROW(m.validate(), TopologyError);
  }
  {
    auto m = base;
    m.elements[0].faces[1].orientation = 1;
    EXPECT_THROW(m.validate(), TopologyError);
  }
  {
    auto m = base;
    m.elements[0].faces[1].orientation = 9;
    EXPECT_THROW(m.validate(), TopologyError);
  }
  try {
    auto m = base;
    m.elements[0].faces[1].neighbor = 5;
    m.validate();
  } catch (const TopologyError& e) {
    EXPECT_NE(std::string(e.what()).find("element 0"), std::string::npos);
  }
}

TEST(MeshIo, RoundTripStraightAndCurved) {
  for (auto m : {cartesian_box({2, 1, 2}, {0, 0, 0}, {1, 1, 1}, {true, false, true}), warped_box(2, 0.05, 3),
                 testkit::rotated_box(2)}) {
    std::stringstream ss;
    write_mesh(ss, m);
    auto back = read_mesh(ss);
    ASSERT_EQ(back.size(), m.size());
    for (std::size_t e = 0; e < m.size(); ++e) {
      for (int c = 0; c < 8; ++c) EXPECT_EQ(norm(back.elements[e].corners[c] - m.elements[e].corners[c]), 0.0);
      ASSERT_EQ(bool(back.elements[e].curved_faces), bool(m.elements[e].curved_faces));
      if (m.elements[e].curved_faces) {
        for (int f = 0; f < 6; ++f)
          for (std::size_t i = 0; i < m.elements[e].curved_faces->faces[f].size(); ++i)
            EXPECT_EQ(norm(back.elements[e].curved_faces->faces[f][i] - m.elements[e].curved_faces->faces[f][i]), 0.0);
      }
      for (int f = 0; f < 6; ++f) {
        const auto& a = back.elements[e].faces[f];
        const auto& b = m.elements[e].faces[f];
        EXPECT_EQ(a.kind, b.kind);
        if (b.kind != BoundaryKind::dirichlet) {
          EXPECT_EQ(a.neighbor, b.neighbor);
          EXPECT_EQ(a.neighbor_face, b.neighbor_face);
          EXPECT_EQ(a.orientation, b.orientation);
        }
      }
    }
  }
}

TEST(MeshIo, FileRoundTripAndErrors) {
  const auto path = (std::filesystem::temp_directory_path() / "dgsem_test_mesh.txt").string();
  auto m = warped_box(2, 0.04, 2);
  write_mesh_file(path, m);
  EXPECT_EQ(read_mesh_file(path).size(), m.size());
  std::filesystem::remove(path);
  EXPECT_THROW(read_mesh_file("/nonexistent/mesh.txt"), TopologyError);
  for (const char* bad : {"", "dgsem-mesh 2\n", "dgsem-mesh 1\nelements 0\n", "dgsem-mesh 1\nelements 1\nface_degree 0\nelement 0\ncorners\n0 0 0\n",
                          "dgsem-mesh 1\nelements x\n"}) {
    std::istringstream in(bad);
    EXPECT_THROW(read_mesh(in), TopologyError) << bad;
  }
}
