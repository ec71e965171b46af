#pragma once

#include <algorithm>
#include <cmath>
#include <random>

#include "dgsem/physics.hpp"
#include "dgsem/types.hpp"

namespace dgsem::testkit {

inline physics::GasModel default_gas() { return physics::GasModel{}; }

/// Random admissible state: rho in [0.5, 2], |v_i| <= 1, p in [0.5, 2].
inline State random_state(std::mt19937_64& rng, const physics::GasModel& gas) {
  std::uniform_real_distribution<double> pos(0.5, 2.0), vel(-1.0, 1.0);
  const double rho = pos(rng);
  const Vec3 v{vel(rng), vel(rng), vel(rng)};
  return physics::conservative_from_primitive({rho, v, pos(rng)}, gas);
}

inline double max_abs_diff(const State& a, const State& b) {
  double m = 0.0;
  for (std::size_t v = 0; v < kNumVars; ++v) m = std::max(m, std::abs(a[v] - b[v]));
  return m;
}

inline double max_abs(const State& a) {
  double m = 0.0;
  for (double c : a) m = std::max(m, std::abs(c));
  return m;
}

}  // namespace dgsem::testkit

#include "dgsem/mesh.hpp"

namespace dgsem::testkit {

inline std::array<int, 3> corner_signs(int c) {
  const int sx = (c == 1 || c == 2 || c == 5 || c == 6) ? 1 : -1;
  const int sy = (c == 2 || c == 3 || c == 6 || c == 7) ? 1 : -1;
  return {sx, sy, c >= 4 ? 1 : -1};
}

inline int corner_from_signs(std::array<int, 3> s) {
  for (int c = 0; c < 8; ++c)
    if (corner_signs(c) == s) return c;
  return -1;
}

/// Relabels the local axes of an element by a proper rotation: cyclic shift then a quarter turn
/// about the new third axis, chosen by `variant` (0..3). The physical element is unchanged.
inline void rotate_element_axes(mesh::ElementRecord& el, int variant) {
  const auto old = el.corners;
  for (int c = 0; c < 8; ++c) {
    const auto s = corner_signs(c);
    std::array<int, 3> o{};
    switch (variant % 4) {
      case 0: o = {s[0], s[1], s[2]}; break;
      case 1: o = {-s[1], s[0], s[2]}; break;     // quarter turn about zeta
      case 2: o = {s[1], s[2], s[0]}; break;      // cyclic axis shift
      default: o = {s[2], -s[1], s[0]}; break;    // swap xi/zeta with eta reversed
    }
    el.corners[c] = old[corner_from_signs(o)];
  }
  el.curved_faces.reset();
}

/// Periodic box [0,1]^3 of n^3 straight elements, every element's local axes rotated, connected by geometry.
inline mesh::MeshTopology rotated_box(int n, int degree_for_matching = 2) {
  auto m = mesh::cartesian_box({n, n, n}, {0, 0, 0}, {1, 1, 1}, {true, true, true});
  for (std::size_t e = 0; e < m.elements.size(); ++e) rotate_element_axes(m.elements[e], static_cast<int>(e % 4));
  mesh::connect_by_geometry(m, geometry::NodalBasis(degree_for_matching), {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}});
  return m;
}

}  // namespace dgsem::testkit
