#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace dgsem {

/// Small Cartesian vector used for points, basis vectors and normals.
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  constexpr double& operator[](std::size_t d) { return d == 0 ? x : (d == 1 ? y : z); }
  constexpr double operator[](std::size_t d) const { return d == 0 ? x : (d == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  constexpr Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
  constexpr Vec3& operator*=(double s) {
    x *= s;
    y *= s;
    z *= s;
    return *this;
  }
};

constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline constexpr std::size_t kNumVars = 5;

/// Five-component conservative state (rho, rho v1, rho v2, rho v3, rho E), or any
/// other 5-vector living in the same space (fluxes, entropy variables, residuals).
using State = std::array<double, kNumVars>;

/// Cartesian flux triple: one 5-vector per spatial direction.
using FluxTriple = std::array<State, 3>;

inline State& operator+=(State& a, const State& b) {
  for (std::size_t v = 0; v < kNumVars; ++v) a[v] += b[v];
  return a;
}
inline State& operator-=(State& a, const State& b) {
  for (std::size_t v = 0; v < kNumVars; ++v) a[v] -= b[v];
  return a;
}
inline State& operator*=(State& a, double s) {
  for (auto& c : a) c *= s;
  return a;
}
inline State operator+(State a, const State& b) { return a += b; }
inline State operator-(State a, const State& b) { return a -= b; }
inline State operator*(double s, State a) { return a *= s; }
inline double dot(const State& a, const State& b) {
  double s = 0.0;
  for (std::size_t v = 0; v < kNumVars; ++v) s += a[v] * b[v];
  return s;
}

/// Contract a Cartesian flux triple with a (not necessarily unit) direction.
inline State contract(const FluxTriple& f, const Vec3& n) {
  State r{};
  for (std::size_t v = 0; v < kNumVars; ++v) r[v] = f[0][v] * n.x + f[1][v] * n.y + f[2][v] * n.z;
  return r;
}

/// Raised when density or pressure is not strictly positive.
class PositivityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for degenerate or inverted element mappings (J or surface element not positive).
class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for inconsistent mesh connectivity or malformed mesh files.
class TopologyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed run configurations; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace dgsem
