#pragma once

// One-dimensional Legendre/Gauss-Lobatto operators and the tensor-product
// discrete calculus on the reference cube [-1,1]^3.

#include <array>
#include <cassert>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace dgsem::spectral {

/// Largest polynomial degree accepted by the operator factory.
inline constexpr int kMaxDegree = 30;
/// Largest degree of a bare Gauss-Lobatto rule (over-resolved reference quadrature).
inline constexpr int kMaxQuadratureDegree = 2 * kMaxDegree + 8;

/// Dense row-major matrix. Only used for small (N+1)x(N+1) operators.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
  const std::vector<double>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

struct LegendreValue {
  double value;
  double derivative;
};

/// L_N(x) and L_N'(x) by the three-term recurrence.
LegendreValue legendre_eval(int degree, double x);

struct LobattoRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Legendre-Gauss-Lobatto nodes (ascending) and weights for degree N >= 1.
/// Interior nodes come from Newton iteration on (1-x^2) L_N'(x).
LobattoRule gauss_lobatto(int degree);

/// Nodal Lagrange basis on the LGL points of one degree. Immutable after
/// construction and safe to share across threads.
class NodalBasis {
 public:
  explicit NodalBasis(int degree);

  int degree() const { return degree_; }
  std::size_t size() const { return nodes_.size(); }

  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& barycentric_weights() const { return bary_; }

  /// D_jn = l_n'(x_j).
  const DenseMatrix& derivative() const { return derivative_; }
  /// Q = M D with the diagonal mass matrix M = diag(w).
  const DenseMatrix& sbp() const { return sbp_; }
  /// Diagonal of B = diag(-1, 0, ..., 0, 1).
  const std::vector<double>& boundary() const { return boundary_; }

  /// Value of the degree-N interpolant of nodal data at x (barycentric form).
  double interpolate(std::span<const double> values, double x) const;

  /// Lagrange basis values l_j(x), j = 0..N.
  std::vector<double> lagrange_values(double x) const;

  /// Rows are lagrange_values(targets[r]).
  DenseMatrix interpolation_matrix(std::span<const double> targets) const;

 private:
  int degree_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> bary_;
  DenseMatrix derivative_;
  DenseMatrix sbp_;
  std::vector<double> boundary_;
};

NodalBasis build_basis(int degree);

/// <U, V>_N = sum U_j V_j w_j.
double discrete_inner_product(const NodalBasis& basis, std::span<const double> u, std::span<const double> v);

/// sum f_j w_j.
double quadrature(const NodalBasis& basis, std::span<const double> f);

/// Interpolation (modal) coefficients C_k = <u, L_k>_N / ||L_k||_N^2, k = 0..N.
std::vector<double> aliasing_coefficients(const NodalBasis& basis, std::span<const double> u);

/// Nodal data on the (N+1)^3 tensor grid. Index (i,j,k) <-> (xi, eta, zeta), i fastest.
template <class T>
class NodalField3D {
 public:
  NodalField3D() = default;
  explicit NodalField3D(int degree, const T& init = T{})
      : degree_(degree), n_(static_cast<std::size_t>(degree) + 1), values_(n_ * n_ * n_, init) {}

  int degree() const { return degree_; }
  std::size_t points_per_direction() const { return n_; }
  std::size_t size() const { return values_.size(); }

  std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + n_ * (j + n_ * k); }
  T& operator()(std::size_t i, std::size_t j, std::size_t k) { return values_[index(i, j, k)]; }
  const T& operator()(std::size_t i, std::size_t j, std::size_t k) const { return values_[index(i, j, k)]; }
  T& operator[](std::size_t idx) { return values_[idx]; }
  const T& operator[](std::size_t idx) const { return values_[idx]; }

  std::vector<T>& values() { return values_; }
  const std::vector<T>& values() const { return values_; }

 private:
  int degree_ = 0;
  std::size_t n_ = 0;
  std::vector<T> values_;
};

/// Stride between consecutive points along reference direction `dir` (0, 1, 2).
inline std::size_t direction_stride(std::size_t n, int dir) {
  return dir == 0 ? 1 : (dir == 1 ? n : n * n);
}

/// Apply D along one reference direction: out_{..i..} = sum_n D_in U_{..n..}.
template <class T>
NodalField3D<T> apply_derivative(const NodalBasis& basis, const NodalField3D<T>& field, int dir) {
  assert(field.degree() == basis.degree());
  const std::size_t n = basis.size();
  const std::size_t stride = direction_stride(n, dir);
  const auto& d = basis.derivative();
  NodalField3D<T> out(field.degree());
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t idx = field.index(i, j, k);
        const std::size_t line_pos = dir == 0 ? i : (dir == 1 ? j : k);
        const std::size_t base = idx - line_pos * stride;
        T acc{};
        for (std::size_t m = 0; m < n; ++m) {
          acc += d(line_pos, m) * field[base + m * stride];
        }
        out[idx] = acc;
      }
    }
  }
  return out;
}

/// Spectral gradient of a nodal field: (d/dxi, d/deta, d/dzeta).
template <class T>
std::array<NodalField3D<T>, 3> tensor_gradient(const NodalBasis& basis, const NodalField3D<T>& field) {
  return {apply_derivative(basis, field, 0), apply_derivative(basis, field, 1), apply_derivative(basis, field, 2)};
}

/// Spectral divergence of a vector field given by its three reference components.
template <class T>
NodalField3D<T> tensor_divergence(const NodalBasis& basis, const NodalField3D<T>& f1, const NodalField3D<T>& f2,
                                  const NodalField3D<T>& f3) {
  auto out = apply_derivative(basis, f1, 0);
  const auto d2 = apply_derivative(basis, f2, 1);
  const auto d3 = apply_derivative(basis, f3, 2);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    out[idx] += d2[idx];
    out[idx] += d3[idx];
  }
  return out;
}

/// sum U_ijk V_ijk w_i w_j w_k.
double discrete_inner_product(const NodalBasis& basis, const NodalField3D<double>& u, const NodalField3D<double>& v);

}  // namespace dgsem::spectral
