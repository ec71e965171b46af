#include "dgsem/spectral.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace dgsem::spectral {

namespace {

void check_degree(int degree, int min_degree, int max_degree) {
  if (degree < min_degree || degree > max_degree) {
    throw std::invalid_argument("polynomial degree " + std::to_string(degree) + " outside [" +
                                std::to_string(min_degree) + ", " + std::to_string(max_degree) + "]");
  }
}

}  // namespace

LegendreValue legendre_eval(int degree, double x) {
  if (degree < 0) throw std::invalid_argument("Legendre degree must be non-negative");
  if (degree == 0) return {1.0, 0.0};
  double l_prev = 1.0;
  double l_curr = x;
  double dl_prev = 0.0;
  double dl_curr = 1.0;
  for (int k = 2; k <= degree; ++k) {
    const double kd = static_cast<double>(k);
    const double l_next = ((2.0 * kd - 1.0) * x * l_curr - (kd - 1.0) * l_prev) / kd;
    const double dl_next = dl_prev + (2.0 * kd - 1.0) * l_curr;
    l_prev = l_curr;
    l_curr = l_next;
    dl_prev = dl_curr;
    dl_curr = dl_next;
  }
  return {l_curr, dl_curr};
}

LobattoRule gauss_lobatto(int degree) {
  check_degree(degree, 1, kMaxQuadratureDegree);
  const auto n = static_cast<std::size_t>(degree);
  const double nn1 = static_cast<double>(degree) * static_cast<double>(degree + 1);
  LobattoRule rule;
  rule.nodes.assign(n + 1, 0.0);
  rule.weights.assign(n + 1, 0.0);
  rule.nodes.front() = -1.0;
  rule.nodes.back() = 1.0;

  constexpr double tol = 4.0 * std::numeric_limits<double>::epsilon();
  constexpr int max_iter = 50;
  for (std::size_t j = 1; j < n; ++j) {
    double x = -std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(degree));
    bool converged = false;
    for (int it = 0; it < max_iter; ++it) {
      const auto [l, dl] = legendre_eval(degree, x);
      // q = (1-x^2) L_N', q' = -N(N+1) L_N from the Legendre equation.
      const double delta = (1.0 - x * x) * dl / (nn1 * l);
      x += delta;
      if (std::abs(delta) <= tol * std::max(1.0, std::abs(x))) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      throw std::runtime_error("Gauss-Lobatto Newton iteration did not converge for node " + std::to_string(j) +
                               " at degree " + std::to_string(degree));
    }
    rule.nodes[j] = x;
  }
  // Enforce exact symmetry of the node set.
  for (std::size_t j = 0; j <= n / 2; ++j) {
    const double s = 0.5 * (rule.nodes[n - j] - rule.nodes[j]);
    rule.nodes[j] = -s;
    rule.nodes[n - j] = s;
  }
  if (n % 2 == 0) rule.nodes[n / 2] = 0.0;

  for (std::size_t j = 0; j <= n; ++j) {
    const double l = legendre_eval(degree, rule.nodes[j]).value;
    rule.weights[j] = 2.0 / (nn1 * l * l);
  }
  return rule;
}

NodalBasis::NodalBasis(int degree) : degree_(degree) {
  check_degree(degree, 1, kMaxDegree);
  auto rule = gauss_lobatto(degree);
  nodes_ = std::move(rule.nodes);
  weights_ = std::move(rule.weights);
  const std::size_t n = nodes_.size();

  bary_.assign(n, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) bary_[j] *= nodes_[j] - nodes_[k];
    }
    bary_[j] = 1.0 / bary_[j];
  }

  derivative_ = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double diag = 0.0;
    for (std::size_t m = 0; m < n; ++m) {
      if (m == j) continue;
      const double djm = (bary_[m] / bary_[j]) / (nodes_[j] - nodes_[m]);
      derivative_(j, m) = djm;
      diag -= djm;
    }
    derivative_(j, j) = diag;
  }

  sbp_ = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t m = 0; m < n; ++m) sbp_(j, m) = weights_[j] * derivative_(j, m);
  }

  boundary_.assign(n, 0.0);
  boundary_.front() = -1.0;
  boundary_.back() = 1.0;
}

double NodalBasis::interpolate(std::span<const double> values, double x) const {
  assert(values.size() == nodes_.size());
  double num = 0.0;
  double den = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    const double diff = x - nodes_[j];
    if (diff == 0.0) return values[j];
    const double t = bary_[j] / diff;
    num += t * values[j];
    den += t;
  }
  return num / den;
}

std::vector<double> NodalBasis::lagrange_values(double x) const {
  const std::size_t n = nodes_.size();
  std::vector<double> l(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    if (x == nodes_[j]) {
      l[j] = 1.0;
      return l;
    }
  }
  double den = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    l[j] = bary_[j] / (x - nodes_[j]);
    den += l[j];
  }
  for (auto& v : l) v /= den;
  return l;
}

DenseMatrix NodalBasis::interpolation_matrix(std::span<const double> targets) const {
  DenseMatrix m(targets.size(), nodes_.size());
  for (std::size_t r = 0; r < targets.size(); ++r) {
    const auto l = lagrange_values(targets[r]);
    for (std::size_t c = 0; c < l.size(); ++c) m(r, c) = l[c];
  }
  return m;
}

NodalBasis build_basis(int degree) { return NodalBasis(degree); }

double discrete_inner_product(const NodalBasis& basis, std::span<const double> u, std::span<const double> v) {
  if (u.size() != basis.size() || v.size() != basis.size()) {
    throw std::invalid_argument("discrete_inner_product: degree mismatch");
  }
  double s = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) s += u[j] * v[j] * basis.weights()[j];
  return s;
}

double quadrature(const NodalBasis& basis, std::span<const double> f) {
  if (f.size() != basis.size()) throw std::invalid_argument("quadrature: degree mismatch");
  double s = 0.0;
  for (std::size_t j = 0; j < basis.size(); ++j) s += f[j] * basis.weights()[j];
  return s;
}

std::vector<double> aliasing_coefficients(const NodalBasis& basis, std::span<const double> u) {
  const std::size_t n = basis.size();
  if (u.size() != n) throw std::invalid_argument("aliasing_coefficients: degree mismatch");
  std::vector<double> coeffs(n, 0.0);
  std::vector<double> lk(n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) lk[j] = legendre_eval(static_cast<int>(k), basis.nodes()[j]).value;
    coeffs[k] = discrete_inner_product(basis, u, lk) / discrete_inner_product(basis, lk, lk);
  }
  return coeffs;
}

double discrete_inner_product(const NodalBasis& basis, const NodalField3D<double>& u, const NodalField3D<double>& v) {
  if (u.degree() != basis.degree() || v.degree() != basis.degree()) {
    throw std::invalid_argument("discrete_inner_product: degree mismatch");
  }
  const std::size_t n = basis.size();
  const auto& w = basis.weights();
  double s = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t i = 0; i < n; ++i) s += u(i, j, k) * v(i, j, k) * w[i] * w[j] * w[k];
    }
  }
  return s;
}

}  // namespace dgsem::spectral
