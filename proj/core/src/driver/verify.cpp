#include "dgsem/driver/verify.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "dgsem/driver/cases.hpp"
#include "dgsem/fluxes.hpp"
#include "dgsem/solver.hpp"

namespace dgsem::driver {

namespace {

constexpr std::array<std::string_view, 5> kSuites{"spectral", "geometry", "fluxes", "solver", "all"};

class Checks {
 public:
  explicit Checks(std::vector<CheckResult>& out) : out_(out) {}
  void below(const std::string& suite, const std::string& name, double value, double tol) {
    out_.push_back({suite, name, value, tol, value < tol});
  }
  void above(const std::string& suite, const std::string& name, double value, double tol) {
    out_.push_back({suite, name, value, tol, value > tol});
  }

 private:
  std::vector<CheckResult>& out_;
};

State random_state(std::mt19937_64& rng, const physics::GasModel& gas) {
  std::uniform_real_distribution<double> rho(0.5, 2.0), vel(-1.0, 1.0), p(0.5, 2.0);
  const double r = rho(rng);
  const Vec3 v{vel(rng), vel(rng), vel(rng)};
  return physics::conservative_from_primitive({r, v, p(rng)}, gas);
}

double monomial_integral(int p) { return p % 2 == 1 ? 0.0 : 2.0 / (p + 1); }

void spectral_suite(Checks& c, std::mt19937_64& rng) {
  const std::string s = "spectral";
  double sbp = 0.0, rows = 0.0, corners = 0.0, columns = 0.0;
  for (int n = 1; n <= 15; ++n) {
    const spectral::NodalBasis b(n);
    const auto& q = b.sbp();
    const auto& d = b.derivative();
    const std::size_t m = b.size();
    for (std::size_t i = 0; i < m; ++i) {
      double row = 0.0, col = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        const double bij = (i == j) ? b.boundary()[i] : 0.0;
        sbp = std::max(sbp, std::abs(q(i, j) + q(j, i) - bij));
        row += d(i, j);
        col += q(j, i);
      }
      rows = std::max(rows, std::abs(row));
      const double expected_col = i == 0 ? -1.0 : (i == m - 1 ? 1.0 : 0.0);
      columns = std::max(columns, std::abs(col - expected_col));
      const double expected_diag = i == 0 ? -0.5 : (i == m - 1 ? 0.5 : 0.0);
      corners = std::max(corners, std::abs(q(i, i) - expected_diag));
    }
  }
  c.below(s, "max |Q + Q^T - B|, N = 1..15", sbp, 1e-12);
  c.below(s, "max |D row sum|, N = 1..15", rows, 1e-13);
  c.below(s, "max |Q diagonal - (-1/2, 0, .., 1/2)|, N = 1..15", corners, 1e-12);
  c.below(s, "max |Q column sum - (-1, 0, .., 1)|, N = 1..15", columns, 1e-12);

  double exact_err = 0.0, weight_sum = 0.0;
  double boundary_gap = 1e300;
  for (int n = 1; n <= 10; ++n) {
    const spectral::NodalBasis b(n);
    const auto& w = b.weights();
    weight_sum = std::max(weight_sum, std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 2.0));
    for (int p = 0; p <= 2 * n; ++p) {
      std::vector<double> f(b.size());
      for (std::size_t j = 0; j < b.size(); ++j) f[j] = std::pow(b.nodes()[j], p);
      const double err = std::abs(spectral::quadrature(b, f) - monomial_integral(p));
      if (p <= 2 * n - 1) exact_err = std::max(exact_err, err);
      if (p == 2 * n && n <= 5) boundary_gap = std::min(boundary_gap, err);
    }
  }
  c.below(s, "quadrature error for x^p, p <= 2N-1, N <= 10", exact_err, 1e-12);
  c.below(s, "|sum w - 2|, N <= 10", weight_sum, 1e-13);
  c.above(s, "smallest quadrature error for x^2N, N <= 5", boundary_gap, 1e-3);
  {
    const spectral::NodalBasis b(1);
    const std::vector<double> f{1.0, 1.0};
    c.below(s, "N = 1, x^2: |quadrature - exact - 4/3|", std::abs(spectral::quadrature(b, f) - 2.0 / 3.0 - 4.0 / 3.0),
            1e-12);
    const auto coeff = spectral::aliasing_coefficients(b, f);
    c.below(s, "N = 1, u = x^2: |C_0 - 1/3 - 2/3|", std::abs(coeff[0] - 1.0 / 3.0 - 2.0 / 3.0), 1e-12);
  }

  // Summation by parts for random polynomials.
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double ibp = 0.0;
  for (int n = 1; n <= 15; ++n) {
    const spectral::NodalBasis b(n);
    const std::size_t m = b.size();
    std::vector<double> u(m), v(m), du(m, 0.0), dv(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      u[j] = dist(rng);
      v[j] = dist(rng);
    }
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        du[i] += b.derivative()(i, j) * u[j];
        dv[i] += b.derivative()(i, j) * v[j];
      }
    const double lhs = spectral::discrete_inner_product(b, u, dv) + spectral::discrete_inner_product(b, du, v);
    const double rhs = u[m - 1] * v[m - 1] - u[0] * v[0];
    ibp = std::max(ibp, std::abs(lhs - rhs));
  }
  c.below(s, "summation by parts on random polynomials, N = 1..15", ibp, 1e-12);

  // Norm equivalence ||U|| <= ||U||_N <= sqrt(2 + 1/N) ||U||.
  double worst_low = 1e300, worst_high = -1e300;
  for (int n = 1; n <= 12; ++n) {
    const spectral::NodalBasis b(n);
    const auto fine = spectral::gauss_lobatto(2 * n + 8);
    const auto interp = b.interpolation_matrix(fine.nodes);
    std::vector<double> u(b.size());
    for (auto& x : u) x = dist(rng);
    double exact = 0.0;
    for (std::size_t r = 0; r < fine.nodes.size(); ++r) {
      double val = 0.0;
      for (std::size_t j = 0; j < b.size(); ++j) val += interp(r, j) * u[j];
      exact += fine.weights[r] * val * val;
    }
    const double discrete = std::sqrt(spectral::discrete_inner_product(b, u, u));
    exact = std::sqrt(exact);
    worst_low = std::min(worst_low, discrete / exact - 1.0);
    worst_high = std::max(worst_high, discrete / exact - std::sqrt(2.0 + 1.0 / n));
  }
  c.above(s, "norm equivalence lower bound: min ||U||_N/||U|| - 1", worst_low, -1e-12);
  c.below(s, "norm equivalence upper bound: max ||U||_N/||U|| - sqrt(2+1/N)", worst_high, 1e-12);
}

void geometry_suite(Checks& c, unsigned threads) {
  const std::string s = "geometry";
  const auto mesh = mesh::warped_box(4, 0.05, 4);
  const solver::Discretization curl(mesh, 4, geometry::MetricForm::curl, threads);
  double res_curl = 0.0, res_cross = 0.0, closed = 0.0, j_min = 1e300;
  for (std::size_t e = 0; e < curl.num_elements(); ++e) {
    const auto& g = curl.element(e);
    res_curl = std::max(res_curl, geometry::metric_identity_residual(curl.basis(), g.ja));
    const auto cross = geometry::metrics_cross_product(g.covariant);
    res_cross = std::max(res_cross, geometry::metric_identity_residual(curl.basis(), cross.ja));
    for (double j : g.jacobian.values()) j_min = std::min(j_min, j);
    // Closed-surface identity: sum over faces of n s_hat w_p w_q vanishes.
    Vec3 total{};
    const auto& w = curl.basis().weights();
    const std::size_t n = curl.basis().size();
    for (const auto& face : g.faces) {
      for (std::size_t l = 0; l < face.surface.size(); ++l) {
        total += (w[l % n] * w[l / n] * face.surface[l]) * face.normal[l];
      }
    }
    closed = std::max(closed, norm(total));
  }
  c.below(s, "curl-form metric identity residual, warped 4^3, N = 4", res_curl, 1e-12);
  c.above(s, "cross-product residual / curl-form residual", res_cross / std::max(res_curl, 1e-300), 1e3);
  c.below(s, "closed-surface identity |sum n s_hat w|", closed, 1e-12);
  c.above(s, "minimum Jacobian on the warped mesh", j_min, 0.0);
  c.below(s, "surface element mismatch across interfaces", curl.max_interface_mismatch(), 1e-12);
  double defect = 0.0;
  for (const auto& el : mesh.elements) {
    defect = std::max(defect, geometry::watertight_defect(mesh::element_faces(el, curl.basis())));
  }
  c.below(s, "watertight defect of element faces", defect, 1e-12);

  // Straight-sided hexahedron: the transfinite map reduces to the trilinear map.
  const geometry::HexCorners corners{Vec3{0, 0, 0}, Vec3{1.2, 0.1, 0}, Vec3{1.1, 1.3, 0.2}, Vec3{-0.1, 1, 0},
                                     Vec3{0, 0.1, 1},  Vec3{1, 0, 1.1},  Vec3{1.2, 1.1, 1},   Vec3{0.1, 0.9, 1.2}};
  const spectral::NodalBasis b4(4);
  const auto faces = geometry::faces_from_corners(corners, b4);
  double tfi = 0.0;
  for (double x : {-1.0, -0.3, 0.45, 1.0})
    for (double y : {-0.8, 0.1, 1.0})
      for (double z : {-1.0, 0.6}) {
        tfi = std::max(tfi, norm(geometry::transfinite_map(faces, b4, {x, y, z}) - geometry::hex_map(corners, {x, y, z})));
      }
  c.below(s, "transfinite map of a straight-sided hex equals X_H", tfi, 1e-13);
}

void fluxes_suite(Checks& c, std::mt19937_64& rng) {
  const std::string s = "fluxes";
  const physics::GasModel gas;
  double sym = 0.0, cons = 0.0, tadmor = 0.0, diss = -1e300;
  for (int trial = 0; trial < 10000; ++trial) {
    const State a = random_state(rng, gas);
    const State b = random_state(rng, gas);
    for (const auto& flux : fluxes::registered_two_point_fluxes()) {
      const auto fab = flux.evaluate(a, b, gas);
      const auto fba = flux.evaluate(b, a, gas);
      const auto faa = flux.evaluate(a, a, gas);
      const auto fa = physics::advective_flux(a, gas);
      for (std::size_t d = 0; d < 3; ++d)
        for (std::size_t v = 0; v < kNumVars; ++v) {
          const double scale = std::max(1.0, std::abs(fab[d][v]));
          sym = std::max(sym, std::abs(fab[d][v] - fba[d][v]) / scale);
          cons = std::max(cons, std::abs(faa[d][v] - fa[d][v]) / std::max(1.0, std::abs(fa[d][v])));
        }
    }
    const auto f = fluxes::ec_flux(a, b, gas);
    const State wa = physics::entropy_variables(a, gas);
    const State wb = physics::entropy_variables(b, gas);
    const Vec3 psi_a = physics::entropy_potential(a, gas);
    const Vec3 psi_b = physics::entropy_potential(b, gas);
    const State jump = wb - wa;
    for (std::size_t d = 0; d < 3; ++d) {
      double scale = 1.0;
      for (std::size_t v = 0; v < kNumVars; ++v) scale = std::max(scale, std::abs(jump[v] * f[d][v]));
      tadmor = std::max(tadmor, std::abs(dot(jump, f[d]) - (psi_b[d] - psi_a[d])) / scale);
    }
    const Vec3 n{1.0 / std::sqrt(3.0), 1.0 / std::sqrt(3.0), -1.0 / std::sqrt(3.0)};
    const State llf = fluxes::surface_flux_advective(a, b, n, gas, fluxes::Dissipation::llf);
    const State none = fluxes::surface_flux_advective(a, b, n, gas, fluxes::Dissipation::none);
    diss = std::max(diss, dot(jump, llf - none));
  }
  c.below(s, "two-point flux symmetry, 10^4 random pairs", sym, 1e-12);
  c.below(s, "two-point flux consistency, 10^4 random states", cons, 1e-12);
  c.below(s, "Tadmor condition residual, 10^4 pairs x 3 directions", tadmor, 1e-11);
  c.below(s, "LLF dissipation jump(w)^T (F_llf - F_ec)", diss, 1e-15);

  // log_mean against a long-double log1p oracle.
  double lm = 0.0;
  bool bounded = true;
  for (int k = 0; k <= 400; ++k) {
    const double ratio = k == 0 ? 1.0 + 1e-15 : std::pow(10.0, -15.0 + 21.0 * k / 400.0) + 1.0;
    const double a = 1.3;
    const double b = a * ratio;
    const long double diff = static_cast<long double>(b) - static_cast<long double>(a);
    const long double oracle = diff / std::log1p(diff / static_cast<long double>(a));
    const double got = fluxes::log_mean(a, b);
    lm = std::max(lm, static_cast<double>(std::fabs((got - oracle) / oracle)));
    bounded = bounded && got >= std::min(a, b) * (1.0 - 1e-15) && got <= 0.5 * (a + b) * (1.0 + 1e-15);
  }
  c.below(s, "log_mean relative error vs extended-precision oracle", lm, 1e-13);
  c.below(s, "log_mean outside [min, arithmetic mean] (count)", bounded ? 0.0 : 1.0, 0.5);

  // BR1 neutrality: jump(w)^T <F> + <w>^T jump(F) - jump(w^T F) = 0.
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  double br1 = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    State fl, fr, wl, wr;
    for (std::size_t v = 0; v < kNumVars; ++v) {
      fl[v] = dist(rng);
      fr[v] = dist(rng);
      wl[v] = dist(rng);
      wr[v] = dist(rng);
    }
    const auto iface = fluxes::br1_viscous_interface(fl, fr, wl, wr);
    const double lhs = dot(wr - wl, iface.flux_normal) + dot(iface.w_star, fr - fl);
    br1 = std::max(br1, std::abs(lhs - (dot(wr, fr) - dot(wl, fl))));
  }
  c.below(s, "BR1 jump product identity", br1, 1e-13);
}

void solver_suite(Checks& c, std::mt19937_64& rng, unsigned threads) {
  const std::string s = "solver";
  const physics::GasModel gas;
  const auto mesh = mesh::warped_box(3, 0.05, 4);
  auto curl = std::make_shared<solver::Discretization>(mesh, 4, geometry::MetricForm::curl, threads);
  auto cross = std::make_shared<solver::Discretization>(mesh, 4, geometry::MetricForm::cross_product, threads);
  const State free = freestream_state(gas);
  auto max_abs = [](const solver::SolutionField& f) {
    double m = 0.0;
    for (const auto& st : f.values)
      for (double v : st) m = std::max(m, std::abs(v));
    return m;
  };
  const auto constant = [&](const Vec3&, double) { return free; };
  const solver::SemiDiscretization fs_curl(curl, gas, {});
  const solver::SemiDiscretization fs_cross(cross, gas, {});
  const double r_curl = max_abs(fs_curl.residual(solver::project(*curl, constant, 0.0)));
  const double r_cross = max_abs(fs_cross.residual(solver::project(*cross, constant, 0.0)));
  c.below(s, "free-stream residual, curl metrics", r_curl, 1e-11);
  c.above(s, "free-stream residual ratio cross-product / curl", r_cross / std::max(r_curl, 1e-300), 1e3);

  const auto wave = [&](const Vec3& x, double t) { return density_wave(x, t, 0.3, gas); };
  // Perturb the nodal data so interface jumps are present.
  auto u = solver::project(*curl, wave, 0.0);
  std::uniform_real_distribution<double> noise(-0.01, 0.01);
  for (auto& st : u.values) st[0] += noise(rng);
  for (const auto diss : {solver::Dissipation::none, solver::Dissipation::llf}) {
    for (const bool viscous : {false, true}) {
      if (diss == solver::Dissipation::none && viscous) continue;
      solver::FluxConfig cfg;
      cfg.surface_dissipation = diss;
      cfg.viscous = viscous;
      const solver::SemiDiscretization rhs(curl, gas, cfg);
      const auto dudt = rhs.residual(u);
      const auto totals = solver::conserved_totals(dudt, *curl);
      double tot = 0.0;
      for (double v : totals) tot = std::max(tot, std::abs(v));
      const std::string label = std::string(diss == solver::Dissipation::llf ? "llf" : "none") +
                                (viscous ? " + viscous" : "");
      c.below(s, "sum <J dU/dt, 1>, " + label, tot, 1e-12);
      const double rate = solver::entropy_rate(u, dudt, *curl, gas);
      const double scale = std::max(1.0, solver::entropy_rate_scale(u, dudt, *curl, gas));
      if (diss == solver::Dissipation::none) {
        c.below(s, "|entropy rate| / scale, ec, no dissipation", std::abs(rate) / scale, 1e-10);
      } else {
        c.below(s, "entropy rate, " + label, rate, 1e-12);
      }
    }
  }

  // Equivalence with the standard DGSEM volume term on affine geometry.
  {
    const auto box = mesh::cartesian_box({1, 1, 1}, {0, 0, 0}, {1.0, 1.5, 2.0}, {true, true, true});
    const solver::Discretization affine(box, 5, geometry::MetricForm::curl, 1);
    const auto& g = affine.element(0);
    auto poly = [&](const Vec3& x, double) {
      const double rho = 1.0 + 0.2 * x.x * x.y - 0.1 * x.z * x.z;
      return physics::conservative_from_primitive(
          {rho, {0.3 * x.y, -0.2 + 0.1 * x.x * x.z, 0.2 * x.z}, 1.0 + 0.1 * x.x * x.x * x.y}, gas);
    };
    const auto uf = solver::project(affine, poly, 0.0);
    const auto split = solver::split_divergence(uf.element(0), g, affine.basis(), solver::VolumeFlux::central, gas);
    const auto standard = solver::standard_divergence(uf.element(0), g, affine.basis(), gas);
    double diff = 0.0;
    for (std::size_t i = 0; i < split.size(); ++i)
      for (std::size_t v = 0; v < kNumVars; ++v) diff = std::max(diff, std::abs(split[i][v] - standard[i][v]));
    c.below(s, "central split divergence minus standard divergence", diff, 1e-12);
  }

  // Serial and threaded residuals are bitwise identical.
  {
    auto serial = std::make_shared<solver::Discretization>(mesh, 4, geometry::MetricForm::curl, 1);
    auto threaded = std::make_shared<solver::Discretization>(mesh, 4, geometry::MetricForm::curl, 4);
    solver::FluxConfig cfg;
    cfg.viscous = true;
    const auto a = solver::SemiDiscretization(serial, gas, cfg).residual(u);
    const auto b = solver::SemiDiscretization(threaded, gas, cfg).residual(u);
    c.below(s, "serial vs threaded residual mismatches (count)", a.values == b.values ? 0.0 : 1.0, 0.5);
  }

  // RK4 on du/dt = -u.
  {
    solver::SolutionField y(1, 1);
    y.values[0] = State{1.0, 1.0, 1.0, 1.0, 1.0};
    const double dt = 0.1;
    solver::rk_step(y, dt, [](const solver::SolutionField& v, solver::SolutionField& r) {
      r.values = v.values;
      for (auto& st : r.values) st *= -1.0;
    });
    c.below(s, "RK step on du/dt = -u vs exp(-dt), dt = 0.1", std::abs(y.values[0][0] - std::exp(-dt)), 1e-6);
  }
}

}  // namespace

std::span<const std::string_view> verify_suites() { return kSuites; }

std::vector<CheckResult> run_verify(std::string_view suite, std::uint64_t seed, unsigned threads) {
  if (std::find(kSuites.begin(), kSuites.end(), suite) == kSuites.end()) {
    std::string valid;
    for (auto n : kSuites) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("unknown verify suite '" + std::string(suite) + "' (valid: " + valid + ")");
  }
  std::vector<CheckResult> out;
  Checks c(out);
  std::mt19937_64 rng(seed);
  const bool all = suite == "all";
  if (all || suite == "spectral") spectral_suite(c, rng);
  if (all || suite == "geometry") geometry_suite(c, threads);
  if (all || suite == "fluxes") fluxes_suite(c, rng);
  if (all || suite == "solver") solver_suite(c, rng, threads);
  return out;
}

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks) {
  out << std::setprecision(3) << std::scientific;
  for (const auto& r : checks) {
    out << (r.pass ? "PASS " : "FAIL ") << '[' << r.suite << "] " << r.name << ": " << r.value << " (limit "
        << r.tolerance << ")\n";
  }
  out << std::defaultfloat;
}

}  // namespace dgsem::driver
