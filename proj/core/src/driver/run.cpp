#include "dgsem/driver/run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "dgsem/driver/cases.hpp"

namespace dgsem::driver {

namespace {

// Applies the 1D interpolation matrix along all three directions: (N+1)^3 -> (M+1)^3 values.
template <class T>
std::vector<T> tensor_interpolate(const spectral::DenseMatrix& interp, std::span<const T> values) {
  const std::size_t n = interp.cols();
  const std::size_t m = interp.rows();
  std::vector<T> a(m * n * n, T{}), b(m * m * n, T{}), c(m * m * m, T{});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        T acc{};
        for (std::size_t s = 0; s < n; ++s) acc += interp(i, s) * values[s + n * (j + n * k)];
        a[i + m * (j + n * k)] = acc;
      }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        T acc{};
        for (std::size_t s = 0; s < n; ++s) acc += interp(j, s) * a[i + m * (s + n * k)];
        b[i + m * (j + m * k)] = acc;
      }
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t i = 0; i < m; ++i) {
        T acc{};
        for (std::size_t s = 0; s < n; ++s) acc += interp(k, s) * b[i + m * (j + m * s)];
        c[i + m * (j + m * k)] = acc;
      }
  return c;
}

double max_abs(const solver::SolutionField& f) {
  double m = 0.0;
  for (const auto& s : f.values)
    for (double c : s) m = std::max(m, std::abs(c));
  return m;
}

bool has_boundary_faces(const solver::Discretization& disc) {
  return std::any_of(disc.faces().begin(), disc.faces().end(), [](const auto& f) { return f.slave < 0; });
}

}  // namespace

ErrorNorms error_norms(const solver::SolutionField& u, const solver::Discretization& disc,
                       const solver::SpaceTimeFunction& exact, double t) {
  const int fine_degree = 2 * disc.degree() + 8;
  const auto fine = spectral::gauss_lobatto(fine_degree);
  const auto interp = disc.basis().interpolation_matrix(fine.nodes);
  const std::size_t m = fine.nodes.size();
  ErrorNorms out;
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    const auto uf = tensor_interpolate<State>(interp, u.element(e));
    const auto xf = tensor_interpolate<Vec3>(interp, std::span<const Vec3>(geom.x.values()));
    const auto jf = tensor_interpolate<double>(interp, std::span<const double>(geom.jacobian.values()));
    for (std::size_t idx = 0; idx < uf.size(); ++idx) {
      const double w = fine.weights[idx % m] * fine.weights[(idx / m) % m] * fine.weights[idx / (m * m)];
      const State ue = exact(xf[idx], t);
      for (std::size_t v = 0; v < kNumVars; ++v) {
        const double err = uf[idx][v] - ue[v];
        out.l2[v] += w * jf[idx] * err * err;
        out.linf[v] = std::max(out.linf[v], std::abs(err));
      }
    }
  }
  for (auto& v : out.l2) v = std::sqrt(v);
  return out;
}

RunReport run_case(const RunConfig& config) {
  config.gas.validate();
  const auto setup = make_case(config);
  if (config.case_name == "manufactured" && std::abs(config.wave_amplitude) >= 2.0) {
    throw ConfigError("config key 'wave_amplitude': the manufactured solution needs |amplitude| below 2");
  }
  const auto mesh = build_mesh(config);
  auto disc = std::make_shared<solver::Discretization>(mesh, config.degree, config.metrics, config.threads);
  const solver::SemiDiscretization rhs(disc, config.gas, config.flux, setup.exact, setup.source);

  RunReport report;
  report.case_name = config.case_name;
  auto u = solver::project(*disc, setup.initial, 0.0);
  const auto u0 = u;
  const bool periodic = !has_boundary_faces(*disc);
  const bool conserving = periodic && !setup.source;

  solver::SolutionField rate;
  auto record = [&](long step, double dt, const solver::SolutionField& dudt) {
    MonitorRow row;
    row.step = step;
    row.time = u.time;
    row.dt = dt;
    row.totals = solver::conserved_totals(u, *disc);
    row.entropy = solver::total_entropy(u, *disc, config.gas);
    row.entropy_rate = solver::entropy_rate(u, dudt, *disc, config.gas);
    row.entropy_rate_scale = std::max(1.0, solver::entropy_rate_scale(u, dudt, *disc, config.gas));
    report.monitors.push_back(row);
    for (std::size_t v = 0; v < kNumVars; ++v) {
      report.max_total_drift =
          std::max(report.max_total_drift, std::abs(row.totals[v] - report.monitors.front().totals[v]));
    }
    report.max_entropy_rate =
        report.monitors.size() == 1 ? row.entropy_rate : std::max(report.max_entropy_rate, row.entropy_rate);
    report.max_relative_entropy_rate =
        std::max(report.max_relative_entropy_rate, std::abs(row.entropy_rate) / row.entropy_rate_scale);
    double dev = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i)
      for (std::size_t v = 0; v < kNumVars; ++v) dev = std::max(dev, std::abs(u.values[i][v] - u0.values[i][v]));
    report.max_deviation = std::max(report.max_deviation, dev);
  };

  rhs.residual(u, rate);
  report.initial_max_residual = max_abs(rate);
  record(0, 0.0, rate);

  long step = 0;
  const double t_end = config.final_time;
  const double t_tol = 1e-12 * std::max(1.0, t_end);
  while (u.time < t_end - t_tol && (!config.max_steps || step < *config.max_steps)) {
    double dt = config.dt ? *config.dt : solver::timestep_estimate(u, *disc, config.gas, config.cfl);
    dt = std::min(dt, t_end - u.time);
    const bool monitor = (step + 1) % config.monitor_every == 0;
    solver::rk_step(u, dt, rhs);
    ++step;
    if (monitor) {
      rhs.residual(u, rate);
      record(step, dt, rate);
    }
  }
  if (report.monitors.back().step != step) {
    rhs.residual(u, rate);
    record(step, report.monitors.back().dt, rate);
  }
  report.steps = step;
  report.final_time = u.time;
  if (setup.exact) report.errors = error_norms(u, *disc, setup.exact, u.time);

  if (config.checks) {
    auto fail = [&](const std::string& what, double value, double tol) {
      std::ostringstream msg;
      msg << std::setprecision(3) << std::scientific << what << ": " << value << " exceeds " << tol;
      report.check_failures.push_back(msg.str());
    };
    if (config.case_name == "freestream" && config.metrics == geometry::MetricForm::curl) {
      if (report.max_deviation > 1e-10) fail("free-stream deviation", report.max_deviation, 1e-10);
    }
    if (conserving) {
      const double tol = 1e-11 * std::max(1.0, report.final_time);
      if (report.max_total_drift > tol) fail("drift of conserved totals", report.max_total_drift, tol);
    }
    if (periodic && !setup.source && config.flux.volume_flux == solver::VolumeFlux::ec) {
      const bool dissipative = config.flux.viscous || config.flux.surface_dissipation == solver::Dissipation::llf;
      if (dissipative) {
        for (const auto& row : report.monitors) {
          const double tol = 1e-12 * row.entropy_rate_scale;
          if (row.entropy_rate > tol) {
            fail("entropy rate at t = " + std::to_string(row.time), row.entropy_rate, tol);
            break;
          }
        }
      } else if (report.max_relative_entropy_rate > 1e-10) {
        fail("relative entropy rate", report.max_relative_entropy_rate, 1e-10);
      }
    }
  }

  if (!config.monitor_csv.empty()) {
    std::ofstream out(config.monitor_csv);
    if (!out) throw ConfigError("config key 'monitor_csv': cannot write '" + config.monitor_csv + "'");
    write_monitor_csv(out, report.monitors);
  }
  if (!config.state_output.empty()) {
    std::ofstream out(config.state_output);
    if (!out) throw ConfigError("config key 'state_output': cannot write '" + config.state_output + "'");
    write_state(out, u, *disc);
  }
  return report;
}

void write_monitor_csv(std::ostream& out, const std::vector<MonitorRow>& rows) {
  out << "step,t,dt,mass,momentum_x,momentum_y,momentum_z,energy,entropy,entropy_rate\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << r.step << ',' << r.time << ',' << r.dt;
    for (double v : r.totals) out << ',' << v;
    out << ',' << r.entropy << ',' << r.entropy_rate << '\n';
  }
}

void write_state(std::ostream& out, const solver::SolutionField& u, const solver::Discretization& disc) {
  const std::size_t n = disc.basis().size();
  out << "dgsem-state 1\n";
  out << "degree " << disc.degree() << '\n';
  out << "elements " << disc.num_elements() << '\n';
  out << "node_order i_fastest\n";
  out << std::setprecision(17);
  out << "time " << u.time << '\n';
  out << "columns element i j k x y z rho rho_u rho_v rho_w rho_E\n";
  for (std::size_t e = 0; e < disc.num_elements(); ++e) {
    const auto& geom = disc.element(e);
    const auto values = u.element(e);
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const auto& x = geom.x[idx];
      out << e << ' ' << idx % n << ' ' << (idx / n) % n << ' ' << idx / (n * n) << ' ' << x.x << ' ' << x.y << ' '
          << x.z;
      for (double v : values[idx]) out << ' ' << v;
      out << '\n';
    }
  }
}

void print_report(std::ostream& out, const RunReport& r) {
  out << std::setprecision(6) << std::scientific;
  out << "case " << r.case_name << ": " << r.steps << " steps to t = " << r.final_time << '\n';
  out << "  initial max |dU/dt|      " << r.initial_max_residual << '\n';
  out << "  max deviation from U(0)  " << r.max_deviation << '\n';
  out << "  max drift of totals      " << r.max_total_drift << '\n';
  out << "  max entropy rate         " << r.max_entropy_rate << '\n';
  out << "  max |rate| / scale       " << r.max_relative_entropy_rate << '\n';
  if (r.errors) {
    out << "  L2 error (rho .. rhoE)  ";
    for (double v : r.errors->l2) out << ' ' << v;
    out << "\n  Linf error              ";
    for (double v : r.errors->linf) out << ' ' << v;
    out << '\n';
  }
  for (const auto& f : r.check_failures) out << "  CHECK FAILED: " << f << '\n';
  out << std::defaultfloat;
}

}  // namespace dgsem::driver
