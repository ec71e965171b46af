#include "dgsem/driver/convergence.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace dgsem::driver {

namespace {

RunConfig study_config(const RunConfig& base) {
  if (base.case_name == "freestream") {
    throw ConfigError("config key 'case': convergence studies need a case with a nontrivial exact solution");
  }
  RunConfig c = base;
  c.monitor_csv.clear();
  c.state_output.clear();
  c.checks = false;
  c.monitor_every = 1 << 30;
  return c;
}

ConvergenceRow run_row(const RunConfig& c) {
  const auto report = run_case(c);
  ConvergenceRow row;
  row.elements = c.mesh.elements;
  row.degree = c.degree;
  row.steps = report.steps;
  row.errors = report.errors.value_or(ErrorNorms{});
  return row;
}

}  // namespace

bool ConvergenceReport::monotone() const {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (!(rows[i].errors.l2[0] < rows[i - 1].errors.l2[0])) return false;
  }
  return true;
}

ConvergenceReport convergence_study(const RunConfig& base, std::span<const int> elements_per_direction) {
  auto c = study_config(base);
  if (c.mesh.kind == MeshSpec::Kind::file) {
    throw ConfigError("config key 'mesh': mesh refinement needs a built-in mesh (warped or cartesian)");
  }
  std::vector<int> levels(elements_per_direction.begin(), elements_per_direction.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  ConvergenceReport report;
  report.mode = ConvergenceReport::Mode::mesh;
  for (int k : levels) {
    if (k < 1) throw ConfigError("convergence levels must be positive element counts");
    c.mesh.elements = k;
    report.rows.push_back(run_row(c));
  }
  for (std::size_t i = 1; i < report.rows.size(); ++i) {
    const auto& a = report.rows[i - 1];
    const auto& b = report.rows[i];
    const double h_ratio = static_cast<double>(b.elements) / static_cast<double>(a.elements);
    State order{};
    for (std::size_t v = 0; v < kNumVars; ++v) {
      const double ea = a.errors.l2[v];
      const double eb = b.errors.l2[v];
      order[v] = (ea > 0.0 && eb > 0.0) ? std::log(ea / eb) / std::log(h_ratio) : 0.0;
    }
    report.l2_orders.push_back(order);
  }
  return report;
}

ConvergenceReport degree_study(const RunConfig& base, std::span<const int> degrees) {
  auto c = study_config(base);
  std::vector<int> levels(degrees.begin(), degrees.end());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  ConvergenceReport report;
  report.mode = ConvergenceReport::Mode::degree;
  for (int n : levels) {
    if (n < 1 || n > spectral::kMaxDegree) throw ConfigError("degree levels must lie in 1..30");
    c.degree = n;
    report.rows.push_back(run_row(c));
  }
  return report;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  out << "elements,degree,steps";
  for (const char* v : {"rho", "rho_u", "rho_v", "rho_w", "rho_E"}) out << ",l2_" << v;
  for (const char* v : {"rho", "rho_u", "rho_v", "rho_w", "rho_E"}) out << ",linf_" << v;
  if (report.mode == ConvergenceReport::Mode::mesh) {
    for (const char* v : {"rho", "rho_u", "rho_v", "rho_w", "rho_E"}) out << ",order_" << v;
  }
  out << '\n' << std::setprecision(10);
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    out << r.elements << ',' << r.degree << ',' << r.steps;
    for (double v : r.errors.l2) out << ',' << v;
    for (double v : r.errors.linf) out << ',' << v;
    if (report.mode == ConvergenceReport::Mode::mesh) {
      for (std::size_t v = 0; v < kNumVars; ++v) {
        out << ',';
        if (i > 0) out << report.l2_orders[i - 1][v];
      }
    }
    out << '\n';
  }
}

}  // namespace dgsem::driver
