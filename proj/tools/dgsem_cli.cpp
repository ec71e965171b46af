// dgsem: run cases, verification suites, convergence studies, mesh audits and basis tables.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "dgsem/driver/cases.hpp"
#include "dgsem/driver/config.hpp"
#include "dgsem/driver/convergence.hpp"
#include "dgsem/driver/inspect.hpp"
#include "dgsem/driver/run.hpp"
#include "dgsem/driver/verify.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailure = 1, kUsage = 2, kAbort = 3 };

using namespace dgsem;

int cmd_run(const std::string& path, unsigned threads) {
  auto config = driver::read_config_file(path);
  if (threads > 0) config.threads = threads;
  const auto report = driver::run_case(config);
  driver::print_report(std::cout, report);
  return report.ok() ? kOk : kCheckFailure;
}

int cmd_verify(const std::string& suite, std::uint64_t seed, unsigned threads) {
  const auto checks = driver::run_verify(suite, seed, threads);
  driver::print_checks(std::cout, checks);
  std::size_t failed = 0;
  for (const auto& c : checks) failed += c.pass ? 0 : 1;
  std::cout << checks.size() - failed << " of " << checks.size() << " checks passed\n";
  return failed == 0 ? kOk : kCheckFailure;
}

int cmd_converge(const std::string& path, const std::vector<int>& levels, const std::vector<int>& degrees,
                 const std::string& output, unsigned threads) {
  auto config = driver::read_config_file(path);
  if (threads > 0) config.threads = threads;
  if (levels.empty() == degrees.empty()) {
    throw ConfigError("converge needs exactly one of --levels or --degrees");
  }
  const auto report = degrees.empty() ? driver::convergence_study(config, levels)
                                      : driver::degree_study(config, degrees);
  if (output.empty()) {
    driver::write_convergence_csv(std::cout, report);
  } else {
    std::ofstream out(output);
    if (!out) throw ConfigError("cannot write '" + output + "'");
    driver::write_convergence_csv(out, report);
  }
  return kOk;
}

mesh::MeshTopology load_mesh(const std::string& source, int elements, double amplitude, int face_degree) {
  if (source == "warped") return mesh::warped_box(elements, amplitude, face_degree);
  if (source == "cartesian") {
    return mesh::cartesian_box({elements, elements, elements}, {0, 0, 0}, {1, 1, 1}, {true, true, true});
  }
  return mesh::read_mesh_file(source);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Split-form DGSEM for the compressible Euler and Navier-Stokes equations"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: hardware concurrency)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "run a case from a config file");
  run->add_option("config", config_path, "config file")->required();

  std::string suite;
  std::uint64_t seed = 12345;
  auto* verify = app.add_subcommand("verify", "run an invariant battery");
  verify->add_option("suite", suite, "spectral | geometry | fluxes | solver | all")->required();
  verify->add_option("--seed", seed, "RNG seed");

  std::vector<int> levels, degrees;
  std::string output;
  auto* converge = app.add_subcommand("converge", "mesh or degree refinement study");
  converge->add_option("config", config_path, "config file")->required();
  converge->add_option("--levels", levels, "elements per direction, e.g. --levels 2 4 8");
  converge->add_option("--degrees", degrees, "polynomial degrees, e.g. --degrees 2 3 4 5");
  converge->add_option("-o,--output", output, "CSV output (default: stdout)");

  auto* mesh_cmd = app.add_subcommand("mesh", "mesh utilities");
  mesh_cmd->require_subcommand(1);
  std::string mesh_source;
  int degree = 4, elements = 2, face_degree = 4;
  double amplitude = 0.05;
  auto* audit = mesh_cmd->add_subcommand("audit", "per-element Jacobian range and metric-identity residuals");
  audit->add_option("path", mesh_source, "mesh file, or 'warped' / 'cartesian'")->required();
  audit->add_option("--degree", degree, "polynomial degree of the audit");
  audit->add_option("--elements", elements, "elements per direction for built-in meshes");
  audit->add_option("--amplitude", amplitude, "warped-box amplitude");
  std::string mesh_out;
  auto* write = mesh_cmd->add_subcommand("write", "write a built-in mesh to a file");
  write->add_option("kind", mesh_source, "warped | cartesian")->required();
  write->add_option("output", mesh_out, "mesh file")->required();
  write->add_option("--elements", elements, "elements per direction");
  write->add_option("--amplitude", amplitude, "warped-box amplitude");
  write->add_option("--face-degree", face_degree, "degree of the curved face samples");

  auto* basis = app.add_subcommand("basis", "basis tables");
  basis->require_subcommand(1);
  int basis_degree = 4;
  auto* dump = basis->add_subcommand("dump", "print LGL nodes, weights and D as CSV");
  dump->add_option("--degree", basis_degree, "polynomial degree")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config_path, threads);
    if (*verify) return cmd_verify(suite, seed, threads);
    if (*converge) return cmd_converge(config_path, levels, degrees, output, threads);
    if (*audit) {
      const auto m = load_mesh(mesh_source, elements, amplitude, degree);
      const auto result = driver::audit_mesh(m, degree);
      driver::write_mesh_audit(std::cout, result);
      std::cout << "# max interface surface-element mismatch " << result.max_interface_mismatch << '\n';
      return kOk;
    }
    if (*write) {
      if (mesh_source != "warped" && mesh_source != "cartesian") {
        throw ConfigError("mesh write: kind must be 'warped' or 'cartesian'");
      }
      mesh::write_mesh_file(mesh_out, load_mesh(mesh_source, elements, amplitude, face_degree));
      return kOk;
    }
    if (*dump) {
      driver::write_basis_csv(std::cout, basis_degree);
      return kOk;
    }
  } catch (const PositivityError& e) {
    std::cerr << "positivity abort: " << e.what() << '\n';
    return kAbort;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const TopologyError& e) {
    std::cerr << "mesh error: " << e.what() << '\n';
    return kUsage;
  } catch (const GeometryError& e) {
    std::cerr << "geometry error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kAbort;
  }
  return kUsage;
}
