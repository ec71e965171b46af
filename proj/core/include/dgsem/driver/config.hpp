#pragma once

// Run configuration: a flat `key = value` text file, `#` starts a comment.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>

#include "dgsem/geometry.hpp"
#include "dgsem/mesh.hpp"
#include "dgsem/physics.hpp"
#include "dgsem/solver.hpp"

namespace dgsem::driver {

/// Mesh source: a mesh file or one of the built-in generators.
struct MeshSpec {
  enum class Kind { file, cartesian, warped } kind = Kind::warped;
  std::string path;
  int elements = 4;         // per direction, built-in generators only
  double amplitude = 0.05;  // warped box
  int face_degree = 0;      // 0: same as the solution degree
  bool periodic = true;     // cartesian box
};

struct RunConfig {
  std::string case_name = "density_wave";
  MeshSpec mesh;
  int degree = 3;
  geometry::MetricForm metrics = geometry::MetricForm::curl;
  physics::GasModel gas;
  solver::FluxConfig flux;

  double cfl = 0.5;
  std::optional<double> dt;  // fixed step, overrides cfl
  double final_time = 1.0;
  std::optional<long> max_steps;
  int monitor_every = 1;
  double wave_amplitude = 0.3;  // density wave / manufactured amplitude

  std::string monitor_csv;   // empty: none
  std::string state_output;  // empty: none
  std::uint64_t seed = 12345;
  unsigned threads = 0;
  bool checks = true;
};

/// Parses the text form. Unknown keys and malformed values raise ConfigError naming the key.
RunConfig parse_config(std::istream& in, const std::string& source = "<config>");
RunConfig read_config_file(const std::string& path);

/// Applies one `key = value` assignment.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Every accepted key with a one-line description.
const std::map<std::string, std::string>& config_keys();

/// Builds the mesh described by the config.
mesh::MeshTopology build_mesh(const RunConfig& config);

}  // namespace dgsem::driver
