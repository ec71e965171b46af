#include "dgsem/driver/config.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dgsem/fluxes.hpp"

namespace dgsem::driver {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const std::string& expected) {
  throw ConfigError("config key '" + key + "': invalid value '" + value + "' (expected " + expected + ")");
}

double to_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value, "a number");
  return out;
}

long to_long(const std::string& key, const std::string& value) {
  long out = 0;
  const auto* end = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc{} || ptr != end) bad_value(key, value, "an integer");
  return out;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "off" || value == "no" || value == "0") return false;
  bad_value(key, value, "true or false");
}

double positive(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (!(v > 0.0)) bad_value(key, value, "a positive number");
  return v;
}

}  // namespace

const std::map<std::string, std::string>& config_keys() {
  static const std::map<std::string, std::string> keys{
      {"case", "freestream | density_wave | manufactured"},
      {"mesh", "warped | cartesian | path to a mesh file"},
      {"elements", "elements per direction for built-in meshes"},
      {"amplitude", "warped-box amplitude"},
      {"face_degree", "polynomial degree used to sample built-in curved faces (default: degree)"},
      {"periodic", "cartesian box periodicity (true | false)"},
      {"degree", "polynomial degree N (1..30)"},
      {"metrics", "curl | cross_product"},
      {"gamma", "ratio of specific heats"},
      {"mach", "reference Mach number"},
      {"prandtl", "Prandtl number"},
      {"reynolds", "Reynolds number"},
      {"mu", "nondimensional viscosity"},
      {"volume_flux", "central | ec"},
      {"surface_dissipation", "none | llf"},
      {"viscous", "true | false"},
      {"gradient_variables", "entropy | conservative"},
      {"cfl", "CFL number for the time step estimate"},
      {"dt", "fixed time step (overrides cfl)"},
      {"final_time", "end time"},
      {"max_steps", "step limit"},
      {"monitor_every", "monitor cadence in steps"},
      {"wave_amplitude", "amplitude of the density wave / manufactured solution"},
      {"monitor_csv", "monitor CSV output path"},
      {"state_output", "final state output path"},
      {"seed", "RNG seed"},
      {"threads", "worker threads (0: hardware concurrency)"},
      {"checks", "evaluate case checks and fail the run on violation (true | false)"},
  };
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value) {
  if (key == "case") {
    c.case_name = value;
  } else if (key == "mesh") {
    if (value == "warped") {
      c.mesh.kind = MeshSpec::Kind::warped;
    } else if (value == "cartesian") {
      c.mesh.kind = MeshSpec::Kind::cartesian;
    } else {
      c.mesh.kind = MeshSpec::Kind::file;
      c.mesh.path = value;
    }
  } else if (key == "elements") {
    c.mesh.elements = static_cast<int>(to_long(key, value));
    if (c.mesh.elements < 1) bad_value(key, value, "an integer >= 1");
  } else if (key == "amplitude") {
    c.mesh.amplitude = to_double(key, value);
  } else if (key == "face_degree") {
    c.mesh.face_degree = static_cast<int>(to_long(key, value));
    if (c.mesh.face_degree < 0 || c.mesh.face_degree > spectral::kMaxDegree) bad_value(key, value, "0..30");
  } else if (key == "periodic") {
    c.mesh.periodic = to_bool(key, value);
  } else if (key == "degree") {
    c.degree = static_cast<int>(to_long(key, value));
    if (c.degree < 1 || c.degree > spectral::kMaxDegree) bad_value(key, value, "an integer in 1..30");
  } else if (key == "metrics") {
    if (value == "curl") {
      c.metrics = geometry::MetricForm::curl;
    } else if (value == "cross_product") {
      c.metrics = geometry::MetricForm::cross_product;
    } else {
      bad_value(key, value, "one of: curl, cross_product");
    }
  } else if (key == "gamma") {
    c.gas.gamma = to_double(key, value);
    if (!(c.gas.gamma > 1.0)) bad_value(key, value, "a number > 1");
  } else if (key == "mach") {
    c.gas.mach = positive(key, value);
  } else if (key == "prandtl") {
    c.gas.prandtl = positive(key, value);
  } else if (key == "reynolds") {
    c.gas.reynolds = positive(key, value);
  } else if (key == "mu") {
    c.gas.mu = positive(key, value);
  } else if (key == "volume_flux") {
    try {
      c.flux.volume_flux = fluxes::volume_flux_from_name(value);
    } catch (const ConfigError& err) {
      throw ConfigError("config key '" + key + "': " + err.what());
    }
  } else if (key == "surface_dissipation") {
    try {
      c.flux.surface_dissipation = fluxes::dissipation_from_name(value);
    } catch (const ConfigError& err) {
      throw ConfigError("config key '" + key + "': " + err.what());
    }
  } else if (key == "viscous") {
    c.flux.viscous = to_bool(key, value);
  } else if (key == "gradient_variables") {
    if (value == "entropy") {
      c.flux.gradient_variables = solver::GradientVariables::entropy;
    } else if (value == "conservative") {
      c.flux.gradient_variables = solver::GradientVariables::conservative;
    } else {
      bad_value(key, value, "one of: entropy, conservative");
    }
  } else if (key == "cfl") {
    c.cfl = positive(key, value);
  } else if (key == "dt") {
    c.dt = positive(key, value);
  } else if (key == "final_time") {
    c.final_time = to_double(key, value);
    if (!(c.final_time >= 0.0)) bad_value(key, value, "a non-negative number");
  } else if (key == "max_steps") {
    c.max_steps = to_long(key, value);
    if (*c.max_steps < 0) bad_value(key, value, "a non-negative integer");
  } else if (key == "monitor_every") {
    c.monitor_every = static_cast<int>(to_long(key, value));
    if (c.monitor_every < 1) bad_value(key, value, "an integer >= 1");
  } else if (key == "wave_amplitude") {
    c.wave_amplitude = to_double(key, value);
  } else if (key == "monitor_csv") {
    c.monitor_csv = value;
  } else if (key == "state_output") {
    c.state_output = value;
  } else if (key == "seed") {
    c.seed = static_cast<std::uint64_t>(to_long(key, value));
  } else if (key == "threads") {
    const long t = to_long(key, value);
    if (t < 0) bad_value(key, value, "a non-negative integer");
    c.threads = static_cast<unsigned>(t);
  } else if (key == "checks") {
    c.checks = to_bool(key, value);
  } else {
    std::string known;
    for (const auto& [k, _] : config_keys()) known += (known.empty() ? "" : ", ") + k;
    throw ConfigError("unknown config key '" + key + "' (known keys: " + known + ")");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source) {
  RunConfig config;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(line_no) + ": expected 'key = value', got '" + body + "'");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(line_no) + ": missing key");
    if (value.empty()) throw ConfigError("config key '" + key + "': missing value");
    apply_setting(config, key, value);
  }
  return config;
}

RunConfig read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  auto config = parse_config(in, path);
  if (config.mesh.kind == MeshSpec::Kind::file) {
    namespace fs = std::filesystem;
    fs::path mesh_path(config.mesh.path);
    if (mesh_path.is_relative() && !fs::exists(mesh_path)) {
      mesh_path = fs::path(path).parent_path() / mesh_path;
    }
    if (!fs::exists(mesh_path)) {
      throw ConfigError("config key 'mesh': file '" + config.mesh.path + "' does not exist");
    }
    config.mesh.path = mesh_path.string();
  }
  return config;
}

mesh::MeshTopology build_mesh(const RunConfig& config) {
  const auto& m = config.mesh;
  switch (m.kind) {
    case MeshSpec::Kind::warped:
      return mesh::warped_box(m.elements, m.amplitude, m.face_degree > 0 ? m.face_degree : config.degree);
    case MeshSpec::Kind::cartesian:
      return mesh::cartesian_box({m.elements, m.elements, m.elements}, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0},
                                 {m.periodic, m.periodic, m.periodic});
    case MeshSpec::Kind::file:
      if (!std::filesystem::exists(m.path)) {
        throw ConfigError("config key 'mesh': file '" + m.path + "' does not exist");
      }
      return mesh::read_mesh_file(m.path);
  }
  throw ConfigError("config key 'mesh': unsupported mesh kind");
}

}  // namespace dgsem::driver
