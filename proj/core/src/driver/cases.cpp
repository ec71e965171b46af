#include "dgsem/driver/cases.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace dgsem::driver {

namespace {

constexpr std::array<std::string_view, 3> kCaseNames{"freestream", "density_wave", "manufactured"};

}  // namespace

std::span<const std::string_view> case_names() { return kCaseNames; }

State density_wave(const Vec3& x, double t, double amplitude, const physics::GasModel& gas) {
  const double rho = 1.0 + amplitude * std::sin(2.0 * std::numbers::pi * (x.x + x.y + x.z - 3.0 * t));
  return physics::conservative_from_primitive({rho, {1.0, 1.0, 1.0}, 1.0}, gas);
}

State freestream_state(const physics::GasModel& gas) {
  return physics::conservative_from_primitive({1.0, {0.3, -0.2, 0.1}, 1.0 / gas.gamma}, gas);
}

State manufactured_state(const Vec3& x, double t, double amplitude) {
  const double g = 4.0 + amplitude * std::sin(2.0 * std::numbers::pi * (x.x + x.y + x.z - t));
  return {g, g, g, g, g * g};
}

State manufactured_source(const Vec3& x, double t, double amplitude, const physics::GasModel& gas, bool viscous) {
  const double k = 2.0 * std::numbers::pi;
  const double phase = k * (x.x + x.y + x.z - t);
  const double g = 4.0 + amplitude * std::sin(phase);
  const double g_s = k * amplitude * std::cos(phase);  // derivative along x, y or z
  const double g_t = -g_s;
  const double g_ss = -k * k * amplitude * std::sin(phase);
  const double p_s = (gas.gamma - 1.0) * (2.0 * g - 1.5) * g_s;
  const double mass = g_t + 3.0 * g_s;
  const double momentum = g_t + 3.0 * g_s + p_s;
  double energy = 2.0 * g * g_t + 6.0 * g * g_s + 3.0 * p_s;
  // Velocity is uniform, so only heat conduction contributes: div(lambda grad T) = 3 mu gamma g_ss / Pr.
  if (viscous) energy -= 3.0 * gas.mu * gas.gamma * g_ss / (gas.prandtl * gas.reynolds);
  return {mass, momentum, momentum, momentum, energy};
}

CaseSetup make_case(const RunConfig& config) {
  const auto gas = config.gas;
  const double amp = config.wave_amplitude;
  CaseSetup setup;
  setup.name = config.case_name;
  if (config.case_name == "freestream") {
    const State u = freestream_state(gas);
    setup.initial = [u](const Vec3&, double) { return u; };
    setup.exact = setup.initial;
  } else if (config.case_name == "density_wave") {
    setup.initial = [amp, gas](const Vec3& x, double t) { return density_wave(x, t, amp, gas); };
    setup.exact = setup.initial;
  } else if (config.case_name == "manufactured") {
    const bool viscous = config.flux.viscous;
    setup.initial = [amp](const Vec3& x, double t) { return manufactured_state(x, t, amp); };
    setup.exact = setup.initial;
    setup.source = [amp, gas, viscous](const Vec3& x, double t) {
      return manufactured_source(x, t, amp, gas, viscous);
    };
  } else {
    std::string valid;
    for (auto n : kCaseNames) valid += (valid.empty() ? "" : ", ") + std::string(n);
    throw ConfigError("config key 'case': unknown case '" + config.case_name + "' (valid: " + valid + ")");
  }
  return setup;
}

}  // namespace dgsem::driver
