#pragma once

// Invariant batteries for the verify subcommand.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dgsem::driver {

struct CheckResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// spectral, geometry, fluxes, solver, all.
std::span<const std::string_view> verify_suites();

/// Runs one suite (or all). Throws ConfigError for an unknown suite name.
std::vector<CheckResult> run_verify(std::string_view suite, std::uint64_t seed = 12345, unsigned threads = 0);

void print_checks(std::ostream& out, const std::vector<CheckResult>& checks);

}  // namespace dgsem::driver
