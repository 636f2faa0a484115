#pragma once

#include "memstab/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>

namespace memstab::cli {

enum class Command {
  Classify,
  Spectrum,
  Regions,
  Simulate,
  VerifyEquivalence,
  Kernel,
};

/// Parsed command line. Inline flags override fields loaded from --spec.
struct RunConfig {
  Command command = Command::Classify;
  KernelSpec spec;
  bool has_spec = false;
  double tol = kDefaultRootTol;  // MEMSTAB_TOL overrides

  // spectrum
  double xi_min = 1e-3;
  double xi_max = 1e3;
  int points = 2000;
  bool log_spacing = true;

  // regions: bounds x resolution
  double eta2_max = 1.2;
  double eta3_max = 3.0;
  int resolution = 200;

  // simulate / verify-equivalence
  double domain_length = 8.0 * 3.14159265358979323846;
  int n_modes = 16;
  double t_end = 40.0;
  double dt = 0.0;  // 0 = automatic
  std::optional<int> init_mode;
  double xi = 1.0;

  std::string out_path;       // empty = stdout
  std::string envelope_path;  // spectrum only
  std::string rates_path;     // simulate only
};

/// Exit codes: 0 success (classify: stable), 1 input error, 2 unstable
/// verdict, 3 numeric failure.
int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err);

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace memstab::cli
