#include "cli.hpp"

#include "memstab/io.hpp"
#include "memstab/kernel.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace memstab::cli {

namespace {

KernelSpec parse_theta_list(const std::string& csv, double tau) {
  std::vector<double> values;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw DomainError("theta: not a number: '" + item + "'");
    }
  }
  KernelSpec spec;
  spec.k = static_cast<int>(values.size()) - 1;
  spec.theta =
      Eigen::Map<const VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
  spec.tau = tau;
  spec.validate();
  return spec;
}

KernelSpec load_spec(const std::string& spec_path, const std::string& theta_csv,
                     const std::optional<double>& tau_flag) {
  std::optional<KernelSpec> from_file;
  if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw DomainError("spec: cannot open file " + spec_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw DomainError("spec: invalid JSON in " + spec_path + ": " + e.what());
    }
    from_file = spec_from_json(j);
  }
  KernelSpec spec;
  if (!theta_csv.empty()) {
    spec = parse_theta_list(theta_csv, tau_flag.value_or(
                                           from_file ? from_file->tau : 1.0));
  } else if (from_file) {
    spec = *from_file;
    if (tau_flag) spec.tau = *tau_flag;
  } else {
    throw DomainError("spec: provide --spec <file> or --theta <list>");
  }
  spec.validate();
  // Analysis works on the unit time scale; general tau inputs are rescaled
  // here, so reported times and frequencies are in units of tau.
  return spec.normalized();
}

struct OutStream {
  explicit OutStream(const std::string& path, std::ostream& fallback) {
    if (!path.empty()) {
      file.open(path);
      if (!file) throw DomainError("out: cannot open file " + path);
      os = &file;
    } else {
      os = &fallback;
    }
  }
  std::ofstream file;
  std::ostream* os;
};

int do_classify(const RunConfig& config, std::ostream& out) {
  const StabilityVerdict verdict = classify(config.spec, config.tol);
  out << verdict_to_json(verdict).dump(2) << '\n';
  return verdict.cls == StabilityClass::Stable ? 0 : 2;
}

int do_spectrum(const RunConfig& config, std::ostream& out) {
  const Spectrum sp = spectrum(config.spec, config.xi_min, config.xi_max,
                               config.points, config.log_spacing, config.tol);
  OutStream branch_out(config.out_path, out);
  write_spectrum_csv(*branch_out.os, sp);
  if (!config.envelope_path.empty()) {
    OutStream envelope_out(config.envelope_path, out);
    write_envelope_csv(*envelope_out.os, sp);
  }
  return 0;
}

int do_regions(const RunConfig& config, std::ostream& out) {
  if (config.has_spec && config.spec.k != 2)
    throw UnsupportedOrderError("regions: requires k = 2");
  OutStream os(config.out_path, out);
  write_region_map_csv(*os.os, config.eta2_max, config.eta3_max,
                       config.resolution);
  return 0;
}

int do_simulate(const RunConfig& config, std::ostream& out) {
  const double length = config.domain_length;
  std::function<double(double)> initial;
  if (config.init_mode) {
    const double xi_n = 2.0 * 3.14159265358979323846 * *config.init_mode / length;
    initial = [xi_n](double x) { return std::cos(xi_n * x); };
  } else {
    const double center = 0.5 * length, width = length / 20.0;
    initial = [center, width](double x) {
      const double d = (x - center) / width;
      return std::exp(-d * d);
    };
  }
  const FieldSimulation sim =
      simulate_physical(config.spec, length, config.n_modes, initial,
                        config.t_end, config.dt);
  OutStream snapshots(config.out_path, out);
  write_snapshots_csv(*snapshots.os, sim);
  if (!config.rates_path.empty()) {
    OutStream rates(config.rates_path, out);
    write_mode_rates_csv(*rates.os, sim);
  }
  return 0;
}

int do_verify_equivalence(const RunConfig& config, std::ostream& out) {
  const double dt = config.dt > 0.0 ? config.dt : 1e-3;
  const double t_end = config.t_end;
  VectorXcd w0 = VectorXcd::Zero(config.spec.k + 2);
  w0[0] = Complex(1.0, 0.0);
  const SimResult modal =
      integrate_mode(config.spec, config.xi, w0, t_end, dt);
  const SimResult memory =
      integrate_memory_quadrature(config.spec, config.xi, w0[0], t_end, dt);
  const double scale = std::max(std::abs(modal.final_u), 1e-300);
  const double rel = std::abs(modal.final_u - memory.final_u) / scale;
  nlohmann::json j;
  j["xi"] = config.xi;
  j["t_end"] = t_end;
  j["dt"] = dt;
  j["relative_error"] = rel;
  j["mode_final_u"] = {modal.final_u.real(), modal.final_u.imag()};
  j["memory_final_u"] = {memory.final_u.real(), memory.final_u.imag()};
  out << j.dump(2) << '\n';
  return 0;
}

int do_kernel(const RunConfig& config, std::ostream& out) {
  OutStream os(config.out_path, out);
  write_kernel_csv(*os.os, config.n_modes /*reused as shape count*/,
                   config.t_end, config.points,
                   config.has_spec ? &config.spec : nullptr);
  return 0;
}

}  // namespace

int run_command(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::Classify: return do_classify(config, out);
      case Command::Spectrum: return do_spectrum(config, out);
      case Command::Regions: return do_regions(config, out);
      case Command::Simulate: return do_simulate(config, out);
      case Command::VerifyEquivalence: return do_verify_equivalence(config, out);
      case Command::Kernel: return do_kernel(config, out);
    }
    err << "error: unknown command\n";
    return 1;
  } catch (const ConvergenceError& e) {
    err << "numeric failure: " << e.what()
        << " (worst residual " << e.worst_residual << ")\n";
    return 3;
  } catch (const NonFiniteError& e) {
    err << "numeric failure: " << e.what() << " at t = " << e.time << '\n';
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, const char* const* argv, std::ostream& out,
            std::ostream& err) {
  CLI::App app{
      "memstab: stability analysis of heat conduction with Gamma-combination "
      "memory kernels"};
  app.require_subcommand(1);

  RunConfig config;
  std::string spec_path;
  std::string theta_csv;
  std::optional<double> tau_flag;
  std::string grid_string;
  int init_mode = -1;
  int shapes = 4;

  if (const char* env_tol = std::getenv("MEMSTAB_TOL")) {
    try {
      config.tol = std::stod(env_tol);
    } catch (const std::exception&) {
      err << "error: MEMSTAB_TOL: not a number: " << env_tol << '\n';
      return 1;
    }
  }

  auto add_spec_options = [&](CLI::App* cmd) {
    cmd->add_option("--spec", spec_path, "kernel spec JSON file");
    cmd->add_option("--theta", theta_csv,
                    "comma-separated weights theta_1..theta_{k+1}");
    cmd->add_option("--tau", tau_flag, "time scale (rescaled to 1 for analysis)");
  };

  CLI::App* classify_cmd = app.add_subcommand("classify", "stability verdict as JSON");
  add_spec_options(classify_cmd);

  CLI::App* spectrum_cmd =
      app.add_subcommand("spectrum", "branch-tracked dispersion spectrum CSV");
  add_spec_options(spectrum_cmd);
  spectrum_cmd->add_option("--xi-min", config.xi_min, "lowest frequency");
  spectrum_cmd->add_option("--xi-max", config.xi_max, "highest frequency");
  spectrum_cmd->add_option("--points", config.points, "grid size");
  spectrum_cmd->add_flag("--log,!--no-log", config.log_spacing,
                         "logarithmic grid (default)");
  spectrum_cmd->add_option("--out", config.out_path, "branch CSV path");
  spectrum_cmd->add_option("--envelope-out", config.envelope_path,
                           "envelope CSV path");

  CLI::App* regions_cmd =
      app.add_subcommand("regions", "k=2 region map CSV over the eta plane");
  add_spec_options(regions_cmd);
  regions_cmd->add_option("--grid", grid_string,
                          "eta2maxXeta3maxXresolution, e.g. 1.2x3x200");
  regions_cmd->add_option("--out", config.out_path, "CSV path");

  CLI::App* simulate_cmd =
      app.add_subcommand("simulate", "periodic-domain field evolution CSVs");
  add_spec_options(simulate_cmd);
  simulate_cmd->add_option("--length", config.domain_length, "domain length");
  simulate_cmd->add_option("--modes", config.n_modes, "number of Fourier modes");
  simulate_cmd->add_option("--t-end", config.t_end, "final time");
  simulate_cmd->add_option("--dt", config.dt, "time step (0 = automatic)");
  simulate_cmd->add_option("--init-mode", init_mode,
                           "start from the single cosine mode n");
  simulate_cmd->add_option("--out", config.out_path, "snapshot CSV path");
  simulate_cmd->add_option("--rates-out", config.rates_path,
                           "per-mode rates CSV path");

  CLI::App* verify_cmd = app.add_subcommand(
      "verify-equivalence",
      "compare the local-system mode against history quadrature");
  add_spec_options(verify_cmd);
  verify_cmd->add_option("--xi", config.xi, "frequency");
  verify_cmd->add_option("--t-end", config.t_end, "final time (default 10)");
  verify_cmd->add_option("--dt", config.dt, "time step (default 1e-3)");

  CLI::App* kernel_cmd =
      app.add_subcommand("kernel", "Gamma density / kernel samples CSV");
  add_spec_options(kernel_cmd);
  kernel_cmd->add_option("--shapes", shapes, "sample g_1..g_shapes");
  kernel_cmd->add_option("--t-max", config.t_end,
                         "sample up to this time (default 10)");
  kernel_cmd->add_option("--points", config.points,
                         "sample count (default 200)");
  kernel_cmd->add_option("--out", config.out_path, "CSV path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 1;
  }

  try {
    if (classify_cmd->parsed()) config.command = Command::Classify;
    if (spectrum_cmd->parsed()) config.command = Command::Spectrum;
    if (regions_cmd->parsed()) config.command = Command::Regions;
    if (simulate_cmd->parsed()) config.command = Command::Simulate;
    if (verify_cmd->parsed()) config.command = Command::VerifyEquivalence;
    if (kernel_cmd->parsed()) config.command = Command::Kernel;

    const bool needs_spec = classify_cmd->parsed() || spectrum_cmd->parsed() ||
                            simulate_cmd->parsed() || verify_cmd->parsed();
    if (needs_spec || !spec_path.empty() || !theta_csv.empty()) {
      config.spec = load_spec(spec_path, theta_csv, tau_flag);
      config.has_spec = true;
    }
    if (!grid_string.empty()) {
      double e2 = 0, e3 = 0;
      int res = 0;
      char sep1 = 0, sep2 = 0;
      std::istringstream gs(grid_string);
      if (!(gs >> e2 >> sep1 >> e3 >> sep2 >> res) || sep1 != 'x' ||
          sep2 != 'x' || res < 1 || !(e2 > 0) || !(e3 > 0))
        throw DomainError("grid: expected eta2maxXeta3maxXres, e.g. 1.2x3x200");
      config.eta2_max = e2;
      config.eta3_max = e3;
      config.resolution = res;
    }
    if (init_mode >= 0) config.init_mode = init_mode;
    if (verify_cmd->parsed() && verify_cmd->count("--t-end") == 0)
      config.t_end = 10.0;
    if (kernel_cmd->parsed()) {
      config.n_modes = shapes;
      if (kernel_cmd->count("--t-max") == 0) config.t_end = 10.0;
      if (kernel_cmd->count("--points") == 0) config.points = 200;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }

  return run_command(config, out, err);
}

}  // namespace memstab::cli
