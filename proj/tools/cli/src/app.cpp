#include "spinflip/cli/app.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include <fmt/format.h>

#include "spinflip/cli/commands.hpp"
#include "spinflip/errors.hpp"
#include "spinflip/field_synthesis.hpp"

#ifndef SPINFLIP_VERSION
#define SPINFLIP_VERSION "0.0.0"
#endif

namespace spinflip::cli {

namespace {

struct Overrides {
  std::string config_path;
  std::optional<double> tf, b0, gamma, lambda0;
  std::optional<std::size_t> samples, steps, n_traj;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> channel, out, format;
  std::optional<std::size_t> jobs;
  InitialState init;
  std::string axis = "gamma";
  std::string grid;
  bool monte_carlo = false;
  std::string model;
  B0MaxRange range;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "JSON configuration file");
  cmd->add_option("--tf", o.tf, "protocol duration tf (ns)");
  cmd->add_option("--b0", o.b0, "static field B0 (T)");
  cmd->add_option("--samples", o.samples, "number of output time nodes");
  cmd->add_option("--steps", o.steps, "integrator steps per tf");
  cmd->add_option("--jobs", o.jobs, "worker threads (default: SPINFLIP_JOBS or all cores)");
  cmd->add_option("--out", o.out, "output file (default: standard output)");
  cmd->add_option("--format", o.format, "csv or json");
}

void add_noise(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--gamma", o.gamma, "dephasing rate (1/ns)");
  cmd->add_option("--lambda0", o.lambda0, "noise strength; lambda = lambda0 sqrt(tf)");
  cmd->add_option("--seed", o.seed, "Monte Carlo seed");
  cmd->add_option("--n-traj", o.n_traj, "Monte Carlo trajectories");
  cmd->add_option("--channel", o.channel, "noise channel: as-printed or x-only");
  cmd->add_flag("--monte-carlo", o.monte_carlo, "average stochastic trajectories");
}

RunConfig effective_config(const Overrides& o) {
  RunConfig cfg;
  if (!o.config_path.empty()) cfg = load_config_file(o.config_path);
  if (o.tf) cfg.control.tf_ns = *o.tf;
  if (o.b0) cfg.control.b0_T = *o.b0;
  if (o.samples) cfg.control.samples = *o.samples;
  if (o.steps) cfg.integrator.steps = *o.steps;
  if (o.gamma) cfg.decoherence.gamma_per_ns = *o.gamma;
  if (o.lambda0) cfg.noise.lambda0 = *o.lambda0;
  if (o.seed) cfg.noise.seed = *o.seed;
  if (o.n_traj) cfg.noise.n_traj = *o.n_traj;
  if (o.channel) {
    try {
      cfg.noise.channel = parse_noise_channel(*o.channel);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  if (o.out) cfg.output.path = *o.out;
  if (o.format) cfg.output.format = parse_format(*o.format);
  cfg.validate();
  try {
    (void)cfg.material_params();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::size_t resolve_job_count(const Overrides& o) {
  if (o.jobs) return *o.jobs;
  if (const char* env = std::getenv("SPINFLIP_JOBS")) {
    try {
      std::size_t used = 0;
      const long v = std::stol(env, &used);
      if (used == std::string(env).size() && v >= 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    throw ConfigError(fmt::format("SPINFLIP_JOBS must be a non-negative integer, got '{}'", env));
  }
  return 0;
}

void emit(const OutputTable& t, const RunConfig& cfg, std::ostream& out) {
  auto write = [&](std::ostream& os) {
    if (cfg.output.format == OutputFormat::json) {
      write_json(os, t, SPINFLIP_VERSION);
    } else {
      write_csv(os, t, SPINFLIP_VERSION);
    }
  };
  if (cfg.output.path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(cfg.output.path, std::ios::binary);
  if (!file) throw ConfigError("cannot write '" + cfg.output.path + "'");
  write(file);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Invariant-based spin-flip pulse design and simulation", "spinflip"};
  app.set_version_flag("--version", SPINFLIP_VERSION);
  app.require_subcommand(1);

  Overrides o;
  auto* design = app.add_subcommand("design", "designed angles, fields and electric fields");
  auto* simulate = app.add_subcommand("simulate", "Bloch evolution and flip fidelity");
  auto* b0max = app.add_subcommand("b0max", "upper limit of B0 against tf");
  auto* sweep = app.add_subcommand("sweep", "fidelity over a gamma or lambda0^2 grid");
  auto* reduce = app.add_subcommand("reduce", "four-level to two-level reduction report");
  for (auto* cmd : {design, simulate, b0max, sweep, reduce}) add_common(cmd, o);
  add_noise(simulate, o);
  add_noise(sweep, o);
  simulate->add_option("--epsilon", o.init.epsilon, "initial spin-down population");
  simulate->add_option("--phi0", o.init.phi0, "initial phase (rad)");
  b0max->add_option("--tf-min", o.range.tf_min, "shortest tf (ns)");
  b0max->add_option("--tf-max", o.range.tf_max, "longest tf (ns)");
  b0max->add_option("--points", o.range.points, "number of tf values");
  sweep->add_option("--axis", o.axis, "gamma or lambda0_sq");
  sweep->add_option("--grid", o.grid, "comma list or start:stop:count");
  reduce->add_option("--model", o.model, "four-level model JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    const RunConfig cfg = effective_config(o);
    const std::size_t jobs = resolve_job_count(o);
    if (*design) {
      emit(cmd_design(cfg), cfg, out);
    } else if (*simulate) {
      if (!(o.init.epsilon >= 0.0 && o.init.epsilon < 1.0) || !std::isfinite(o.init.phi0)) {
        throw ConfigError("need 0 <= epsilon < 1 and a finite phi0");
      }
      emit(cmd_simulate(cfg, o.init, o.monte_carlo, jobs), cfg, out);
    } else if (*b0max) {
      emit(cmd_b0max(cfg, o.range, jobs), cfg, out);
    } else if (*sweep) {
      const auto result =
          cmd_sweep(cfg, parse_axis(o.axis), parse_grid(o.grid), o.monte_carlo, jobs);
      emit(result.table, cfg, out);
      if (result.failed) {
        err << "error: integrator did not converge at one or more grid points\n";
        return kExitIntegrator;
      }
    } else if (*reduce) {
      emit(cmd_reduce(cfg, load_model_file(o.model, cfg.material_params(), cfg.control.tf_ns)),
           cfg, out);
    }
    return kExitOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const SingularityError& e) {
    err << "singularity error: " << e.what() << '\n';
    try {
      const auto cfg = effective_config(o);
      const double limit = compute_b0_max(cfg.control.tf_ns, cfg.material_params(),
                                          40.0 / cfg.control.tf_ns);
      err << fmt::format("hint: B0max({} ns) = {:.4f} T; choose b0 below it\n",
                         cfg.control.tf_ns, limit);
    } catch (const std::exception&) {
    }
    return kExitSingularity;
  } catch (const IntegratorError& e) {
    err << "integrator error: " << e.what() << '\n';
    return kExitIntegrator;
  } catch (const DegenerateReferenceError& e) {
    err << "degenerate reference: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace spinflip::cli
