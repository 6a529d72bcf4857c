#include "spinflip/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>

#include <fmt/format.h>

#include "spinflip/errors.hpp"
#include "spinflip/field_synthesis.hpp"
#include "spinflip/open_systems.hpp"
#include "spinflip/parallel.hpp"

namespace spinflip::cli {

namespace {

using nlohmann::json;

OutputTable make_table(const char* command, const RunConfig& cfg,
                       std::vector<std::string> columns) {
  OutputTable t;
  t.command = command;
  t.config = to_json(cfg);
  t.columns = std::move(columns);
  return t;
}

// Largest admissible B0 at tf, widening the bracket until it holds.
double b0_limit(double tf, const MaterialParams& mat) {
  double hi = 20.0 / tf;
  for (int i = 0; i < 8; ++i, hi *= 4.0) {
    try {
      return compute_b0_max(tf, mat, hi);
    } catch (const std::invalid_argument&) {
      if (i == 7) throw;
    }
  }
  return hi;
}

// Rejects designs whose singularity structure is not a single removable root.
void check_admissible(const TrajectoryDesign& d) {
  const auto rep = detect_singularities(d, 1001);
  for (std::size_t i = 0; i < rep.count(); ++i) {
    if (!rep.cancellable[i]) throw SingularityError(rep.times[i], rep.numerator_residuals[i]);
  }
  if (rep.count() != 1) {
    throw SingularityError(rep.times.empty() ? 0.5 * d.tf() : rep.times.front(), 0.0);
  }
}

std::size_t record_stride(const RunConfig& cfg) {
  const std::size_t intervals = cfg.control.samples - 1;
  if (cfg.integrator.steps % intervals != 0) {
    throw ConfigError(fmt::format("integrator.steps ({}) must be a multiple of samples - 1 ({})",
                                  cfg.integrator.steps, intervals));
  }
  return cfg.integrator.steps / intervals;
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? a : (i + 1 == n ? b : a + (b - a) * static_cast<double>(i) / (n - 1));
  }
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ConfigError("not a number: '" + s + "'");
  return v;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

}  // namespace

SweepAxis parse_axis(const std::string& s) {
  if (s == "gamma") return SweepAxis::gamma;
  if (s == "lambda0_sq") return SweepAxis::lambda0_sq;
  throw ConfigError("unknown sweep axis '" + s + "' (expected gamma or lambda0_sq)");
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string s = trim(text);
  if (s.empty()) return {};
  std::vector<std::string> parts;
  const char sep = s.find(':') != std::string::npos ? ':' : ',';
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (sep == ':') {
    if (parts.size() != 3) throw ConfigError("range grid must read start:stop:count");
    const double count = parse_double(parts[2]);
    if (!(count >= 1.0) || count != std::floor(count)) {
      throw ConfigError("grid count must be a positive integer");
    }
    return linspace(parse_double(parts[0]), parse_double(parts[1]),
                    static_cast<std::size_t>(count));
  }
  std::vector<double> out;
  for (const auto& p : parts) out.push_back(parse_double(p));
  return out;
}

ReduceInput load_model_file(const std::string& path, const MaterialParams& mat, double tf_ns) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open model file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("model file '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw ConfigError("model file must hold an object");
  static const std::vector<std::string> keys{"e1_meV",     "e2_meV",     "delta_z_meV",
                                             "pbar_x",     "pbar_y",     "m",
                                             "drive_b1_T", "drive_b2_T", "e_ref_meV"};
  for (const auto& [key, _] : doc.items()) {
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw ConfigError("unknown key '" + key + "' in model file");
    }
  }
  auto number = [&](const char* key, std::optional<double> fallback) {
    if (!doc.contains(key)) {
      if (fallback) return *fallback;
      throw ConfigError(std::string("model file lacks '") + key + "'");
    }
    if (!doc.at(key).is_number()) throw ConfigError(std::string(key) + " must be a number");
    return doc.at(key).get<double>();
  };
  auto complex = [&](const char* key) {
    if (!doc.contains(key)) return cplx{};
    const auto& v = doc.at(key);
    if (v.is_number()) return cplx(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
      return cplx(v[0].get<double>(), v[1].get<double>());
    }
    throw ConfigError(std::string(key) + " must be a number or [re, im]");
  };

  ReduceInput r{FourLevelModel{}, 0.0, tf_ns};
  r.model.e1 = number("e1_meV", std::nullopt);
  r.model.e2 = number("e2_meV", std::nullopt);
  r.model.delta_z = number("delta_z_meV", 0.0);
  r.model.pbar_x = complex("pbar_x");
  r.model.pbar_y = complex("pbar_y");
  r.model.m = number("m", std::nullopt);
  r.model.drive_b1 = number("drive_b1_T", 0.0);
  r.model.drive_b2 = number("drive_b2_T", 0.0);
  r.model.mat = mat;
  r.e_ref = number("e_ref_meV", r.model.e1);
  try {
    r.model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return r;
}

OutputTable cmd_design(const RunConfig& cfg) {
  const auto mat = cfg.material_params();
  const auto design = TrajectoryDesign::make(cfg.control.tf_ns, cfg.control.b0_T, mat);
  check_admissible(design);

  auto t = make_table("design", cfg,
                      {"t_ns", "theta_rad", "phi_rad", "B1_T", "B2_T", "Ex_V_per_cm",
                       "Ey_V_per_cm"});
  for (const auto& s : sample_fields(design, cfg.control.samples)) {
    const auto a = eval_angles(design, s.t);
    t.add_row({s.t, a.theta, a.phi, s.b1, s.b2, s.ex, s.ey});
  }
  return t;
}

OutputTable cmd_simulate(const RunConfig& cfg, const InitialState& init, bool monte_carlo,
                         std::size_t jobs) {
  const auto mat = cfg.material_params();
  const auto design = TrajectoryDesign::make(cfg.control.tf_ns, cfg.control.b0_T, mat);
  const std::size_t stride = record_stride(cfg);
  const double gamma = cfg.decoherence.gamma_per_ns;
  const double tf = cfg.control.tf_ns;
  const SpinState psi0 = perturbed_initial_state(init.epsilon, init.phi0);
  const BlochVector r0 = to_bloch(psi0);

  auto t = make_table("simulate", cfg, {"t_ns", "u", "v", "w", "P_up", "P_down"});
  auto add = [&](double time, const BlochVector& r) {
    t.add_row({time, r.u, r.v, r.w, 0.5 * (1.0 + r.w), 0.5 * (1.0 - r.w)});
  };

  double fidelity = 0.0;
  std::optional<double> standard_error;
  if (monte_carlo) {
    if (gamma != 0.0) throw ConfigError("--monte-carlo does not model dephasing; set gamma to 0");
    if (init.epsilon != 0.0) throw ConfigError("--monte-carlo starts from spin up; drop --epsilon");
    auto noise = cfg.noise_params();
    if (noise.n_traj < 100) throw ConfigError("noise.n_traj must be at least 100 for Monte Carlo");
    if (cfg.integrator.steps < 10000) {
      throw ConfigError("integrator.steps must be at least 10000 for Monte Carlo");
    }
    const auto e = ensemble_average(design, noise, cfg.integrator.steps, jobs, stride);
    for (std::size_t i = 0; i < e.times.size(); ++i) add(e.times[i], e.mean[i]);
    fidelity = e.fidelity;
    standard_error = e.standard_error;
  } else {
    const OpenSystemParams p{gamma, cfg.noise.lambda0, cfg.noise.channel};
    const auto r = propagate_open(design, p, cfg.integrator.steps, r0);  // convergence gate
    const auto path = propagate_bloch(design, p, r0, cfg.integrator.steps, stride);
    for (std::size_t i = 0; i < path.times.size(); ++i) add(path.times[i], path.states[i]);
    fidelity = r.fidelity;
  }

  t.summary = {{"F", fidelity},
               {"gamma", gamma},
               {"lambda0", cfg.noise.lambda0},
               {"bound_1_minus_2_gamma_tf", perturbative_bound(gamma, tf)}};
  if (standard_error) t.summary.emplace_back("standard_error", *standard_error);
  t.summary.emplace_back("epsilon", init.epsilon);
  t.summary.emplace_back("phi0", init.phi0);
  t.notes.emplace_back("fidelity", "population of spin down at tf, (1 - w)/2");
  t.notes.emplace_back("mode", monte_carlo ? "monte-carlo" : "master-equation");
  return t;
}

OutputTable cmd_b0max(const RunConfig& cfg, const B0MaxRange& range, std::size_t jobs) {
  if (!(range.tf_min > 0.0) || !(range.tf_max > range.tf_min) || !std::isfinite(range.tf_max)) {
    throw ConfigError("need 0 < tf-min < tf-max");
  }
  if (range.points < 2) throw ConfigError("--points must be at least 2");
  const auto mat = cfg.material_params();
  const auto grid = linspace(range.tf_min, range.tf_max, range.points);
  std::vector<double> values(grid.size());
  parallel_for(grid.size(), jobs, [&](std::size_t i) { values[i] = b0_limit(grid[i], mat); });

  auto t = make_table("b0max", cfg, {"tf_ns", "b0max_T"});
  for (std::size_t i = 0; i < grid.size(); ++i) t.add_row({grid[i], values[i]});
  t.notes.emplace_back("tf_range", fmt::format("{}:{}:{}", format_number(range.tf_min),
                                               format_number(range.tf_max), range.points));
  return t;
}

SweepResult cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& grid,
                      bool monte_carlo, std::size_t jobs) {
  if (monte_carlo && axis != SweepAxis::lambda0_sq) {
    throw ConfigError("--monte-carlo applies to the lambda0_sq axis only");
  }
  for (double v : grid) {
    if (!std::isfinite(v) || v < 0.0) throw ConfigError("grid values must be non-negative");
  }
  const auto mat = cfg.material_params();
  const auto design = TrajectoryDesign::make(cfg.control.tf_ns, cfg.control.b0_T, mat);
  const std::size_t steps = cfg.integrator.steps;
  if (monte_carlo && (steps < 10000 || cfg.noise.n_traj < 100)) {
    throw ConfigError("Monte Carlo sweeps need steps >= 10000 and n_traj >= 100");
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> f(grid.size(), nan);
  std::vector<double> se(grid.size(), nan);
  std::vector<std::string> errors(grid.size());

  auto point = [&](std::size_t i) {
    try {
      if (axis == SweepAxis::gamma) {
        const OpenSystemParams p{grid[i], cfg.noise.lambda0, cfg.noise.channel};
        f[i] = propagate_open(design, p, steps).fidelity;
      } else if (!monte_carlo) {
        const OpenSystemParams p{cfg.decoherence.gamma_per_ns, std::sqrt(grid[i]),
                                 cfg.noise.channel};
        f[i] = propagate_open(design, p, steps).fidelity;
      } else {
        auto noise = cfg.noise_params();
        noise.lambda0 = std::sqrt(grid[i]);
        // points are the parallel unit; each ensemble runs on one worker
        const auto e = ensemble_average(design, noise, steps, 1, steps);
        f[i] = e.fidelity;
        se[i] = e.standard_error;
      }
    } catch (const IntegratorError& e) {
      errors[i] = e.what();
    }
  };
  parallel_for(grid.size(), jobs, point);

  std::vector<std::string> columns{"axis_value", "F"};
  if (monte_carlo) columns.emplace_back("standard_error");
  SweepResult out{make_table("sweep", cfg, columns), false};
  auto& t = out.table;
  t.notes.emplace_back("axis", axis == SweepAxis::gamma ? "gamma" : "lambda0_sq");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (monte_carlo) {
      t.add_row({grid[i], f[i], se[i]});
    } else {
      t.add_row({grid[i], f[i]});
    }
    if (!errors[i].empty()) {
      out.failed = true;
      t.notes.emplace_back("failed", fmt::format("axis_value={} {}", format_number(grid[i]),
                                                 errors[i]));
    }
  }
  return out;
}

OutputTable cmd_reduce(const RunConfig& cfg, const ReduceInput& input) {
  const auto& model = input.model;
  const auto h = build_full_hamiltonian(model);
  const auto parts = partition(h);
  const auto heff = lowdin_reduce(parts, input.e_ref);
  const auto [lo, hi] = hermitian_eigenvalues(heff);
  const auto sc = lowdin_self_consistent(parts, input.e_ref);
  const auto exact = full_spectrum(h);
  const auto xi = xi_factors(model);
  const auto validity = validity_check(model);
  const double adiabatic = orbital_adiabaticity(input.tf_ns, model.gap());
  const double coupling = parts.c.frobenius_norm();

  auto t = make_table("reduce", cfg,
                      {"level", "reduced_meV", "self_consistent_meV", "exact_meV", "error_meV"});
  t.add_row({0.0, lo, sc[0], exact[0], lo - exact[0]});
  t.add_row({1.0, hi, sc[1], exact[1], hi - exact[1]});

  t.summary = {{"e_ref_meV", input.e_ref},
               {"heff_11_re", heff(0, 0).real()},
               {"heff_12_re", heff(0, 1).real()},
               {"heff_12_im", heff(0, 1).imag()},
               {"heff_22_re", heff(1, 1).real()},
               {"xi_x", xi.xi_x},
               {"xi_y", xi.xi_y},
               {"coupling_norm_meV", coupling},
               {"validity_ratio", validity.drive_ratio},
               {"hbar_over_tf_gap", adiabatic}};
  t.notes.emplace_back("drive-weak", validity.drive_ok ? "yes" : "no");
  t.notes.emplace_back("orbital-adiabatic", adiabatic < 0.1 ? "yes" : "no");
  t.notes.emplace_back("model", json{{"e1_meV", model.e1},
                                     {"e2_meV", model.e2},
                                     {"delta_z_meV", model.delta_z},
                                     {"pbar_x", {model.pbar_x.real(), model.pbar_x.imag()}},
                                     {"pbar_y", {model.pbar_y.real(), model.pbar_y.imag()}},
                                     {"m", model.m},
                                     {"drive_b1_T", model.drive_b1},
                                     {"drive_b2_T", model.drive_b2}}
                                    .dump());
  return t;
}

}  // namespace spinflip::cli
