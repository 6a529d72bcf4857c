#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "spinflip/cli/config.hpp"
#include "spinflip/cli/table.hpp"
#include "spinflip/constants.hpp"
#include "spinflip/lowdin.hpp"

namespace spinflip::cli {

/// Initialization error of the simulated flip: (sqrt(1-eps) e^{i phi0}, sqrt(eps)).
struct InitialState {
  double epsilon = 0.0;
  double phi0 = pi / 2;
};

enum class SweepAxis { gamma, lambda0_sq };

SweepAxis parse_axis(const std::string& s);

/// "a,b,c" or "start:stop:count"; an empty string is an empty grid.
std::vector<double> parse_grid(const std::string& s);

struct B0MaxRange {
  double tf_min = 0.2;
  double tf_max = 2.0;
  std::size_t points = 10;
};

struct ReduceInput {
  FourLevelModel model;
  double e_ref = 0.0;
  double tf_ns = 1.0;
};

/// JSON model file: e1_meV, e2_meV, delta_z_meV, pbar_x, pbar_y ([re, im]),
/// m, drive_b1_T, drive_b2_T and optional e_ref_meV (default e1).
ReduceInput load_model_file(const std::string& path, const MaterialParams& mat, double tf_ns);

OutputTable cmd_design(const RunConfig& cfg);
OutputTable cmd_simulate(const RunConfig& cfg, const InitialState& init, bool monte_carlo,
                         std::size_t jobs);
OutputTable cmd_b0max(const RunConfig& cfg, const B0MaxRange& range, std::size_t jobs);

struct SweepResult {
  OutputTable table;
  bool failed = false;
};
SweepResult cmd_sweep(const RunConfig& cfg, SweepAxis axis, const std::vector<double>& grid,
                      bool monte_carlo, std::size_t jobs);
OutputTable cmd_reduce(const RunConfig& cfg, const ReduceInput& input);

}  // namespace spinflip::cli
