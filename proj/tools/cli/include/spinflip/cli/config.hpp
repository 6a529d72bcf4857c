#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "spinflip/material.hpp"
#include "spinflip/open_systems.hpp"

namespace spinflip::cli {

/// Invalid or unreadable configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class OutputFormat { csv, json };

struct RunConfig {
  struct Material {
    double hbar_alpha_meV_cm = 2e-6;
    double beta_over_alpha = 0.5;
    double g_factor = -0.44;
    double xi_x = 0.0;
    double xi_y = 0.0;
  } material;
  struct Control {
    double tf_ns = 1.0;
    double b0_T = 0.15;
    std::size_t samples = 1001;
  } control;
  struct Decoherence {
    double gamma_per_ns = 0.0;
  } decoherence;
  struct Noise {
    double lambda0 = 0.0;
    NoiseChannel channel = NoiseChannel::as_printed;
    std::uint64_t seed = 0;
    std::size_t n_traj = 1000;
  } noise;
  struct Integrator {
    std::size_t steps = 10000;
  } integrator;
  struct Output {
    std::string path;  ///< empty: standard output
    OutputFormat format = OutputFormat::csv;
  } output;

  MaterialParams material_params() const;
  NoiseParams noise_params() const;

  /// Checks every physical field; throws ConfigError.
  void validate() const;
};

/// Overlays a JSON document on the defaults. Unknown sections or keys and
/// wrongly typed values throw ConfigError.
RunConfig parse_config(const nlohmann::json& doc, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Canonical JSON echo of the effective configuration.
nlohmann::json to_json(const RunConfig& cfg);

OutputFormat parse_format(const std::string& s);

/// Hex SHA-1 of the git blob object holding `content`.
std::string git_blob_sha1(const std::string& content);

}  // namespace spinflip::cli
