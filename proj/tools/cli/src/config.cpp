#include "spinflip/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <openssl/evp.h>

namespace spinflip::cli {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where,
                    const std::set<std::string>& allowed) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

double get_number(const json& obj, const std::string& where, const char* key, double fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + " must be a number");
  return v.get<double>();
}

std::uint64_t get_count(const json& obj, const std::string& where, const char* key,
                        std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    throw ConfigError(where + "." + key + " must be a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const std::string& where, const char* key,
                       const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const auto& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(where + "." + key + " must be a string");
  return v.get<std::string>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

}  // namespace

MaterialParams RunConfig::material_params() const {
  return MaterialParams(material.hbar_alpha_meV_cm,
                        material.hbar_alpha_meV_cm * material.beta_over_alpha,
                        material.g_factor, material.xi_x, material.xi_y);
}

NoiseParams RunConfig::noise_params() const {
  return NoiseParams{noise.lambda0, noise.channel, noise.seed, noise.n_traj};
}

void RunConfig::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  require(finite(material.hbar_alpha_meV_cm) && material.hbar_alpha_meV_cm != 0.0,
          "material.hbar_alpha_meV_cm must be finite and non-zero");
  require(finite(material.beta_over_alpha) && material.beta_over_alpha != 0.0,
          "material.beta_over_alpha must be finite and non-zero");
  require(finite(material.g_factor) && material.g_factor != 0.0,
          "material.g_factor must be finite and non-zero");
  require(finite(material.xi_x) && material.xi_x > -1.0, "material.xi_x must exceed -1");
  require(finite(material.xi_y) && material.xi_y > -1.0, "material.xi_y must exceed -1");
  require(finite(control.tf_ns) && control.tf_ns > 0.0, "control.tf_ns must be positive");
  require(finite(control.b0_T) && control.b0_T >= 0.0, "control.b0_T must be non-negative");
  require(control.samples >= 2, "control.samples must be at least 2");
  require(finite(decoherence.gamma_per_ns) && decoherence.gamma_per_ns >= 0.0,
          "decoherence.gamma_per_ns must be non-negative");
  require(finite(noise.lambda0) && noise.lambda0 >= 0.0, "noise.lambda0 must be non-negative");
  require(noise.n_traj >= 1, "noise.n_traj must be at least 1");
  require(integrator.steps >= 1000, "integrator.steps must be at least 1000");
}

RunConfig parse_config(const json& doc, RunConfig cfg) {
  reject_unknown(doc, "config",
                 {"material", "control", "decoherence", "noise", "integrator", "output"});
  if (doc.contains("material")) {
    const auto& m = doc.at("material");
    const std::string w = "material";
    reject_unknown(m, w, {"hbar_alpha_meV_cm", "beta_over_alpha", "g_factor", "xi_x", "xi_y"});
    cfg.material.hbar_alpha_meV_cm =
        get_number(m, w, "hbar_alpha_meV_cm", cfg.material.hbar_alpha_meV_cm);
    cfg.material.beta_over_alpha = get_number(m, w, "beta_over_alpha", cfg.material.beta_over_alpha);
    cfg.material.g_factor = get_number(m, w, "g_factor", cfg.material.g_factor);
    cfg.material.xi_x = get_number(m, w, "xi_x", cfg.material.xi_x);
    cfg.material.xi_y = get_number(m, w, "xi_y", cfg.material.xi_y);
  }
  if (doc.contains("control")) {
    const auto& c = doc.at("control");
    const std::string w = "control";
    reject_unknown(c, w, {"tf_ns", "b0_T", "samples"});
    cfg.control.tf_ns = get_number(c, w, "tf_ns", cfg.control.tf_ns);
    cfg.control.b0_T = get_number(c, w, "b0_T", cfg.control.b0_T);
    cfg.control.samples = get_count(c, w, "samples", cfg.control.samples);
  }
  if (doc.contains("decoherence")) {
    const auto& d = doc.at("decoherence");
    reject_unknown(d, "decoherence", {"gamma_per_ns"});
    cfg.decoherence.gamma_per_ns =
        get_number(d, "decoherence", "gamma_per_ns", cfg.decoherence.gamma_per_ns);
  }
  if (doc.contains("noise")) {
    const auto& n = doc.at("noise");
    const std::string w = "noise";
    reject_unknown(n, w, {"lambda0", "channel", "seed", "n_traj"});
    cfg.noise.lambda0 = get_number(n, w, "lambda0", cfg.noise.lambda0);
    if (n.contains("channel")) {
      try {
        cfg.noise.channel = parse_noise_channel(get_string(n, w, "channel", ""));
      } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
      }
    }
    cfg.noise.seed = get_count(n, w, "seed", cfg.noise.seed);
    cfg.noise.n_traj = get_count(n, w, "n_traj", cfg.noise.n_traj);
  }
  if (doc.contains("integrator")) {
    const auto& i = doc.at("integrator");
    reject_unknown(i, "integrator", {"steps"});
    cfg.integrator.steps = get_count(i, "integrator", "steps", cfg.integrator.steps);
  }
  if (doc.contains("output")) {
    const auto& o = doc.at("output");
    reject_unknown(o, "output", {"path", "format"});
    cfg.output.path = get_string(o, "output", "path", cfg.output.path);
    if (o.contains("format")) cfg.output.format = parse_format(get_string(o, "output", "format", ""));
  }
  return cfg;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "': " + e.what());
  }
  return parse_config(doc, std::move(base));
}

json to_json(const RunConfig& cfg) {
  // the output section is omitted: where a table goes does not change it
  return json{
      {"material",
       {{"hbar_alpha_meV_cm", cfg.material.hbar_alpha_meV_cm},
        {"beta_over_alpha", cfg.material.beta_over_alpha},
        {"g_factor", cfg.material.g_factor},
        {"xi_x", cfg.material.xi_x},
        {"xi_y", cfg.material.xi_y}}},
      {"control",
       {{"tf_ns", cfg.control.tf_ns}, {"b0_T", cfg.control.b0_T}, {"samples", cfg.control.samples}}},
      {"decoherence", {{"gamma_per_ns", cfg.decoherence.gamma_per_ns}}},
      {"noise",
       {{"lambda0", cfg.noise.lambda0},
        {"channel", std::string(to_string(cfg.noise.channel))},
        {"seed", cfg.noise.seed},
        {"n_traj", cfg.noise.n_traj}}},
      {"integrator", {{"steps", cfg.integrator.steps}}},
  };
}

OutputFormat parse_format(const std::string& s) {
  if (s == "csv") return OutputFormat::csv;
  if (s == "json") return OutputFormat::json;
  throw ConfigError("unknown output format '" + s + "' (expected csv or json)");
}

std::string git_blob_sha1(const std::string& content) {
  const std::string header = "blob " + std::to_string(content.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw std::runtime_error("cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, content.data(), content.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &len) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw std::runtime_error("SHA-1 digest failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

}  // namespace spinflip::cli
