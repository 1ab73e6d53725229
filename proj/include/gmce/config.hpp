#pragma once

// Run configuration for the CLI: a YAML file with the blocks
//
//   model:      u1, u2, d1, d2, sigma2_eps
//   simulation: T, n_trunc, seed
//   contrast:   u1, u2, sigma2_eps (default to the model block), a1, a2, w0, quad_nodes
//   optimizer:  coarse_grid_n, tol_x, tol_f, max_evals, clip_margin
//   study:      T_values, replications, base_seed, adjusted, epsilons,
//               sigma2_epsilons, sigma2_reference
//
// Every block and key is optional; unknown keys are rejected.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gmce/contrast.hpp"
#include "gmce/estimate.hpp"
#include "gmce/montecarlo.hpp"
#include "gmce/simulate.hpp"

namespace gmce {

/// Invalid configuration; `line` is 1-based, 0 when the problem is not tied
/// to one line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct RunConfig {
  ModelParams model;

  int T = 50;
  int n_trunc = 40;
  std::uint64_t seed = 1;

  std::optional<double> contrast_u1;
  std::optional<double> contrast_u2;
  std::optional<double> contrast_sigma2_eps;
  WeightConfig weight;
  std::size_t quad_nodes = 256;

  OptimizerOptions optimizer;

  std::vector<int> T_values{10, 20, 30, 40, 50};
  int replications = 100;
  std::uint64_t base_seed = 20240101;
  bool adjusted = false;
  std::vector<double> epsilons{0.025, 0.05, 0.1, 0.2};
  std::vector<double> sigma2_epsilons{2.5, 5.0, 10.0, 20.0, 40.0};
  std::optional<double> sigma2_reference;
};

/// Parses YAML text. `source` names the input in error messages.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");
RunConfig load_config(const std::filesystem::path& path);

/// Checks every range invariant; throws ConfigError without a line number.
void validate(const RunConfig& cfg);

/// All fields with defaults filled in, in a fixed key order.
nlohmann::ordered_json to_json(const RunConfig& cfg);

/// Hex SHA-256 of the compact dump of to_json(cfg).
std::string config_sha256(const RunConfig& cfg);

/// The nuisance parameters used for estimation: the model block with the
/// contrast overrides applied.
ModelParams contrast_model(const RunConfig& cfg);
ContrastContext make_context(const RunConfig& cfg);
SimConfig sim_config(const RunConfig& cfg);
StudyConfig study_config(const RunConfig& cfg);

}  // namespace gmce
