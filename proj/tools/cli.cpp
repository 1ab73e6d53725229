#include "cli.hpp"

#include <filesystem>
#include <optional>
#include <string>

#include <omp.h>

#include <CLI11.hpp>

#include "gmce/asymptotics.hpp"
#include "gmce/config.hpp"
#include "gmce/estimate.hpp"
#include "gmce/io.hpp"
#include "gmce/montecarlo.hpp"
#include "gmce/periodogram.hpp"
#include "gmce/simulate.hpp"

namespace gmce {

namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

/// Flags shared by every subcommand that can override the config file.
struct Overrides {
  std::string config_path;
  std::optional<int> T;
  std::optional<std::uint64_t> seed;
  std::optional<int> n_trunc;
  std::optional<int> replications;
  std::optional<std::uint64_t> base_seed;
  std::optional<std::vector<int>> T_values;
  std::optional<std::size_t> quad_nodes;
};

RunConfig resolve_config(const Overrides& o) {
  RunConfig cfg = o.config_path.empty() ? RunConfig{} : load_config(o.config_path);
  if (o.T) cfg.T = *o.T;
  if (o.seed) cfg.seed = *o.seed;
  if (o.n_trunc) cfg.n_trunc = *o.n_trunc;
  if (o.replications) cfg.replications = *o.replications;
  if (o.base_seed) cfg.base_seed = *o.base_seed;
  if (o.T_values) cfg.T_values = *o.T_values;
  if (o.quad_nodes) cfg.quad_nodes = *o.quad_nodes;
  validate(cfg);
  return cfg;
}

io::OutputMeta meta_for(const RunConfig& cfg) { return {config_sha256(cfg), ordered_json::object()}; }

ordered_json params_json(const ModelParams& p) {
  return {{"u1", p.u1}, {"u2", p.u2}, {"d1", p.d1}, {"d2", p.d2}, {"sigma2_eps", p.sigma2_eps}};
}

/// Writes JSON to `path`, or to `out` when the path is empty or "-".
void emit_json(const ordered_json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-")
    out << io::dump(j);
  else
    io::write_text(path, io::dump(j));
}

fs::path sibling_json(const fs::path& p) {
  fs::path q = p;
  q.replace_extension(".json");
  if (q == p) q += ".meta.json";
  return q;
}

int cmd_simulate(const Overrides& o, const std::string& out_path, std::string json_path, std::ostream& out) {
  const RunConfig cfg = resolve_config(o);
  const GridField field = simulate_field(cfg.T, sim_config(cfg));
  io::OutputMeta meta = meta_for(cfg);
  io::write_text(out_path, io::field_csv(field, meta));
  meta.extra["params"] = params_json(cfg.model);
  meta.extra["seed"] = cfg.seed;
  meta.extra["n_trunc"] = cfg.n_trunc;
  if (json_path.empty()) json_path = sibling_json(out_path).string();
  io::write_text(json_path, io::dump(io::field_json(field, meta)));
  out << "wrote " << out_path << " and " << json_path << "\n";
  return kExitOk;
}

int cmd_spectrum(const Overrides& o, const std::string& field_path, bool unbiased, bool clamp,
                 const std::string& out_path, std::string json_path, std::ostream& out) {
  const RunConfig cfg = resolve_config(o);
  const ContrastContext ctx = make_context(cfg);
  const FrequencyGrid freqs = frequency_grid(ctx.quad());
  io::OutputMeta meta = meta_for(cfg);
  PeriodogramGrid pg;
  if (field_path.empty()) {
    pg = spectral_density_grid({cfg.model.d1, cfg.model.d2}, ctx);
    meta.extra["quantity"] = "spectral_density";
  } else {
    const GridField field = io::read_field(field_path);
    if (unbiased) {
      double max_imag = 0.0;
      pg = unbiased_periodogram(field, freqs, clamp, &max_imag);
      meta.extra["quantity"] = clamp ? "unbiased_periodogram_clamped" : "unbiased_periodogram";
      meta.extra["max_imag_part"] = max_imag;
    } else {
      pg = periodogram(field, freqs);
      meta.extra["quantity"] = "periodogram";
    }
    meta.extra["T"] = field.size_T;
  }
  io::write_text(out_path, io::periodogram_csv(pg, meta));
  if (json_path.empty()) json_path = sibling_json(out_path).string();
  io::write_text(json_path, io::dump(io::periodogram_json(pg, meta)));
  out << "wrote " << out_path << " and " << json_path << "\n";
  return kExitOk;
}

int cmd_estimate(const Overrides& o, const std::string& field_path, bool adjusted, const std::string& out_path,
                 std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(o);
  const GridField field = io::read_field(field_path);
  const ContrastContext ctx = make_context(cfg);
  const EstimationResult r = adjusted ? mce_adjusted(field, ctx, cfg.optimizer) : mce(field, ctx, cfg.optimizer);
  io::OutputMeta meta = meta_for(cfg);
  meta.extra["estimator"] = adjusted ? "adjusted" : "standard";
  meta.extra["T"] = field.size_T;
  emit_json(io::estimation_json(r, meta), out_path, out);
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  return (r.converged && !r.boundary_flag) ? kExitOk : kExitStatisticalWarning;
}

int cmd_asymptotics(const Overrides& o, const std::string& out_path, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = resolve_config(o);
  const ContrastContext ctx = make_context(cfg);
  const LrdParams theta{cfg.model.d1, cfg.model.d2};
  const SandwichCovariance s = sandwich(theta, ctx);
  io::OutputMeta meta = meta_for(cfg);
  meta.extra["theta"] = {theta.d1, theta.d2};
  emit_json(io::sandwich_json(s, meta), out_path, out);
  for (const auto& w : s.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

int cmd_mc_consistency(const Overrides& o, const fs::path& dir, std::ostream& out) {
  const RunConfig cfg = resolve_config(o);
  const ConsistencyReport rep = run_consistency_study(study_config(cfg));
  const io::OutputMeta meta = meta_for(cfg);
  fs::create_directories(dir);
  io::write_text(dir / "report.json", io::dump(io::consistency_json(rep, meta)));
  std::vector<ReplicationRecord> all;
  for (const auto& s : rep.sizes) all.insert(all.end(), s.records.begin(), s.records.end());
  io::write_text(dir / "estimates.csv", io::estimates_csv(all, meta));
  for (const auto& s : rep.sizes)
    out << "T=" << s.T << " median|theta_hat-theta0|=" << io::format_double(s.median_error)
        << " failures=" << s.failures << "\n";
  return kExitOk;
}

int cmd_mc_normality(const Overrides& o, const fs::path& dir, std::ostream& out) {
  const RunConfig cfg = resolve_config(o);
  const NormalityReport rep = run_normality_study(study_config(cfg));
  const io::OutputMeta meta = meta_for(cfg);
  fs::create_directories(dir);
  io::write_text(dir / "report.json", io::dump(io::normality_json(rep, meta)));
  io::write_text(dir / "estimates.csv", io::estimates_csv(rep.records, meta));
  io::write_text(dir / "qq.csv", io::qq_csv(rep, meta));
  out << "T=" << rep.T << " samples=" << rep.scaled.size();
  if (rep.mardia)
    out << " p_skew=" << io::format_double(rep.mardia->p_skew) << " p_kurt=" << io::format_double(rep.mardia->p_kurt);
  out << "\n";
  return kExitOk;
}

void add_config_flags(CLI::App* cmd, Overrides& o) {
  cmd->add_option("-c,--config", o.config_path, "YAML run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--quad-nodes", o.quad_nodes, "quadrature nodes per axis (overrides contrast.quad_nodes)");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gegenbauer random fields: simulation and minimum contrast estimation", "gmce"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "maximum number of worker threads (0 = runtime default)")
      ->check(CLI::NonNegativeNumber);

  Overrides o;
  std::string out_path, json_path, field_path, out_dir = ".";
  bool adjusted = false, unbiased = false, clamp = false;

  auto* sim = app.add_subcommand("simulate", "simulate a field and write CSV plus a JSON envelope");
  add_config_flags(sim, o);
  sim->add_option("-o,--out", out_path, "field CSV path")->required();
  sim->add_option("--json", json_path, "JSON envelope path (default: CSV path with .json)");
  sim->add_option("--T", o.T, "grid size T (overrides simulation.T)");
  sim->add_option("--seed", o.seed, "noise seed (overrides simulation.seed)");
  sim->add_option("--n-trunc", o.n_trunc, "MA truncation (overrides simulation.n_trunc)");

  auto* spec = app.add_subcommand("spectrum", "periodogram of a field, or the model spectral density");
  add_config_flags(spec, o);
  spec->add_option("-f,--field", field_path, "field file (CSV or JSON); omit for the spectral density");
  spec->add_flag("--unbiased", unbiased, "use the unbiased periodogram");
  spec->add_flag("--clamp", clamp, "set negative values of the unbiased periodogram to zero");
  spec->add_option("-o,--out", out_path, "CSV output path")->required();
  spec->add_option("--json", json_path, "JSON output path (default: CSV path with .json)");

  auto* est = app.add_subcommand("estimate", "minimum contrast estimate of (d1, d2)");
  add_config_flags(est, o);
  est->add_option("-f,--field", field_path, "field file (CSV or JSON)")->required();
  est->add_flag("--adjusted", adjusted, "use the unbiased periodogram (adjusted estimator)");
  est->add_option("-o,--out", out_path, "JSON output path (default: stdout)");

  auto* asy = app.add_subcommand("asymptotics", "S, A and the sandwich covariance at the model (d1, d2)");
  add_config_flags(asy, o);
  asy->add_option("-o,--out", out_path, "JSON output path (default: stdout)");

  auto add_study_flags = [&](CLI::App* cmd) {
    add_config_flags(cmd, o);
    cmd->add_option("--out-dir", out_dir, "directory for report.json and CSV files");
    cmd->add_option("--replications", o.replications, "replications per T (overrides study.replications)");
    cmd->add_option("--base-seed", o.base_seed, "base seed (overrides study.base_seed)");
    cmd->add_option("--T-values", o.T_values, "sample sizes (overrides study.T_values)")->delimiter(',');
    cmd->add_option("--n-trunc", o.n_trunc, "MA truncation (overrides simulation.n_trunc)");
  };
  auto* mcc = app.add_subcommand("mc-consistency", "consistency study over several T");
  add_study_flags(mcc);
  auto* mcn = app.add_subcommand("mc-normality", "normality study of the adjusted estimator at the largest T");
  add_study_flags(mcn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInputError;
  }
  // restores the caller's thread cap, since run_cli may be called repeatedly in one process
  struct ThreadCap {
    int saved = omp_get_max_threads();
    ~ThreadCap() { omp_set_num_threads(saved); }
  } cap;
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*sim) return cmd_simulate(o, out_path, json_path, out);
    if (*spec) return cmd_spectrum(o, field_path, unbiased, clamp, out_path, json_path, out);
    if (*est) return cmd_estimate(o, field_path, adjusted, out_path, out, err);
    if (*asy) return cmd_asymptotics(o, out_path, out, err);
    if (*mcc) return cmd_mc_consistency(o, out_dir, out);
    if (*mcn) return cmd_mc_normality(o, out_dir, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}

}  // namespace gmce
