#include "gmce/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "gmce/io.hpp"

namespace gmce {

namespace {

std::string fmt(double x) { return io::format_double(x); }

class Reader {
 public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void fail(const YAML::Node& node, const std::string& what) const {
    throw ConfigError(source_, node.Mark().is_null() ? 0 : static_cast<std::size_t>(node.Mark().line) + 1, what);
  }

  template <class T>
  T scalar(const YAML::Node& node, const std::string& name, const char* kind) const {
    if (!node.IsScalar()) fail(node, name + " must be " + kind);
    try {
      return node.as<T>();
    } catch (const YAML::Exception&) {
      fail(node, name + " must be " + kind + ", got '" + node.Scalar() + "'");
    }
  }

  double real(const YAML::Node& n, const std::string& name) const {
    const double v = scalar<double>(n, name, "a real number");
    if (!std::isfinite(v)) fail(n, name + " must be finite");
    return v;
  }

  /// Real in the open interval (lo, hi); `range` is how the interval is printed.
  double open_interval(const YAML::Node& n, const std::string& name, double lo, double hi,
                       const std::string& range) const {
    const double v = real(n, name);
    if (!(v > lo && v < hi)) fail(n, name + " = " + fmt(v) + " outside admissible range " + range);
    return v;
  }

  double positive(const YAML::Node& n, const std::string& name) const {
    const double v = real(n, name);
    if (!(v > 0.0)) fail(n, name + " = " + fmt(v) + " must be positive");
    return v;
  }

  long integer_at_least(const YAML::Node& n, const std::string& name, long lo) const {
    const long v = scalar<long>(n, name, "an integer");
    if (v < lo) fail(n, name + " = " + std::to_string(v) + " must be >= " + std::to_string(lo));
    return v;
  }

  std::uint64_t seed(const YAML::Node& n, const std::string& name) const {
    return scalar<std::uint64_t>(n, name, "an unsigned 64-bit integer");
  }

  /// Calls handlers[key] for each key of the mapping and rejects unknown keys.
  void block(const YAML::Node& node, const std::string& name,
             const std::map<std::string, std::function<void(const YAML::Node&, const std::string&)>>& handlers) const {
    if (!node.IsMap()) fail(node, "'" + name + "' must be a mapping");
    for (const auto& kv : node) {
      const std::string key = kv.first.as<std::string>();
      const auto it = handlers.find(key);
      if (it == handlers.end()) fail(kv.first, "unknown key '" + name + "." + key + "'");
      it->second(kv.second, name + "." + key);
    }
  }

 private:
  std::string source_;
};

void check_box(const std::string& name, double v) {
  if (!(v > 0.0 && v < 0.5))
    throw ConfigError("", 0, name + " = " + fmt(v) + " outside admissible range (0, 1/2)");
}

}  // namespace

ConfigError::ConfigError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error((source.empty() ? std::string() : source + (line > 0 ? ":" + std::to_string(line) : "") + ": ") +
                         what),
      line_(line) {}

RunConfig parse_config(const std::string& text, const std::string& source) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source, static_cast<std::size_t>(e.mark.line) + 1, e.msg);
  }
  RunConfig cfg;
  if (root.IsNull()) return cfg;
  const Reader r(source);
  using Node = const YAML::Node&;
  using Name = const std::string&;
  const char* box = "(0, 1/2)";
  const char* unit = "(-1, 1)";

  r.block(root, "config",
          {{"model",
            [&](Node n, Name) {
              r.block(n, "model",
                      {{"u1", [&](Node v, Name k) { cfg.model.u1 = r.open_interval(v, k, -1, 1, unit); }},
                       {"u2", [&](Node v, Name k) { cfg.model.u2 = r.open_interval(v, k, -1, 1, unit); }},
                       {"d1", [&](Node v, Name k) { cfg.model.d1 = r.open_interval(v, k, 0, 0.5, box); }},
                       {"d2", [&](Node v, Name k) { cfg.model.d2 = r.open_interval(v, k, 0, 0.5, box); }},
                       {"sigma2_eps", [&](Node v, Name k) { cfg.model.sigma2_eps = r.positive(v, k); }}});
            }},
           {"simulation",
            [&](Node n, Name) {
              r.block(n, "simulation",
                      {{"T", [&](Node v, Name k) { cfg.T = static_cast<int>(r.integer_at_least(v, k, 1)); }},
                       {"n_trunc",
                        [&](Node v, Name k) { cfg.n_trunc = static_cast<int>(r.integer_at_least(v, k, 1)); }},
                       {"seed", [&](Node v, Name k) { cfg.seed = r.seed(v, k); }}});
            }},
           {"contrast",
            [&](Node n, Name) {
              r.block(
                  n, "contrast",
                  {{"u1", [&](Node v, Name k) { cfg.contrast_u1 = r.open_interval(v, k, -1, 1, unit); }},
                   {"u2", [&](Node v, Name k) { cfg.contrast_u2 = r.open_interval(v, k, -1, 1, unit); }},
                   {"sigma2_eps", [&](Node v, Name k) { cfg.contrast_sigma2_eps = r.positive(v, k); }},
                   {"a1", [&](Node v, Name k) {
                      cfg.weight.a1 = r.real(v, k);
                      if (!(cfg.weight.a1 > 1.0)) r.fail(v, k + " = " + fmt(cfg.weight.a1) + " must exceed 1");
                    }},
                   {"a2", [&](Node v, Name k) {
                      cfg.weight.a2 = r.real(v, k);
                      if (!(cfg.weight.a2 > 1.0)) r.fail(v, k + " = " + fmt(cfg.weight.a2) + " must exceed 1");
                    }},
                   {"w0",
                    [&](Node v, Name k) {
                      try {
                        cfg.weight.w0 = parse_base_weight(r.scalar<std::string>(v, k, "a string"));
                      } catch (const std::invalid_argument& e) {
                        r.fail(v, k + ": " + e.what());
                      }
                    }},
                   {"quad_nodes", [&](Node v, Name k) {
                      cfg.quad_nodes = static_cast<std::size_t>(r.integer_at_least(v, k, 8));
                    }}});
            }},
           {"optimizer",
            [&](Node n, Name) {
              r.block(n, "optimizer",
                      {{"coarse_grid_n",
                        [&](Node v, Name k) { cfg.optimizer.coarse_grid_n = static_cast<int>(r.integer_at_least(v, k, 2)); }},
                       {"tol_x", [&](Node v, Name k) { cfg.optimizer.tol_x = r.positive(v, k); }},
                       {"tol_f", [&](Node v, Name k) { cfg.optimizer.tol_f = r.positive(v, k); }},
                       {"max_evals",
                        [&](Node v, Name k) { cfg.optimizer.max_evals = static_cast<int>(r.integer_at_least(v, k, 1)); }},
                       {"clip_margin",
                        [&](Node v, Name k) { cfg.optimizer.clip_margin = r.open_interval(v, k, 0, 0.25, "(0, 1/4)"); }}});
            }},
           {"study", [&](Node n, Name) {
              r.block(
                  n, "study",
                  {{"T_values",
                    [&](Node v, Name k) {
                      if (!v.IsSequence() || v.size() == 0) r.fail(v, k + " must be a nonempty list");
                      cfg.T_values.clear();
                      for (const auto& e : v) {
                        const int T = static_cast<int>(r.integer_at_least(e, k, 2));
                        if (!cfg.T_values.empty() && T <= cfg.T_values.back())
                          r.fail(e, k + " must be strictly ascending");
                        cfg.T_values.push_back(T);
                      }
                    }},
                   {"replications",
                    [&](Node v, Name k) { cfg.replications = static_cast<int>(r.integer_at_least(v, k, 1)); }},
                   {"base_seed", [&](Node v, Name k) { cfg.base_seed = r.seed(v, k); }},
                   {"adjusted", [&](Node v, Name k) { cfg.adjusted = r.scalar<bool>(v, k, "true or false"); }},
                   {"epsilons",
                    [&](Node v, Name k) {
                      if (!v.IsSequence() || v.size() == 0) r.fail(v, k + " must be a nonempty list");
                      cfg.epsilons.clear();
                      for (const auto& e : v) cfg.epsilons.push_back(r.positive(e, k));
                    }},
                   {"sigma2_epsilons",
                    [&](Node v, Name k) {
                      if (!v.IsSequence() || v.size() == 0) r.fail(v, k + " must be a nonempty list");
                      cfg.sigma2_epsilons.clear();
                      for (const auto& e : v) cfg.sigma2_epsilons.push_back(r.positive(e, k));
                    }},
                   {"sigma2_reference", [&](Node v, Name k) {
                     if (v.IsNull())
                       cfg.sigma2_reference.reset();
                     else
                       cfg.sigma2_reference = r.positive(v, k);
                   }}});
            }}});
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.string());
}

void validate(const RunConfig& cfg) {
  try {
    check_model_params(cfg.model);
    check_model_params(contrast_model(cfg));
    check_optimizer_options(cfg.optimizer);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("", 0, e.what());
  }
  check_box("model.d1", cfg.model.d1);
  check_box("model.d2", cfg.model.d2);
  if (cfg.T < 1) throw ConfigError("", 0, "simulation.T must be >= 1");
  if (cfg.n_trunc < 1) throw ConfigError("", 0, "simulation.n_trunc must be >= 1");
  if (!(cfg.weight.a1 > 1.0) || !(cfg.weight.a2 > 1.0)) throw ConfigError("", 0, "contrast.a1 and a2 must exceed 1");
  if (cfg.quad_nodes < 8) throw ConfigError("", 0, "contrast.quad_nodes must be >= 8");
  if (cfg.replications < 1) throw ConfigError("", 0, "study.replications must be >= 1");
  if (cfg.T_values.empty()) throw ConfigError("", 0, "study.T_values must not be empty");
  for (std::size_t i = 0; i < cfg.T_values.size(); ++i)
    if (cfg.T_values[i] < 2 || (i > 0 && cfg.T_values[i] <= cfg.T_values[i - 1]))
      throw ConfigError("", 0, "study.T_values must be strictly ascending integers >= 2");
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["model"] = {{"u1", c.model.u1},
                {"u2", c.model.u2},
                {"d1", c.model.d1},
                {"d2", c.model.d2},
                {"sigma2_eps", c.model.sigma2_eps}};
  j["simulation"] = {{"T", c.T}, {"n_trunc", c.n_trunc}, {"seed", c.seed}};
  const ModelParams cm = contrast_model(c);
  j["contrast"] = {{"u1", cm.u1},
                   {"u2", cm.u2},
                   {"sigma2_eps", cm.sigma2_eps},
                   {"a1", c.weight.a1},
                   {"a2", c.weight.a2},
                   {"w0", std::string(to_string(c.weight.w0))},
                   {"quad_nodes", c.quad_nodes}};
  j["optimizer"] = {{"coarse_grid_n", c.optimizer.coarse_grid_n},
                    {"tol_x", c.optimizer.tol_x},
                    {"tol_f", c.optimizer.tol_f},
                    {"max_evals", c.optimizer.max_evals},
                    {"clip_margin", c.optimizer.clip_margin}};
  j["study"] = {{"T_values", c.T_values},
                {"replications", c.replications},
                {"base_seed", c.base_seed},
                {"adjusted", c.adjusted},
                {"epsilons", c.epsilons},
                {"sigma2_epsilons", c.sigma2_epsilons},
                {"sigma2_reference", c.sigma2_reference ? nlohmann::ordered_json(*c.sigma2_reference) : nullptr}};
  return j;
}

std::string config_sha256(const RunConfig& cfg) {
  const std::string text = to_json(cfg).dump();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 computation failed");
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 0xF];
  }
  return out;
}

ModelParams contrast_model(const RunConfig& cfg) {
  ModelParams m = cfg.model;
  if (cfg.contrast_u1) m.u1 = *cfg.contrast_u1;
  if (cfg.contrast_u2) m.u2 = *cfg.contrast_u2;
  if (cfg.contrast_sigma2_eps) m.sigma2_eps = *cfg.contrast_sigma2_eps;
  return m;
}

ContrastContext make_context(const RunConfig& cfg) {
  return ContrastContext::make(contrast_model(cfg), cfg.weight, cfg.quad_nodes);
}

SimConfig sim_config(const RunConfig& cfg) { return {cfg.model, cfg.n_trunc, cfg.seed}; }

StudyConfig study_config(const RunConfig& cfg) {
  StudyConfig s{make_context(cfg)};
  s.theta0 = {cfg.model.d1, cfg.model.d2};
  s.T_values = cfg.T_values;
  s.replications = cfg.replications;
  s.base_seed = cfg.base_seed;
  s.adjusted = cfg.adjusted;
  s.epsilons = cfg.epsilons;
  s.sigma2_epsilons = cfg.sigma2_epsilons;
  s.sigma2_reference = cfg.sigma2_reference;
  s.n_trunc = cfg.n_trunc;
  s.optimizer = cfg.optimizer;
  s.sim_model = cfg.model;
  return s;
}

}  // namespace gmce
