#include "gmce/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string_view>

#include "gmce/version.hpp"

namespace gmce::io {

namespace {

using nlohmann::ordered_json;

std::string header_comment(const OutputMeta& meta, const std::string& extra = {}) {
  std::string s = "# gmce ";
  s += kVersion;
  if (!extra.empty()) s += " " + extra;
  s += " config_sha256=" + meta.config_sha256 + "\n";
  return s;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

template <class T>
bool parse_number(std::string_view s, T& out) {
  s = trim(s);
  if (s.empty()) return false;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

ordered_json values_json(const Matrix& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (double v : m.row(r)) row.push_back(v);
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json vec_json(const std::vector<double>& v) {
  ordered_json a = ordered_json::array();
  for (double x : v) a.push_back(x);
  return a;
}

ordered_json record_json(const ReplicationRecord& r) {
  ordered_json j;
  j["T"] = r.T;
  j["rep"] = r.rep;
  j["seed"] = r.seed;
  if (r.failed) {
    j["failed"] = true;
    j["error"] = r.error;
    return j;
  }
  j["theta_hat"] = {r.theta_hat.d1, r.theta_hat.d2};
  j["sigma2_hat"] = r.sigma2_hat;
  j["converged"] = r.converged;
  j["boundary_flag"] = r.boundary_flag;
  return j;
}

}  // namespace

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& what)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " + what),
      line_(line) {}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return {buf, res.ptr};
}

ordered_json meta_json(const OutputMeta& meta) {
  ordered_json j;
  j["tool"] = "gmce";
  j["version"] = kVersion;
  j["config_sha256"] = meta.config_sha256;
  return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

std::string field_csv(const GridField& field, const OutputMeta& meta) {
  std::string s = header_comment(meta, "T=" + std::to_string(field.size_T));
  s += "t1,t2,value\n";
  for (int t1 = 0; t1 <= field.size_T; ++t1)
    for (int t2 = 0; t2 <= field.size_T; ++t2) {
      s += std::to_string(t1);
      s += ',';
      s += std::to_string(t2);
      s += ',';
      s += format_double(field(t1, t2));
      s += '\n';
    }
  return s;
}

GridField parse_field_csv(const std::string& text, const std::string& source) {
  struct Record {
    long t1, t2;
    double value;
    std::size_t line;
  };
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  int declared_T = -1;
  bool header_seen = false;
  std::vector<Record> records;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view v = trim(line);
    if (v.empty()) continue;
    if (v.front() == '#') {
      const auto pos = v.find(" T=");
      if (pos != std::string_view::npos) {
        std::string_view rest = v.substr(pos + 3);
        rest = rest.substr(0, rest.find(' '));
        if (!parse_number(rest, declared_T) || declared_T < 1)
          throw ParseError(source, lineno, "bad T in comment line");
      }
      continue;
    }
    if (!header_seen) {
      if (v != "t1,t2,value") throw ParseError(source, lineno, "expected header 't1,t2,value'");
      header_seen = true;
      continue;
    }
    const auto c1 = v.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : v.find(',', c1 + 1);
    if (c2 == std::string_view::npos || v.find(',', c2 + 1) != std::string_view::npos)
      throw ParseError(source, lineno, "expected three comma-separated fields");
    Record r{0, 0, 0.0, lineno};
    if (!parse_number(v.substr(0, c1), r.t1) || !parse_number(v.substr(c1 + 1, c2 - c1 - 1), r.t2))
      throw ParseError(source, lineno, "t1 and t2 must be integers");
    if (!parse_number(v.substr(c2 + 1), r.value) || !std::isfinite(r.value))
      throw ParseError(source, lineno, "value is not a finite number");
    records.push_back(r);
  }
  if (!header_seen) throw ParseError(source, lineno, "missing header 't1,t2,value'");

  int T = declared_T;
  if (T < 0) {
    const auto side = static_cast<long>(std::llround(std::sqrt(static_cast<double>(records.size()))));
    if (side < 2 || static_cast<std::size_t>(side * side) != records.size())
      throw ParseError(source, lineno,
                       "record count " + std::to_string(records.size()) + " is not (T+1)^2 for any T >= 1");
    T = static_cast<int>(side - 1);
  }
  const std::size_t side = static_cast<std::size_t>(T) + 1;
  const std::size_t n = std::min(records.size(), side * side);
  for (std::size_t k = 0; k < n; ++k) {
    const Record& r = records[k];
    if (static_cast<std::size_t>(r.t1) != k / side || static_cast<std::size_t>(r.t2) != k % side || r.t1 < 0 ||
        r.t2 < 0)
      throw ParseError(source, r.line,
                       "expected record (" + std::to_string(k / side) + "," + std::to_string(k % side) + ")");
  }
  if (records.size() < side * side)
    throw ParseError(source, lineno + 1,
                     "expected " + std::to_string(side * side) + " records for T=" + std::to_string(T) + ", found " +
                         std::to_string(records.size()));
  if (records.size() > side * side)
    throw ParseError(source, records[side * side].line, "more records than (T+1)^2 for T=" + std::to_string(T));

  Matrix m(side, side);
  for (std::size_t k = 0; k < n; ++k) m.data()[k] = records[k].value;
  return GridField(T, std::move(m));
}

ordered_json field_json(const GridField& field, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["T"] = field.size_T;
  j["values"] = values_json(field.values);
  return j;
}

GridField parse_field_json(const std::string& text, const std::string& source) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 0, std::string("invalid JSON: ") + e.what());
  }
  if (!j.contains("T") || !j["T"].is_number_integer()) throw ParseError(source, 0, "missing integer 'T'");
  const int T = j["T"].get<int>();
  if (T < 1) throw ParseError(source, 0, "T must be >= 1");
  const std::size_t side = static_cast<std::size_t>(T) + 1;
  const auto& rows = j["values"];
  if (!rows.is_array() || rows.size() != side)
    throw ParseError(source, 0, "'values' must hold T+1 = " + std::to_string(side) + " rows");
  Matrix m(side, side);
  for (std::size_t r = 0; r < side; ++r) {
    if (!rows[r].is_array() || rows[r].size() != side)
      throw ParseError(source, 0, "row " + std::to_string(r) + " must hold T+1 values");
    for (std::size_t c = 0; c < side; ++c) {
      if (!rows[r][c].is_number()) throw ParseError(source, 0, "non-numeric value in row " + std::to_string(r));
      m(r, c) = rows[r][c].get<double>();
    }
  }
  try {
    return GridField(T, std::move(m));
  } catch (const std::exception& e) {
    throw ParseError(source, 0, e.what());
  }
}

GridField read_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  if (path.extension() == ".json") return parse_field_json(ss.str(), path.string());
  return parse_field_csv(ss.str(), path.string());
}

std::string periodogram_csv(const PeriodogramGrid& p, const OutputMeta& meta) {
  std::string s = header_comment(meta);
  s += "lambda1,lambda2,value\n";
  for (std::size_t k = 0; k < p.freqs1.size(); ++k)
    for (std::size_t l = 0; l < p.freqs2.size(); ++l) {
      s += format_double(p.freqs1[k]);
      s += ',';
      s += format_double(p.freqs2[l]);
      s += ',';
      s += format_double(p.values(k, l));
      s += '\n';
    }
  return s;
}

ordered_json periodogram_json(const PeriodogramGrid& p, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["freqs1"] = vec_json(p.freqs1);
  j["freqs2"] = vec_json(p.freqs2);
  j["values"] = values_json(p.values);
  return j;
}

ordered_json estimation_json(const EstimationResult& r, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["theta_hat"] = {r.theta_hat.d1, r.theta_hat.d2};
  j["sigma2_hat"] = r.sigma2_hat;
  j["objective"] = r.objective_value;
  j["evaluations"] = r.evaluations;
  j["converged"] = r.converged;
  j["boundary_flag"] = r.boundary_flag;
  j["warnings"] = r.warnings;
  return j;
}

ordered_json mat2_json(const Mat2& m) { return {{m(0, 0), m(0, 1)}, {m(1, 0), m(1, 1)}}; }

ordered_json sandwich_json(const SandwichCovariance& s, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["S"] = mat2_json(s.S);
  j["A"] = mat2_json(s.A);
  j["cov"] = mat2_json(s.cov);
  j["condition_numbers"] = {{"S", s.condition_S}, {"A", s.condition_A}};
  j["warnings"] = s.warnings;
  return j;
}

ordered_json consistency_json(const ConsistencyReport& r, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["sigma2_reference"] = r.sigma2_reference;
  j["epsilons"] = vec_json(r.epsilons);
  j["sigma2_epsilons"] = vec_json(r.sigma2_epsilons);
  j["quantile_levels"] = vec_json({std::begin(kSummaryLevels), std::end(kSummaryLevels)});
  ordered_json sizes = ordered_json::array();
  for (const auto& s : r.sizes) {
    ordered_json e;
    e["T"] = s.T;
    e["replications"] = s.records.size();
    e["failures"] = s.failures;
    e["nonconverged"] = s.nonconverged;
    e["boundary_hits"] = s.boundary_hits;
    e["median_error"] = s.median_error;
    e["d1_quantiles"] = vec_json(s.d1_quantiles);
    e["d2_quantiles"] = vec_json(s.d2_quantiles);
    e["sigma2_quantiles"] = vec_json(s.sigma2_quantiles);
    e["prob_theta"] = vec_json(s.prob_theta);
    e["prob_sigma2"] = vec_json(s.prob_sigma2);
    ordered_json recs = ordered_json::array();
    for (const auto& rec : s.records) recs.push_back(record_json(rec));
    e["records"] = std::move(recs);
    sizes.push_back(std::move(e));
  }
  j["sizes"] = std::move(sizes);
  return j;
}

ordered_json normality_json(const NormalityReport& r, const OutputMeta& meta) {
  ordered_json j;
  j["meta"] = meta_json(meta);
  for (const auto& [k, v] : meta.extra.items()) j[k] = v;
  j["T"] = r.T;
  j["replications"] = r.records.size();
  j["samples"] = r.scaled.size();
  j["failures"] = r.failures;
  ordered_json scaled = ordered_json::array();
  for (const auto& v : r.scaled) scaled.push_back({v[0], v[1]});
  j["scaled"] = std::move(scaled);
  j["qq_correlation"] = {r.qq_corr[0], r.qq_corr[1]};
  if (r.mardia) {
    j["mardia"] = {{"skewness_stat", r.mardia->skewness_stat},
                   {"kurtosis_stat", r.mardia->kurtosis_stat},
                   {"p_skew", r.mardia->p_skew},
                   {"p_kurt", r.mardia->p_kurt}};
  } else {
    j["mardia"] = {{"error", r.mardia_error}};
  }
  j["empirical_cov"] = mat2_json(r.empirical_cov);
  if (r.reference) {
    j["sandwich"] = {{"S", mat2_json(r.reference->S)},
                     {"A", mat2_json(r.reference->A)},
                     {"cov", mat2_json(r.reference->cov)},
                     {"warnings", r.reference->warnings}};
  } else {
    j["sandwich"] = {{"error", r.reference_error}};
  }
  return j;
}

std::string estimates_csv(const std::vector<ReplicationRecord>& records, const OutputMeta& meta) {
  std::string s = header_comment(meta);
  s += "T,rep,d1_hat,d2_hat,sigma2_hat,converged\n";
  for (const auto& r : records) {
    s += std::to_string(r.T) + "," + std::to_string(r.rep) + ",";
    if (r.failed) {
      s += ",,,0\n";
      continue;
    }
    s += format_double(r.theta_hat.d1) + "," + format_double(r.theta_hat.d2) + "," + format_double(r.sigma2_hat) +
         "," + (r.converged ? "1" : "0") + "\n";
  }
  return s;
}

std::string qq_csv(const NormalityReport& r, const OutputMeta& meta) {
  std::string s = header_comment(meta);
  s += "component,sample_quantile,normal_quantile\n";
  for (std::size_t c = 0; c < 2; ++c)
    for (const auto& p : r.qq[c])
      s += std::to_string(c + 1) + "," + format_double(p.sample_quantile) + "," + format_double(p.normal_quantile) +
           "\n";
  return s;
}

}  // namespace gmce::io
