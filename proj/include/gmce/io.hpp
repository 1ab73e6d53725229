#pragma once

// File formats shared by the CLI: fields, periodograms, estimates and study
// reports. Doubles are written in shortest round-trip form, so files are
// byte-stable for identical inputs.

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gmce/estimate.hpp"
#include "gmce/montecarlo.hpp"
#include "gmce/periodogram.hpp"
#include "gmce/simulate.hpp"

namespace gmce::io {

/// Malformed input file; `line` is 1-based (0 when not tied to a line).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Shortest decimal representation that reads back to the same double.
std::string format_double(double x);

/// Metadata written with every output file.
struct OutputMeta {
  std::string config_sha256;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

nlohmann::ordered_json meta_json(const OutputMeta& meta);

/// Writes text to a file, throwing std::runtime_error if that fails.
void write_text(const std::filesystem::path& path, const std::string& text);

// ---------------------------------------------------------------------------
// Fields

/// "# gmce <version> T=<T> config_sha256=<hash>" comment, header t1,t2,value,
/// then (T+1)^2 records in row-major order.
std::string field_csv(const GridField& field, const OutputMeta& meta);

/// Parses field_csv output. The records must cover {0..T}^2 in row-major
/// order; T comes from the comment line when present, otherwise from the
/// record count.
GridField parse_field_csv(const std::string& text, const std::string& source = "<field>");

/// {"meta": ..., "T": T, "values": [[row 0], [row 1], ...]} with anything in
/// meta.extra (params, seed, n_trunc) merged into the top level.
nlohmann::ordered_json field_json(const GridField& field, const OutputMeta& meta);
GridField parse_field_json(const std::string& text, const std::string& source = "<field>");

/// Chooses the parser from the extension (.json or anything else as CSV).
GridField read_field(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Periodograms, estimates, study reports

std::string periodogram_csv(const PeriodogramGrid& p, const OutputMeta& meta);
nlohmann::ordered_json periodogram_json(const PeriodogramGrid& p, const OutputMeta& meta);

nlohmann::ordered_json estimation_json(const EstimationResult& r, const OutputMeta& meta);

nlohmann::ordered_json mat2_json(const Mat2& m);
nlohmann::ordered_json sandwich_json(const SandwichCovariance& s, const OutputMeta& meta);

nlohmann::ordered_json consistency_json(const ConsistencyReport& r, const OutputMeta& meta);
nlohmann::ordered_json normality_json(const NormalityReport& r, const OutputMeta& meta);

/// T,rep,d1_hat,d2_hat,sigma2_hat,converged (failed replications leave the
/// estimate columns empty and converged = 0).
std::string estimates_csv(const std::vector<ReplicationRecord>& records, const OutputMeta& meta);

/// component,sample_quantile,normal_quantile with components 1 and 2.
std::string qq_csv(const NormalityReport& r, const OutputMeta& meta);

/// Serializes JSON with a fixed indent and trailing newline.
std::string dump(const nlohmann::ordered_json& j);

}  // namespace gmce::io
