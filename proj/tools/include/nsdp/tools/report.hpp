#pragma once

// JSON report and trace documents written by `nsdp solve`.
//
// Doubles are written in shortest round-trip form, so parsing a report gives
// back the exact binary64 values. Symmetric matrices are stored as
// {"dim": d, "lower": [...]} with the lower triangle in row-major order.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nsdp/driver.hpp"

namespace nsdp::tools {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

struct ReportRecord {
  int k = 0;
  double gamma = 0.0;
  double gamma_next = 0.0;
  double delta = 0.0;
  double u = 0.0;
  double stationarity = 0.0;
  double complementarity = 0.0;
  double second_order = 0.0;
  double epsilon = 0.0;
  Index subspace_dim = 0;
  bool subspace_stable = false;
  double f_value = 0.0;
  double script_F_value = 0.0;
  double script_F_at_start = 0.0;
  std::string xhat_branch;  ///< "keep" or "reset"
  int inner_iterations = 0;
  std::string inner_status;
  double inner_grad_norm = 0.0;
  double inner_min_hess_eig = 0.0;
  Vec x;
  Vec y;
  SymMatrix Z;
};

struct ReportDocument {
  std::string schema_version = kSchemaVersion;
  std::string problem;
  PenaltyConfig config;
  std::optional<std::uint64_t> seed;
  Index b_count = 0;
  double f_start = 0.0;
  std::vector<ReportRecord> iterations;
  std::string status;
  std::string message;
  Vec x;
  Vec y;
  SymMatrix Z;
  double wall_time_seconds = 0.0;  ///< not part of the compared payload
};

ReportRecord make_record(const IterateRecord& rec);
ReportDocument make_report(const SolveReport& report,
                           std::optional<std::uint64_t> seed,
                           double wall_time_seconds);

Json vec_to_json(const Vec& v);
Vec vec_from_json(const Json& j);
Json sym_to_json(const SymMatrix& m);
SymMatrix sym_from_json(const Json& j);

Json to_json(const ReportRecord& rec);
ReportRecord record_from_json(const Json& j);
Json to_json(const PenaltyConfig& cfg, std::optional<std::uint64_t> seed);
Json to_json(const ReportDocument& doc);
/// Throws nsdp::Error{InvalidInput} on a missing field or a schema mismatch.
ReportDocument report_from_json(const Json& j);

/// Two-space indented document with a trailing newline.
std::string serialize(const ReportDocument& doc);
/// One compact JSON object per line.
std::string serialize_trace(const std::vector<ReportRecord>& records);

/// Writes `content` to a sibling temp file and renames it over `path`.
/// Throws std::runtime_error on I/O failure.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace nsdp::tools
