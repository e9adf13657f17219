#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "sqg/estimates.hpp"
#include "sqg/inequalities.hpp"
#include "sqg/solver.hpp"

namespace sqg {

/// Everything a run reads from its configuration file.
struct RunConfig {
  ExperimentSpec spec;
  InequalitySuiteConfig inequalities;
  std::string output_dir = "out";
};

/// Parses a JSON config. Missing keys keep their defaults, unknown keys and
/// ill-typed or invalid values raise ConfigError naming the field
/// (dotted path, e.g. "initial.amplitude").
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every key present; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& config);

inline constexpr std::uint32_t kSnapshotVersion = 1;
/// "SQGF", u32 version, u32 n, f64 gamma, f64 t, all little-endian.
inline constexpr std::size_t kSnapshotHeaderBytes = 28;

struct Snapshot {
  double gamma = 0.0;
  SimulationState state;
};

void write_snapshot(const std::filesystem::path& path, const SimulationState& state, double gamma);
/// Throws SnapshotError (io, bad_magic, version_mismatch, truncated, invalid_header).
Snapshot read_snapshot(const std::filesystem::path& path);

/// CSV with header t,<columns...>, one row per sample, 17 significant digits.
void write_timeseries(const NormTrajectory& trajectory, const std::filesystem::path& path);
NormTrajectory read_timeseries(const std::filesystem::path& path);

inline constexpr int kSchemaVersion = 1;

/// Report bodies without the timestamp metadata; identical for identical inputs.
std::string estimate_report_body(const EstimateReport& report);
std::string inequality_report_body(const InequalitySuiteConfig& config,
                                   const std::vector<ConstantReport>& reports);

/// Writes the body plus a "metadata" object carrying the generation time.
void write_estimate_report(const EstimateReport& report, const std::filesystem::path& path);
void write_inequality_report(const InequalitySuiteConfig& config,
                             const std::vector<ConstantReport>& reports,
                             const std::filesystem::path& path);

struct ReportSummary {
  std::string text;
  bool failed = false;
  bool diverged = false;
};

/// Human-readable summary of either report kind.
ReportSummary summarize_report(const std::filesystem::path& path);

}  // namespace sqg
