#pragma once

#include <string>
#include <vector>

#include "sclab/experiments.hpp"

namespace sclab::report {

/// Serializable run report. Outputs are deterministic: the same report
/// renders to byte-identical text, so the timestamp is pinned to the epoch
/// instead of wall time (traceability comes from the config hash).
struct Report {
    std::string version = "1.0.0";
    std::string config_hash;  ///< RunConfig::hash() of the run's config
    std::string timestamp = "1970-01-01T00:00:00Z";
    int dgr_sign = 0;         ///< measured commutator convention sign
    double dgr_scale = 0.0;   ///< measured commutator convention scale
    std::vector<experiments::CriterionResult> criteria;
    std::vector<experiments::ConvergenceRecord> tables;
};

/// Field-wise equality with bitwise double comparison (the round-trip
/// contract is exact, not approximate).
bool operator==(const Report& a, const Report& b);

/// CSV text for convergence records: a `# config_hash = ...` comment line,
/// the exact header
/// `model,param_name,param_value,observable,quantum,classical,abs_error`,
/// then one row per record at 17 significant digits, sorted by
/// (observable, param_value) regardless of input order.
std::string render_records_csv(std::vector<experiments::ConvergenceRecord> records,
                               const std::string& config_hash);

/// JSON text for the full report (stable key order, lossless doubles).
std::string render_report_json(const Report& rep);

/// Inverse of render_report_json: parse_report_json(render_report_json(r))
/// compares equal to r. Throws Error on malformed or incomplete JSON.
Report parse_report_json(const std::string& text);

/// Writes content to path atomically (temp file + rename); IoError on any
/// filesystem failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Renders and writes in one step.
void emit_records_csv(const std::vector<experiments::ConvergenceRecord>& records,
                      const std::string& config_hash, const std::string& path);
void emit_report_json(const Report& rep, const std::string& path);

}  // namespace sclab::report
