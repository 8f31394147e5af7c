#pragma once

// Serialization of experiment results and experiment configs.

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "mixou/estimators.hpp"
#include "mixou/kernel.hpp"
#include "mixou/mc.hpp"

namespace mixou {

inline constexpr int kReportSchemaVersion = 1;

enum class ReportFormat { CSV, JSON };

ReportFormat parse_format(std::string_view name);

/// Doubles are written with 17 significant digits ("NA" for a missing cell), so output
/// bytes are a pure function of the table.
std::string format_double(double v);

/// CSV columns H,theta_true,T,delta,l,mean,sdev; JSON {"schema_version", "kind", "rows"}.
std::string emit_report(const SummaryTable& table, ReportFormat format);

/// JSON only: {"schema_version", "kind": "phi_stats", parameters, stats, histogram}.
std::string emit_report(const PhiRun& run, const nlohmann::json& parameters, ReportFormat format);

SummaryTable parse_summary_csv(std::string_view text);

nlohmann::json to_json(const EstimateResult& r);
nlohmann::json to_json(const PhiStats& s);

/// Key-value experiment config, one `key = value` per line, `#` comments:
///   H = [0.55, 0.75]
///   theta = [0.1, 0.5]
///   T = [100]
///   delta = [1/250]          # fractions allowed
///   reps = 200
///   seed = 20240611
///   method = circulant       # or cholesky
///   estimator = ergodic      # ergodic | lse | oracle
///   threads = 4              # optional
ExperimentSpec parse_experiment_config(std::string_view text);

}  // namespace mixou
