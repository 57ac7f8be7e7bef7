#pragma once

#include "multixfer/config.hpp"

namespace multixfer {

/// Fixed CSV column order for every summary row.
extern const std::array<const char*, 17> kCsvColumns;

struct ExperimentResult {
  ordered_json report;  // full JSON document (witnesses inlined)
  bool all_pass = true;
};

/// Dispatches the config to the matching module operation. Deterministic
/// given (config, seed); the emitted files are byte-identical across runs.
ExperimentResult run_experiment(const ExperimentConfig& cfg, int jobs);

/// CSV text (header + one row per result) rendered from the report document.
std::string csv_from_report(const ordered_json& report);

/// Writes <out_dir>/report.json and <out_dir>/summary.csv.
void write_outputs(const ExperimentResult& result, const std::string& out_dir);

/// Deterministic number formatting shared by the CSV and JSON writers.
std::string format_real(Real v);

}  // namespace multixfer
