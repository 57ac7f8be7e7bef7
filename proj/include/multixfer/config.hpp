#pragma once

#include <json.hpp>

#include "multixfer/estimation.hpp"

namespace multixfer {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

/// Schema violation; `field` points at the offending entry.
struct ConfigError : std::runtime_error {
  std::string field;
  ConfigError(std::string f, const std::string& msg)
      : std::runtime_error(f + ": " + msg), field(std::move(f)) {}
};

/// One experiment = one JSON document (reproducible given the seed).
struct ExperimentConfig {
  std::string task;  // estimate | transfer | classify | mz | deperiodize
  json raw;

  std::string symbol_id = "none";
  std::string weight_id = "unit";
  SymbolFamily family;
  ExponentTuple exps = make_exponents({2.0, 2.0});
  WeightSpec w_out = WeightSpec::constant(1, 1.0);
  std::vector<WeightSpec> w_in;
  Target target = Target::kStrong;
  SearchConfig search;
  TransferenceOptions transfer;
  ClassifyOptions classify_opts;
  int grid_n = 512;

  // mz task parameters
  int mz_ops = 3;
  int mz_funcs = 3;
  int mz_box = 3;
  int mz_grid = 64;

  // deperiodize task parameters
  Real deper_radius = 0.25;
  int deper_kernel_n = 32;
  int deper_modes = 8;
  int deper_samples = 64;
  std::vector<Real> deper_s_schedule{4.0, 8.0, 16.0};

  std::uint64_t seed = 1;
};

/// Parse + validate; throws ConfigError naming the offending field.
ExperimentConfig parse_config(const json& doc);

/// Declarative constructors used by the config schema (also handy in tests).
SymbolFamily parse_symbol(const json& j, int dim, int arity, std::string* id_out);
WeightSpec parse_weight(const json& j, int dim);

}  // namespace multixfer
