#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "multixfer/acceptance.hpp"
#include "multixfer/report.hpp"

namespace {

using namespace multixfer;

json load_json(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("config", "cannot open '" + path + "'");
  json doc;
  try {
    f >> doc;
  } catch (const std::exception& e) {
    throw ConfigError("config", std::string("invalid JSON: ") + e.what());
  }
  return doc;
}

int run_task(const std::string& subcommand, const std::string& config_path, long long seed_override,
             const std::string& out_dir, int jobs) {
  json doc = load_json(config_path);
  if (!doc.contains("task")) doc["task"] = subcommand;
  if (seed_override >= 0) {
    doc["seed"] = static_cast<std::uint64_t>(seed_override);
    if (doc.contains("search") && doc["search"].is_object())
      doc["search"]["seed"] = static_cast<std::uint64_t>(seed_override);
  }
  const ExperimentConfig cfg = parse_config(doc);
  const bool matches = cfg.task == subcommand ||
                       (subcommand == "estimate" && (cfg.task == "mz" || cfg.task == "deperiodize"));
  if (!matches)
    throw ConfigError("task", "config task '" + cfg.task + "' does not fit the '" + subcommand +
                                  "' subcommand");
  const auto t0 = std::chrono::steady_clock::now();
  const ExperimentResult res = run_experiment(cfg, jobs);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_outputs(res, out_dir);
  std::cerr << cfg.task << " finished in " << secs << " s; reports in " << out_dir << "\n";
  if (!res.all_pass) {
    std::cerr << "one or more pass-flags are false\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multixfer: multilinear Fourier-multiplier transference toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", report_path;
  long long seed_override = -1;
  int jobs = default_jobs();

  const auto add_common = [&](CLI::App* sub, bool needs_config) {
    if (needs_config) sub->add_option("--config", config_path, "experiment JSON")->required();
    sub->add_option("--seed", seed_override, "override the config seed");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--jobs", jobs, "worker threads (default: MULTIXFER_JOBS or hardware)");
  };

  auto* classify_cmd = app.add_subcommand("classify", "symbol-class applicability report");
  add_common(classify_cmd, true);
  auto* estimate_cmd =
      app.add_subcommand("estimate", "operator quasi-norm lower bound (also mz/deperiodize tasks)");
  add_common(estimate_cmd, true);
  auto* transfer_cmd = app.add_subcommand("transfer", "periodic-vs-line transference report");
  add_common(transfer_cmd, true);
  auto* verify_cmd = app.add_subcommand("verify", "run the full acceptance suite");
  add_common(verify_cmd, false);
  const CLI::Option* verify_out = verify_cmd->get_option("--out");
  auto* report_cmd = app.add_subcommand("report", "re-render a JSON report to CSV");
  report_cmd->add_option("--in", report_path, "report.json produced by a previous run")->required();
  report_cmd->add_option("--out", out_dir, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (classify_cmd->parsed()) return run_task("classify", config_path, seed_override, out_dir, jobs);
    if (estimate_cmd->parsed()) return run_task("estimate", config_path, seed_override, out_dir, jobs);
    if (transfer_cmd->parsed()) return run_task("transfer", config_path, seed_override, out_dir, jobs);
    if (verify_cmd->parsed()) {
      const auto results = run_acceptance(jobs, std::cout);
      bool all = true;
      ordered_json rows = ordered_json::array();
      for (const auto& r : results) {
        all = all && r.pass;
        ordered_json row = ordered_json::object();
        row["index"] = r.index;
        row["name"] = r.name;
        row["pass"] = r.pass;
        row["detail"] = r.detail;
        rows.push_back(row);
      }
      if (verify_out->count() > 0) {
        ordered_json doc;
        doc["criteria"] = rows;
        std::filesystem::create_directories(out_dir);
        std::ofstream f(out_dir + "/acceptance.json", std::ios::binary);
        f << doc.dump(2) << "\n";
      }
      return all ? 0 : 1;
    }
    if (report_cmd->parsed()) {
      std::ifstream f(report_path);
      if (!f) throw ConfigError("report", "cannot open '" + report_path + "'");
      ordered_json doc;
      f >> doc;
      std::filesystem::create_directories(out_dir);
      std::ofstream out(out_dir + "/summary.csv", std::ios::binary);
      out << csv_from_report(doc);
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.field << ": " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
