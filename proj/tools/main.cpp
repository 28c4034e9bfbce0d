#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "kvnlab/experiments.hpp"

namespace {

int print_outcome(const kvnlab::RunReport& report) {
  for (const auto& check : report.checks) {
    if (check.id > 0)
      std::printf("criterion %2d %-26s %s  (measured %.3e %s %.3e)\n", check.id, check.name.c_str(),
                  check.passed ? "PASS" : "FAIL", check.measured, check.relation.c_str(), check.threshold);
    else
      std::printf("check %-32s %s  (measured %.3e %s %.3e)\n", check.name.c_str(),
                  check.passed ? "PASS" : "FAIL", check.measured, check.relation.c_str(), check.threshold);
    if (!check.detail.empty()) std::printf("    %s\n", check.detail.c_str());
  }
  for (const auto& [key, value] : report.metrics) std::printf("metric %-32s %.16e\n", key.c_str(), value);
  std::printf("%s (%.1f s)\n", report.all_passed() ? "all checks passed" : "CHECKS FAILED",
              report.runtime_seconds);
  return report.all_passed() ? 0 : 1;
}

std::string swap_extension(const std::string& path, const std::string& ext) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"phase-space classical-dynamics lab"};
  app.require_subcommand(1);

  std::string run_config;
  CLI::App* run_cmd = app.add_subcommand("run", "run the experiment named in a config file");
  run_cmd->add_option("config", run_config, "config file path")->required()->check(CLI::ExistingFile);

  std::string verify_config;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run the full acceptance suite twice and check determinism");
  verify_cmd->add_option("config", verify_config, "optional config file")->check(CLI::ExistingFile);

  std::string snapshot_path, format = "csv", output_path;
  CLI::App* export_cmd = app.add_subcommand("export", "convert a binary snapshot");
  export_cmd->add_option("snapshot", snapshot_path, "snapshot file")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--format", format, "csv or binary")->check(CLI::IsMember({"csv", "binary"}));
  export_cmd->add_option("--output", output_path, "output path (default: input with swapped extension)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      const kvnlab::ExperimentConfig cfg = kvnlab::parse_config(run_config);
      return print_outcome(kvnlab::run_experiment(cfg));
    }
    if (verify_cmd->parsed()) {
      kvnlab::ExperimentConfig cfg;
      if (!verify_config.empty()) cfg = kvnlab::parse_config(verify_config);
      cfg.experiment = kvnlab::ExperimentKind::verify;
      return print_outcome(kvnlab::run_experiment(cfg));
    }
    if (export_cmd->parsed()) {
      const kvnlab::Snapshot snap = kvnlab::read_snapshot(snapshot_path);
      if (format == "csv") {
        const std::string out = output_path.empty() ? swap_extension(snapshot_path, ".csv") : output_path;
        kvnlab::export_snapshot_csv(snap, out);
        std::printf("wrote %s\n", out.c_str());
      } else {
        const std::string out = output_path.empty() ? swap_extension(snapshot_path, ".copy.snap") : output_path;
        kvnlab::write_snapshot(out, snap.psi, snap.time, snap.hbar);
        std::printf("wrote %s\n", out.c_str());
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
