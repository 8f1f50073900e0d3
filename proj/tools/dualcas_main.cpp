// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "dualcas/scenario.hpp"

namespace {

int load_and_run(const std::string& path, bool want_audit,
                 const dualcas::RunOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "error: cannot read %s\n", path.c_str());
    return 1;
  }
  std::ostringstream text;
  text << in.rdbuf();

  dualcas::ScenarioConfig config;
  try {
    config = dualcas::parse_config(text.str(),
                                   std::filesystem::path(path).stem().string());
  } catch (const dualcas::ConfigError& e) {
    for (const dualcas::Diagnostic& d : e.diagnostics())
      std::fprintf(stderr, "%s:%d: [%s] %s\n", path.c_str(), d.line,
                   d.code.c_str(), d.message.c_str());
    return 1;
  }

  const bool is_audit = config.kind == dualcas::ScenarioKind::audit_cp ||
                        config.kind == dualcas::ScenarioKind::audit_vdw ||
                        config.kind == dualcas::ScenarioKind::audit_casimir ||
                        config.kind == dualcas::ScenarioKind::audit_green;
  if (is_audit != want_audit) {
    std::fprintf(stderr,
                 "error: scenario kind '%s' does not match the %s subcommand\n",
                 dualcas::to_string(config.kind), want_audit ? "audit" : "run");
    return 1;
  }
  return dualcas::run_scenario(config, options);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"dualcas: dispersion forces for magnetoelectric bodies with "
               "built-in electric-magnetic duality audits"};
  app.require_subcommand(1);

  dualcas::RunOptions options;
  std::string config_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "scenario file")->required();
    cmd->add_option("--out-dir", options.out_dir, "output directory");
    cmd->add_option("--threads", options.threads, "worker threads");
    cmd->add_option("--tol", options.tol_override,
                    "override the audit tolerance");
    cmd->add_flag("--emit-plot-data", options.emit_plot_data,
                  "write two-column files per component");
  };

  CLI::App* run = app.add_subcommand("run", "compute a scenario");
  add_common(run);
  CLI::App* audit = app.add_subcommand(
      "audit", "run a scenario and its dual, check the swap identities");
  add_common(audit);
  CLI::App* check =
      app.add_subcommand("check", "run the built-in invariant suite");

  CLI11_PARSE(app, argc, argv);

  if (check->parsed()) {
    const int failures = dualcas::run_self_check();
    std::printf("%s\n", failures == 0 ? "all checks passed" : "checks FAILED");
    return failures == 0 ? 0 : 2;
  }
  return load_and_run(config_path, audit->parsed(), options);
}
