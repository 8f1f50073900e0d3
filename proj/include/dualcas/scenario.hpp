// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "dualcas/audit.hpp"

namespace dualcas {

// Configuration-driven front end. Scenario files are line-oriented
// key=value text with [section] headers:
//
//   [material NAME]    eps_osc = wp w0 gamma   (repeatable)
//                      mu_osc  = wp w0 gamma
//   [atom NAME]        alpha_osc = strength omega
//                      beta_osc  = strength omega
//   [geometry]         kind-specific references (atom=, body=, left=, ...)
//   [grid]             min=, max=, count=, spacing=log|linear
//   [run]              kind=, local_field=, tol=, quad_tol=, name=
//
// Unknown keys, dangling references and non-physical parameters produce
// diagnostics with line numbers and stable codes.

enum class ScenarioKind {
  cp,
  vdw,
  casimir,
  green,
  audit_cp,
  audit_vdw,
  audit_casimir,
  audit_green,
};

const char* to_string(ScenarioKind kind);

struct Diagnostic {
  int line = 0;
  std::string code;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
  bool log_spacing = true;

  std::vector<double> points() const;
  bool operator==(const GridSpec&) const = default;
};

struct ScenarioConfig {
  ScenarioKind kind = ScenarioKind::cp;
  std::string name;

  std::map<std::string, MaterialModel> materials;
  std::map<std::string, AtomModel> atoms;

  // geometry references (subset used per kind)
  std::string atom;                                   // cp
  std::string atom_a, atom_b;                         // vdw
  std::vector<std::pair<std::string, double>> body;   // cp: top-down layers
  std::string host;                                   // cp/vdw/green
  std::string left, right, gap_host;                  // casimir
  std::string medium;                                 // green
  std::string green_kind = "bulk";                    // green
  int samples = 10;
  std::uint64_t seed = 1;
  double xi = 1e15; // rad/s, fixed frequency of plain green sweeps

  GridSpec grid;
  bool local_field = false;
  double tol = kTauAudit;
  double quad_tol = kDefaultRelTol;
  bool tamper_dual = false; // negative control: breaks the dual on purpose

  bool operator==(const ScenarioConfig&) const;
};

// Parses and validates a scenario file; throws ConfigError listing every
// diagnostic found. `fallback_name` names the scenario when [run] name is
// absent.
ScenarioConfig parse_config(const std::string& text,
                            const std::string& fallback_name = "scenario");

// Inverse of parse_config up to formatting: parse_config(serialize(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

struct RunOptions {
  std::string out_dir = ".";
  int threads = 1;
  bool emit_plot_data = false;
  double tol_override = 0.0; // > 0 replaces the config audit tolerance
};

// Exit status contract: 0 success, 1 computation error, 2 audit failure.
int run_scenario(const ScenarioConfig& config, const RunOptions& options);

// Built-in invariant suite used by `dualcas check`; returns the number of
// failed checks and prints one line per check.
int run_self_check();

} // namespace dualcas
