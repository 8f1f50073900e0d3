// Copyright 2026 The dualcas Authors
// SPDX-License-Identifier: Apache-2.0

#include "dualcas/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "json.hpp"

#include "dualcas/constants.hpp"

namespace dualcas {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool parse_double(const std::string& s, double& out) {
  try {
    size_t pos = 0;
    out = std::stod(s, &pos);
    return pos == s.size();
  } catch (...) {
    return false;
  }
}

bool parse_bool(const std::string& s, bool& out) {
  if (s == "true" || s == "1") { out = true; return true; }
  if (s == "false" || s == "0") { out = false; return true; }
  return false;
}

std::vector<double> split_doubles(const std::string& s, bool& ok) {
  std::vector<double> vals;
  std::istringstream in(s);
  std::string tok;
  ok = true;
  while (in >> tok) {
    double v;
    if (!parse_double(tok, v)) { ok = false; return vals; }
    vals.push_back(v);
  }
  return vals;
}

const std::map<std::string, ScenarioKind> kKindNames = {
    {"cp", ScenarioKind::cp},
    {"vdw", ScenarioKind::vdw},
    {"casimir", ScenarioKind::casimir},
    {"green", ScenarioKind::green},
    {"audit-cp", ScenarioKind::audit_cp},
    {"audit-vdw", ScenarioKind::audit_vdw},
    {"audit-casimir", ScenarioKind::audit_casimir},
    {"audit-green", ScenarioKind::audit_green},
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", v);
  return buf;
}

std::string fmt_exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  for (std::thread& t : pool) t.join();
}

struct Parser {
  std::vector<Diagnostic> diagnostics;
  std::map<std::string, int> ref_lines; // geometry/grid key -> line

  void error(int line, std::string code, std::string message) {
    diagnostics.push_back({line, std::move(code), std::move(message)});
  }
};

const MaterialModel kVacuum{{}, {}, "vacuum"};

const MaterialModel* find_material(const ScenarioConfig& config,
                                   const std::string& name) {
  if (name == "vacuum" || name.empty()) return &kVacuum;
  auto it = config.materials.find(name);
  return it == config.materials.end() ? nullptr : &it->second;
}

void require_material(Parser& p, const ScenarioConfig& config,
                      const std::string& key, const std::string& name) {
  if (name.empty() || name == "vacuum") return;
  if (!config.materials.count(name))
    p.error(p.ref_lines.count(key) ? p.ref_lines[key] : 0, "E_UNDEF_MATERIAL",
            "undefined material '" + name + "' referenced by " + key);
}

void require_atom(Parser& p, const ScenarioConfig& config,
                  const std::string& key, const std::string& name) {
  if (name.empty()) return;
  if (!config.atoms.count(name))
    p.error(p.ref_lines.count(key) ? p.ref_lines[key] : 0, "E_UNDEF_ATOM",
            "undefined atom '" + name + "' referenced by " + key);
}

} // namespace

const char* to_string(ScenarioKind kind) {
  for (const auto& [name, k] : kKindNames)
    if (k == kind) return name.c_str();
  return "?";
}

ConfigError::ConfigError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string all = "invalid scenario configuration:";
        for (const Diagnostic& d : diagnostics)
          all += "\n  line " + std::to_string(d.line) + ": [" + d.code + "] " +
                 d.message;
        return all;
      }()),
      diagnostics_(std::move(diagnostics)) {}

std::vector<double> GridSpec::points() const {
  std::vector<double> pts;
  pts.reserve(count);
  if (count == 1) {
    pts.push_back(min);
    return pts;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    pts.push_back(log_spacing ? min * std::pow(max / min, t)
                              : min + (max - min) * t);
  }
  return pts;
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return kind == o.kind && name == o.name && materials == o.materials &&
         atoms == o.atoms && atom == o.atom && atom_a == o.atom_a &&
         atom_b == o.atom_b && body == o.body && host == o.host &&
         left == o.left && right == o.right && gap_host == o.gap_host &&
         medium == o.medium && green_kind == o.green_kind &&
         samples == o.samples && seed == o.seed && xi == o.xi &&
         grid == o.grid && local_field == o.local_field && tol == o.tol &&
         quad_tol == o.quad_tol && tamper_dual == o.tamper_dual;
}

ScenarioConfig parse_config(const std::string& text,
                            const std::string& fallback_name) {
  ScenarioConfig config;
  config.name = fallback_name;
  Parser p;

  enum class Section { none, material, atom, geometry, grid, run };
  Section section = Section::none;
  MaterialModel* material = nullptr;
  AtomModel* atom = nullptr;
  bool have_kind = false;

  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        p.error(lineno, "E_SYNTAX", "unterminated section header");
        continue;
      }
      std::istringstream head(line.substr(1, line.size() - 2));
      std::string type, name;
      head >> type;
      std::getline(head, name);
      name = trim(name);
      if (type == "material") {
        if (name.empty() || name == "vacuum") {
          p.error(lineno, "E_SYNTAX", "material section needs a usable name");
          continue;
        }
        section = Section::material;
        material = &config.materials[name];
        material->name = name;
      } else if (type == "atom") {
        if (name.empty()) {
          p.error(lineno, "E_SYNTAX", "atom section needs a name");
          continue;
        }
        section = Section::atom;
        atom = &config.atoms[name];
        atom->name = name;
      } else if (type == "geometry" && name.empty()) {
        section = Section::geometry;
      } else if (type == "grid" && name.empty()) {
        section = Section::grid;
      } else if (type == "run" && name.empty()) {
        section = Section::run;
      } else {
        section = Section::none;
        p.error(lineno, "E_UNKNOWN_SECTION", "unknown section '" + line + "'");
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      p.error(lineno, "E_SYNTAX", "expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    auto bad_value = [&](const std::string& why) {
      p.error(lineno, "E_BAD_VALUE", key + ": " + why);
    };

    switch (section) {
      case Section::material: {
        if (key != "eps_osc" && key != "mu_osc") {
          p.error(lineno, "E_UNKNOWN_KEY", "unknown material key '" + key + "'");
          break;
        }
        bool ok;
        std::vector<double> vals = split_doubles(value, ok);
        if (!ok || (vals.size() != 2 && vals.size() != 3)) {
          bad_value("expected 'omega_p omega0 [gamma]'");
          break;
        }
        const Oscillator osc{vals[0], vals[1], vals.size() == 3 ? vals[2] : 0.0};
        if (osc.omega_p < 0.0 || osc.omega0 < 0.0 || osc.gamma < 0.0) {
          p.error(lineno, "E_NEG_PARAM", key + ": parameters must be >= 0");
          break;
        }
        if (osc.omega_p > 0.0 && osc.omega0 == 0.0 && osc.gamma == 0.0) {
          bad_value("oscillator needs omega0 or gamma > 0");
          break;
        }
        (key == "eps_osc" ? material->oscillators_eps
                          : material->oscillators_mu)
            .push_back(osc);
        break;
      }
      case Section::atom: {
        if (key != "alpha_osc" && key != "beta_osc") {
          p.error(lineno, "E_UNKNOWN_KEY", "unknown atom key '" + key + "'");
          break;
        }
        bool ok;
        std::vector<double> vals = split_doubles(value, ok);
        if (!ok || vals.size() != 2) {
          bad_value("expected 'strength omega'");
          break;
        }
        if (vals[0] < 0.0) {
          p.error(lineno, "E_NEG_PARAM", key + ": strength must be >= 0");
          break;
        }
        if (!(vals[1] > 0.0)) {
          p.error(lineno, "E_NEG_PARAM", key + ": omega must be > 0");
          break;
        }
        (key == "alpha_osc" ? atom->alpha_osc : atom->beta_osc)
            .push_back({vals[0], vals[1]});
        break;
      }
      case Section::geometry: {
        p.ref_lines[key] = lineno;
        if (key == "atom") config.atom = value;
        else if (key == "atom_a") config.atom_a = value;
        else if (key == "atom_b") config.atom_b = value;
        else if (key == "host") config.host = value;
        else if (key == "left") config.left = value;
        else if (key == "right") config.right = value;
        else if (key == "gap_host") config.gap_host = value;
        else if (key == "medium") config.medium = value;
        else if (key == "green_kind") config.green_kind = value;
        else if (key == "samples") {
          double v;
          if (!parse_double(value, v) || v < 1) bad_value("expected count >= 1");
          else config.samples = static_cast<int>(v);
        } else if (key == "seed") {
          double v;
          if (!parse_double(value, v) || v < 0) bad_value("expected seed >= 0");
          else config.seed = static_cast<std::uint64_t>(v);
        } else if (key == "xi") {
          double v;
          if (!parse_double(value, v) || !(v > 0)) bad_value("expected xi > 0");
          else config.xi = v;
        } else if (key == "body") {
          config.body.clear();
          std::istringstream parts(value);
          std::string part;
          bool ok = true;
          while (std::getline(parts, part, ',')) {
            part = trim(part);
            const auto colon = part.find(':');
            if (colon == std::string::npos) {
              config.body.emplace_back(part, 0.0);
            } else {
              double t;
              if (!parse_double(trim(part.substr(colon + 1)), t) || !(t > 0)) {
                ok = false;
                break;
              }
              config.body.emplace_back(trim(part.substr(0, colon)), t);
            }
          }
          if (!ok || config.body.empty()) {
            bad_value("expected 'name[:thickness],...,name'");
            config.body.clear();
            break;
          }
          for (size_t i = 0; ok && i < config.body.size(); ++i) {
            const bool last = i + 1 == config.body.size();
            if (last != (config.body[i].second == 0.0)) ok = false;
          }
          if (!ok) {
            bad_value("interior layers need ':thickness'; the last is "
                      "semi-infinite and takes none");
            config.body.clear();
          }
        } else {
          p.error(lineno, "E_UNKNOWN_KEY", "unknown geometry key '" + key + "'");
        }
        break;
      }
      case Section::grid: {
        p.ref_lines[key] = lineno;
        if (key == "min" || key == "max") {
          double v;
          if (!parse_double(value, v) || !(v > 0)) bad_value("expected value > 0");
          else (key == "min" ? config.grid.min : config.grid.max) = v;
        } else if (key == "count") {
          double v;
          if (!parse_double(value, v) || v < 1) bad_value("expected count >= 1");
          else config.grid.count = static_cast<int>(v);
        } else if (key == "spacing") {
          if (value == "log") config.grid.log_spacing = true;
          else if (value == "linear") config.grid.log_spacing = false;
          else bad_value("expected 'log' or 'linear'");
        } else {
          p.error(lineno, "E_UNKNOWN_KEY", "unknown grid key '" + key + "'");
        }
        break;
      }
      case Section::run: {
        if (key == "kind") {
          auto it = kKindNames.find(value);
          if (it == kKindNames.end())
            p.error(lineno, "E_BAD_KIND", "unknown kind '" + value + "'");
          else {
            config.kind = it->second;
            have_kind = true;
          }
        } else if (key == "name") {
          config.name = value;
        } else if (key == "local_field") {
          bool b;
          if (!parse_bool(value, b)) bad_value("expected true/false");
          else config.local_field = b;
        } else if (key == "tamper_dual") {
          bool b;
          if (!parse_bool(value, b)) bad_value("expected true/false");
          else config.tamper_dual = b;
        } else if (key == "tol" || key == "quad_tol") {
          double v;
          if (!parse_double(value, v) || !(v > 0)) bad_value("expected value > 0");
          else (key == "tol" ? config.tol : config.quad_tol) = v;
        } else {
          p.error(lineno, "E_UNKNOWN_KEY", "unknown run key '" + key + "'");
        }
        break;
      }
      case Section::none:
        p.error(lineno, "E_SYNTAX", "key outside of any section");
        break;
    }
  }

  if (!have_kind) p.error(0, "E_MISSING_KEY", "[run] kind is required");

  // Grid sanity.
  const bool needs_grid = config.kind != ScenarioKind::audit_green;
  if (needs_grid) {
    if (!(config.grid.min > 0.0) || config.grid.count < 1)
      p.error(p.ref_lines.count("min") ? p.ref_lines["min"] : 0, "E_BAD_GRID",
              "grid needs min > 0 and count >= 1");
    else if (config.grid.count > 1 && !(config.grid.max > config.grid.min))
      p.error(p.ref_lines.count("max") ? p.ref_lines["max"] : 0, "E_BAD_GRID",
              "grid max must exceed min");
  }

  // Reference checks per kind.
  auto missing = [&](const std::string& key) {
    p.error(0, "E_MISSING_KEY",
            std::string("[geometry] ") + key + " is required for kind " +
                to_string(config.kind));
  };
  switch (config.kind) {
    case ScenarioKind::cp:
    case ScenarioKind::audit_cp:
      if (config.atom.empty()) missing("atom");
      if (config.body.empty()) missing("body");
      require_atom(p, config, "atom", config.atom);
      for (const auto& [name, thickness] : config.body)
        require_material(p, config, "body", name);
      require_material(p, config, "host", config.host);
      break;
    case ScenarioKind::vdw:
    case ScenarioKind::audit_vdw:
      if (config.atom_a.empty()) missing("atom_a");
      if (config.atom_b.empty()) missing("atom_b");
      require_atom(p, config, "atom_a", config.atom_a);
      require_atom(p, config, "atom_b", config.atom_b);
      require_material(p, config, "host", config.host);
      break;
    case ScenarioKind::casimir:
    case ScenarioKind::audit_casimir:
      if (config.left.empty()) missing("left");
      if (config.right.empty()) missing("right");
      require_material(p, config, "left", config.left);
      require_material(p, config, "right", config.right);
      require_material(p, config, "gap_host", config.gap_host);
      break;
    case ScenarioKind::green:
    case ScenarioKind::audit_green:
      if (config.medium.empty()) missing("medium");
      require_material(p, config, "medium", config.medium);
      require_material(p, config, "host", config.host);
      if (config.green_kind != "bulk" && config.green_kind != "halfspace")
        p.error(p.ref_lines.count("green_kind") ? p.ref_lines["green_kind"] : 0,
                "E_BAD_VALUE", "green_kind must be bulk or halfspace");
      break;
  }

  if (!p.diagnostics.empty()) throw ConfigError(std::move(p.diagnostics));
  return config;
}

std::string serialize_config(const ScenarioConfig& config) {
  std::ostringstream out;
  for (const auto& [name, material] : config.materials) {
    out << "[material " << name << "]\n";
    for (const Oscillator& o : material.oscillators_eps)
      out << "eps_osc = " << fmt_exact(o.omega_p) << " " << fmt_exact(o.omega0)
          << " " << fmt_exact(o.gamma) << "\n";
    for (const Oscillator& o : material.oscillators_mu)
      out << "mu_osc = " << fmt_exact(o.omega_p) << " " << fmt_exact(o.omega0)
          << " " << fmt_exact(o.gamma) << "\n";
    out << "\n";
  }
  for (const auto& [name, atom] : config.atoms) {
    out << "[atom " << name << "]\n";
    for (const AtomLine& l : atom.alpha_osc)
      out << "alpha_osc = " << fmt_exact(l.strength) << " "
          << fmt_exact(l.omega) << "\n";
    for (const AtomLine& l : atom.beta_osc)
      out << "beta_osc = " << fmt_exact(l.strength) << " " << fmt_exact(l.omega)
          << "\n";
    out << "\n";
  }

  out << "[geometry]\n";
  if (!config.atom.empty()) out << "atom = " << config.atom << "\n";
  if (!config.atom_a.empty()) out << "atom_a = " << config.atom_a << "\n";
  if (!config.atom_b.empty()) out << "atom_b = " << config.atom_b << "\n";
  if (!config.body.empty()) {
    out << "body = ";
    for (size_t i = 0; i < config.body.size(); ++i) {
      if (i) out << ",";
      out << config.body[i].first;
      if (config.body[i].second > 0.0)
        out << ":" << fmt_exact(config.body[i].second);
    }
    out << "\n";
  }
  if (!config.host.empty()) out << "host = " << config.host << "\n";
  if (!config.left.empty()) out << "left = " << config.left << "\n";
  if (!config.right.empty()) out << "right = " << config.right << "\n";
  if (!config.gap_host.empty()) out << "gap_host = " << config.gap_host << "\n";
  if (!config.medium.empty()) {
    out << "medium = " << config.medium << "\n";
    out << "green_kind = " << config.green_kind << "\n";
    out << "samples = " << config.samples << "\n";
    out << "seed = " << config.seed << "\n";
    out << "xi = " << fmt_exact(config.xi) << "\n";
  }

  out << "\n[grid]\n";
  out << "min = " << fmt_exact(config.grid.min) << "\n";
  out << "max = " << fmt_exact(config.grid.max) << "\n";
  out << "count = " << config.grid.count << "\n";
  out << "spacing = " << (config.grid.log_spacing ? "log" : "linear") << "\n";

  out << "\n[run]\n";
  out << "kind = " << to_string(config.kind) << "\n";
  out << "name = " << config.name << "\n";
  out << "local_field = " << (config.local_field ? "true" : "false") << "\n";
  out << "tol = " << fmt_exact(config.tol) << "\n";
  out << "quad_tol = " << fmt_exact(config.quad_tol) << "\n";
  if (config.tamper_dual) out << "tamper_dual = true\n";
  return out.str();
}

namespace {

json report_to_json(const AuditReport& report) {
  json identities = json::array();
  for (const IdentityCheck& c : report.identities)
    identities.push_back({{"name", c.name},
                          {"lhs", c.lhs},
                          {"rhs", c.rhs},
                          {"relative_deviation", c.relative_deviation},
                          {"pass", c.pass}});
  json j = {{"scenario_id", report.scenario_id},
            {"tolerance", report.tolerance},
            {"overall_pass", report.overall_pass},
            {"outside_paper_claim", report.outside_paper_claim},
            {"identities", identities}};
  if (!report.note.empty()) j["note"] = report.note;
  return j;
}

struct BuiltScenario {
  MaterialModel material(const ScenarioConfig& config,
                         const std::string& name) const {
    const MaterialModel* m = find_material(config, name);
    if (!m) throw std::runtime_error("unknown material " + name);
    return *m;
  }
};

PlanarStack build_cp_stack(const ScenarioConfig& config) {
  BuiltScenario b;
  std::vector<std::pair<MaterialModel, double>> slabs;
  for (size_t i = 0; i + 1 < config.body.size(); ++i)
    slabs.emplace_back(b.material(config, config.body[i].first),
                       config.body[i].second);
  return make_layered(b.material(config, config.host),
                      std::move(slabs),
                      b.material(config, config.body.back().first));
}

int write_text_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot open %s for writing\n",
                 path.string().c_str());
    return 1;
  }
  out << contents;
  out.close();
  if (!out) {
    std::fprintf(stderr, "error: failed writing %s\n", path.string().c_str());
    return 1;
  }
  return 0;
}

} // namespace

int run_scenario(const ScenarioConfig& config, const RunOptions& options) {
  try {
    BuiltScenario b;
    const std::vector<double> grid = config.grid.points();
    const double tol =
        options.tol_override > 0.0 ? options.tol_override : config.tol;
    AuditOptions audit_options{tol, config.quad_tol,
                               config.tamper_dual ? 0.01 : 0.0};
    fs::create_directories(options.out_dir);
    const fs::path out_base = fs::path(options.out_dir) / config.name;

    const bool is_audit = config.kind == ScenarioKind::audit_cp ||
                          config.kind == ScenarioKind::audit_vdw ||
                          config.kind == ScenarioKind::audit_casimir ||
                          config.kind == ScenarioKind::audit_green;

    if (is_audit) {
      std::vector<AuditReport> reports;
      if (config.kind == ScenarioKind::audit_green) {
        GreenAuditScenario scenario;
        scenario.id = config.name;
        scenario.kind = config.green_kind == "bulk"
                            ? GreenAuditScenario::Kind::bulk
                            : GreenAuditScenario::Kind::halfspace;
        scenario.medium = b.material(config, config.medium);
        scenario.host = b.material(config, config.host);
        scenario.samples = config.samples;
        scenario.seed = config.seed;
        reports.push_back(audit_green(scenario, audit_options));
      } else {
        reports.resize(grid.size());
        parallel_for(
            static_cast<int>(grid.size()), options.threads, [&](int i) {
              const std::string id =
                  config.name + "@" + fmt(grid[i]);
              if (config.kind == ScenarioKind::audit_cp) {
                CpScenario s{id, config.atoms.at(config.atom),
                             build_cp_stack(config), grid[i],
                             config.local_field};
                reports[i] = audit_cp(s, audit_options);
              } else if (config.kind == ScenarioKind::audit_vdw) {
                VdwScenario s{id, config.atoms.at(config.atom_a),
                              config.atoms.at(config.atom_b), grid[i],
                              config.local_field, std::nullopt};
                if (!config.host.empty() && config.host != "vacuum")
                  s.host = b.material(config, config.host);
                reports[i] = audit_vdw(s, audit_options);
              } else {
                CasimirScenario s{id, b.material(config, config.left),
                                  b.material(config, config.right), grid[i],
                                  std::nullopt};
                if (!config.gap_host.empty() && config.gap_host != "vacuum")
                  s.gap_host = b.material(config, config.gap_host);
                reports[i] = audit_casimir(s, audit_options);
              }
            });
      }
      bool all_pass = true;
      json jreports = json::array();
      for (const AuditReport& r : reports) {
        all_pass = all_pass && r.overall_pass;
        jreports.push_back(report_to_json(r));
      }
      const json doc = {{"scenario_id", config.name},
                        {"kind", to_string(config.kind)},
                        {"tolerance", tol},
                        {"overall_pass", all_pass},
                        {"reports", jreports}};
      const fs::path path = out_base.string() + "_audit.json";
      if (int rc = write_text_file(path, doc.dump(2) + "\n")) return rc;
      return all_pass ? 0 : 2;
    }

    // Computation kinds: one CSV row per grid point.
    std::vector<std::string> labels;
    switch (config.kind) {
      case ScenarioKind::cp:
      case ScenarioKind::casimir: labels = {"e", "m"}; break;
      case ScenarioKind::vdw: labels = {"ee", "em", "me", "mm"}; break;
      default:
        labels = {"tr_ee", "tr_mm", "tr_em", "tr_me",
                  "fro_ee", "fro_mm", "fro_em", "fro_me"};
        break;
    }
    const bool with_total = config.kind != ScenarioKind::green;
    std::vector<std::vector<double>> rows(grid.size());

    parallel_for(static_cast<int>(grid.size()), options.threads, [&](int i) {
      const double d = grid[i];
      std::vector<double>& row = rows[i];
      row.push_back(d);
      if (config.kind == ScenarioKind::cp) {
        const PotentialBreakdown u =
            cp_potential(config.atoms.at(config.atom), build_cp_stack(config),
                         d, config.local_field, config.quad_tol);
        for (const std::string& l : labels) row.push_back(u.components.at(l));
        row.push_back(u.total);
        row.push_back(u.error_estimate);
      } else if (config.kind == ScenarioKind::vdw) {
        std::optional<MaterialModel> host;
        if (!config.host.empty() && config.host != "vacuum")
          host = b.material(config, config.host);
        const PotentialBreakdown u =
            vdw_potential(config.atoms.at(config.atom_a),
                          config.atoms.at(config.atom_b), d,
                          config.local_field, host, config.quad_tol);
        for (const std::string& l : labels) row.push_back(u.components.at(l));
        row.push_back(u.total);
        row.push_back(u.error_estimate);
      } else if (config.kind == ScenarioKind::casimir) {
        std::optional<MaterialModel> host;
        if (!config.gap_host.empty() && config.gap_host != "vacuum")
          host = b.material(config, config.gap_host);
        const ForceBreakdown f = casimir_pressure_planar(
            b.material(config, config.left), b.material(config, config.right),
            d, host, config.quad_tol);
        for (const std::string& l : labels) row.push_back(f.components.at(l));
        row.push_back(f.total);
        row.push_back(f.error_estimate);
      } else { // green
        GreenBlocks blocks;
        if (config.green_kind == "bulk") {
          const ResponsePair resp =
              eval_material(b.material(config, config.medium), config.xi);
          blocks = bulk_blocks(resp, Vec3{0, 0, d}, Vec3{0, 0, 0}, config.xi);
        } else {
          const PlanarStack stack = make_halfspace(
              b.material(config, config.medium), b.material(config, config.host));
          blocks = scattering_blocks(stack, Vec3{0, 0, d}, Vec3{0, 0, d},
                                     config.xi, kBlockAll, config.quad_tol);
        }
        for (const Mat3* m : {&blocks.ee, &blocks.mm, &blocks.em, &blocks.me})
          row.push_back(m->trace());
        for (const Mat3* m : {&blocks.ee, &blocks.mm, &blocks.em, &blocks.me})
          row.push_back(m->frobenius());
      }
    });

    std::ostringstream csv;
    csv << "distance";
    for (const std::string& l : labels) csv << "," << csv_field(l);
    if (with_total) csv << ",total,error_estimate";
    csv << "\n";
    for (const std::vector<double>& row : rows) {
      for (size_t c = 0; c < row.size(); ++c) {
        if (c) csv << ",";
        csv << fmt(row[c]);
      }
      csv << "\n";
    }
    if (int rc = write_text_file(out_base.string() + ".csv", csv.str()))
      return rc;

    if (options.emit_plot_data) {
      for (size_t c = 0; c < labels.size(); ++c) {
        std::ostringstream dat;
        for (const std::vector<double>& row : rows)
          dat << fmt(row[0]) << " " << fmt(row[1 + c]) << "\n";
        if (int rc = write_text_file(
                out_base.string() + "_" + labels[c] + ".dat", dat.str()))
          return rc;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int run_self_check() {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", name.c_str());
    if (!ok) ++failures;
  };

  // group structure
  Mat2 d1 = z4_member(1);
  Mat2 d4 = d1 * d1 * d1 * d1;
  check((d4 - Mat2::identity()).max_abs() == 0.0, "Z4 generator^4 == identity");

  const DualityElement a(2.0, 0.7), bb(0.5, 1.9);
  const Mat2 lhs = duality_matrix(a) * duality_matrix(bb);
  const Mat2 rhs = duality_matrix(DualityElement(1.0, a.theta + bb.theta));
  check((lhs - rhs).max_abs() <= 1e-12 * 2.0,
        "duality matrices compose as a group");

  const ResponsePair water{1.77, 1.0};
  const ResponsePair twice =
      transform_response(transform_response(water, kPi / 2.0), kPi / 2.0);
  check(std::abs(twice.eps - water.eps) < 1e-12 &&
            std::abs(twice.mu - water.mu) < 1e-12,
        "response transform is an involution");

  try {
    const IntegralResult e1 =
        integrate_halfline([](double x) { return std::exp(-x); }, 1.0, 1e-10);
    const IntegralResult e2 = integrate_halfline(
        [](double x) { return 1.0 / (1.0 + x * x); }, 1.0, 1e-10);
    const IntegralResult e3 = integrate_halfline(
        [](double x) { return x * x * x * std::exp(-2.0 * x); }, 0.5, 1e-10);
    check(std::abs(e1.value - 1.0) < 1e-9, "halfline quadrature: exp decay");
    check(std::abs(e2.value - kPi / 2.0) < 1e-9,
          "halfline quadrature: algebraic decay");
    check(std::abs(e3.value - 0.375) < 1e-9, "halfline quadrature: moments");
  } catch (const QuadratureError&) {
    check(false, "halfline quadrature: convergence");
  }

  // Fresnel polarization swap under eps <-> mu
  bool swap_ok = true;
  for (double k : {1e5, 1e6, 3e7}) {
    const PolRefl r1 = fresnel_interface({1.0, 1.0}, {4.0, 1.5}, k, 1e15);
    const PolRefl r2 = fresnel_interface({1.0, 1.0}, {1.5, 4.0}, k, 1e15);
    swap_ok = swap_ok && std::abs(r1.rs - r2.rp) < 1e-14 &&
              std::abs(r1.rp - r2.rs) < 1e-14;
  }
  check(swap_ok, "fresnel coefficients swap polarizations under eps<->mu");

  bool law_ok = true;
  for (double xi : {5e14, 2e15}) {
    const ResponsePair resp{2.0, 3.0};
    const ResponsePair swapped{3.0, 2.0};
    const Vec3 r{3e-8, -2e-8, 5e-8}, rp{-1e-8, 4e-8, -3e-8};
    const GreenBlocks direct = bulk_blocks(swapped, r, rp, xi);
    const GreenBlocks mapped =
        dual_transform_green(bulk_blocks(resp, r, rp, xi), resp, resp);
    for (auto [matl, matr] : {std::pair{&direct.ee, &mapped.ee},
                              std::pair{&direct.mm, &mapped.mm},
                              std::pair{&direct.em, &mapped.em},
                              std::pair{&direct.me, &mapped.me}})
      law_ok = law_ok && ((*matl) - (*matr)).frobenius() <=
                             1e-12 * std::max(matl->frobenius(), 1e-300);
  }
  check(law_ok, "bulk blocks obey the duality transformation law");

  try {
    const PlanarStack empty = make_halfspace(MaterialModel{});
    const Mat3 g = halfspace_scattering_green(empty, 1e-7, 1e-7, 0.0, 1e15);
    check(g.max_abs() < 1e-20, "vacuum stack scatters nothing");
  } catch (const std::exception&) {
    check(false, "vacuum stack scatters nothing");
  }

  return failures;
}

} // namespace dualcas
