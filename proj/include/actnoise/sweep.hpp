// Copyright 2026 The actnoise Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "actnoise/diagnostics.hpp"
#include "actnoise/optimizer.hpp"
#include "actnoise/version.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Declarative sweep runner.
//
// A plan is a flat key = value text file with optional [axis NAME] sections.
// Global keys fix the system, the protocol family and the scalar parameters;
// each axis section turns one of {t_f, gamma, knob} into a grid.  `run_sweep`
// evaluates the cartesian product of the axes for every listed protocol and
// writes one CSV per protocol plus a JSON manifest that embeds the config
// text, so every output is reproducible from its manifest alone.
//
// Schema (see the shipped presets for worked examples):
//   system     = TLS | HO
//   protocol   = comma list of ARP | SP (TLS) / ConstantMu | ErmakovSP (HO)
//   mode       = sweep | scan            (default sweep; scan: SP knob scan)
//   delta0     = <rad/s>                 (TLS)
//   omega0, omega_f = <rad/s>            (HO, mass = 1)
//   t_f, gamma, knob = <scalar>          (unless provided as an axis)
//   winding    = <int >= 0>              (ARP level crossings, default 0)
//   grid_points = <int >= 2>             (propagation grid, default 1200)
//   seed       = <uint64>                (default 1)
//   mc_trajectories = <int >= 0>         (default 0: no Monte-Carlo column)
//   rtol, atol = <double>                (integrator overrides)
//   output     = <base name for artifacts>
//   [axis t_f] / [axis gamma] / [axis knob]
//     grid   = log | lin | list
//     min, max, count                    (log | lin; log requires min > 0)
//     values = comma list                (list)
// ---------------------------------------------------------------------------

enum class SweepSystem { Tls, Ho };
enum class SweepMode { Sweep, Scan };

struct AxisSpec {
  std::string name;  // "t_f" | "gamma" | "knob"
  std::vector<double> values;  // strictly increasing
};

struct SweepPlan {
  SweepSystem system = SweepSystem::Tls;
  SweepMode mode = SweepMode::Sweep;
  std::vector<std::string> protocols;
  double delta0 = 0.0;
  double omega0 = 0.0;
  double omega_f = 0.0;
  std::optional<double> t_f;
  std::optional<double> gamma;
  std::optional<double> knob;
  int winding = 0;
  int grid_points = 1200;
  std::uint64_t seed = 1;
  std::size_t mc_trajectories = 0;
  std::optional<double> rtol;
  std::optional<double> atol;
  std::string output = "sweep";
  std::vector<AxisSpec> axes;  // 1 or 2
  std::string config_text;     // raw text the plan was parsed from
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

inline double parse_number(const std::string& s, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + s + "'", line, field);
  }
}

inline long long parse_integer(const std::string& s, int line, const std::string& field) {
  try {
    std::size_t pos = 0;
    const long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("not an integer: '" + s + "'", line, field);
  }
}

// Raw key/value with the line it came from, grouped per section.
struct RawSection {
  std::string header;  // empty for the global section
  int header_line = 0;
  std::vector<std::tuple<std::string, std::string, int>> entries;
};

inline std::vector<RawSection> tokenize_config(std::istream& is, std::string& raw_text) {
  std::vector<RawSection> sections(1);
  std::string line;
  int lineno = 0;
  std::ostringstream raw;
  while (std::getline(is, line)) {
    ++lineno;
    raw << line << '\n';
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("unterminated section header", lineno, line);
      sections.push_back(RawSection{trim(line.substr(1, line.size() - 2)), lineno, {}});
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value'", lineno, line);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value", lineno, key.empty() ? value : key);
    sections.back().entries.emplace_back(key, value, lineno);
  }
  raw_text = raw.str();
  return sections;
}

inline AxisSpec parse_axis(const RawSection& sec) {
  const std::string name = trim(sec.header.substr(4));
  if (name != "t_f" && name != "gamma" && name != "knob")
    throw ConfigError("unknown axis (expected t_f, gamma or knob)", sec.header_line, name);
  std::string grid;
  std::optional<double> mn, mx;
  std::optional<long long> count;
  std::vector<double> values;
  for (const auto& [key, value, line] : sec.entries) {
    if (key == "grid") {
      grid = value;
      if (grid != "log" && grid != "lin" && grid != "list")
        throw ConfigError("grid must be log, lin or list", line, key);
    } else if (key == "min") {
      mn = parse_number(value, line, key);
    } else if (key == "max") {
      mx = parse_number(value, line, key);
    } else if (key == "count") {
      count = parse_integer(value, line, key);
    } else if (key == "values") {
      for (const std::string& item : split_list(value))
        values.push_back(parse_number(item, line, key));
    } else {
      throw ConfigError("unknown axis key", line, key);
    }
  }
  if (grid.empty()) throw ConfigError("axis needs a grid key", sec.header_line, name);

  AxisSpec axis;
  axis.name = name;
  if (grid == "list") {
    if (values.empty()) throw ConfigError("list grid needs values", sec.header_line, name);
    axis.values = values;
  } else {
    if (!mn || !mx || !count)
      throw ConfigError("log/lin grid needs min, max and count", sec.header_line, name);
    if (*count < 2) throw ConfigError("count must be >= 2", sec.header_line, name);
    if (!(*mx > *mn)) throw ConfigError("max must exceed min", sec.header_line, name);
    if (grid == "log" && !(*mn > 0.0))
      throw ConfigError("log grid needs min > 0", sec.header_line, name);
    const long long n = *count;
    for (long long i = 0; i < n; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(n - 1);
      axis.values.push_back(grid == "log" ? *mn * std::pow(*mx / *mn, s)
                                          : *mn + (*mx - *mn) * s);
    }
    axis.values.front() = *mn;  // pin the endpoints exactly
    axis.values.back() = *mx;
  }
  for (std::size_t i = 1; i < axis.values.size(); ++i)
    if (!(axis.values[i] > axis.values[i - 1]))
      throw ConfigError("axis grid must be strictly increasing", sec.header_line, name);
  return axis;
}

}  // namespace detail

/// Parse a sweep plan; throws ConfigError with line and field on any
/// schema violation.
inline SweepPlan parse_sweep_plan(std::istream& is) {
  SweepPlan plan;
  std::string raw_text;
  const auto sections = detail::tokenize_config(is, raw_text);
  plan.config_text = raw_text;

  bool have_system = false;
  for (const auto& [key, value, line] : sections[0].entries) {
    if (key == "system") {
      if (value == "TLS")
        plan.system = SweepSystem::Tls;
      else if (value == "HO")
        plan.system = SweepSystem::Ho;
      else
        throw ConfigError("system must be TLS or HO", line, key);
      have_system = true;
    } else if (key == "protocol") {
      plan.protocols = detail::split_list(value);
      if (plan.protocols.empty()) throw ConfigError("empty protocol list", line, key);
    } else if (key == "mode") {
      if (value == "sweep")
        plan.mode = SweepMode::Sweep;
      else if (value == "scan")
        plan.mode = SweepMode::Scan;
      else
        throw ConfigError("mode must be sweep or scan", line, key);
    } else if (key == "delta0") {
      plan.delta0 = detail::parse_number(value, line, key);
    } else if (key == "omega0") {
      plan.omega0 = detail::parse_number(value, line, key);
    } else if (key == "omega_f") {
      plan.omega_f = detail::parse_number(value, line, key);
    } else if (key == "t_f") {
      plan.t_f = detail::parse_number(value, line, key);
    } else if (key == "gamma") {
      plan.gamma = detail::parse_number(value, line, key);
    } else if (key == "knob") {
      plan.knob = detail::parse_number(value, line, key);
    } else if (key == "winding") {
      const long long v = detail::parse_integer(value, line, key);
      if (v < 0) throw ConfigError("winding must be >= 0", line, key);
      plan.winding = static_cast<int>(v);
    } else if (key == "grid_points") {
      const long long v = detail::parse_integer(value, line, key);
      if (v < 2) throw ConfigError("grid_points must be >= 2", line, key);
      plan.grid_points = static_cast<int>(v);
    } else if (key == "seed") {
      plan.seed = static_cast<std::uint64_t>(detail::parse_integer(value, line, key));
    } else if (key == "mc_trajectories") {
      const long long v = detail::parse_integer(value, line, key);
      if (v < 0) throw ConfigError("mc_trajectories must be >= 0", line, key);
      plan.mc_trajectories = static_cast<std::size_t>(v);
    } else if (key == "rtol") {
      plan.rtol = detail::parse_number(value, line, key);
    } else if (key == "atol") {
      plan.atol = detail::parse_number(value, line, key);
    } else if (key == "output") {
      plan.output = value;
    } else {
      throw ConfigError("unknown key", line, key);
    }
  }

  for (std::size_t s = 1; s < sections.size(); ++s) {
    const auto& sec = sections[s];
    if (sec.header.rfind("axis ", 0) != 0)
      throw ConfigError("unknown section (expected [axis NAME])", sec.header_line, sec.header);
    AxisSpec axis = detail::parse_axis(sec);
    for (const AxisSpec& existing : plan.axes)
      if (existing.name == axis.name)
        throw ConfigError("duplicate axis", sec.header_line, axis.name);
    plan.axes.push_back(std::move(axis));
  }

  // Cross-field validation.
  auto fail = [](const std::string& what, const std::string& field) {
    throw ConfigError(what, 0, field);
  };
  if (!have_system) fail("missing key", "system");
  if (plan.protocols.empty()) fail("missing key", "protocol");
  if (plan.axes.empty()) fail("at least one axis is required", "axis");
  if (plan.axes.size() > 2) fail("at most two axes are supported", "axis");

  const bool is_tls = plan.system == SweepSystem::Tls;
  for (const std::string& p : plan.protocols) {
    const bool tls_proto = p == "ARP" || p == "SP";
    const bool ho_proto = p == "ConstantMu" || p == "ErmakovSP";
    if (!tls_proto && !ho_proto) fail("unknown protocol", p);
    if (tls_proto != is_tls) fail("protocol does not belong to the system", p);
  }
  if (is_tls) {
    if (!(plan.delta0 > 0.0)) fail("TLS needs delta0 > 0", "delta0");
  } else {
    if (!(plan.omega0 > 0.0) || !(plan.omega_f > 0.0))
      fail("HO needs omega0 > 0 and omega_f > 0", "omega0/omega_f");
  }

  auto has_axis = [&plan](const std::string& n) {
    return std::any_of(plan.axes.begin(), plan.axes.end(),
                       [&n](const AxisSpec& a) { return a.name == n; });
  };
  if (has_axis("t_f") && plan.t_f) fail("t_f is both fixed and an axis", "t_f");
  if (has_axis("gamma") && plan.gamma) fail("gamma is both fixed and an axis", "gamma");
  if (has_axis("knob") && plan.knob) fail("knob is both fixed and an axis", "knob");
  if (!has_axis("t_f") && !plan.t_f) fail("t_f is neither fixed nor an axis", "t_f");
  if (!has_axis("gamma") && !plan.gamma) fail("gamma is neither fixed nor an axis", "gamma");
  if (has_axis("knob") || plan.knob) {
    const bool sp_only = plan.protocols.size() == 1 && plan.protocols[0] == "SP";
    if (!sp_only) fail("knob applies to the SP protocol only", "knob");
  }
  for (const AxisSpec& a : plan.axes) {
    if (a.name == "gamma" && a.values.front() < 0.0) fail("gamma must be >= 0", "gamma");
    if (a.name == "t_f" && !(a.values.front() > 0.0)) fail("t_f must be > 0", "t_f");
  }
  if (plan.t_f && !(*plan.t_f > 0.0)) fail("t_f must be > 0", "t_f");
  if (plan.gamma && *plan.gamma < 0.0) fail("gamma must be >= 0", "gamma");
  if (plan.rtol && !(*plan.rtol > 0.0)) fail("rtol must be > 0", "rtol");
  if (plan.atol && !(*plan.atol > 0.0)) fail("atol must be > 0", "atol");

  if (plan.mode == SweepMode::Scan) {
    if (!is_tls || plan.protocols.size() != 1 || plan.protocols[0] != "SP")
      fail("scan mode requires system TLS and protocol SP", "mode");
    if (plan.axes.size() != 1 || plan.axes[0].name != "knob")
      fail("scan mode requires exactly one knob axis", "mode");
  }
  return plan;
}

inline SweepPlan load_sweep_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file", 0, path);
  return parse_sweep_plan(in);
}

// ---------------------------------------------------------------------------
// Execution
// ---------------------------------------------------------------------------

struct SweepOutcome {
  std::vector<std::string> files;       // artifacts written, manifest last
  std::size_t failed_points = 0;        // rows carrying an error
  std::vector<std::string> warnings;    // one per failed point
};

namespace detail {

inline IntegratorOptions plan_integrator(const SweepPlan& plan) {
  IntegratorOptions io;
  if (plan.rtol) io.rtol = *plan.rtol;
  if (plan.atol) io.atol = *plan.atol;
  return io;
}

// The point grid of a sweep: outer axis varies slowest.  Each entry is
// (t_f, gamma, knob) with fixed scalars filled in.
struct SweepPoint {
  double t_f;
  double gamma;
  double knob;
};

inline std::vector<SweepPoint> expand_points(const SweepPlan& plan) {
  auto axis_of = [&plan](const std::string& n) -> const AxisSpec* {
    for (const AxisSpec& a : plan.axes)
      if (a.name == n) return &a;
    return nullptr;
  };
  const AxisSpec* ax_t = axis_of("t_f");
  const AxisSpec* ax_g = axis_of("gamma");
  const AxisSpec* ax_k = axis_of("knob");
  std::vector<const AxisSpec*> order;
  for (const AxisSpec& a : plan.axes) order.push_back(&a);

  std::vector<SweepPoint> pts;
  auto fill = [&](double av, double bv) {
    SweepPoint p{plan.t_f.value_or(0.0), plan.gamma.value_or(0.0), plan.knob.value_or(0.0)};
    const AxisSpec* a = order[0];
    const AxisSpec* b = order.size() > 1 ? order[1] : nullptr;
    auto assign = [&p, ax_t, ax_g, ax_k](const AxisSpec* ax, double v) {
      if (ax == ax_t)
        p.t_f = v;
      else if (ax == ax_g)
        p.gamma = v;
      else if (ax == ax_k)
        p.knob = v;
    };
    assign(a, av);
    if (b) assign(b, bv);
    pts.push_back(p);
  };
  if (order.size() == 1) {
    for (double v : order[0]->values) fill(v, 0.0);
  } else {
    for (double va : order[0]->values)
      for (double vb : order[1]->values) fill(va, vb);
  }
  return pts;
}

inline DiagnosticsReport evaluate_point(const SweepPlan& plan, const std::string& protocol,
                                        const SweepPoint& pt, std::size_t index,
                                        unsigned threads) {
  PointOptions po;
  po.grid_points = plan.grid_points;
  po.integrator = plan_integrator(plan);
  po.mc_trajectories = plan.mc_trajectories;
  po.seed = plan.seed + index;  // distinct, reproducible stream per point
  po.threads = threads;
  try {
    if (plan.system == SweepSystem::Tls) {
      const TlsProtocol proto = protocol == "ARP"
                                    ? arp_protocol(plan.delta0, pt.t_f, plan.winding)
                                    : sp_protocol(plan.delta0, pt.t_f, pt.knob);
      return run_tls_point(proto, pt.gamma, po);
    }
    const FrequencyProtocol proto = protocol == "ConstantMu"
                                        ? constant_mu_ramp(plan.omega0, plan.omega_f, pt.t_f)
                                        : ermakov_sp(plan.omega0, plan.omega_f, pt.t_f);
    return run_ho_point(proto, pt.gamma, po);
  } catch (const std::exception& e) {
    DiagnosticsReport r;
    r.system = plan.system == SweepSystem::Tls ? "TLS" : "HO";
    r.protocol = protocol;
    r.t_f = pt.t_f;
    r.gamma = pt.gamma;
    if (protocol == "SP") r.knob = pt.knob;
    r.error = e.what();
    return r;
  }
}

inline std::string sanitized_lower(const std::string& s) {
  std::string out;
  for (char c : s) out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return out;
}

}  // namespace detail

/// Execute a plan and write its artifacts into `out_dir` (created by the
/// caller).  Identical plan + seed produce bitwise-identical files for any
/// thread count: points are computed in parallel but emitted in grid order.
inline SweepOutcome run_sweep(const SweepPlan& plan, const std::string& out_dir,
                              unsigned threads = 0) {
  SweepOutcome outcome;
  const std::uint64_t config_hash = fnv1a64(plan.config_text);
  char hash_hex[17];
  std::snprintf(hash_hex, sizeof hash_hex, "%016llx",
                static_cast<unsigned long long>(config_hash));
  const IntegratorOptions io = detail::plan_integrator(plan);

  auto open_artifact = [&outcome, &out_dir](const std::string& name) {
    const std::string path = out_dir.empty() ? name : out_dir + "/" + name;
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot write artifact", 0, path);
    outcome.files.push_back(path);
    return os;
  };
  auto preamble = [&](std::ostream& os, const std::string& protocol) {
    os << "# actnoise " << kVersion << "\n"
       << "# config " << hash_hex << "\n"
       << "# protocol " << protocol << "\n";
  };

  if (plan.mode == SweepMode::Scan) {
    ScanOptions so;
    so.grid_points = plan.grid_points;
    so.integrator = io;
    so.threads = threads;
    const auto rows = scan_sp_family(plan.delta0, *plan.t_f, NoiseConfig(*plan.gamma),
                                     plan.axes[0].values, so);
    for (const ScanResult& r : rows)
      if (!r.ok) {
        ++outcome.failed_points;
        outcome.warnings.push_back("knob = " + format_double(r.knob) + ": " + r.error);
      }
    auto os = open_artifact(plan.output + "_scan.csv");
    preamble(os, "SP");
    write_scan_csv(os, rows);
  } else {
    const auto points = detail::expand_points(plan);
    for (const std::string& protocol : plan.protocols) {
      std::vector<DiagnosticsReport> rows(points.size());
      parallel_for(points.size(), threads, [&](std::size_t i) {
        rows[i] = detail::evaluate_point(plan, protocol, points[i], i, 1);
      });
      for (const DiagnosticsReport& r : rows)
        if (!r.error.empty()) {
          ++outcome.failed_points;
          outcome.warnings.push_back(protocol + " t_f = " + format_double(r.t_f) +
                                     ", gamma = " + format_double(r.gamma) + ": " + r.error);
        }
      auto os = open_artifact(plan.output + "_" + detail::sanitized_lower(protocol) + ".csv");
      preamble(os, protocol);
      os << DiagnosticsReport::csv_header() << '\n';
      for (const DiagnosticsReport& r : rows) os << r.csv_row() << '\n';
    }
  }

  nlohmann::json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = hash_hex;
  manifest["config_text"] = plan.config_text;
  manifest["seed"] = plan.seed;
  manifest["integrator"] = {{"rtol", io.rtol}, {"atol", io.atol}};
  manifest["grid_points"] = plan.grid_points;
  // Basenames only: the manifest lives next to its artifacts and must not
  // change when the same run is written to a different directory.
  std::vector<std::string> names;
  for (const std::string& f : outcome.files)
    names.push_back(f.substr(f.find_last_of('/') + 1));
  manifest["outputs"] = names;
  manifest["failed_points"] = outcome.failed_points;
  auto ms = open_artifact(plan.output + ".manifest.json");
  ms << manifest.dump(2) << '\n';
  return outcome;
}

}  // namespace actnoise
