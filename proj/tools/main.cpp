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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "actnoise/acceptance.hpp"
#include "actnoise/presets.hpp"
#include "actnoise/sweep.hpp"
#include "actnoise/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTestFail = 1;
constexpr int kExitConfigError = 2;

// A run argument is either the name of a shipped preset or a path to a plan
// file; presets win so `actnoise run fig2` always works.
actnoise::SweepPlan resolve_plan(const std::string& arg) {
  for (const actnoise::Preset& p : actnoise::presets()) {
    if (arg == p.name) {
      std::istringstream is(actnoise::preset_config(arg));
      return actnoise::parse_sweep_plan(is);
    }
  }
  return actnoise::load_sweep_plan(arg);
}

int cmd_run(const std::string& cfg, std::string out_dir, unsigned threads) {
  if (out_dir.empty()) {
    if (const char* env = std::getenv("ACTNOISE_OUTPUT_DIR")) out_dir = env;
  }
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  const actnoise::SweepPlan plan = resolve_plan(cfg);
  const actnoise::SweepOutcome outcome = actnoise::run_sweep(plan, out_dir, threads);
  for (const std::string& w : outcome.warnings)
    std::cerr << "warning: point failed: " << w << '\n';
  for (const std::string& f : outcome.files) std::cout << f << '\n';
  if (outcome.failed_points > 0)
    std::cerr << "warning: " << outcome.failed_points
              << " point(s) failed; see the error column\n";
  return kExitOk;
}

int cmd_verify(bool full, const std::string& report_path) {
  const auto results = actnoise::run_acceptance(full);
  const bool pass = actnoise::print_acceptance(results, std::cout);
  if (!report_path.empty()) {
    std::ofstream os(report_path);
    if (!os) {
      std::cerr << "error: cannot write report to " << report_path << '\n';
      return kExitConfigError;
    }
    actnoise::write_acceptance_report(results, os);
  }
  return pass ? kExitOk : kExitTestFail;
}

int cmd_list_presets(const std::string& name) {
  if (name.empty()) {
    for (const actnoise::Preset& p : actnoise::presets())
      std::cout << p.name << "\t" << p.summary << '\n';
    return kExitOk;
  }
  std::cout << actnoise::preset_config(name);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"actnoise: quantum state transfer under action noise"};
  app.set_version_flag("--version", actnoise::kVersion);
  app.require_subcommand(1);

  std::string cfg, out_dir, report_path, preset_name;
  unsigned threads = 0;
  bool full = false;

  CLI::App* run = app.add_subcommand("run", "execute a sweep plan (preset name or file)");
  run->add_option("config", cfg, "preset name or plan file")->required();
  run->add_option("--out", out_dir, "output directory (default: $ACTNOISE_OUTPUT_DIR or cwd)");
  run->add_option("--threads", threads, "worker threads (default: all cores)");

  CLI::App* verify = app.add_subcommand("verify", "run the acceptance suite");
  verify->add_flag("--full", full, "include the Monte-Carlo and Fock-oracle checks");
  verify->add_option("--report", report_path, "write a JSON report here");

  CLI::App* list = app.add_subcommand("list-presets", "list shipped plans (or print one)");
  list->add_option("name", preset_name, "print this preset's config text");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(cfg, out_dir, threads);
    if (verify->parsed()) return cmd_verify(full, report_path);
    return cmd_list_presets(preset_name);
  } catch (const actnoise::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitTestFail;
  }
}
