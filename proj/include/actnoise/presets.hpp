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

#include <string>
#include <vector>

#include "actnoise/common.hpp"

namespace actnoise {

// ---------------------------------------------------------------------------
// Shipped sweep configurations.  Each is a complete plan file; `list-presets`
// prints them so they double as schema documentation and as starting points
// for custom runs.
// ---------------------------------------------------------------------------

struct Preset {
  const char* name;
  const char* summary;
  const char* config;
};

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> table = {
      {"fig1",
       "oscillator fidelity vs protocol time: Ermakov SP and constant-mu ramp, "
       "noise-free and noisy",
       "# Harmonic-oscillator ground-state transfer, 2.5 MHz -> 2.5 kHz.\n"
       "# Four series: {ErmakovSP, ConstantMu} x {gamma = 0, gamma = 0.8 ms}.\n"
       "# The short-time end sits in the non-adiabatic regime where the noisy\n"
       "# constant-mu ramp beats its noise-free counterpart.\n"
       "system = HO\n"
       "protocol = ErmakovSP, ConstantMu\n"
       "omega0 = 2.5e6\n"
       "omega_f = 2.5e3\n"
       "grid_points = 300\n"
       "output = fig1\n"
       "\n"
       "[axis t_f]\n"
       "grid = log\n"
       "min = 3.1622776601683795e-05\n"
       "max = 1e-2\n"
       "count = 16\n"
       "\n"
       "[axis gamma]\n"
       "grid = list\n"
       "values = 0, 0.8e-3\n"},
      {"fig2",
       "TLS fidelity vs protocol time: SP and ARP, noise-free and noisy",
       "# Two-level transfer at delta0 = 150 rad/s over the non-adiabatic range.\n"
       "# Four series: {SP, ARP} x {gamma = 0, gamma = 0.01}.\n"
       "system = TLS\n"
       "protocol = SP, ARP\n"
       "delta0 = 150\n"
       "grid_points = 1200\n"
       "output = fig2\n"
       "\n"
       "[axis t_f]\n"
       "grid = log\n"
       "min = 0.012\n"
       "max = 0.12\n"
       "count = 14\n"
       "\n"
       "[axis gamma]\n"
       "grid = list\n"
       "values = 0, 0.01\n"},
      {"fig3",
       "TLS fidelity and relative decoherence vs noise strength at fixed t_f",
       "# Noise sweep for the SP at the ARP's first-peak time t_f = 3.464*pi/(2*delta0).\n"
       "# Fidelity dips, then the Zeno-like regime takes over while C_R keeps rising.\n"
       "system = TLS\n"
       "protocol = SP\n"
       "delta0 = 150\n"
       "t_f = 3.6274923173450144e-02\n"
       "grid_points = 1200\n"
       "output = fig3\n"
       "\n"
       "[axis gamma]\n"
       "grid = list\n"
       "values = 0, 0.0001, 0.00022100084930052973, 0.00048841375391555448, "
       "0.0010793985442539746, 0.0023854799501388381, 0.0052719309497006855, "
       "0.011651012173375998, 0.025748835855269044, 0.056905145925143938, "
       "0.12576085579027382, 0.2779325593841197, 0.61423331672160331, "
       "1.3574608466415568, 3\n"},
      {"fig4",
       "SP knob scan: fidelity vs M along the two adiabaticity branches",
       "# Scan of the SP shape knob at delta0 = 150, t_f = 0.1, gamma = 0.01.\n"
       "# The two knob windows cover the two branches around the minimum of M:\n"
       "# mu rises with M on the first, falls with M on the second.\n"
       "system = TLS\n"
       "protocol = SP\n"
       "mode = scan\n"
       "delta0 = 150\n"
       "t_f = 0.1\n"
       "gamma = 0.01\n"
       "grid_points = 1200\n"
       "output = fig4\n"
       "\n"
       "[axis knob]\n"
       "grid = list\n"
       "values = -38, -36, -34, -32, -30, -28, -26, -24, -22, -20, "
       "-14, -12, -10, -8, -6, -4, -2, 0, 2, 4, 6, 8\n"},
      {"tiny",
       "three-point ARP smoke run (seconds)",
       "# Minimal end-to-end exercise of the sweep pipeline.\n"
       "system = TLS\n"
       "protocol = ARP\n"
       "delta0 = 150\n"
       "grid_points = 300\n"
       "output = tiny\n"
       "\n"
       "[axis t_f]\n"
       "grid = lin\n"
       "min = 0.02\n"
       "max = 0.04\n"
       "count = 3\n"
       "\n"
       "[axis gamma]\n"
       "grid = list\n"
       "values = 0, 0.01\n"}};
  return table;
}

/// Config text of a named preset; throws ConfigError for unknown names.
inline std::string preset_config(const std::string& name) {
  for (const Preset& p : presets())
    if (name == p.name) return p.config;
  std::string known;
  for (const Preset& p : presets()) known += std::string(known.empty() ? "" : ", ") + p.name;
  throw ConfigError("unknown preset (known: " + known + ")", 0, name);
}

}  // namespace actnoise
