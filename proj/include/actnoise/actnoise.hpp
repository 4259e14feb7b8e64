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

// Umbrella header: pulls in the whole public surface.

#pragma once

#include "actnoise/acceptance.hpp"
#include "actnoise/common.hpp"
#include "actnoise/diagnostics.hpp"
#include "actnoise/eigensystem.hpp"
#include "actnoise/fock_reference.hpp"
#include "actnoise/metrics.hpp"
#include "actnoise/ode.hpp"
#include "actnoise/optimizer.hpp"
#include "actnoise/oscillator.hpp"
#include "actnoise/presets.hpp"
#include "actnoise/propagator.hpp"
#include "actnoise/stochastic.hpp"
#include "actnoise/sweep.hpp"
#include "actnoise/tls.hpp"
#include "actnoise/types.hpp"
#include "actnoise/version.hpp"
