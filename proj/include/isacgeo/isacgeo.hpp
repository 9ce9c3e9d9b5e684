// SPDX-License-Identifier: Apache-2.0
//
// isacgeo: scatterer geometry and bistatic RCS from monostatic mmWave scans
// Copyright (C) 2026 The isacgeo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Umbrella header.

#pragma once

#include "extract.hpp"
#include "geo.hpp"
#include "golay.hpp"
#include "io.hpp"
#include "model.hpp"
#include "pipeline.hpp"
#include "rcs.hpp"
#include "spectrum.hpp"
#include "synth.hpp"
