// SPDX-License-Identifier: Apache-2.0
//
// capa-isac: waveform design and evaluation for continuous-aperture ISAC transmitters
// Copyright (C) 2026 capa-isac contributors
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

#ifndef CAPA_CAPA_HPP
#define CAPA_CAPA_HPP

#include "capa/commands.hpp"
#include "capa/config.hpp"
#include "capa/em_model.hpp"
#include "capa/evaluation.hpp"
#include "capa/geometry.hpp"
#include "capa/io.hpp"
#include "capa/isac_core.hpp"
#include "capa/quadrature.hpp"
#include "capa/reference_design.hpp"
#include "capa/rng.hpp"
#include "capa/scenario.hpp"
#include "capa/spda_baseline.hpp"
#include "capa/version.hpp"
#include "capa/wavenumber.hpp"

#endif
