// Copyright 2026 The wgqed Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "wgqed/error.hpp"
#include "wgqed/geometry.hpp"
#include "wgqed/grid.hpp"
#include "wgqed/herald.hpp"
#include "wgqed/probe.hpp"
#include "wgqed/pulse.hpp"
#include "wgqed/scattering.hpp"
#include "wgqed/sensitivity.hpp"
#include "wgqed/state.hpp"
