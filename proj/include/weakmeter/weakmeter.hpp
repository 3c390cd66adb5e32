// Copyright 2026 The weakmeter authors
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

#include "weakmeter/catsmile.hpp"
#include "weakmeter/coin.hpp"
#include "weakmeter/core.hpp"
#include "weakmeter/errors.hpp"
#include "weakmeter/grid.hpp"
#include "weakmeter/io.hpp"
#include "weakmeter/limits.hpp"
#include "weakmeter/montecarlo.hpp"
#include "weakmeter/pointer.hpp"
#include "weakmeter/rng.hpp"
