// Copyright 2026 The lindblad-mitigation Authors
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

#ifndef LMIT_LMIT_HPP
#define LMIT_LMIT_HPP

#include "lmit/csv.hpp"
#include "lmit/density_matrix.hpp"
#include "lmit/error.hpp"
#include "lmit/json_util.hpp"
#include "lmit/lindblad.hpp"
#include "lmit/mitigation.hpp"
#include "lmit/noise.hpp"
#include "lmit/ode.hpp"
#include "lmit/operator.hpp"
#include "lmit/parallel.hpp"
#include "lmit/plan_io.hpp"
#include "lmit/rng.hpp"
#include "lmit/sampling.hpp"
#include "lmit/scenarios.hpp"
#include "lmit/spin_models.hpp"
#include "lmit/stochastic.hpp"
#include "lmit/svg.hpp"

#endif  // LMIT_LMIT_HPP
