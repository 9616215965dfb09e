// Copyright 2026 The Strategem Authors
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

#ifndef STRATEGEM_STRATEGEM_H_
#define STRATEGEM_STRATEGEM_H_

#include "strategem/agents.h"
#include "strategem/choice.h"
#include "strategem/distribution.h"
#include "strategem/equilibrium.h"
#include "strategem/error.h"
#include "strategem/game.h"
#include "strategem/game_io.h"
#include "strategem/harness.h"
#include "strategem/metrics.h"
#include "strategem/prompts.h"
#include "strategem/remote.h"
#include "strategem/report.h"
#include "strategem/solver.h"
#include "strategem/trace.h"

#endif  // STRATEGEM_STRATEGEM_H_
