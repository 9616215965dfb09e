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

#ifndef STRATEGEM_AGENTS_H_
#define STRATEGEM_AGENTS_H_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "strategem/choice.h"
#include "strategem/equilibrium.h"
#include "strategem/error.h"
#include "strategem/game.h"
#include "strategem/solver.h"
#include "strategem/trace.h"

namespace strategem {

struct SamplingParams {
  double temperature = 0.25;
  std::optional<int> max_tokens;  // absent: provider default
};

inline constexpr double kReplicationTemperatures[] = {0.25, 0.75};

struct AgentRef {
  enum class Kind {
    kScriptedLevelK,  // plays the level-k prescription
    kScriptedRandom,  // uniform over the action set
    kScriptedEquilibrium,  // samples the symmetric mixed equilibrium
    kRemote,
  };
  Kind kind = Kind::kScriptedLevelK;

  // Scripted agents. An empty level means "the condition's target depth".
  std::optional<int> level;

  // Remote agents. The credential itself is read from the named environment
  // variable when the agent is constructed and never stored here.
  std::string endpoint;
  std::string model;
  std::string api_key_env;
  double timeout_s = 120;
  int max_retries = 3;
  double backoff_base_s = 1.0;

  bool is_scripted() const { return kind != Kind::kRemote; }
};

inline std::string AgentKindName(AgentRef::Kind kind) {
  switch (kind) {
    case AgentRef::Kind::kScriptedLevelK: return "level-k";
    case AgentRef::Kind::kScriptedRandom: return "random";
    case AgentRef::Kind::kScriptedEquilibrium: return "equilibrium";
    case AgentRef::Kind::kRemote: return "remote";
  }
  return "?";
}

inline AgentRef::Kind ParseAgentKind(const std::string& s) {
  if (s == "level-k") return AgentRef::Kind::kScriptedLevelK;
  if (s == "random") return AgentRef::Kind::kScriptedRandom;
  if (s == "equilibrium") return AgentRef::Kind::kScriptedEquilibrium;
  if (s == "remote") return AgentRef::Kind::kRemote;
  Fail(ErrorCode::kConfigError, "unknown agent kind '" + s + "'");
}

namespace internal {

inline Choice Draw(const Belief& belief, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double x = u(rng), acc = 0;
  for (size_t i = 0; i < belief.size(); ++i) {
    acc += belief.probabilities()[i];
    if (x < acc) return belief.support()[i];
  }
  return belief.support().back();
}

inline std::string WrapAnswer(const std::string& preamble, const Choice& c) {
  return preamble + "\n\n" + std::string(kOpenTag) + c.ToString() + std::string(kCloseTag);
}

}  // namespace internal

// Output of a scripted agent at a given level. `seed` drives every random
// draw, so equal inputs give equal text.
inline RawOutput ScriptedAct(const AgentRef& agent, const GameSpec& spec,
                             Role role, bool traced, int level,
                             uint64_t seed) {
  std::mt19937_64 rng(seed);
  switch (agent.kind) {
    case AgentRef::Kind::kScriptedLevelK: {
      auto chain = LevelKChain(spec, role, level);
      std::vector<Choice> picks;
      for (const auto& rung : chain) {
        picks.push_back(rung.is_point() ? rung.action()
                                        : internal::Draw(rung.prescription, rng));
      }
      const Choice& final_choice = picks.back();
      if (!traced) {
        return {internal::WrapAnswer(
                    "Level-" + std::to_string(level) +
                        " reasoning: iterate best responses from the level-0 convention.",
                    final_choice),
                {}};
      }
      ReasoningTrace trace;
      for (int k = 0; k <= level; ++k) {
        std::string why = k == 0 ? "Level 0 follows the naive convention."
                                 : "Best response to level " + std::to_string(k - 1) + ".";
        trace.steps.push_back({k, why, picks[k]});
      }
      trace.final_decision = final_choice;
      trace.reflection = "Stopped at level " + std::to_string(level) + ".";
      return {SerializeTrace(trace), {}};
    }
    case AgentRef::Kind::kScriptedRandom: {
      Choice c;
      if (spec.is_bcg()) {
        std::uniform_real_distribution<double> u(spec.bcg().min_range, spec.bcg().max_range);
        c = Choice(u(rng));
      } else {
        c = internal::Draw(Belief::Uniform(Actions(spec, role)), rng);
      }
      if (!traced) return {internal::WrapAnswer("Picking at random.", c), {}};
      ReasoningTrace trace{{{0, "Picking at random.", c}}, c, std::nullopt};
      return {SerializeTrace(trace), {}};
    }
    case AgentRef::Kind::kScriptedEquilibrium: {
      auto eq = SymmetricMixedNash(spec);
      Belief play = role == Role::kRow ? eq.distribution : AsColumnStrategy(spec, eq);
      Choice c = internal::Draw(play, rng);
      std::string why = "Sampling the symmetric mixed Nash equilibrium.";
      if (!traced) return {internal::WrapAnswer(why, c), {}};
      ReasoningTrace trace{{{0, why, c}}, c, std::nullopt};
      return {SerializeTrace(trace), {}};
    }
    case AgentRef::Kind::kRemote:
      break;
  }
  Fail(ErrorCode::kConfigError, "ScriptedAct called with a remote agent");
}

}  // namespace strategem

#endif  // STRATEGEM_AGENTS_H_
