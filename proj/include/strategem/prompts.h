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

// Prompt templates and placeholder rendering.
//
// Placeholders are written {NAME} with NAME made of capitals, digits and
// underscores. "{{" and "}}" render as literal braces; any other brace is
// copied through unchanged, so JSON examples need no escaping.
//
// Template texts are golden: trailing spaces and odd wording are kept as-is.
// Ids:
//   bcg_targeted   beauty contest, p = 0.9, opponents at a stated level
//   mrg_targeted   money request game, opponents at a stated level
//   umg_targeted   unlabeled matrix game, opponents at a stated level
//   bcg_identity   beauty contest, p = 2/3, opponents of a stated type
//   bcg_traced     beauty contest, p = 0.9, structured reasoning trace
// Derived from the above:
//   mrg_identity, umg_identity           level sentence swapped for a type
//   <any>_traced                         structured-trace output format

#ifndef STRATEGEM_PROMPTS_H_
#define STRATEGEM_PROMPTS_H_

#include <cctype>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "strategem/error.h"

namespace strategem {

namespace templates {

inline constexpr std::string_view kBcgTargetedSystem = R"tmpl(You are a very smart decision-maker playing an economic game. You can assume that other people participating in the game are level {COMPETITION_DEPTH} thinkers. 

If others are level-K thinkers, assume they believe everyone else is level-(K-1), who in turn model level-(K-2), etc., down to level-0, who always guess the midpoint of the allowed range. Use this chain of reasoning to predict the mean and come up with your final response.

Always write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kBcgTargetedUser = R"tmpl(Including yourself, there are {N_PARTICIPANTS} participants in total. The other participants you will be playing with are a human decision makers. 

All participants will be asked to pick a number between {MIN_RANGE} and {MAX_RANGE} inclusive. The winner will be the one choosing the number closest to 90

For example, in a game from 0 to 100, if you choose 14 and your opponents choose 10, 22, 23, 30, 11, 18, 37, 18, 19, 20, then the opponent with 19 will be the winner, as 19 is closer to mean*90

In case of multiple winners, only one participant will be randomly chosen to win.

Now let's start this game. Please pick one number between {MIN_RANGE} and {MAX_RANGE} inclusive.)tmpl";

inline constexpr std::string_view kMrgTargetedSystem = R"tmpl(You are a very smart decision-maker playing an economic game. You can assume that others participating in the game are level {COMPETITION_DEPTH} thinkers. 
    
Level-0 players are naive and always request the maximum (20 shekels).
Level-1 players believe others are level-0, Level-2 believe others are level-1, and so on. 
Use this chain of reasoning to come up with your final response.

Always write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kMrgTargetedUser = R"tmpl(You and another player are playing a game in which each player requests an amount of money. The amount must be (an integer) between 11 and 20 shekels. Each player will receive the amount he requests. A player will receive an additional amount of 20 shekels if he asks for exactly one shekel less than the  other player. 
    
What amount of money would you request?

Remember, you are playing against a level {COMPETITION_DEPTH} thinker.

Write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kUmgTargetedSystem = R"tmpl(You are a very smart decision-maker playing an economic game. You can assume that others participating in the game are level {COMPETITION_DEPTH} thinkers. 

Level-0 players are naive and pick each of either {{A, B, C, D, E, F}} or {{K, L, M, N, O, P}} with probability 1/6.
Level-1 players believe others are level-0, Level-2 believe others are level-1, and so on. 
Use this chain of reasoning to come up with your final response.

Always write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kUmgTargetedUser = R"tmpl(You are Player 1 in a one-shot strategic game.

Your task is to choose the strategy that gives you the best expected payoff, anticipating how Player 2 will choose.

You are always Player 1 (row player), choosing from {{A, B, C, D, E, F}}.
Player 2 is always the column player, choosing from {{K, L, M, N, O, P}}.

For each pair (your action, their action), the first number is your payoff, the second is theirs.

Payoff table (Player 1):
        K   L   M   N   O   P
    A:  75  27  96  39   8  18
    B:  77  56  22  18  84  30
    C:  72  63  41  81  48  77
    D:  73  37  26  82  24  92
    E:  45  26  91  19  85  32
    F:  58  48  83  67  25  94

Payoff table (Player 2):
        A   B   C   D   E   F
    K:  75  77  72  73  45  58
    L:  27  56  63  37  26  48
    M:  96  22  41  26  91  83
    N:  39  18  81  82  19  67
    O:   8  84  48  24  85  25
    P:  18  30  77  92  32  94

E.g., if Player 2 chooses action M, and you (Player 1) choose D, the payoffs will be:
- Player 1: 26
- Player 2: 26

!!! Important !!! 
Remember, you are playing against a level {COMPETITION_DEPTH} thinker.
Write your final answer as: <response>YOUR_ACTION_HERE</response>)tmpl";

inline constexpr std::string_view kBcgIdentitySystem = R"tmpl(You are a very smart decision-maker playing an economic game. You can assume that other people participating in the game think like {OPPONENT_TYPE}. 

Level-0 players are naive and always guess the midpoint of the range.
Level-1 players believe others are level-0, Level-2 believe others are level-1, and so on. 
Use this chain of reasoning to come up with your final response.

Your task is to choose the action that gives you the highest expected payoff based on what you believe your opponent will do by simulating a reasoning chain.

Always write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kBcgIdentityUser = R"tmpl(Including yourself, there are {N_PARTICIPANTS} {OPPONENT_TYPE}s in total. Important: the other participants you will be playing with are all {OPPONENT_TYPE}s.

All participants will be asked to pick a number between 0 and 100 inclusive. The winner will be the one choosing the number closest to 2/3's of the average of all the numbers provided by the participants (including your own).

For example, if you choose 14 and your opponents choose 10, 22, 23, 30, 11, 16, 37, 18, 19, 20, then you will be the winner, as 14 is closer to 20(average) x 2/3.

Or, if you choose 25 and your opponents choose 90, 100, 50, 20, 60, 80, 5, 70, 10, 40, then the opponent with 40 will be the winner, as 40 is closer to 50(average) x 2/3.

In case of multiple winners, only one participant will be randomly chosen to win.

Think, based on your reasoning, what number do you choose to win against {OPPONENT_TYPE}?

Now let's start this game. Please pick one number between {MIN_RANGE} and {MAX_RANGE} inclusive.

Write your final answer as: <response>YOUR_NUMBER_HERE</response>)tmpl";

inline constexpr std::string_view kBcgTracedSystem = R"tmpl(You are a very smart decision-maker playing an economic game. Always respond strictly in the following structured format:

<response>
{
  "reasoning_steps": [
    {
      "level": 0,
      "reasoning": "Your initial reasoning clearly explained here.",
      "chosen_number": "NUMBER"
    }
    <!-- Add additional steps if higher-order reasoning applies -->
  ],
  "final_decision": "NUMBER",
  "reflection": "Your optional reflection on your reasoning or decision"
}
</response>)tmpl";

inline constexpr std::string_view kBcgTracedUser = R"tmpl(Including yourself, there are {N_PARTICIPANTS} participants in total. The other participants you will be playing with are human decision makers.

All participants will be asked to pick a number between {MIN_RANGE} and {MAX_RANGE} inclusive. The winner will be the one choosing the number closest to 90

For example, in a game from 0 to 100, if you choose 14 and your opponents choose 10, 22, 23, 30, 11, 18, 37, 18, 19, 20, then the opponent with 19 will be the winner, as 19 is closer to mean*90

In case of multiple winners, only one participant will be randomly chosen to win.

Now let's start this game. Please pick one number between {MIN_RANGE} and {MAX_RANGE} inclusive.

Important: 
  * Remember to use the required structured format output in <response></response>.
  * Each level of thought should represent one step of recursive strategic reasoning. Level 0 assumes others choose randomly. Level 1 assumes others are level 0, and so on.)tmpl";

}  // namespace templates

struct PromptTemplate {
  std::string id;
  std::string system;
  std::string user;
  std::vector<std::string> declared;  // every placeholder the texts use
};

struct RenderedPrompt {
  std::string system;
  std::string user;

  friend bool operator==(const RenderedPrompt&, const RenderedPrompt&) = default;
};

using PromptParams = std::map<std::string, std::string>;

namespace internal {

inline bool IsPlaceholderChar(char c, bool first) {
  return std::isupper(static_cast<unsigned char>(c)) || c == '_' ||
         (!first && std::isdigit(static_cast<unsigned char>(c)));
}

// Walks `text`, calling on_literal for literal runs and on_placeholder for
// each {NAME}.
template <typename Literal, typename Placeholder>
void ScanTemplate(std::string_view text, Literal on_literal,
                  Placeholder on_placeholder) {
  size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if ((c == '{' || c == '}') && i + 1 < text.size() && text[i + 1] == c) {
      on_literal(std::string_view(&text[i], 1));
      i += 2;
      continue;
    }
    if (c == '{') {
      size_t j = i + 1;
      while (j < text.size() && IsPlaceholderChar(text[j], j == i + 1)) ++j;
      if (j > i + 1 && j < text.size() && text[j] == '}') {
        on_placeholder(text.substr(i + 1, j - i - 1));
        i = j + 1;
        continue;
      }
    }
    on_literal(text.substr(i, 1));
    ++i;
  }
}

}  // namespace internal

inline std::vector<std::string> FindPlaceholders(std::string_view text) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  internal::ScanTemplate(
      text, [](std::string_view) {},
      [&](std::string_view name) {
        if (seen.insert(std::string(name)).second) out.emplace_back(name);
      });
  return out;
}

// Builds a template, declaring exactly the placeholders its texts use.
inline PromptTemplate MakeTemplate(std::string id, std::string system,
                                   std::string user) {
  PromptTemplate t{std::move(id), std::move(system), std::move(user), {}};
  std::set<std::string> seen;
  for (const auto* text : {&t.system, &t.user}) {
    for (auto& name : FindPlaceholders(*text)) {
      if (seen.insert(name).second) t.declared.push_back(name);
    }
  }
  return t;
}

inline void ValidateTemplate(const PromptTemplate& t) {
  std::set<std::string> declared(t.declared.begin(), t.declared.end());
  for (const auto* text : {&t.system, &t.user}) {
    for (const auto& name : FindPlaceholders(*text)) {
      if (!declared.count(name)) {
        Fail(ErrorCode::kUnknownPlaceholder,
             "template '" + t.id + "' uses undeclared {" + name + "}");
      }
    }
  }
}

inline RenderedPrompt RenderPrompt(const PromptTemplate& t,
                                   const PromptParams& params) {
  ValidateTemplate(t);
  for (const auto& name : t.declared) {
    if (!params.count(name)) {
      Fail(ErrorCode::kMissingPlaceholder,
           "template '" + t.id + "' needs {" + name + "}");
    }
  }
  std::set<std::string> declared(t.declared.begin(), t.declared.end());
  for (const auto& [name, value] : params) {
    if (!declared.count(name)) {
      Fail(ErrorCode::kUnknownPlaceholder,
           "template '" + t.id + "' has no {" + name + "}");
    }
  }
  auto render = [&](std::string_view text) {
    std::string out;
    internal::ScanTemplate(
        text, [&](std::string_view lit) { out.append(lit); },
        [&](std::string_view name) { out += params.at(std::string(name)); });
    return out;
  };
  return {render(t.system), render(t.user)};
}

// The subset of `all` a template declares.
inline PromptParams SelectParams(const PromptTemplate& t, const PromptParams& all) {
  PromptParams out;
  for (const auto& name : t.declared) {
    auto it = all.find(name);
    if (it != all.end()) out.insert(*it);
  }
  return out;
}

namespace internal {

inline std::string ReplaceOnce(std::string text, std::string_view from,
                               std::string_view to) {
  auto pos = text.find(from);
  if (pos == std::string::npos) {
    Fail(ErrorCode::kInvalidSpec, "template text lacks '" + std::string(from) + "'");
  }
  return text.replace(pos, from.size(), to);
}

inline constexpr std::string_view kAnswerLine = "Always write your final answer as:";
inline constexpr std::string_view kUserAnswerLine = "Write your final answer as:";

}  // namespace internal

// Turns a plain-answer template into one that asks for the structured trace
// block, reusing the bcg_traced format and its closing instructions.
inline PromptTemplate MakeTraced(const PromptTemplate& base) {
  std::string_view traced_sys = templates::kBcgTracedSystem;
  std::string_view format = traced_sys.substr(traced_sys.find("Always respond strictly"));
  std::string_view traced_user = templates::kBcgTracedUser;
  std::string_view important = traced_user.substr(traced_user.find("Important:"));

  std::string system = base.system;
  auto pos = system.find(internal::kAnswerLine);
  if (pos == std::string::npos) {
    system += "\n\n" + std::string(format);
  } else {
    system = system.substr(0, pos) + std::string(format);
  }
  std::string user = base.user;
  pos = user.rfind(internal::kUserAnswerLine);
  if (pos != std::string::npos && user.find('\n', pos) == std::string::npos) {
    user = user.substr(0, pos);
    while (!user.empty() && (user.back() == '\n' || user.back() == ' ')) user.pop_back();
  }
  user += "\n\n" + std::string(important);
  return MakeTemplate(base.id + "_traced", system, user);
}

inline std::vector<std::string> BuiltinTemplateIds() {
  return {"bcg_targeted", "mrg_targeted", "umg_targeted", "bcg_identity",
          "bcg_traced",   "mrg_identity", "umg_identity"};
}

// Looks up a template id; ids ending in "_traced" (other than bcg_traced)
// derive the traced form of their base template.
inline PromptTemplate BuiltinTemplate(std::string_view id) {
  using namespace templates;
  if (id == "bcg_targeted") return MakeTemplate("bcg_targeted", std::string(kBcgTargetedSystem), std::string(kBcgTargetedUser));
  if (id == "mrg_targeted") return MakeTemplate("mrg_targeted", std::string(kMrgTargetedSystem), std::string(kMrgTargetedUser));
  if (id == "umg_targeted") return MakeTemplate("umg_targeted", std::string(kUmgTargetedSystem), std::string(kUmgTargetedUser));
  if (id == "bcg_identity") return MakeTemplate("bcg_identity", std::string(kBcgIdentitySystem), std::string(kBcgIdentityUser));
  if (id == "bcg_traced") return MakeTemplate("bcg_traced", std::string(kBcgTracedSystem), std::string(kBcgTracedUser));
  if (id == "mrg_identity" || id == "umg_identity") {
    auto base = BuiltinTemplate(id == "mrg_identity" ? "mrg_targeted" : "umg_targeted");
    auto system = internal::ReplaceOnce(
        base.system, "are level {COMPETITION_DEPTH} thinkers.", "think like {OPPONENT_TYPE}.");
    auto user = internal::ReplaceOnce(
        base.user, "against a level {COMPETITION_DEPTH} thinker.", "against {OPPONENT_TYPE}.");
    return MakeTemplate(std::string(id), system, user);
  }
  constexpr std::string_view kSuffix = "_traced";
  if (id.size() > kSuffix.size() && id.ends_with(kSuffix)) {
    return MakeTraced(BuiltinTemplate(id.substr(0, id.size() - kSuffix.size())));
  }
  Fail(ErrorCode::kConfigError, "unknown prompt template '" + std::string(id) + "'");
}

}  // namespace strategem

#endif  // STRATEGEM_PROMPTS_H_
