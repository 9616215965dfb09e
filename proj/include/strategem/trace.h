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

// Parsing of agent outputs.
//
// Final answers are wrapped in a response delimiter pair:
//
//   answer   := ... "<response>" content "</response>" ...
//   content  := number | label
//
// Traced outputs wrap a JSON object in the same pair:
//
//   <response>
//   {
//     "reasoning_steps": [
//       {"level": 0, "reasoning": "...", "chosen_number": "5005.5"},
//       ...
//     ],
//     "final_decision": "3649",
//     "reflection": "..."          (optional)
//   }
//   </response>
//
// "chosen_number" and "final_decision" may be JSON strings or numbers and
// hold either a number or an action label ("chosen" and "chosen_action" are
// accepted as aliases). HTML comments inside the block are ignored, as are
// unknown fields. When several pairs appear the last one wins.

#ifndef STRATEGEM_TRACE_H_
#define STRATEGEM_TRACE_H_

#include <algorithm>
#include <array>
#include <cctype>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "strategem/choice.h"
#include "strategem/error.h"

namespace strategem {

inline constexpr std::string_view kOpenTag = "<response>";
inline constexpr std::string_view kCloseTag = "</response>";

struct TokenUsage {
  std::optional<long> prompt_tokens;
  std::optional<long> completion_tokens;
  std::optional<long> reasoning_tokens;
};

struct RawOutput {
  std::string text;
  TokenUsage usage;
};

struct ReasoningStep {
  int level = 0;
  std::string reasoning;
  Choice chosen;

  friend bool operator==(const ReasoningStep&, const ReasoningStep&) = default;
};

struct ReasoningTrace {
  std::vector<ReasoningStep> steps;  // ascending level
  Choice final_decision;
  std::optional<std::string> reflection;

  friend bool operator==(const ReasoningTrace&, const ReasoningTrace&) = default;
};

namespace internal {

// Content of every well-formed delimiter pair, in order of appearance. A pair
// closes at the first closing tag after its opening tag.
inline std::vector<std::string_view> ResponseBlocks(std::string_view text) {
  std::vector<std::string_view> out;
  size_t pos = 0;
  while (true) {
    size_t open = text.find(kOpenTag, pos);
    if (open == std::string_view::npos) break;
    size_t start = open + kOpenTag.size();
    size_t close = text.find(kCloseTag, start);
    if (close == std::string_view::npos) break;
    // A later opening tag before the close means this one was not closed.
    size_t reopen = text.find(kOpenTag, start);
    if (reopen != std::string_view::npos && reopen < close) {
      pos = reopen;
      continue;
    }
    out.push_back(text.substr(start, close - start));
    pos = close + kCloseTag.size();
  }
  return out;
}

inline std::string StripHtmlComments(std::string_view s) {
  std::string out;
  size_t pos = 0;
  while (true) {
    size_t open = s.find("<!--", pos);
    if (open == std::string_view::npos) break;
    size_t close = s.find("-->", open + 4);
    if (close == std::string_view::npos) break;
    out.append(s.substr(pos, open - pos));
    pos = close + 3;
  }
  out.append(s.substr(pos));
  return out;
}

inline Choice ChoiceFromJson(const nlohmann::json& j, const std::string& field) {
  try {
    if (j.is_number()) return Choice(j.get<double>());
    if (j.is_string()) return Choice::Parse(j.get<std::string>());
  } catch (const Error& e) {
    Fail(ErrorCode::kMalformedTrace, field + ": " + e.what());
  }
  Fail(ErrorCode::kMalformedTrace, field + " must be a number or string");
}

inline nlohmann::json ChoiceToJson(const Choice& c) { return c.ToString(); }

}  // namespace internal

// Content of the last delimiter pair, parsed as a number or an action label.
inline Choice ExtractFinal(std::string_view text) {
  auto blocks = internal::ResponseBlocks(text);
  if (blocks.empty()) {
    Fail(ErrorCode::kMissingResponseTag, "no <response>...</response> pair");
  }
  return Choice::Parse(blocks.back());
}

inline ReasoningTrace ParseTrace(std::string_view text) {
  auto blocks = internal::ResponseBlocks(text);
  std::optional<std::string_view> block;
  for (auto b : blocks) {
    if (Choice::Trim(b).starts_with("{")) block = b;
  }
  if (!block) Fail(ErrorCode::kMalformedTrace, "no structured block found");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(internal::StripHtmlComments(*block));
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kMalformedTrace, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) Fail(ErrorCode::kMalformedTrace, "block is not an object");

  ReasoningTrace trace;
  if (j.contains("reasoning_steps")) {
    const auto& steps = j["reasoning_steps"];
    if (!steps.is_array()) {
      Fail(ErrorCode::kMalformedTrace, "reasoning_steps must be a list");
    }
    std::set<int> seen;
    for (const auto& s : steps) {
      if (!s.is_object() || !s.contains("level")) {
        Fail(ErrorCode::kMalformedTrace, "every step needs a level");
      }
      ReasoningStep step;
      const auto& lv = s["level"];
      if (lv.is_number_integer()) {
        step.level = lv.get<int>();
      } else if (lv.is_string()) {
        try {
          step.level = std::stoi(lv.get<std::string>());
        } catch (const std::exception&) {
          Fail(ErrorCode::kMalformedTrace, "non-integer level");
        }
      } else {
        Fail(ErrorCode::kMalformedTrace, "non-integer level");
      }
      if (step.level < 0) Fail(ErrorCode::kMalformedTrace, "negative level");
      if (!seen.insert(step.level).second) {
        Fail(ErrorCode::kMalformedTrace,
             "duplicate level " + std::to_string(step.level));
      }
      if (s.contains("reasoning") && s["reasoning"].is_string()) {
        step.reasoning = s["reasoning"].get<std::string>();
      }
      const char* keys[] = {"chosen_number", "chosen", "chosen_action"};
      bool found = false;
      for (const char* key : keys) {
        if (s.contains(key)) {
          step.chosen = internal::ChoiceFromJson(s[key], key);
          found = true;
          break;
        }
      }
      if (!found) Fail(ErrorCode::kMalformedTrace, "step without chosen_number");
      trace.steps.push_back(std::move(step));
    }
  }
  if (!j.contains("final_decision") || j["final_decision"].is_null()) {
    Fail(ErrorCode::kMissingFinalDecision, "final_decision absent");
  }
  trace.final_decision = internal::ChoiceFromJson(j["final_decision"], "final_decision");
  if (j.contains("reflection") && j["reflection"].is_string()) {
    trace.reflection = j["reflection"].get<std::string>();
  }
  std::sort(trace.steps.begin(), trace.steps.end(),
            [](const ReasoningStep& a, const ReasoningStep& b) { return a.level < b.level; });
  return trace;
}

// Inverse of ParseTrace: a delimiter-wrapped JSON block.
inline std::string SerializeTrace(const ReasoningTrace& trace) {
  nlohmann::ordered_json j;
  j["reasoning_steps"] = nlohmann::ordered_json::array();
  for (const auto& s : trace.steps) {
    nlohmann::ordered_json step;
    step["level"] = s.level;
    step["reasoning"] = s.reasoning;
    step["chosen_number"] = internal::ChoiceToJson(s.chosen);
    j["reasoning_steps"].push_back(step);
  }
  j["final_decision"] = internal::ChoiceToJson(trace.final_decision);
  if (trace.reflection) j["reflection"] = *trace.reflection;
  return std::string(kOpenTag) + "\n" + j.dump(2) + "\n" + std::string(kCloseTag);
}

struct TracePositions {
  int first_terminal = 0;
  int total_steps = 0;
  bool overthought = false;
  // False when no step matches the final decision; first_terminal then
  // equals total_steps by convention (the NoMatchingStep case).
  bool matched = true;
};

// first_terminal: lowest level whose choice matches the final decision
// (relative tolerance for numbers, exact for labels). total_steps: highest
// level present. Levels are 0-based.
inline TracePositions ComputeTracePositions(const ReasoningTrace& trace,
                                            double tolerance) {
  if (tolerance < 0) Fail(ErrorCode::kInvalidSpec, "tolerance must be >= 0");
  TracePositions out;
  for (const auto& s : trace.steps) out.total_steps = std::max(out.total_steps, s.level);
  out.first_terminal = out.total_steps;
  out.matched = false;
  for (const auto& s : trace.steps) {
    if (ChoicesMatch(s.chosen, trace.final_decision, tolerance)) {
      out.first_terminal = s.level;
      out.matched = true;
      break;
    }
  }
  out.overthought = out.first_terminal < out.total_steps;
  return out;
}

// ---------------------------------------------------------------------------
// Keyword classes.

enum class Keyword { kCycl, kDominant, kMix, kNash };

inline constexpr std::array<Keyword, 4> kAllKeywords = {
    Keyword::kCycl, Keyword::kDominant, Keyword::kMix, Keyword::kNash};

inline std::string KeywordName(Keyword k) {
  switch (k) {
    case Keyword::kCycl: return "cycl*";
    case Keyword::kDominant: return "dominant";
    case Keyword::kMix: return "mix*";
    case Keyword::kNash: return "nash";
  }
  return "?";
}

using KeywordTagSet = std::set<Keyword>;

// "cycl" and "mix" match as prefixes of a word; "dominant" and "nash" match
// whole words only. Case-insensitive.
inline KeywordTagSet TagKeywords(std::string_view text) {
  std::string lower(text);
  for (char& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  auto is_word = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  };
  auto word_at = [&](size_t pos, std::string_view word, bool whole) {
    if (lower.compare(pos, word.size(), word) != 0) return false;
    if (pos > 0 && is_word(lower[pos - 1])) return false;
    size_t end = pos + word.size();
    return !whole || end >= lower.size() || !is_word(lower[end]);
  };
  KeywordTagSet tags;
  for (size_t i = 0; i < lower.size(); ++i) {
    if (word_at(i, "cycl", false)) tags.insert(Keyword::kCycl);
    if (word_at(i, "mix", false)) tags.insert(Keyword::kMix);
    if (word_at(i, "dominant", true)) tags.insert(Keyword::kDominant);
    if (word_at(i, "nash", true)) tags.insert(Keyword::kNash);
  }
  return tags;
}

}  // namespace strategem

#endif  // STRATEGEM_TRACE_H_
