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

// Experiment orchestration.
//
// A run is configured by a YAML file:
//
//   run_id: mrg-expert
//   model_label: my-model            # defaults to agent.model or the agent kind
//   game: {type: mrg}                # any game table accepted by game_io.h
//   prompt:
//     variant: targeted              # targeted | identity | open
//     traced: false
//     template: mrg_targeted         # optional; derived from game and variant
//     depths: [0, 1, 2]              # targeted; default 0..9
//     opponents: [baseline, Expert]  # identity; default all five
//     opponent_strings: {Expert: "a game theory expert"}
//   agent:
//     kind: remote                   # level-k | random | equilibrium | remote
//     level: 3                       # scripted; default: the condition depth
//     endpoint: https://host/v1/chat/completions
//     model: some-model
//     api_key_env: MY_API_KEY
//     timeout_s: 120
//     max_retries: 3
//     backoff_s: 1.0
//   sampling: {temperature: 0.25, max_tokens: 2048}
//   n_trials: 100                    # or "preset: keywords" for 500
//   tolerance: {epsilon: 0, eta: 0.05}
//   max_level: 10
//   output: runs/mrg-expert.jsonl    # relative to the config file
//   parallelism: 4
//   seed: 7
//   canonical: false                 # omit timestamps and latency
//
// The log holds one JSON object per line: a config echo first, then one
// trial record per line in trial-index order. A summary is written next to
// the log as <output>.summary.json.

#ifndef STRATEGEM_HARNESS_H_
#define STRATEGEM_HARNESS_H_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "json.hpp"
#include "strategem/agents.h"
#include "strategem/equilibrium.h"
#include "strategem/error.h"
#include "strategem/game.h"
#include "strategem/game_io.h"
#include "strategem/metrics.h"
#include "strategem/prompts.h"
#include "strategem/remote.h"
#include "strategem/solver.h"
#include "strategem/trace.h"

namespace strategem {

using Json = nlohmann::ordered_json;

enum class PromptVariant { kTargeted, kIdentity, kOpen };

inline std::string PromptVariantName(PromptVariant v) {
  switch (v) {
    case PromptVariant::kTargeted: return "targeted";
    case PromptVariant::kIdentity: return "identity";
    case PromptVariant::kOpen: return "open";
  }
  return "?";
}

inline PromptVariant ParsePromptVariant(const std::string& s) {
  if (s == "targeted" || s == "targeted-depth") return PromptVariant::kTargeted;
  if (s == "identity") return PromptVariant::kIdentity;
  if (s == "open") return PromptVariant::kOpen;
  Fail(ErrorCode::kConfigError, "unknown prompt variant '" + s + "'");
}

inline constexpr int kDefaultTrials = 100;
inline constexpr int kKeywordTrials = 500;

inline std::vector<int> DefaultDepths() { return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9}; }

inline std::vector<std::string> DefaultOpponents() {
  return {"baseline", "Human", "LLM", "Expert", "Yourself"};
}

inline std::map<std::string, std::string> DefaultOpponentStrings() {
  return {{"baseline", "participants"},
          {"Human", "a human"},
          {"LLM", "a large language model"},
          {"Expert", "a game theory expert"},
          {"Yourself", "yourself"}};
}

struct ExperimentConfig {
  std::string run_id = "run";
  std::string model_label;
  GameSpec game = MakeMrg();
  PromptVariant variant = PromptVariant::kTargeted;
  bool traced = false;
  std::string template_id;  // empty: derived
  std::vector<int> depths = DefaultDepths();
  std::vector<std::string> opponents = DefaultOpponents();
  std::map<std::string, std::string> opponent_strings = DefaultOpponentStrings();
  AgentRef agent;
  SamplingParams sampling;
  int n_trials = kDefaultTrials;
  Tolerance tolerance;
  int max_level = kDefaultMaxLevel;
  std::string output;
  int parallelism = 1;
  uint64_t seed = 0;
  bool canonical = false;

  std::string model() const {
    if (!model_label.empty()) return model_label;
    if (agent.kind == AgentRef::Kind::kRemote) return agent.model;
    return "scripted-" + AgentKindName(agent.kind);
  }
};

inline std::string DefaultTemplateId(const ExperimentConfig& c) {
  std::string game = c.game.is_bcg() ? "bcg" : c.game.is_mrg() ? "mrg" : "umg";
  switch (c.variant) {
    case PromptVariant::kTargeted:
      return game + "_targeted" + (c.traced ? "_traced" : "");
    case PromptVariant::kIdentity:
      return game + "_identity" + (c.traced ? "_traced" : "");
    case PromptVariant::kOpen:
      if (game == "bcg" && c.traced) return "bcg_traced";
      Fail(ErrorCode::kConfigError,
           "the open variant exists only for the traced beauty contest; set prompt.template");
  }
  return "";
}

inline std::string TemplateIdFor(const ExperimentConfig& c) {
  return c.template_id.empty() ? DefaultTemplateId(c) : c.template_id;
}

inline void ValidateConfig(const ExperimentConfig& c) {
  std::vector<std::string> problems;
  if (c.run_id.empty()) problems.push_back("run_id is empty");
  if (c.n_trials < 1) problems.push_back("n_trials must be >= 1");
  if (c.parallelism < 1) problems.push_back("parallelism must be >= 1");
  if (!(c.tolerance.eta > 0 && c.tolerance.eta < 1)) problems.push_back("eta must lie in (0, 1)");
  if (c.tolerance.epsilon < 0) problems.push_back("epsilon must be >= 0");
  if (c.max_level < 0) problems.push_back("max_level must be >= 0");
  if (c.sampling.temperature < 0) problems.push_back("temperature must be >= 0");
  if (c.output.empty()) problems.push_back("output path is empty");
  if (c.variant == PromptVariant::kTargeted) {
    if (c.depths.empty()) problems.push_back("depth grid is empty");
    for (int d : c.depths) {
      if (d < 0) problems.push_back("negative depth " + std::to_string(d));
    }
  }
  if (c.variant == PromptVariant::kIdentity) {
    if (c.opponents.empty()) problems.push_back("opponent list is empty");
    for (const auto& o : c.opponents) {
      if (!c.opponent_strings.count(o)) problems.push_back("no string for opponent '" + o + "'");
    }
  }
  if (c.agent.kind == AgentRef::Kind::kRemote) {
    if (c.agent.endpoint.empty()) problems.push_back("remote agent needs an endpoint");
    if (c.agent.model.empty()) problems.push_back("remote agent needs a model");
    if (c.agent.max_retries < 0) problems.push_back("max_retries must be >= 0");
    if (c.agent.timeout_s <= 0) problems.push_back("timeout_s must be > 0");
  }
  if (c.agent.kind == AgentRef::Kind::kScriptedLevelK && !c.agent.level &&
      c.variant != PromptVariant::kTargeted) {
    problems.push_back("level-k agent needs agent.level outside the targeted variant");
  }
  if (c.agent.kind == AgentRef::Kind::kScriptedEquilibrium && !IsSymmetricGame(c.game)) {
    problems.push_back("equilibrium agent needs a symmetric game");
  }
  try {
    ValidateTemplate(BuiltinTemplate(TemplateIdFor(c)));
  } catch (const Error& e) {
    problems.push_back(e.what());
  }
  if (!problems.empty()) {
    std::string msg;
    for (const auto& p : problems) msg += (msg.empty() ? "" : "; ") + p;
    Fail(ErrorCode::kConfigError, msg);
  }
}

namespace internal {

inline Json YamlToJson(const YAML::Node& node) {
  switch (node.Type()) {
    case YAML::NodeType::Map: {
      Json j = Json::object();
      for (const auto& kv : node) j[kv.first.as<std::string>()] = YamlToJson(kv.second);
      return j;
    }
    case YAML::NodeType::Sequence: {
      Json j = Json::array();
      for (const auto& v : node) j.push_back(YamlToJson(v));
      return j;
    }
    case YAML::NodeType::Scalar: {
      const auto& s = node.Scalar();
      if (node.Tag() == "!") return s;  // quoted in the source
      long long i;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), i);
      if (ec == std::errc() && p == s.data() + s.size()) return i;
      double d;
      auto [q, ec2] = std::from_chars(s.data(), s.data() + s.size(), d);
      if (ec2 == std::errc() && q == s.data() + s.size()) return d;
      if (s == "true") return true;
      if (s == "false") return false;
      return s;
    }
    default:
      return nullptr;
  }
}

template <typename T>
T Opt(const YAML::Node& node, const char* key, T fallback) {
  if (!node || !node[key]) return fallback;
  try {
    return node[key].as<T>();
  } catch (const YAML::Exception& e) {
    Fail(ErrorCode::kConfigError, std::string(key) + ": " + e.what());
  }
}

}  // namespace internal

// `base_dir` resolves relative output and CSV paths.
inline ExperimentConfig ConfigFromYaml(const YAML::Node& root,
                                       const std::string& base_dir = "") {
  using internal::Opt;
  if (!root || !root.IsMap()) Fail(ErrorCode::kConfigError, "config must be a table");
  ExperimentConfig c;
  try {
    c.run_id = Opt<std::string>(root, "run_id", c.run_id);
    c.model_label = Opt<std::string>(root, "model_label", "");
    if (!root["game"]) Fail(ErrorCode::kConfigError, "missing game table");
    try {
      c.game = GameFromYaml(root["game"], base_dir);
    } catch (const Error& e) {
      Fail(ErrorCode::kConfigError, std::string("game: ") + e.what());
    }

    auto prompt = root["prompt"];
    c.variant = ParsePromptVariant(Opt<std::string>(prompt, "variant", "targeted"));
    c.traced = Opt<bool>(prompt, "traced", false);
    c.template_id = Opt<std::string>(prompt, "template", "");
    c.depths = Opt<std::vector<int>>(prompt, "depths", c.depths);
    c.opponents = Opt<std::vector<std::string>>(prompt, "opponents", c.opponents);
    auto strings = Opt<std::map<std::string, std::string>>(prompt, "opponent_strings", {});
    for (const auto& [k, v] : strings) c.opponent_strings[k] = v;

    auto agent = root["agent"];
    c.agent.kind = ParseAgentKind(Opt<std::string>(agent, "kind", "level-k"));
    if (agent && agent["level"] && agent["level"].Scalar() != "match") {
      c.agent.level = agent["level"].as<int>();
    }
    c.agent.endpoint = Opt<std::string>(agent, "endpoint", "");
    c.agent.model = Opt<std::string>(agent, "model", "");
    c.agent.api_key_env = Opt<std::string>(agent, "api_key_env", "");
    c.agent.timeout_s = Opt<double>(agent, "timeout_s", c.agent.timeout_s);
    c.agent.max_retries = Opt<int>(agent, "max_retries", c.agent.max_retries);
    c.agent.backoff_base_s = Opt<double>(agent, "backoff_s", c.agent.backoff_base_s);

    auto sampling = root["sampling"];
    c.sampling.temperature = Opt<double>(sampling, "temperature", c.sampling.temperature);
    if (sampling && sampling["max_tokens"]) c.sampling.max_tokens = sampling["max_tokens"].as<int>();

    auto preset = Opt<std::string>(root, "preset", "");
    if (preset == "keywords") {
      c.n_trials = kKeywordTrials;
    } else if (!preset.empty() && preset != "default") {
      Fail(ErrorCode::kConfigError, "unknown preset '" + preset + "'");
    }
    c.n_trials = Opt<int>(root, "n_trials", c.n_trials);
    auto tol = root["tolerance"];
    c.tolerance.epsilon = Opt<double>(tol, "epsilon", c.tolerance.epsilon);
    c.tolerance.eta = Opt<double>(tol, "eta", c.tolerance.eta);
    c.max_level = Opt<int>(root, "max_level", c.max_level);
    c.output = Opt<std::string>(root, "output", "");
    if (!c.output.empty() && c.output[0] != '/' && !base_dir.empty()) {
      c.output = (std::filesystem::path(base_dir) / c.output).lexically_normal().string();
    }
    c.parallelism = Opt<int>(root, "parallelism", c.parallelism);
    c.seed = Opt<uint64_t>(root, "seed", c.seed);
    c.canonical = Opt<bool>(root, "canonical", c.canonical);
  } catch (const YAML::Exception& e) {
    Fail(ErrorCode::kConfigError, e.what());
  }
  ValidateConfig(c);
  return c;
}

inline ExperimentConfig LoadConfig(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::Exception& e) {
    Fail(ErrorCode::kConfigError, "cannot read " + path + ": " + e.what());
  }
  auto dir = std::filesystem::path(path).parent_path().string();
  return ConfigFromYaml(root, dir);
}

// The config in its file schema, as JSON. Credentials never appear; only the
// name of the environment variable that holds them.
inline Json ConfigToJson(const ExperimentConfig& c) {
  Json j;
  j["run_id"] = c.run_id;
  j["model_label"] = c.model();
  j["game"] = internal::YamlToJson(GameToYaml(c.game));
  Json prompt;
  prompt["variant"] = PromptVariantName(c.variant);
  prompt["traced"] = c.traced;
  prompt["template"] = TemplateIdFor(c);
  prompt["depths"] = c.depths;
  prompt["opponents"] = c.opponents;
  Json strings = Json::object();
  for (const auto& [k, v] : c.opponent_strings) strings[k] = v;
  prompt["opponent_strings"] = strings;
  j["prompt"] = prompt;
  Json agent;
  agent["kind"] = AgentKindName(c.agent.kind);
  if (c.agent.level) agent["level"] = *c.agent.level;
  if (c.agent.kind == AgentRef::Kind::kRemote) {
    agent["endpoint"] = c.agent.endpoint;
    agent["model"] = c.agent.model;
    agent["api_key_env"] = c.agent.api_key_env;
    agent["timeout_s"] = c.agent.timeout_s;
    agent["max_retries"] = c.agent.max_retries;
    agent["backoff_s"] = c.agent.backoff_base_s;
  }
  j["agent"] = agent;
  Json sampling;
  sampling["temperature"] = c.sampling.temperature;
  if (c.sampling.max_tokens) sampling["max_tokens"] = *c.sampling.max_tokens;
  j["sampling"] = sampling;
  j["n_trials"] = c.n_trials;
  j["tolerance"] = {{"epsilon", c.tolerance.epsilon}, {"eta", c.tolerance.eta}};
  j["max_level"] = c.max_level;
  j["output"] = c.output;
  j["parallelism"] = c.parallelism;
  j["seed"] = c.seed;
  j["canonical"] = c.canonical;
  return j;
}

inline ExperimentConfig ConfigFromJson(const Json& j) {
  auto c = ConfigFromYaml(YAML::Load(j.dump()));
  // The echo stores output paths as resolved; keep them verbatim.
  if (j.contains("output")) c.output = j["output"].get<std::string>();
  return c;
}

// ---------------------------------------------------------------------------
// Conditions and seeds.

struct Condition {
  std::string label;                   // "k=3", "Expert", "open"
  std::optional<int> depth;            // targeted
  std::optional<std::string> opponent; // identity
};

inline std::vector<Condition> BuildConditions(const ExperimentConfig& c) {
  std::vector<Condition> out;
  switch (c.variant) {
    case PromptVariant::kTargeted:
      for (int d : c.depths) out.push_back({"k=" + std::to_string(d), d, std::nullopt});
      break;
    case PromptVariant::kIdentity:
      for (const auto& o : c.opponents) out.push_back({o, std::nullopt, o});
      break;
    case PromptVariant::kOpen:
      out.push_back({"open", std::nullopt, std::nullopt});
      break;
  }
  return out;
}

inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t TrialSeed(uint64_t root, long index) {
  return SplitMix64(SplitMix64(root) ^ static_cast<uint64_t>(index));
}

inline PromptParams ConditionParams(const ExperimentConfig& c, const Condition& cond) {
  PromptParams all;
  if (cond.depth) all["COMPETITION_DEPTH"] = std::to_string(*cond.depth);
  if (cond.opponent) all["OPPONENT_TYPE"] = c.opponent_strings.at(*cond.opponent);
  if (c.game.is_bcg()) {
    const auto& g = c.game.bcg();
    all["N_PARTICIPANTS"] = std::to_string(g.n_participants);
    all["MIN_RANGE"] = Choice::FormatNumber(g.min_range);
    all["MAX_RANGE"] = Choice::FormatNumber(g.max_range);
  }
  return all;
}

// ---------------------------------------------------------------------------
// Trial records.

struct TrialScoring {
  std::optional<int> accuracy;            // targeted only
  std::optional<double> regret;           // finite games, level >= 1
  std::optional<double> target_deviation; // beauty contest, targeted
  LevelClass classification;
  std::optional<int> support_coverage;    // symmetric finite games
  KeywordTagSet keywords;

  friend bool operator==(const TrialScoring&, const TrialScoring&) = default;
};

struct TrialError {
  ErrorCode code = ErrorCode::kUnparseableContent;
  std::string message;

  friend bool operator==(const TrialError&, const TrialError&) = default;
};

struct TrialRecord {
  std::string run_id;
  long index = 0;
  Condition condition;
  int trial = 0;
  uint64_t seed = 0;
  std::string model;
  std::string game_id;
  std::string variant;
  bool traced = false;
  RenderedPrompt prompt;
  std::string raw;
  TokenUsage usage;
  std::optional<Choice> choice;
  std::optional<ReasoningTrace> trace;
  std::optional<TracePositions> positions;
  std::optional<TrialScoring> scoring;
  std::optional<TrialError> error;
  int attempts = 0;
  std::optional<double> latency_s;
  std::optional<std::string> started_at;
  std::optional<std::string> finished_at;
  std::optional<std::string> wire_request;
  std::optional<std::string> wire_response;

  bool ok() const { return scoring.has_value(); }
};

inline bool operator==(const Condition& a, const Condition& b) {
  return a.label == b.label && a.depth == b.depth && a.opponent == b.opponent;
}
inline bool operator==(const TokenUsage& a, const TokenUsage& b) {
  return a.prompt_tokens == b.prompt_tokens && a.completion_tokens == b.completion_tokens &&
         a.reasoning_tokens == b.reasoning_tokens;
}
inline bool operator==(const TracePositions& a, const TracePositions& b) {
  return a.first_terminal == b.first_terminal && a.total_steps == b.total_steps &&
         a.overthought == b.overthought && a.matched == b.matched;
}
inline bool operator==(const TrialRecord& a, const TrialRecord& b) {
  return a.run_id == b.run_id && a.index == b.index && a.condition == b.condition &&
         a.trial == b.trial && a.seed == b.seed && a.model == b.model &&
         a.game_id == b.game_id && a.variant == b.variant && a.traced == b.traced &&
         a.prompt == b.prompt && a.raw == b.raw && a.usage == b.usage &&
         a.choice == b.choice && a.trace == b.trace && a.positions == b.positions &&
         a.scoring == b.scoring && a.error == b.error && a.attempts == b.attempts &&
         a.latency_s == b.latency_s && a.started_at == b.started_at &&
         a.finished_at == b.finished_at && a.wire_request == b.wire_request &&
         a.wire_response == b.wire_response;
}

namespace internal {

template <typename T>
void PutOpt(Json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

template <typename T>
std::optional<T> GetOpt(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  return j[key].get<T>();
}

inline Json TraceToJson(const ReasoningTrace& t) {
  Json j;
  j["reasoning_steps"] = Json::array();
  for (const auto& s : t.steps) {
    j["reasoning_steps"].push_back(
        {{"level", s.level}, {"reasoning", s.reasoning}, {"chosen", s.chosen.ToString()}});
  }
  j["final_decision"] = t.final_decision.ToString();
  PutOpt(j, "reflection", t.reflection);
  return j;
}

inline ReasoningTrace TraceFromJson(const Json& j) {
  ReasoningTrace t;
  for (const auto& s : j.at("reasoning_steps")) {
    t.steps.push_back({s.at("level").get<int>(), s.at("reasoning").get<std::string>(),
                       Choice::Parse(s.at("chosen").get<std::string>())});
  }
  t.final_decision = Choice::Parse(j.at("final_decision").get<std::string>());
  t.reflection = GetOpt<std::string>(j, "reflection");
  return t;
}

inline ErrorCode ParseErrorCode(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(ErrorCode::kMissingReferenceFile); ++i) {
    auto code = static_cast<ErrorCode>(i);
    if (ErrorCodeName(code) == name) return code;
  }
  Fail(ErrorCode::kCorruptLog, "unknown error code '" + name + "'");
}

}  // namespace internal

inline Json RecordToJson(const TrialRecord& r) {
  using internal::PutOpt;
  Json j;
  j["type"] = "trial";
  j["run_id"] = r.run_id;
  j["index"] = r.index;
  Json cond;
  cond["label"] = r.condition.label;
  PutOpt(cond, "depth", r.condition.depth);
  PutOpt(cond, "opponent", r.condition.opponent);
  j["condition"] = cond;
  j["trial"] = r.trial;
  j["seed"] = r.seed;
  j["model"] = r.model;
  j["game"] = r.game_id;
  j["variant"] = r.variant;
  j["traced"] = r.traced;
  j["prompt"] = {{"system", r.prompt.system}, {"user", r.prompt.user}};
  j["raw"] = r.raw;
  Json usage = Json::object();
  PutOpt(usage, "prompt_tokens", r.usage.prompt_tokens);
  PutOpt(usage, "completion_tokens", r.usage.completion_tokens);
  PutOpt(usage, "reasoning_tokens", r.usage.reasoning_tokens);
  j["usage"] = usage;
  if (r.choice) j["choice"] = r.choice->ToString();
  if (r.trace) j["trace"] = internal::TraceToJson(*r.trace);
  if (r.positions) {
    j["positions"] = {{"first_terminal", r.positions->first_terminal},
                      {"total_steps", r.positions->total_steps},
                      {"overthought", r.positions->overthought},
                      {"matched", r.positions->matched}};
  }
  if (r.scoring) {
    const auto& s = *r.scoring;
    Json sc;
    PutOpt(sc, "accuracy", s.accuracy);
    PutOpt(sc, "regret", s.regret);
    PutOpt(sc, "target_deviation", s.target_deviation);
    sc["classification"] = s.classification.ToString();
    PutOpt(sc, "support_coverage", s.support_coverage);
    sc["keywords"] = Json::array();
    for (auto k : s.keywords) sc["keywords"].push_back(KeywordName(k));
    j["scoring"] = sc;
  }
  if (r.error) {
    j["error"] = {{"code", ErrorCodeName(r.error->code)}, {"message", r.error->message}};
  }
  j["attempts"] = r.attempts;
  PutOpt(j, "latency_s", r.latency_s);
  PutOpt(j, "started_at", r.started_at);
  PutOpt(j, "finished_at", r.finished_at);
  if (r.wire_request || r.wire_response) {
    Json wire;
    PutOpt(wire, "request", r.wire_request);
    PutOpt(wire, "response", r.wire_response);
    j["wire"] = wire;
  }
  return j;
}

inline TrialRecord RecordFromJson(const Json& j) {
  using internal::GetOpt;
  TrialRecord r;
  r.run_id = j.at("run_id").get<std::string>();
  r.index = j.at("index").get<long>();
  const auto& cond = j.at("condition");
  r.condition.label = cond.at("label").get<std::string>();
  r.condition.depth = GetOpt<int>(cond, "depth");
  r.condition.opponent = GetOpt<std::string>(cond, "opponent");
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<uint64_t>();
  r.model = j.at("model").get<std::string>();
  r.game_id = j.at("game").get<std::string>();
  r.variant = j.at("variant").get<std::string>();
  r.traced = j.at("traced").get<bool>();
  r.prompt.system = j.at("prompt").at("system").get<std::string>();
  r.prompt.user = j.at("prompt").at("user").get<std::string>();
  r.raw = j.at("raw").get<std::string>();
  const auto& usage = j.at("usage");
  r.usage.prompt_tokens = GetOpt<long>(usage, "prompt_tokens");
  r.usage.completion_tokens = GetOpt<long>(usage, "completion_tokens");
  r.usage.reasoning_tokens = GetOpt<long>(usage, "reasoning_tokens");
  if (j.contains("choice")) r.choice = Choice::Parse(j["choice"].get<std::string>());
  if (j.contains("trace")) r.trace = internal::TraceFromJson(j["trace"]);
  if (j.contains("positions")) {
    const auto& p = j["positions"];
    r.positions = TracePositions{p.at("first_terminal").get<int>(), p.at("total_steps").get<int>(),
                                 p.at("overthought").get<bool>(), p.at("matched").get<bool>()};
  }
  if (j.contains("scoring")) {
    const auto& sc = j["scoring"];
    TrialScoring s;
    s.accuracy = GetOpt<int>(sc, "accuracy");
    s.regret = GetOpt<double>(sc, "regret");
    s.target_deviation = GetOpt<double>(sc, "target_deviation");
    s.classification = LevelClass::Parse(sc.at("classification").get<std::string>());
    s.support_coverage = GetOpt<int>(sc, "support_coverage");
    for (const auto& k : sc.at("keywords")) {
      for (auto kw : kAllKeywords) {
        if (KeywordName(kw) == k.get<std::string>()) s.keywords.insert(kw);
      }
    }
    r.scoring = s;
  }
  if (j.contains("error")) {
    r.error = TrialError{internal::ParseErrorCode(j["error"].at("code").get<std::string>()),
                         j["error"].at("message").get<std::string>()};
  }
  if (r.scoring.has_value() == r.error.has_value()) {
    Fail(ErrorCode::kCorruptLog, "record needs exactly one of scoring and error");
  }
  r.attempts = j.at("attempts").get<int>();
  r.latency_s = GetOpt<double>(j, "latency_s");
  r.started_at = GetOpt<std::string>(j, "started_at");
  r.finished_at = GetOpt<std::string>(j, "finished_at");
  if (j.contains("wire")) {
    r.wire_request = GetOpt<std::string>(j["wire"], "request");
    r.wire_response = GetOpt<std::string>(j["wire"], "response");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Persistence.

// Replaces every occurrence of each secret, raw or JSON-escaped up to three
// levels deep (wire bodies are JSON strings nested inside the record).
inline std::string ScrubSecrets(std::string text, const std::vector<std::string>& secrets) {
  for (const auto& secret : secrets) {
    if (secret.empty()) continue;
    std::vector<std::string> forms = {secret};
    for (int level = 0; level < 3; ++level) {
      auto quoted = Json(forms.back()).dump();
      forms.push_back(quoted.substr(1, quoted.size() - 2));
    }
    std::sort(forms.begin(), forms.end(),
              [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
    for (const auto& form : forms) {
      size_t pos = 0;
      while ((pos = text.find(form, pos)) != std::string::npos) {
        text.replace(pos, form.size(), "[REDACTED]");
        pos += 10;
      }
    }
  }
  return text;
}

// Appends one JSON line and flushes. Returns the 0-based line number written.
inline long AppendJsonLine(const Json& j, const std::string& path,
                           const std::vector<std::string>& secrets = {}) {
  long lines = 0;
  {
    std::ifstream in(path, std::ios::binary);
    if (in) lines = std::count(std::istreambuf_iterator<char>(in), {}, '\n');
  }
  std::ofstream out(path, std::ios::binary | std::ios::app);
  if (!out) Fail(ErrorCode::kIoError, "cannot open " + path + " for appending");
  out << ScrubSecrets(j.dump(), secrets) << '\n';
  out.flush();
  if (!out) Fail(ErrorCode::kIoError, "write to " + path + " failed");
  return lines;
}

inline long PersistTrial(const TrialRecord& record, const std::string& path,
                         const std::vector<std::string>& secrets = {}) {
  return AppendJsonLine(RecordToJson(record), path, secrets);
}

struct Run {
  std::optional<Json> config;  // echo line, when present
  std::vector<TrialRecord> records;
  bool truncated_tail = false;  // a partial final line was dropped
  std::string path;

  ExperimentConfig Config() const {
    if (!config) Fail(ErrorCode::kCorruptLog, path + ": no config line");
    return ConfigFromJson(*config);
  }
};

inline Run LoadRun(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail(ErrorCode::kIoError, "cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), {});
  Run run;
  run.path = path;
  size_t pos = 0;
  long line_no = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    bool last = nl == std::string::npos;
    std::string line = content.substr(pos, last ? std::string::npos : nl - pos);
    pos = last ? content.size() : nl + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = Json::parse(line);
      if (j.value("type", "") == "config") {
        run.config = j.at("config");
      } else {
        run.records.push_back(RecordFromJson(j));
      }
    } catch (const std::exception& e) {
      if (last) {
        run.truncated_tail = true;
        break;
      }
      Fail(ErrorCode::kCorruptLog,
           path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return run;
}

// ---------------------------------------------------------------------------
// Running.

struct TrialContext {
  const ExperimentConfig* config;
  Condition condition;
  int trial;
  long index;
  uint64_t seed;
  RenderedPrompt prompt;
};

struct ActOutcome {
  RawOutput output;
  int attempts = 1;
  std::optional<double> latency_s;
  std::optional<std::string> wire_request;
  std::optional<std::string> wire_response;
};

using Actor = std::function<ActOutcome(const TrialContext&)>;

struct RunOptions {
  bool resume = false;
  Actor actor;                            // overrides the configured agent
  std::function<void(int)> on_act_start;  // receives the in-flight count
  std::vector<std::string> secrets;       // scrubbed from the log
};

struct CellSummary {
  Condition condition;
  long n = 0;
  long errors = 0;
  long scored = 0;
  std::map<std::string, long> error_counts;
  std::optional<double> accuracy;             // errors count as 0
  std::optional<double> accuracy_scored_only; // errors excluded
  std::optional<double> mean_regret;
  std::optional<double> max_regret;
  std::optional<double> mean_target_deviation;
  std::optional<double> max_target_deviation;
  std::optional<double> support_coverage;
  std::optional<DepthEstimate> depth;
};

struct RunSummary {
  std::string run_id;
  std::string status;  // ok | partial | all_failed
  long expected = 0;
  long completed = 0;
  long errors = 0;
  std::vector<CellSummary> cells;
};

// Scores one parsed choice under a condition. Throws InfeasibleAction.
inline TrialScoring ScoreTrial(const ExperimentConfig& c, const Condition& cond,
                               const Choice& choice, const std::string& raw,
                               const std::optional<MixedEquilibrium>& eq) {
  const auto& g = c.game;
  Role role = g.role;
  if (!IsFeasible(g, role, choice)) {
    Fail(ErrorCode::kInfeasibleAction, choice.ToString() + " is not a feasible action");
  }
  TrialScoring s;
  if (cond.depth) {
    auto chain = LevelKChain(g, role, *cond.depth);
    const auto& target = chain.back();
    s.accuracy = Accuracy(g, role, target, choice, c.tolerance);
    if (g.is_bcg()) {
      s.target_deviation = TargetDeviation(target.action().number(), choice.number());
    } else if (target.conjecture) {
      s.regret = BestResponseRegret(g, role, *target.conjecture, choice);
    }
  }
  s.classification = ClassifyLevel(g, role, choice, c.max_level, c.tolerance.eta);
  if (eq) {
    bool in = role == Role::kRow ? eq->InSupport(choice)
                                 : AsColumnStrategy(g, *eq).ProbabilityOf(choice) > 0;
    s.support_coverage = in ? 1 : 0;
  }
  s.keywords = TagKeywords(raw);
  return s;
}

inline std::string UtcNow() {
  auto now = std::chrono::system_clock::now();
  auto t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

inline Actor DefaultActor(const ExperimentConfig& c) {
  if (c.agent.is_scripted()) {
    return [](const TrialContext& ctx) {
      const auto& cfg = *ctx.config;
      int level = cfg.agent.level.value_or(ctx.condition.depth.value_or(0));
      ActOutcome out;
      out.output = ScriptedAct(cfg.agent, cfg.game, cfg.game.role, cfg.traced, level, ctx.seed);
      return out;
    };
  }
  auto opts = RemoteOptionsFor(c.agent);
  return [opts](const TrialContext& ctx) {
    auto r = RemoteAct(opts, ctx.prompt, ctx.config->sampling);
    ActOutcome out;
    out.output = r.output;
    out.attempts = r.attempts;
    out.latency_s = r.latency_s;
    out.wire_request = r.request_body;
    out.wire_response = r.response_body;
    return out;
  };
}

// Builds the full record for one trial. Never throws for agent or parse
// failures; they land in the error slot.
inline TrialRecord ExecuteTrial(const TrialContext& ctx, const Actor& actor,
                                const std::optional<MixedEquilibrium>& eq) {
  const auto& c = *ctx.config;
  TrialRecord r;
  r.run_id = c.run_id;
  r.index = ctx.index;
  r.condition = ctx.condition;
  r.trial = ctx.trial;
  r.seed = ctx.seed;
  r.model = c.model();
  r.game_id = c.game.id;
  r.variant = PromptVariantName(c.variant);
  r.traced = c.traced;
  r.prompt = ctx.prompt;
  if (!c.canonical) r.started_at = UtcNow();
  auto start = std::chrono::steady_clock::now();
  try {
    ActOutcome act;
    try {
      act = actor(ctx);
    } catch (const Error& e) {
      auto msg = std::string(e.what());
      r.attempts = c.agent.max_retries + 1;
      auto at = msg.rfind(" after ");
      if (at != std::string::npos) {
        try {
          r.attempts = std::stoi(msg.substr(at + 7));
        } catch (const std::exception&) {
        }
      }
      throw;
    }
    r.raw = act.output.text;
    r.usage = act.output.usage;
    r.attempts = act.attempts;
    r.latency_s = act.latency_s;
    r.wire_request = act.wire_request;
    r.wire_response = act.wire_response;
    if (c.traced) {
      r.trace = ParseTrace(r.raw);
      r.choice = r.trace->final_decision;
      r.positions = ComputeTracePositions(*r.trace, c.game.is_bcg() ? c.tolerance.eta : 0.0);
    } else {
      r.choice = ExtractFinal(r.raw);
    }
    r.scoring = ScoreTrial(c, ctx.condition, *r.choice, r.raw, eq);
  } catch (const Error& e) {
    r.scoring.reset();
    r.error = TrialError{e.code(), e.what()};
  } catch (const std::exception& e) {
    r.scoring.reset();
    r.error = TrialError{ErrorCode::kTransportError, e.what()};
  }
  if (!c.canonical) {
    if (!r.latency_s) {
      r.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    r.finished_at = UtcNow();
  } else {
    r.latency_s.reset();
  }
  return r;
}

inline std::optional<MixedEquilibrium> RunEquilibrium(const GameSpec& g) {
  if (!IsSymmetricGame(g)) return std::nullopt;
  try {
    return SymmetricMixedNash(g);
  } catch (const Error&) {
    return std::nullopt;
  }
}

inline RunSummary SummarizeRun(const ExperimentConfig& c, const std::vector<TrialRecord>& records) {
  RunSummary s;
  s.run_id = c.run_id;
  auto conditions = BuildConditions(c);
  s.expected = static_cast<long>(conditions.size()) * c.n_trials;
  for (const auto& cond : conditions) {
    CellSummary cell;
    cell.condition = cond;
    std::vector<TrialDepth> depth;
    double acc = 0, cov = 0, reg = 0, dev = 0;
    long n_acc = 0, n_cov = 0, n_reg = 0, n_dev = 0;
    for (const auto& r : records) {
      if (!(r.condition == cond)) continue;
      ++cell.n;
      if (!r.ok()) {
        ++cell.errors;
        ++cell.error_counts[std::string(ErrorCodeName(r.error->code))];
        continue;
      }
      ++cell.scored;
      const auto& sc = *r.scoring;
      if (sc.accuracy) {
        acc += *sc.accuracy;
        ++n_acc;
      }
      if (sc.support_coverage) {
        cov += *sc.support_coverage;
        ++n_cov;
      }
      if (sc.regret) {
        reg += *sc.regret;
        ++n_reg;
        cell.max_regret = std::max(cell.max_regret.value_or(0.0), *sc.regret);
      }
      if (sc.target_deviation) {
        dev += *sc.target_deviation;
        ++n_dev;
        cell.max_target_deviation =
            std::max(cell.max_target_deviation.value_or(0.0), *sc.target_deviation);
      }
      depth.push_back({r.positions, sc.classification});
    }
    if (n_acc > 0) {
      cell.accuracy_scored_only = acc / n_acc;
      cell.accuracy = acc / (n_acc + cell.errors);
    } else if (cond.depth && cell.errors > 0) {
      cell.accuracy = 0.0;
    }
    if (n_cov > 0) cell.support_coverage = cov / n_cov;
    if (n_reg > 0) cell.mean_regret = reg / n_reg;
    if (n_dev > 0) cell.mean_target_deviation = dev / n_dev;
    if (!depth.empty()) cell.depth = AggregateDepth(depth, c.max_level);
    s.completed += cell.n;
    s.errors += cell.errors;
    s.cells.push_back(std::move(cell));
  }
  if (s.completed > 0 && s.errors == s.completed) {
    s.status = "all_failed";
  } else if (s.errors > 0 || s.completed < s.expected) {
    s.status = "partial";
  } else {
    s.status = "ok";
  }
  return s;
}

inline Json SummaryToJson(const RunSummary& s) {
  using internal::PutOpt;
  Json j;
  j["run_id"] = s.run_id;
  j["status"] = s.status;
  j["expected"] = s.expected;
  j["completed"] = s.completed;
  j["errors"] = s.errors;
  j["error_rate"] = s.completed ? static_cast<double>(s.errors) / s.completed : 0.0;
  j["cells"] = Json::array();
  for (const auto& c : s.cells) {
    Json cj;
    cj["condition"] = c.condition.label;
    cj["n"] = c.n;
    cj["scored"] = c.scored;
    cj["errors"] = c.errors;
    Json errs = Json::object();
    for (const auto& [k, v] : c.error_counts) errs[k] = v;
    cj["error_counts"] = errs;
    PutOpt(cj, "accuracy", c.accuracy);
    PutOpt(cj, "accuracy_scored_only", c.accuracy_scored_only);
    PutOpt(cj, "mean_regret", c.mean_regret);
    PutOpt(cj, "max_regret", c.max_regret);
    PutOpt(cj, "mean_target_deviation", c.mean_target_deviation);
    PutOpt(cj, "max_target_deviation", c.max_target_deviation);
    PutOpt(cj, "support_coverage", c.support_coverage);
    if (c.depth) {
      const auto& d = *c.depth;
      Json dj;
      dj["modal_level"] = d.modal_level ? d.modal_level->ToString() : "none";
      PutOpt(dj, "tau", d.tau);
      dj["first_terminal_mean"] = d.first_terminal.mean;
      dj["first_terminal_sd"] = d.first_terminal.sd;
      if (d.traced > 0) {
        dj["total_steps_mean"] = d.total_steps.mean;
        dj["total_steps_sd"] = d.total_steps.sd;
        dj["overthinking_pct"] = d.overthinking_pct;
      }
      dj["traced"] = d.traced;
      cj["depth"] = dj;
    }
    j["cells"].push_back(cj);
  }
  return j;
}

inline std::string SummaryPath(const std::string& output) { return output + ".summary.json"; }

inline Json ConfigEchoLine(const ExperimentConfig& c) {
  return Json{{"type", "config"}, {"config", ConfigToJson(c)}};
}

// Runs every (condition, trial) cell not already in the log, appending
// records in index order, then writes the summary. Throws AllTrialsFailed
// after writing the summary when no trial succeeded.
inline RunSummary RunExperiment(const ExperimentConfig& config, RunOptions options = {}) {
  ValidateConfig(config);
  namespace fs = std::filesystem;
  const auto& path = config.output;
  auto parent = fs::path(path).parent_path();
  std::error_code ec;
  if (!parent.empty()) fs::create_directories(parent, ec);

  auto echo = ConfigEchoLine(config);
  std::set<long> done;
  std::vector<TrialRecord> previous;
  bool fresh = true;
  if (options.resume && fs::exists(path)) {
    auto run = LoadRun(path);
    if (run.config && *run.config != echo["config"]) {
      Fail(ErrorCode::kConfigError, "log " + path + " was written by a different config");
    }
    if (run.truncated_tail) {
      std::ifstream in(path, std::ios::binary);
      std::string content((std::istreambuf_iterator<char>(in)), {});
      fs::resize_file(path, content.rfind('\n') == std::string::npos ? 0 : content.rfind('\n') + 1);
    }
    for (const auto& r : run.records) done.insert(r.index);
    previous = std::move(run.records);
    fresh = !run.config;
  }
  if (fresh) {
    std::ofstream out(path, std::ios::binary | (options.resume ? std::ios::app : std::ios::trunc));
    if (!out) Fail(ErrorCode::kOutputPathUnwritable, "cannot write " + path);
    out << echo.dump() << '\n';
    if (!out) Fail(ErrorCode::kOutputPathUnwritable, "cannot write " + path);
  }

  std::vector<std::string> secrets = options.secrets;
  Actor actor = options.actor;
  if (!actor) {
    actor = DefaultActor(config);
    if (!config.agent.is_scripted()) secrets.push_back(RemoteOptionsFor(config.agent).api_key);
  }
  auto eq = RunEquilibrium(config.game);
  auto tmpl = BuiltinTemplate(TemplateIdFor(config));

  auto conditions = BuildConditions(config);
  std::vector<TrialContext> pending;
  for (size_t ci = 0; ci < conditions.size(); ++ci) {
    auto params = SelectParams(tmpl, ConditionParams(config, conditions[ci]));
    auto prompt = RenderPrompt(tmpl, params);
    for (int t = 0; t < config.n_trials; ++t) {
      long index = static_cast<long>(ci) * config.n_trials + t;
      if (done.count(index)) continue;
      pending.push_back({&config, conditions[ci], t, index, TrialSeed(config.seed, index), prompt});
    }
  }

  std::mutex mu;
  std::map<size_t, TrialRecord> ready;
  size_t next_write = 0;
  std::atomic<size_t> next_task{0};
  std::atomic<int> in_flight{0};
  std::vector<TrialRecord> fresh_records;
  std::exception_ptr write_error;

  auto worker = [&] {
    while (true) {
      size_t i = next_task.fetch_add(1);
      if (i >= pending.size()) return;
      int now = ++in_flight;
      if (options.on_act_start) options.on_act_start(now);
      auto record = ExecuteTrial(pending[i], actor, eq);
      --in_flight;
      std::lock_guard<std::mutex> lock(mu);
      ready.emplace(i, std::move(record));
      while (!write_error && ready.count(next_write)) {
        auto node = ready.extract(next_write);
        try {
          PersistTrial(node.mapped(), path, secrets);
        } catch (...) {
          write_error = std::current_exception();
        }
        fresh_records.push_back(std::move(node.mapped()));
        ++next_write;
      }
    }
  };
  int n_threads = std::max(1, std::min<int>(config.parallelism, static_cast<int>(pending.size())));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < n_threads; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  if (write_error) {
    try {
      std::rethrow_exception(write_error);
    } catch (const Error& e) {
      Fail(ErrorCode::kOutputPathUnwritable, e.what());
    }
  }

  std::vector<TrialRecord> all = std::move(previous);
  for (auto& r : fresh_records) all.push_back(std::move(r));
  std::sort(all.begin(), all.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.index < b.index; });
  auto summary = SummarizeRun(config, all);
  {
    std::ofstream out(SummaryPath(path), std::ios::binary | std::ios::trunc);
    if (!out) Fail(ErrorCode::kOutputPathUnwritable, "cannot write " + SummaryPath(path));
    out << SummaryToJson(summary).dump(2) << '\n';
  }
  if (summary.status == "all_failed") {
    Fail(ErrorCode::kAllTrialsFailed,
         "all " + std::to_string(summary.completed) + " trials failed; see " + path);
  }
  return summary;
}

}  // namespace strategem

#endif  // STRATEGEM_HARNESS_H_
