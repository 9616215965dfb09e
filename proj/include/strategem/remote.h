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

// Client for chat-completion style endpoints.
//
// Request (POST, JSON):
//   {"model": ..., "messages": [{"role": "system", "content": ...},
//                               {"role": "user", "content": ...}],
//    "temperature": ..., "max_tokens": ...}          (max_tokens optional)
// Reply (JSON):
//   {"choices": [{"message": {"content": "..."}}],
//    "usage": {"prompt_tokens": .., "completion_tokens": ..,
//              "completion_tokens_details": {"reasoning_tokens": ..}}}
//
// Connection failures, timeouts, 429 and 5xx replies are retried with
// exponential backoff; other 4xx replies and malformed bodies are not.

#ifndef STRATEGEM_REMOTE_H_
#define STRATEGEM_REMOTE_H_

#include <chrono>
#include <cstdlib>
#include <random>
#include <string>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "strategem/agents.h"
#include "strategem/error.h"
#include "strategem/prompts.h"
#include "strategem/trace.h"

namespace strategem {

struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // request path

  static Endpoint Parse(const std::string& url) {
    auto scheme = url.find("://");
    if (scheme == std::string::npos) {
      Fail(ErrorCode::kConfigError, "endpoint '" + url + "' needs a scheme");
    }
    auto slash = url.find('/', scheme + 3);
    Endpoint e;
    e.base = url.substr(0, slash);
    e.path = slash == std::string::npos ? "/v1/chat/completions" : url.substr(slash);
    return e;
  }
};

struct RemoteOptions {
  std::string endpoint;
  std::string model;
  std::string api_key;  // resolved credential; empty for unauthenticated
  double timeout_s = 120;
  int max_retries = 3;
  double backoff_base_s = 1.0;
  bool jitter = true;
};

struct RemoteResult {
  RawOutput output;
  int attempts = 0;
  double latency_s = 0;
  std::string request_body;   // never contains the credential
  std::string response_body;
  std::string extra_usage;    // provider usage object, verbatim
};

// Reads the credential named by the agent config from the environment.
inline RemoteOptions RemoteOptionsFor(const AgentRef& agent) {
  RemoteOptions o;
  o.endpoint = agent.endpoint;
  o.model = agent.model;
  o.timeout_s = agent.timeout_s;
  o.max_retries = agent.max_retries;
  o.backoff_base_s = agent.backoff_base_s;
  if (!agent.api_key_env.empty()) {
    const char* key = std::getenv(agent.api_key_env.c_str());
    if (!key || !*key) {
      Fail(ErrorCode::kConfigError,
           "environment variable " + agent.api_key_env + " is not set");
    }
    o.api_key = key;
  }
  return o;
}

inline std::string ChatRequestBody(const RemoteOptions& opts,
                                   const RenderedPrompt& prompt,
                                   const SamplingParams& sampling) {
  nlohmann::ordered_json body;
  body["model"] = opts.model;
  body["messages"] = nlohmann::ordered_json::array(
      {{{"role", "system"}, {"content", prompt.system}},
       {{"role", "user"}, {"content", prompt.user}}});
  body["temperature"] = sampling.temperature;
  if (sampling.max_tokens) body["max_tokens"] = *sampling.max_tokens;
  return body.dump();
}

namespace internal {

inline void ParseChatReply(const std::string& body, RemoteResult& out) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw std::runtime_error("content is not a string");
    out.output.text = content.get<std::string>();
  } catch (const std::exception& e) {
    Fail(ErrorCode::kMalformedEndpointReply, e.what());
  }
  if (out.output.text.empty()) {
    Fail(ErrorCode::kMalformedEndpointReply, "empty completion text");
  }
  if (j.contains("usage") && j["usage"].is_object()) {
    const auto& u = j["usage"];
    auto get = [&](const nlohmann::json& obj, const char* key) -> std::optional<long> {
      if (obj.contains(key) && obj[key].is_number_integer()) return obj[key].get<long>();
      return std::nullopt;
    };
    out.output.usage.prompt_tokens = get(u, "prompt_tokens");
    out.output.usage.completion_tokens = get(u, "completion_tokens");
    out.output.usage.reasoning_tokens = get(u, "reasoning_tokens");
    if (u.contains("completion_tokens_details") && u["completion_tokens_details"].is_object()) {
      auto r = get(u["completion_tokens_details"], "reasoning_tokens");
      if (r) out.output.usage.reasoning_tokens = r;
    }
    out.extra_usage = u.dump();
  }
}

}  // namespace internal

// One chat completion, with up to max_retries retries after the first attempt.
inline RemoteResult RemoteAct(const RemoteOptions& opts,
                              const RenderedPrompt& prompt,
                              const SamplingParams& sampling) {
  auto endpoint = Endpoint::Parse(opts.endpoint);
  RemoteResult result;
  result.request_body = ChatRequestBody(opts, prompt, sampling);

  httplib::Client client(endpoint.base);
  auto timeout = std::chrono::duration<double>(opts.timeout_s);
  auto us = std::chrono::duration_cast<std::chrono::microseconds>(timeout).count();
  client.set_connection_timeout(us / 1000000, us % 1000000);
  client.set_read_timeout(us / 1000000, us % 1000000);
  client.set_write_timeout(us / 1000000, us % 1000000);
  httplib::Headers headers;
  if (!opts.api_key.empty()) headers.emplace("Authorization", "Bearer " + opts.api_key);

  std::mt19937_64 jitter_rng(std::random_device{}());
  auto start = std::chrono::steady_clock::now();
  ErrorCode last_code = ErrorCode::kTransportError;
  std::string last_message;
  for (int attempt = 1; attempt <= opts.max_retries + 1; ++attempt) {
    result.attempts = attempt;
    if (attempt > 1) {
      double wait = opts.backoff_base_s * std::pow(2.0, attempt - 2);
      if (opts.jitter) wait *= 1.0 + std::uniform_real_distribution<double>(0, 0.25)(jitter_rng);
      std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
    auto res = client.Post(endpoint.path, headers, result.request_body, "application/json");
    if (!res) {
      auto err = res.error();
      bool timed_out = err == httplib::Error::Read || err == httplib::Error::Write ||
                       err == httplib::Error::ConnectionTimeout;
      last_code = timed_out ? ErrorCode::kTimeout : ErrorCode::kTransportError;
      last_message = httplib::to_string(err);
      continue;
    }
    result.response_body = res->body;
    if (res->status == 429) {
      last_code = ErrorCode::kRateLimited;
      last_message = "HTTP 429";
      continue;
    }
    if (res->status >= 500) {
      last_code = ErrorCode::kTransportError;
      last_message = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      Fail(ErrorCode::kTransportError,
           "HTTP " + std::to_string(res->status) + " (not retried)");
    }
    internal::ParseChatReply(res->body, result);
    result.latency_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return result;
  }
  Fail(last_code, last_message + " after " + std::to_string(result.attempts) + " attempts");
}

}  // namespace strategem

#endif  // STRATEGEM_REMOTE_H_
