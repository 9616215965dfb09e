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


#include <atomic>

#include "test_util.h"

namespace strategem {
namespace {

using testing::FakeEndpoint;

RemoteOptions Options(const FakeEndpoint& server) {
  RemoteOptions o;
  o.endpoint = server.url();
  o.model = "test-model";
  o.timeout_s = 5;
  o.max_retries = 3;
  o.backoff_base_s = 0.001;
  o.jitter = false;
  return o;
}

const RenderedPrompt kPrompt{"system text", "user text"};

TEST(EndpointTest, Parse) {
  auto e = Endpoint::Parse("https://api.example.com/v2/chat");
  EXPECT_EQ(e.base, "https://api.example.com");
  EXPECT_EQ(e.path, "/v2/chat");
  EXPECT_EQ(Endpoint::Parse("http://localhost:8080").path, "/v1/chat/completions");
  EXPECT_STRATEGEM_ERROR(Endpoint::Parse("localhost:8080"), ErrorCode::kConfigError);
}

TEST(ChatRequestBodyTest, Fields) {
  RemoteOptions o;
  o.model = "m";
  SamplingParams s;
  s.temperature = 0.75;
  auto j = nlohmann::json::parse(ChatRequestBody(o, kPrompt, s));
  EXPECT_EQ(j["model"], "m");
  EXPECT_EQ(j["messages"][0]["content"], "system text");
  EXPECT_EQ(j["messages"][1]["role"], "user");
  EXPECT_EQ(j["temperature"], 0.75);
  EXPECT_FALSE(j.contains("max_tokens"));
  s.max_tokens = 64;
  EXPECT_EQ(nlohmann::json::parse(ChatRequestBody(o, kPrompt, s))["max_tokens"], 64);
}

TEST(RemoteActTest, PassesTextThrough) {
  std::string seen_body;
  FakeEndpoint server([&](const httplib::Request& req, httplib::Response& res) {
    seen_body = req.body;
    res.set_content(FakeEndpoint::Reply("I pick <response>17</response>"), "application/json");
  });
  auto r = RemoteAct(Options(server), kPrompt, {});
  EXPECT_EQ(r.output.text, "I pick <response>17</response>");
  EXPECT_EQ(r.attempts, 1);
  EXPECT_EQ(r.output.usage.prompt_tokens, 12);
  EXPECT_EQ(r.output.usage.completion_tokens, 5);
  EXPECT_EQ(r.output.usage.reasoning_tokens, 3);
  EXPECT_EQ(nlohmann::json::parse(seen_body)["model"], "test-model");
  EXPECT_EQ(r.request_body, seen_body);
}

TEST(RemoteActTest, RetriesTransientFailures) {
  std::atomic<int> calls{0};
  FakeEndpoint server([&](const httplib::Request&, httplib::Response& res) {
    if (++calls <= 2) {
      res.status = 503;
      return;
    }
    res.set_content(FakeEndpoint::Reply("<response>19</response>"), "application/json");
  });
  auto r = RemoteAct(Options(server), kPrompt, {});
  EXPECT_EQ(r.attempts, 3);
  EXPECT_EQ(ExtractFinal(r.output.text), Choice(19));
}

TEST(RemoteActTest, TimeoutExhaustsRetries) {
  std::atomic<int> calls{0};
  FakeEndpoint server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    std::this_thread::sleep_for(std::chrono::milliseconds(300));
    res.set_content(FakeEndpoint::Reply("<response>19</response>"), "application/json");
  });
  auto o = Options(server);
  o.timeout_s = 0.05;
  o.max_retries = 2;
  try {
    RemoteAct(o, kPrompt, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTimeout);
    EXPECT_NE(std::string(e.what()).find("after 3 attempts"), std::string::npos) << e.what();
  }
}

TEST(RemoteActTest, RateLimitedAfterRetries) {
  FakeEndpoint server([](const httplib::Request&, httplib::Response& res) { res.status = 429; });
  EXPECT_STRATEGEM_ERROR(RemoteAct(Options(server), kPrompt, {}), ErrorCode::kRateLimited);
}

TEST(RemoteActTest, ClientErrorsAreNotRetried) {
  std::atomic<int> calls{0};
  FakeEndpoint server([&](const httplib::Request&, httplib::Response& res) {
    ++calls;
    res.status = 400;
  });
  EXPECT_STRATEGEM_ERROR(RemoteAct(Options(server), kPrompt, {}), ErrorCode::kTransportError);
  EXPECT_EQ(calls.load(), 1);
}

TEST(RemoteActTest, MalformedReply) {
  FakeEndpoint server([](const httplib::Request&, httplib::Response& res) {
    res.set_content("{\"choices\": []}", "application/json");
  });
  EXPECT_STRATEGEM_ERROR(RemoteAct(Options(server), kPrompt, {}),
                         ErrorCode::kMalformedEndpointReply);
  FakeEndpoint empty([](const httplib::Request&, httplib::Response& res) {
    res.set_content(FakeEndpoint::Reply(""), "application/json");
  });
  EXPECT_STRATEGEM_ERROR(RemoteAct(Options(empty), kPrompt, {}),
                         ErrorCode::kMalformedEndpointReply);
}

TEST(RemoteActTest, ConnectionRefused) {
  RemoteOptions o;
  o.endpoint = "http://127.0.0.1:1";
  o.max_retries = 1;
  o.backoff_base_s = 0.001;
  o.timeout_s = 1;
  try {
    RemoteAct(o, kPrompt, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kTransportError);
    EXPECT_NE(std::string(e.what()).find("after 2 attempts"), std::string::npos);
  }
}

TEST(RemoteActTest, CredentialOnlyInHeader) {
  std::string auth, body;
  FakeEndpoint server([&](const httplib::Request& req, httplib::Response& res) {
    auth = req.get_header_value("Authorization");
    body = req.body;
    res.set_content(FakeEndpoint::Reply("<response>20</response>"), "application/json");
  });
  auto o = Options(server);
  o.api_key = "sk-unit-secret";
  auto r = RemoteAct(o, kPrompt, {});
  EXPECT_EQ(auth, "Bearer sk-unit-secret");
  EXPECT_EQ(body.find("sk-unit-secret"), std::string::npos);
  EXPECT_EQ(r.request_body.find("sk-unit-secret"), std::string::npos);
}

TEST(RemoteOptionsForTest, ReadsCredentialFromEnvironment) {
  AgentRef a;
  a.kind = AgentRef::Kind::kRemote;
  a.endpoint = "http://x";
  a.model = "m";
  a.api_key_env = "STRATEGEM_UNIT_TEST_KEY";
  ::unsetenv("STRATEGEM_UNIT_TEST_KEY");
  EXPECT_STRATEGEM_ERROR(RemoteOptionsFor(a), ErrorCode::kConfigError);
  ::setenv("STRATEGEM_UNIT_TEST_KEY", "k-123", 1);
  EXPECT_EQ(RemoteOptionsFor(a).api_key, "k-123");
  ::unsetenv("STRATEGEM_UNIT_TEST_KEY");
}

}  // namespace
}  // namespace strategem
