// Copyright 2026 The newsrank Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <atomic>
#include <filesystem>
#include <random>
#include <sstream>
#include <thread>

#include "fixtures.hpp"
#include "httplib.h"
#include "newsrank/entities.hpp"
#include "newsrank/features.hpp"

namespace newsrank {
namespace {

Gazetteer gao_gazetteer() {
  std::istringstream in(
      "# surface\tentity\n"
      "suicide bomber\tSuicide_attack\n"
      "vehicle\tVehicle\n"
      "explosives\tExplosive\n"
      "Gao\tGao\n"
      "Mali\tMali\n"
      "killing\tMurder\n"
      "terrorist attack\tTerrorism\n");
  return load_gazetteer(in);
}

TEST(OfflineLinker, TagsGaoQuery) {
  auto g = gao_gazetteer();
  auto ann = link_offline(fixtures::q0().text, g);
  // "Mali" occurs twice, so eight tags resolve to seven entities.
  EXPECT_EQ(ann.size(), 8u);
  EXPECT_EQ(entity_set(ann),
            (EntitySet{"Explosive", "Gao", "Mali", "Murder", "Suicide_attack",
                       "Terrorism", "Vehicle"}));
  auto c0 = entity_set(link_offline(candidate_text(fixtures::c0()), g));
  EXPECT_EQ(c0, (EntitySet{"Gao", "Mali"}));
  auto [common, jaccard] = entity_features(entity_set(ann), c0);
  EXPECT_EQ(common, 2.0);
  EXPECT_DOUBLE_EQ(jaccard, 2.0 / 7.0);
}

TEST(OfflineLinker, LongestMatchWinsWithoutOverlap) {
  Gazetteer g;
  g.add("New York", "New_York_City");
  g.add("York", "York");
  g.add("New York Times", "The_New_York_Times");
  auto ann = link_offline("the New York Times in York, new york", g);
  ASSERT_EQ(ann.size(), 3u);
  EXPECT_EQ(ann[0].entity_id, "The_New_York_Times");
  EXPECT_EQ(ann[1].entity_id, "York");
  EXPECT_EQ(ann[2].entity_id, "New_York_City");
  EXPECT_TRUE(link_offline("anything", Gazetteer{}).empty());
}

TEST(OfflineLinker, ResultsStayInsideGazetteerRange) {
  std::mt19937_64 rng(23);
  Gazetteer g;
  for (int i = 0; i < 10; ++i) {
    g.add("t" + std::to_string(i) + " t" + std::to_string(i + 1),
          "E" + std::to_string(i));
  }
  auto range = g.range();
  for (int trial = 0; trial < 200; ++trial) {
    std::string text;
    for (const auto& w : fixtures::random_doc(rng, 30, 12)) text += w + " ";
    for (const auto& a : link_offline(text, g)) {
      EXPECT_TRUE(range.contains(a.entity_id));
      EXPECT_EQ(a.confidence, 1.0);
    }
  }
}

TEST(Gazetteer, RejectsMalformedLines) {
  std::istringstream bad("vehicle Vehicle\n");
  EXPECT_THROW(load_gazetteer(bad), ParseError);
  std::istringstream empty_id("vehicle\t \n");
  EXPECT_THROW(load_gazetteer(empty_id), ParseError);
}

TEST(Annotations, JsonRoundTrip) {
  std::vector<EntityAnnotation> ann = {{"Gao", "Gao", 0.5}, {"Mali", "Mali", 1.0}};
  auto back = annotations_from_json(annotations_to_json(ann));
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].entity_id, "Gao");
  EXPECT_EQ(back[0].confidence, 0.5);
}

TEST(RemoteParse, ThresholdAndMalformedBodies) {
  std::string body = R"js({"annotations":[
      {"spot":"Gao","title":"Gao","rho":0.4},
      {"spot":"scores","title":"Score (game)","rho":0.05},
      {"spot":"zzz"},
      {"spot":"Mali","title":"Mali","rho":0.1}]})js";
  auto ann = RemoteLinker::parse_response(body, 0.1);
  ASSERT_EQ(ann.size(), 2u);
  EXPECT_EQ(ann[0].entity_id, "Gao");
  EXPECT_EQ(ann[1].entity_id, "Mali");
  EXPECT_EQ(RemoteLinker::parse_response(body, 0.0)[1].entity_id, "Score_(game)");
  EXPECT_THROW(RemoteLinker::parse_response("<html>", 0.1), ProtocolError);
  EXPECT_THROW(RemoteLinker::parse_response("{}", 0.1), ProtocolError);
  EXPECT_THROW(
      RemoteLinker::parse_response(R"({"annotations":[{"title":"x","rho":"hi"}]})", 0.1),
      ProtocolError);
}

// Local stand-in for the linking service.
class MockService : public ::testing::Test {
 protected:
  void SetUp() override {
    server_.Get("/tag", [this](const httplib::Request& req, httplib::Response& res) {
      int n = ++hits_;
      if (req.get_param_value("gcube-token") == "bad") {
        res.status = 401;
        return;
      }
      if (req.get_param_value("text") == "flaky" && n == 1) {
        res.status = 503;
        return;
      }
      if (req.get_param_value("text") == "broken") {
        res.set_content("not json", "text/plain");
        return;
      }
      res.set_content(
          R"({"annotations":[{"spot":"Gao","title":"Gao","rho":0.9},)"
          R"({"spot":"camp","title":"Camp","rho":0.05}]})",
          "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  void TearDown() override {
    server_.stop();
    thread_.join();
  }

  RemoteLinkerConfig config(std::string token = "ok") const {
    RemoteLinkerConfig c;
    c.endpoint = "http://127.0.0.1:" + std::to_string(port_) + "/tag";
    c.token = std::move(token);
    c.initial_backoff = std::chrono::milliseconds(1);
    c.timeout = std::chrono::seconds(5);
    c.max_concurrency = 2;
    return c;
  }

  httplib::Server server_;
  std::thread thread_;
  int port_ = 0;
  std::atomic<int> hits_{0};
};

TEST_F(MockService, LinksAndCachesAcrossRuns) {
  auto path = std::filesystem::temp_directory_path() /
              ("newsrank-cache-" + std::to_string(port_) + ".tsv");
  std::filesystem::remove(path);
  {
    EntityCache cache(path.string());
    RemoteLinker linker(config(), cache);
    auto ann = linker.link("Attack in Gao camp");
    ASSERT_EQ(ann.size(), 1u);
    EXPECT_EQ(ann[0].entity_id, "Gao");
    EXPECT_EQ(linker.requests_made(), 1u);
    EXPECT_TRUE(linker.link("   ").empty());
    EXPECT_EQ(linker.requests_made(), 1u);
  }
  EntityCache reloaded(path.string());
  RemoteLinker linker(config(), reloaded);
  auto ann = linker.link("Attack in Gao camp");
  EXPECT_EQ(ann.size(), 1u);
  EXPECT_EQ(linker.requests_made(), 0u);
  EXPECT_EQ(hits_.load(), 1);
  std::filesystem::remove(path);
}

TEST_F(MockService, LinkAllKeepsInputOrder) {
  EntityCache cache;
  RemoteLinker linker(config(), cache);
  std::vector<std::string> texts = {"a Gao", "b Gao", "c Gao", "d Gao", "e Gao"};
  auto out = linker.link_all(texts);
  ASSERT_EQ(out.size(), texts.size());
  for (const auto& ann : out) EXPECT_EQ(entity_set(ann), EntitySet{"Gao"});
  EXPECT_EQ(cache.size(), texts.size());
}

TEST_F(MockService, AuthenticationFailureIsNotRetried) {
  EntityCache cache;
  RemoteLinker linker(config("bad"), cache);
  EXPECT_THROW(linker.link("Gao"), TransportError);
  EXPECT_EQ(linker.requests_made(), 1u);
}

TEST_F(MockService, ServerErrorIsRetried) {
  EntityCache cache;
  RemoteLinker linker(config(), cache);
  auto ann = linker.link("flaky");
  EXPECT_EQ(ann.size(), 1u);
  EXPECT_EQ(linker.requests_made(), 2u);
}

TEST_F(MockService, MalformedResponseIsProtocolError) {
  EntityCache cache;
  RemoteLinker linker(config(), cache);
  EXPECT_THROW(linker.link("broken"), ProtocolError);
  EXPECT_EQ(cache.size(), 0u);
}

TEST_F(MockService, ThresholdChangesCacheKeyAndResult) {
  EntityCache cache;
  auto low = config();
  low.threshold = 0.0;
  RemoteLinker a(config(), cache);
  RemoteLinker b(low, cache);
  EXPECT_EQ(a.link("Gao camp").size(), 1u);
  EXPECT_EQ(b.link("Gao camp").size(), 2u);
  EXPECT_NE(RemoteLinker::cache_key("x", 0.1), RemoteLinker::cache_key("x", 0.0));
}

TEST(RemoteLinkerConfigTest, ValidatesSettings) {
  EntityCache cache;
  RemoteLinkerConfig c;
  c.threshold = 1.5;
  EXPECT_THROW(RemoteLinker(c, cache), ConfigError);
  c.threshold = 0.1;
  c.endpoint = "no-scheme";
  EXPECT_THROW(RemoteLinker(c, cache), ConfigError);
}

TEST(RemoteLinkerConfigTest, UnreachableServiceIsTransportError) {
  EntityCache cache;
  RemoteLinkerConfig c;
  c.endpoint = "http://127.0.0.1:1/tag";
  c.max_retries = 1;
  c.initial_backoff = std::chrono::milliseconds(1);
  c.timeout = std::chrono::seconds(1);
  RemoteLinker linker(c, cache);
  EXPECT_THROW(linker.link("Gao"), TransportError);
  EXPECT_EQ(linker.requests_made(), 2u);
}

}  // namespace
}  // namespace newsrank
