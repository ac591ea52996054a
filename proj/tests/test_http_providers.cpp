#include "deepresearch/http_providers.hpp"

#include "deepresearch/errors.hpp"

#include <doctest.h>
#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <thread>

namespace dr = deepresearch;

namespace {

// In-process HTTP server for exercising the live clients offline.
struct LocalServer {
  httplib::Server server;
  int port = 0;
  std::thread thread;

  void start() {
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this]() { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~LocalServer() {
    server.stop();
    if (thread.joinable()) thread.join();
  }
  std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

dr::HttpClientOptions fast_options() {
  dr::HttpClientOptions options;
  options.backoff_initial_ms = 1;
  options.requests_per_minute = 60000;
  options.timeout_seconds = 5;
  return options;
}

}  // namespace

TEST_CASE("scholarly client maps items to documents and honors the limit") {
  LocalServer local;
  local.server.Get("/index/search", [](const httplib::Request& req, httplib::Response& res) {
    CHECK(req.get_param_value("query") == "grassland");
    nlohmann::json items = nlohmann::json::array();
    for (int i = 0; i < 5; ++i) {
      items.push_back({{"title", "Paper " + std::to_string(i)},
                       {"abstract", "Abstract " + std::to_string(i)},
                       {"urls", {"https://paper.test/" + std::to_string(i)}}});
    }
    items.push_back({{"title", "No body or url"}});  // unusable, skipped
    res.set_content(nlohmann::json{{"payload", {{"items", items}}}}.dump(), "application/json");
  });
  local.start();

  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  std::vector<dr::Document> docs = client.search("grassland", 3);
  REQUIRE(docs.size() == 3);
  CHECK(docs[0].title == "Paper 0");
  CHECK(docs[0].body == "Abstract 0");
  CHECK(docs[0].url == "https://paper.test/0");
  CHECK(docs[0].provider == "orkg");
}

TEST_CASE("scholarly client falls back to doi urls") {
  LocalServer local;
  local.server.Get("/index/search", [](const httplib::Request&, httplib::Response& res) {
    nlohmann::json items = nlohmann::json::array();
    items.push_back({{"title", "T"}, {"abstract", "A"}, {"doi", "10.1234/abcd"}});
    res.set_content(nlohmann::json{{"payload", {{"items", items}}}}.dump(), "application/json");
  });
  local.start();
  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  std::vector<dr::Document> docs = client.search("q", 5);
  REQUIRE(docs.size() == 1);
  CHECK(docs[0].url == "https://doi.org/10.1234/abcd");
}

TEST_CASE("a query with no hits yields an empty list, not an error") {
  LocalServer local;
  local.server.Get("/index/search", [](const httplib::Request&, httplib::Response& res) {
    res.set_content(
        nlohmann::json{{"payload", {{"items", nlohmann::json::array()}}}}.dump(),
        "application/json");
  });
  local.start();
  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  CHECK(client.search("xyzzy nonsense", 10).empty());
}

TEST_CASE("rate limiter spaces successive acquisitions") {
  dr::RateLimiter limiter(6000.0);  // 10ms interval
  auto start = std::chrono::steady_clock::now();
  limiter.acquire();
  limiter.acquire();
  limiter.acquire();
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(elapsed >= 0.015);  // two full intervals, minus scheduler slack
}

TEST_CASE("retry policy: 5xx retried to success, then bounded") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Get("/index/search", [&hits](const httplib::Request&, httplib::Response& res) {
    int n = ++hits;
    if (n <= 2) {
      res.status = 500;
      return;
    }
    nlohmann::json items = nlohmann::json::array();
    items.push_back(
        {{"title", "T"}, {"abstract", "A"}, {"urls", {"https://paper.test/0"}}});
    res.set_content(nlohmann::json{{"payload", {{"items", items}}}}.dump(), "application/json");
  });
  local.start();

  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  CHECK(client.search("q", 1).size() == 1);
  CHECK(hits.load() == 3);
}

TEST_CASE("retry policy: persistent 5xx exhausts retries with NetworkError") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Get("/index/search", [&hits](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 503;
  });
  local.start();
  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  CHECK_THROWS_AS(client.search("q", 1), dr::NetworkError);
  CHECK(hits.load() == 4);  // initial + 3 retries
}

TEST_CASE("retry policy: non-retryable classes are never retried") {
  LocalServer local;
  std::atomic<int> hits{0};
  local.server.Get("/index/search", [&hits](const httplib::Request&, httplib::Response& res) {
    ++hits;
    res.status = 429;
  });
  local.start();
  dr::ScholarlyIndexClient client(local.base_url(), fast_options());
  CHECK_THROWS_AS(client.search("q", 1), dr::QuotaExceeded);
  CHECK(hits.load() == 1);
}

TEST_CASE("llm client extracts the completion content and maps auth failures") {
  LocalServer local;
  local.server.Post("/v1/chat/completions",
                    [](const httplib::Request& req, httplib::Response& res) {
                      nlohmann::json body = nlohmann::json::parse(req.body);
                      if (req.get_header_value("Authorization") != "Bearer good-key") {
                        res.status = 401;
                        return;
                      }
                      CHECK(body["model"] == "test-model");
                      nlohmann::json reply{
                          {"choices",
                           {{{"message", {{"content", "{\"reportMarkdown\": \"ok\"}"}}}}}}};
                      res.set_content(reply.dump(), "application/json");
                    });
  local.start();

  dr::HttpLlmClient good(local.base_url(), "good-key", "test-model", fast_options());
  CHECK(good.complete_structured("prompt", "report") == "{\"reportMarkdown\": \"ok\"}");

  dr::HttpLlmClient bad(local.base_url(), "bad-key", "test-model", fast_options());
  CHECK_THROWS_AS(bad.complete_structured("prompt", "report"), dr::ProviderRefusal);
}

TEST_CASE("embedder client normalizes rows and validates alignment") {
  LocalServer local;
  local.server.Post("/embed", [](const httplib::Request& req, httplib::Response& res) {
    nlohmann::json body = nlohmann::json::parse(req.body);
    std::string text = body["text"];
    if (text == "alpha beta") {
      nlohmann::json reply{{"model", "local-test"},
                           {"tokens", {"alpha", "beta"}},
                           {"vectors", {{3.0, 4.0}, {0.0, 2.0}}}};
      res.set_content(reply.dump(), "application/json");
    } else {
      nlohmann::json reply{{"tokens", {"x"}}, {"vectors", nlohmann::json::array()}};
      res.set_content(reply.dump(), "application/json");
    }
  });
  local.start();

  dr::HttpEmbedder embedder(local.base_url(), fast_options());
  dr::EmbeddingMatrix m = embedder.embed_tokens("alpha beta");
  REQUIRE(m.tokens.size() == 2);
  CHECK(m.vectors.row(0).norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.vectors(0, 0) == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(m.model_id == "local-test");

  CHECK_THROWS_AS(embedder.embed_tokens("mismatched"), dr::EmbedderError);
}

TEST_CASE("embedder rejects oversized texts locally") {
  dr::HttpEmbedder embedder("http://127.0.0.1:9");  // never contacted
  std::string text;
  for (int i = 0; i < 511; ++i) text += "w ";
  CHECK_THROWS_AS(embedder.embed_tokens(text), dr::TextTooLong);
}
