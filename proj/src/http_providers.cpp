#include "deepresearch/http_providers.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <thread>

namespace deepresearch {

RateLimiter::RateLimiter(double requests_per_minute) {
  double per_second = requests_per_minute / 60.0;
  interval_ = per_second > 0.0
                  ? std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                        std::chrono::duration<double>(1.0 / per_second))
                  : std::chrono::steady_clock::duration::zero();
  next_ = std::chrono::steady_clock::now();
}

void RateLimiter::acquire() {
  std::chrono::steady_clock::time_point wait_until;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto now = std::chrono::steady_clock::now();
    wait_until = std::max(next_, now);
    next_ = wait_until + interval_;
  }
  std::this_thread::sleep_until(wait_until);
}

namespace {

struct HttpBackend {
  httplib::Client client;
  HttpClientOptions options;
  RateLimiter limiter;

  HttpBackend(const std::string& base_url, HttpClientOptions opts)
      : client(base_url), options(opts), limiter(opts.requests_per_minute) {
    client.set_connection_timeout(options.timeout_seconds);
    client.set_read_timeout(options.timeout_seconds);
    client.set_follow_location(true);
  }

  // Runs the request under the retry policy: transport failures and 5xx
  // responses are retryable; everything else surfaces immediately.
  httplib::Result run(const std::function<httplib::Result()>& request) {
    int backoff_ms = options.backoff_initial_ms;
    for (int attempt = 0;; ++attempt) {
      limiter.acquire();
      httplib::Result result = request();
      bool retryable = !result || result->status >= 500;
      if (!retryable) return result;
      if (attempt >= options.max_retries) {
        std::string reason = result ? "status " + std::to_string(result->status)
                                    : "transport error " + httplib::to_string(result.error());
        throw NetworkError("request failed after " + std::to_string(attempt + 1) +
                           " attempts: " + reason);
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
      backoff_ms *= 2;
    }
  }
};

void throw_for_status(int status, const std::string& body_snippet) {
  if (status == 429) throw QuotaExceeded("rate limit exhausted (429): " + body_snippet);
  if (status == 401 || status == 403) {
    throw ProviderRefusal("authorization rejected (" + std::to_string(status) + ")");
  }
  throw MalformedResponse("unexpected status " + std::to_string(status) + ": " + body_snippet);
}

nlohmann::json parse_body(const std::string& body) {
  nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
  if (parsed.is_discarded()) throw MalformedResponse("response body is not valid JSON");
  return parsed;
}

std::string snippet(const std::string& body) {
  return body.size() <= 160 ? body : body.substr(0, 160) + "...";
}

}  // namespace

struct ScholarlyIndexClient::Impl {
  HttpBackend backend;
  explicit Impl(const std::string& base, HttpClientOptions opts) : backend(base, opts) {}
};

ScholarlyIndexClient::ScholarlyIndexClient(std::string base_url, HttpClientOptions options)
    : impl_(std::make_unique<Impl>(base_url, options)) {}

ScholarlyIndexClient::~ScholarlyIndexClient() = default;

std::vector<Document> ScholarlyIndexClient::search(const std::string& query, int limit) {
  if (limit < 1) throw Error("search limit must be >= 1");
  httplib::Params params{{"query", query}, {"limit", std::to_string(limit)}};
  httplib::Result result = impl_->backend.run([&]() {
    return impl_->backend.client.Get("/index/search", params, httplib::Headers{});
  });
  if (result->status != 200) throw_for_status(result->status, snippet(result->body));

  nlohmann::json parsed = parse_body(result->body);
  nlohmann::json items = nlohmann::json::array();
  if (parsed.contains("payload") && parsed["payload"].contains("items")) {
    items = parsed["payload"]["items"];
  } else if (parsed.contains("items")) {
    items = parsed["items"];
  }
  if (!items.is_array()) throw MalformedResponse("search response lacks an items array");

  std::vector<Document> docs;
  for (const nlohmann::json& item : items) {
    if (docs.size() >= static_cast<std::size_t>(limit)) break;
    Document d;
    d.provider = engine_id();
    if (item.contains("title") && item["title"].is_string()) d.title = item["title"];
    if (item.contains("abstract") && item["abstract"].is_string()) {
      d.body = item["abstract"].get<std::string>();
    }
    if (d.body.empty() && d.title) d.body = *d.title;
    if (item.contains("urls") && item["urls"].is_array() && !item["urls"].empty() &&
        item["urls"][0].is_string()) {
      d.url = item["urls"][0].get<std::string>();
    } else if (item.contains("doi") && item["doi"].is_string() &&
               !item["doi"].get<std::string>().empty()) {
      std::string doi = item["doi"].get<std::string>();
      d.url = doi.rfind("http", 0) == 0 ? doi : "https://doi.org/" + doi;
    } else if (item.contains("id")) {
      d.url = "https://ask.orkg.org/search/item/" +
              (item["id"].is_string() ? item["id"].get<std::string>() : item["id"].dump());
    }
    if (d.url.empty() || d.body.empty()) continue;  // unusable hit
    docs.push_back(std::move(d));
  }
  return docs;
}

struct WebCrawlClient::Impl {
  HttpBackend backend;
  std::string api_key;
  Impl(const std::string& base, std::string key, HttpClientOptions opts)
      : backend(base, opts), api_key(std::move(key)) {}
};

WebCrawlClient::WebCrawlClient(std::string base_url, std::string api_key,
                               HttpClientOptions options)
    : impl_(std::make_unique<Impl>(base_url, std::move(api_key), options)) {}

WebCrawlClient::~WebCrawlClient() = default;

std::vector<Document> WebCrawlClient::search(const std::string& query, int limit) {
  if (limit < 1) throw Error("search limit must be >= 1");
  nlohmann::json request{{"query", query},
                         {"limit", limit},
                         {"scrapeOptions", {{"formats", {"markdown"}}}}};
  httplib::Headers headers{{"Authorization", "Bearer " + impl_->api_key}};
  std::string payload = request.dump();
  httplib::Result result = impl_->backend.run([&]() {
    return impl_->backend.client.Post("/v1/search", headers, payload, "application/json");
  });
  if (result->status != 200) throw_for_status(result->status, snippet(result->body));

  nlohmann::json parsed = parse_body(result->body);
  if (!parsed.contains("data") || !parsed["data"].is_array()) {
    throw MalformedResponse("search response lacks a data array");
  }
  std::vector<Document> docs;
  for (const nlohmann::json& item : parsed["data"]) {
    if (docs.size() >= static_cast<std::size_t>(limit)) break;
    Document d;
    d.provider = engine_id();
    if (item.contains("title") && item["title"].is_string()) d.title = item["title"];
    if (item.contains("markdown") && item["markdown"].is_string()) {
      d.body = item["markdown"].get<std::string>();
    } else if (item.contains("description") && item["description"].is_string()) {
      d.body = item["description"].get<std::string>();
    }
    if (item.contains("url") && item["url"].is_string()) d.url = item["url"];
    if (d.url.empty() || d.body.empty()) continue;
    docs.push_back(std::move(d));
  }
  return docs;
}

struct HttpLlmClient::Impl {
  HttpBackend backend;
  std::string api_key;
  std::string model;
  Impl(const std::string& base, std::string key, std::string model_name, HttpClientOptions opts)
      : backend(base, opts), api_key(std::move(key)), model(std::move(model_name)) {}
};

HttpLlmClient::HttpLlmClient(std::string base_url, std::string api_key, std::string model,
                             HttpClientOptions options)
    : impl_(std::make_unique<Impl>(base_url, std::move(api_key), std::move(model), options)) {}

HttpLlmClient::~HttpLlmClient() = default;

std::string HttpLlmClient::model_id() const { return impl_->model; }

std::string HttpLlmClient::complete_structured(const std::string& prompt,
                                               const std::string& schema_id) {
  nlohmann::json request{
      {"model", impl_->model},
      {"messages",
       {{{"role", "system"},
         {"content", "Respond with a single JSON object for the '" + schema_id +
                         "' structure. No prose outside JSON."}},
        {{"role", "user"}, {"content", prompt}}}},
      {"response_format", {{"type", "json_object"}}}};
  httplib::Headers headers{{"Authorization", "Bearer " + impl_->api_key}};
  std::string payload = request.dump();
  httplib::Result result = impl_->backend.run([&]() {
    return impl_->backend.client.Post("/v1/chat/completions", headers, payload,
                                      "application/json");
  });
  if (result->status == 400 && result->body.find("context") != std::string::npos) {
    throw ContextLengthExceeded("model context window exceeded", estimate_tokens(prompt));
  }
  if (result->status != 200) throw_for_status(result->status, snippet(result->body));

  nlohmann::json parsed = parse_body(result->body);
  if (!parsed.contains("choices") || !parsed["choices"].is_array() ||
      parsed["choices"].empty() || !parsed["choices"][0].contains("message") ||
      !parsed["choices"][0]["message"].contains("content")) {
    throw MalformedResponse("completion response lacks choices[0].message.content");
  }
  return parsed["choices"][0]["message"]["content"].get<std::string>();
}

struct HttpEmbedder::Impl {
  HttpBackend backend;
  std::string model;
  explicit Impl(const std::string& endpoint, HttpClientOptions opts)
      : backend(endpoint, opts), model("remote-embedder") {}
};

HttpEmbedder::HttpEmbedder(std::string endpoint, HttpClientOptions options)
    : impl_(std::make_unique<Impl>(endpoint, options)) {}

HttpEmbedder::~HttpEmbedder() = default;

std::string HttpEmbedder::model_id() const { return impl_->model; }

std::vector<std::string> HttpEmbedder::tokenize(const std::string& text) const {
  return word_tokens(text);
}

EmbeddingMatrix HttpEmbedder::embed_tokens(const std::string& text) {
  std::size_t tokens = tokenize(text).size();
  if (tokens > static_cast<std::size_t>(max_tokens())) {
    throw TextTooLong("text of " + std::to_string(tokens) + " tokens exceeds embedder window of " +
                          std::to_string(max_tokens()),
                      tokens);
  }
  nlohmann::json request{{"text", text}};
  std::string payload = request.dump();
  httplib::Result result = impl_->backend.run(
      [&]() { return impl_->backend.client.Post("/embed", payload, "application/json"); });
  if (result->status == 413) throw TextTooLong("embedding endpoint rejected the text", tokens);
  if (result->status != 200) throw_for_status(result->status, snippet(result->body));

  nlohmann::json parsed = parse_body(result->body);
  if (!parsed.contains("tokens") || !parsed.contains("vectors") ||
      !parsed["tokens"].is_array() || !parsed["vectors"].is_array() ||
      parsed["tokens"].size() != parsed["vectors"].size()) {
    throw EmbedderError("embedding response must carry aligned tokens and vectors arrays");
  }

  EmbeddingMatrix m;
  if (parsed.contains("model") && parsed["model"].is_string()) {
    impl_->model = parsed["model"].get<std::string>();
  }
  m.model_id = impl_->model;
  std::size_t rows = parsed["tokens"].size();
  std::size_t cols = rows == 0 ? 0 : parsed["vectors"][0].size();
  m.vectors.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    m.tokens.push_back(parsed["tokens"][i].get<std::string>());
    const nlohmann::json& row = parsed["vectors"][i];
    if (row.size() != cols) throw EmbedderError("ragged embedding vectors");
    for (std::size_t k = 0; k < cols; ++k) {
      m.vectors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) =
          row[k].get<double>();
    }
  }
  normalize_rows(m.vectors);
  return m;
}

}  // namespace deepresearch
