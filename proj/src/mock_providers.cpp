#include "deepresearch/mock_providers.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <sstream>

namespace deepresearch {

std::uint64_t stable_hash(std::string_view text, std::uint64_t seed) {
  std::uint64_t h = 14695981039346656037ULL ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  // splitmix64 finalizer
  h ^= h >> 30;
  h *= 0xbf58476d1ce4e5b9ULL;
  h ^= h >> 27;
  h *= 0x94d049bb133111ebULL;
  h ^= h >> 31;
  return h;
}

namespace {

std::uint64_t next_state(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

// All "up to N" budgets mentioned by the prompt, in order of appearance.
std::vector<int> requested_counts(const std::string& prompt) {
  std::vector<int> counts;
  std::size_t pos = 0;
  while ((pos = prompt.find("up to ", pos)) != std::string::npos) {
    pos += 6;
    int value = 0;
    bool any = false;
    while (pos < prompt.size() && prompt[pos] >= '0' && prompt[pos] <= '9') {
      value = value * 10 + (prompt[pos] - '0');
      any = true;
      ++pos;
    }
    if (any) counts.push_back(value);
  }
  return counts;
}

const std::array<std::string_view, 24> kWords{
    "habitat",   "species",  "gradient", "biomass",   "resilience", "diversity",
    "nutrient",  "grassland", "canopy",   "soil",      "drought",    "pollinator",
    "community", "invasion", "recovery", "management", "climate",    "dispersal",
    "richness",  "grazing",  "wetland",  "succession", "trait",      "landscape"};

std::string pseudo_sentence(std::uint64_t& state, int words) {
  std::string s;
  for (int i = 0; i < words; ++i) {
    std::string_view w = kWords[next_state(state) % kWords.size()];
    if (i == 0) {
      s.push_back(static_cast<char>(w[0] - 'a' + 'A'));
      s.append(w.substr(1));
    } else {
      s.push_back(' ');
      s.append(w);
    }
  }
  s.push_back('.');
  return s;
}

}  // namespace

void MockLlm::add_canned(const std::string& prompt_substring, const std::string& raw_response) {
  std::lock_guard<std::mutex> lock(mutex_);
  canned_.emplace_back(prompt_substring, raw_response);
}

void MockLlm::push_scripted(const std::string& raw_response) {
  std::lock_guard<std::mutex> lock(mutex_);
  scripted_.push_back(raw_response);
}

std::string MockLlm::complete_structured(const std::string& prompt,
                                         const std::string& schema_id) {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    prompts_seen_.push_back(prompt);
    if (!scripted_.empty()) {
      std::string raw = scripted_.front();
      scripted_.pop_front();
      return raw;
    }
    for (const auto& [needle, response] : canned_) {
      if (prompt.find(needle) != std::string::npos) return response;
    }
  }

  std::size_t tokens = estimate_tokens(prompt);
  if (tokens > options_.context_limit_tokens) {
    throw ContextLengthExceeded("mock context window exceeded", tokens);
  }

  std::uint64_t state = stable_hash(prompt, options_.seed ^ stable_hash(schema_id));
  std::vector<int> budgets =
      options_.honor_requested_count ? requested_counts(prompt) : std::vector<int>{};
  auto capped = [&budgets](int configured, std::size_t which) {
    if (which < budgets.size()) return std::min(configured, budgets[which]);
    return configured;
  };
  nlohmann::json out;
  if (schema_id == "serp_queries") {
    nlohmann::json queries = nlohmann::json::array();
    int n_queries = capped(options_.queries_per_call, 0);
    for (int i = 0; i < n_queries; ++i) {
      std::uint64_t tag = next_state(state);
      nlohmann::json q;
      q["query"] = std::string(kWords[tag % kWords.size()]) + " " +
                   std::string(kWords[(tag >> 8) % kWords.size()]) + " evidence " +
                   std::to_string(tag % 9973);
      q["researchGoal"] = "Clarify " + std::string(kWords[(tag >> 16) % kWords.size()]) +
                          " dynamics (" + std::to_string(tag % 997) + ")";
      queries.push_back(q);
    }
    out["queries"] = queries;
  } else if (schema_id == "node_result") {
    nlohmann::json learnings = nlohmann::json::array();
    int n_learnings = capped(options_.learnings_per_call, 0);
    for (int i = 0; i < n_learnings; ++i) {
      learnings.push_back("Learning " + std::to_string(next_state(state) % 9973) + ": " +
                          pseudo_sentence(state, 10));
    }
    nlohmann::json followups = nlohmann::json::array();
    int n_followups = capped(options_.followups_per_call, 1);
    for (int i = 0; i < n_followups; ++i) {
      followups.push_back("How does " + std::string(kWords[next_state(state) % kWords.size()]) +
                          " interact with " +
                          std::string(kWords[next_state(state) % kWords.size()]) + "?");
    }
    out["learnings"] = learnings;
    out["followUpQuestions"] = followups;
  } else if (schema_id == "report") {
    std::ostringstream body;
    body << "# Synthesis " << next_state(state) % 9973 << "\n\n";
    for (int i = 0; i < options_.report_sentences; ++i) {
      body << pseudo_sentence(state, 12) << " ";
      if (i % 6 == 5) body << "\n\n";
    }
    out["reportMarkdown"] = body.str();
  } else {
    throw MalformedResponse("mock llm: unknown schema_id '" + schema_id + "'");
  }
  return out.dump();
}

std::vector<Document> MockSearch::search(const std::string& query, int limit) {
  std::vector<Document> docs;
  if (limit < 1) return docs;
  int n = std::min(limit, options_.results_per_query);
  std::uint64_t state = stable_hash(query, options_.seed);
  for (int i = 0; i < n; ++i) {
    std::uint64_t tag = next_state(state);
    Document d;
    d.title = "Mock result " + std::to_string(i + 1) + " (" + std::to_string(tag % 9973) + ")";
    std::uint64_t sent_state = tag;
    d.body = pseudo_sentence(sent_state, 14) + " " + pseudo_sentence(sent_state, 12);
    d.url = "https://mock.example/doc/" +
            std::to_string(tag % static_cast<std::uint64_t>(options_.url_pool_size));
    d.provider = engine_id();
    docs.push_back(std::move(d));
  }
  return docs;
}

std::vector<std::string> OrthonormalStubEmbedder::tokenize(const std::string& text) const {
  return word_tokens(text);
}

EmbeddingMatrix OrthonormalStubEmbedder::embed_tokens(const std::string& text) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.size() > static_cast<std::size_t>(max_tokens_)) {
    throw TextTooLong("text of " + std::to_string(tokens.size()) + " tokens exceeds embedder window of " +
                          std::to_string(max_tokens_),
                      tokens.size());
  }
  EmbeddingMatrix m;
  m.model_id = model_id();
  m.vectors = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tokens.size()), dim_);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    m.vectors(static_cast<Eigen::Index>(i),
              static_cast<Eigen::Index>(stable_hash(tokens[i]) % static_cast<std::uint64_t>(dim_))) = 1.0;
  }
  m.tokens = std::move(tokens);
  return m;
}

std::vector<std::string> HashedStubEmbedder::tokenize(const std::string& text) const {
  return word_tokens(text);
}

Eigen::VectorXd HashedStubEmbedder::embed_word(const std::string& token) const {
  std::uint64_t state = stable_hash(token, seed_);
  Eigen::VectorXd v(dim_);
  for (int k = 0; k < dim_; ++k) v[k] = 2.0 * unit_double(next_state(state)) - 1.0;
  double norm = v.norm();
  if (norm > 0.0) v /= norm;
  return v;
}

EmbeddingMatrix HashedStubEmbedder::embed_tokens(const std::string& text) {
  std::vector<std::string> tokens = tokenize(text);
  if (tokens.size() > static_cast<std::size_t>(max_tokens_)) {
    throw TextTooLong("text of " + std::to_string(tokens.size()) + " tokens exceeds embedder window of " +
                          std::to_string(max_tokens_),
                      tokens.size());
  }
  EmbeddingMatrix m;
  m.model_id = model_id();
  m.vectors.resize(static_cast<Eigen::Index>(tokens.size()), dim_);
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    m.vectors.row(static_cast<Eigen::Index>(i)) = embed_word(tokens[i]).transpose();
  }
  m.tokens = std::move(tokens);
  return m;
}

}  // namespace deepresearch
