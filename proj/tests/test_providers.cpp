#include "deepresearch/mock_providers.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <doctest.h>

namespace dr = deepresearch;

TEST_CASE("mock search honors the limit exactly and is a pure function of its inputs") {
  dr::MockSearch search;
  std::vector<dr::Document> first = search.search("grassland biodiversity", 10);
  REQUIRE(first.size() == 10);
  for (const dr::Document& d : first) {
    CHECK_FALSE(d.url.empty());
    CHECK_FALSE(d.body.empty());
  }
  std::vector<dr::Document> second = search.search("grassland biodiversity", 10);
  REQUIRE(second.size() == 10);
  for (std::size_t i = 0; i < first.size(); ++i) {
    CHECK(first[i].url == second[i].url);
    CHECK(first[i].body == second[i].body);
  }

  // fewer seeded results than the limit
  dr::MockSearchOptions small;
  small.results_per_query = 5;
  dr::MockSearch sparse(small);
  CHECK(sparse.search("anything", 10).size() == 5);
}

TEST_CASE("mock search output depends on the seed") {
  dr::MockSearchOptions a_options;
  a_options.seed = 1;
  dr::MockSearchOptions b_options;
  b_options.seed = 2;
  dr::MockSearch a(a_options);
  dr::MockSearch b(b_options);
  CHECK(a.search("q", 3)[0].url != b.search("q", 3)[0].url);
}

TEST_CASE("mock llm emits schema-valid payloads deterministically") {
  dr::MockLlm llm;
  std::string one = llm.complete_structured("prompt text", "serp_queries");
  std::string two = llm.complete_structured("prompt text", "serp_queries");
  CHECK(one == two);
  CHECK(llm.complete_structured("prompt", "report") !=
        llm.complete_structured("other prompt", "report"));
}

TEST_CASE("mock llm enforces its context window with a token estimate") {
  dr::MockLlmOptions options;
  options.context_limit_tokens = 5;
  dr::MockLlm llm(options);
  std::string prompt = "one two three four five six seven";
  try {
    llm.complete_structured(prompt, "report");
    FAIL("expected ContextLengthExceeded");
  } catch (const dr::ContextLengthExceeded& e) {
    CHECK(e.token_estimate() == dr::estimate_tokens(prompt));
  }
}

TEST_CASE("orthonormal stub embeds distinct tokens as exactly orthogonal unit rows") {
  dr::OrthonormalStubEmbedder embedder;
  dr::EmbeddingMatrix m = embedder.embed_tokens("wolf badger otter lynx");
  REQUIRE(m.tokens.size() == 4);
  for (Eigen::Index i = 0; i < m.vectors.rows(); ++i) {
    CHECK(m.vectors.row(i).dot(m.vectors.row(i)) == 1.0);
    for (Eigen::Index j = i + 1; j < m.vectors.rows(); ++j) {
      CHECK(m.vectors.row(i).dot(m.vectors.row(j)) == 0.0);
    }
  }
  // determinism across calls
  dr::EmbeddingMatrix again = embedder.embed_tokens("wolf badger otter lynx");
  CHECK(m.vectors == again.vectors);
}

TEST_CASE("hashed stub rows are unit-normalized and deterministic") {
  dr::HashedStubEmbedder embedder(16, 42);
  dr::EmbeddingMatrix m = embedder.embed_tokens("alpha beta alpha");
  REQUIRE(m.vectors.rows() == 3);
  for (Eigen::Index i = 0; i < m.vectors.rows(); ++i) {
    CHECK(m.vectors.row(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
  }
  // repeated token embeds identically
  CHECK(m.vectors.row(0) == m.vectors.row(2));
  CHECK(m.vectors == embedder.embed_tokens("alpha beta alpha").vectors);
}

TEST_CASE("embedders reject texts beyond their window") {
  dr::OrthonormalStubEmbedder embedder(8192, 10);
  std::string text;
  for (int i = 0; i < 11; ++i) text += "w" + std::to_string(i) + " ";
  CHECK_THROWS_AS(embedder.embed_tokens(text), dr::TextTooLong);
}

TEST_CASE("normalize_rows leaves zero rows untouched") {
  Eigen::MatrixXd m(2, 3);
  m << 3.0, 4.0, 0.0, 0.0, 0.0, 0.0;
  dr::normalize_rows(m);
  CHECK(m.row(0).norm() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.row(1).norm() == 0.0);
}

TEST_CASE("stable_hash is stable across calls and sensitive to the seed") {
  CHECK(dr::stable_hash("abc") == dr::stable_hash("abc"));
  CHECK(dr::stable_hash("abc", 1) != dr::stable_hash("abc", 2));
  CHECK(dr::stable_hash("abc") != dr::stable_hash("abd"));
}
