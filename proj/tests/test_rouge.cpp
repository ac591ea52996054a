#include "deepresearch/rouge.hpp"

#include "oracles.hpp"

#include <doctest.h>

namespace dr = deepresearch;

namespace {

std::vector<std::string> toks(std::initializer_list<const char*> words) {
  return {words.begin(), words.end()};
}

}  // namespace

TEST_CASE("rouge_l_f1 matches the hand-unrolled example") {
  auto a = toks({"the", "cat", "sat", "on", "the", "mat"});
  auto b = toks({"the", "cat", "lay", "on", "the", "mat"});
  dr::RougeResult r = dr::rouge_l_f1(a, b);
  CHECK(r.lcs_length == 5);
  CHECK(r.precision == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(r.recall == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(r.f1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(oracles::lcs_bruteforce(a, b) == 5);
}

TEST_CASE("rouge_l_f1 empty-input conventions") {
  std::vector<std::string> empty;
  auto words = toks({"a", "b"});
  CHECK(dr::rouge_l_f1(empty, empty).f1 == 1.0);
  CHECK(dr::rouge_l_f1(words, empty).f1 == 0.0);
  CHECK(dr::rouge_l_f1(empty, words).f1 == 0.0);
}

TEST_CASE("rouge_l_f1 identity and disjoint extremes") {
  auto a = toks({"alpha", "beta", "gamma"});
  CHECK(dr::rouge_l_f1(a, a).f1 == 1.0);
  auto b = toks({"delta", "epsilon"});
  CHECK(dr::rouge_l_f1(a, b).f1 == 0.0);
}

TEST_CASE("rouge_l_f1 agrees with brute-force enumeration on random short pairs") {
  const char* alphabet[] = {"a", "b", "c", "d"};
  std::uint64_t state = 12345;
  for (int iteration = 0; iteration < 1000; ++iteration) {
    std::vector<std::string> a(oracles::next_rand(state) % 13);
    std::vector<std::string> b(oracles::next_rand(state) % 13);
    for (auto& t : a) t = alphabet[oracles::next_rand(state) % 4];
    for (auto& t : b) t = alphabet[oracles::next_rand(state) % 4];
    dr::RougeResult r = dr::rouge_l_f1(a, b);
    CAPTURE(iteration);
    CHECK(r.lcs_length == oracles::lcs_bruteforce(a, b));
    CHECK(r.lcs_length <= static_cast<int>(std::min(a.size(), b.size())));
  }
}

TEST_CASE("rouge_l_f1 swaps precision and recall under argument swap") {
  auto a = toks({"x", "y", "z", "x"});
  auto b = toks({"y", "x", "w"});
  dr::RougeResult ab = dr::rouge_l_f1(a, b);
  dr::RougeResult ba = dr::rouge_l_f1(b, a);
  CHECK(ab.precision == ba.recall);
  CHECK(ab.recall == ba.precision);
  CHECK(ab.f1 == doctest::Approx(ba.f1).epsilon(1e-15));
}

TEST_CASE("rouge_l_f1_text runs the stemming tokenizer") {
  dr::RougeResult r = dr::rouge_l_f1_text("Grasslands are grazed", "grassland is grazing");
  // stems: [grassland, ar, graze] vs [grassland, is, graze]
  CHECK(r.lcs_length == 2);
  CHECK(r.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
}
