#include "deepresearch/corpus.hpp"

#include "deepresearch/errors.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace dr = deepresearch;
namespace fs = std::filesystem;

TEST_CASE("parse_filename handles the published report names") {
  dr::ReportName name = dr::parse_filename("8_o3_orkg_d1_b1.md");
  CHECK(name.index == 8);
  CHECK(name.model == "o3");
  CHECK(name.engine == "orkg");
  CHECK(name.depth == 1);
  CHECK(name.breadth == 1);

  name = dr::parse_filename("41_o3_orkg_d4_b4.md");
  CHECK(name.index == 41);
  CHECK(name.depth == 4);
  CHECK(name.breadth == 4);

  name = dr::parse_filename("3_o3-mini_orkg_d4_b1.md");
  CHECK(name.model == "o3-mini");
}

TEST_CASE("parse_filename rejects malformed names") {
  CHECK_THROWS_AS(dr::parse_filename("notes.md"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("8_o3_orkg_d1_b1"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("x_o3_orkg_d1_b1.md"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("8_o3_orkg_1_b1.md"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("8_o3_orkg_d1_bx.md"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("8_o3_orkg_extra_d1_b1.md"), dr::MalformedName);
  CHECK_THROWS_AS(dr::parse_filename("8_o3_orkg_d0_b1.md"), dr::MalformedName);
}

TEST_CASE("filename codec round-trips random valid tuples") {
  const char* models[] = {"o3", "o3-mini", "gpt4o", "sonnet"};
  const char* engines[] = {"orkg", "web", "mock"};
  std::uint64_t state = 4242;
  for (int iteration = 0; iteration < 2000; ++iteration) {
    dr::ReportName name;
    name.index = static_cast<int>(oracles::next_rand(state) % 100000);
    name.model = models[oracles::next_rand(state) % 4];
    name.engine = engines[oracles::next_rand(state) % 3];
    name.depth = 1 + static_cast<int>(oracles::next_rand(state) % 9);
    name.breadth = 1 + static_cast<int>(oracles::next_rand(state) % 9);
    dr::ReportName parsed = dr::parse_filename(dr::encode_filename(name));
    CAPTURE(iteration);
    CHECK(parsed.index == name.index);
    CHECK(parsed.model == name.model);
    CHECK(parsed.engine == name.engine);
    CHECK(parsed.depth == name.depth);
    CHECK(parsed.breadth == name.breadth);
  }
}

TEST_CASE("encode_filename rejects identifiers that would break the codec") {
  dr::ReportName name{1, "bad_model", "orkg", 1, 1};
  CHECK_THROWS_AS(dr::encode_filename(name), dr::MalformedName);
  name = {1, "o3", "bad_engine", 1, 1};
  CHECK_THROWS_AS(dr::encode_filename(name), dr::MalformedName);
  name = {-1, "o3", "orkg", 1, 1};
  CHECK_THROWS_AS(dr::encode_filename(name), dr::MalformedName);
}

TEST_CASE("extract_sources reads list items, bare lines and link forms") {
  std::string body =
      "# Report\n\nSome prose.\n\n## Sources\n\n"
      "- https://a.test/one\n"
      "* https://b.test/two\n"
      "1. https://c.test/three\n"
      "https://d.test/four\n"
      "<https://e.test/five>\n"
      "[paper](https://f.test/six)\n";
  std::vector<std::string> urls = dr::extract_sources(body);
  REQUIRE(urls.size() == 6);
  CHECK(urls[0] == "https://a.test/one");
  CHECK(urls[3] == "https://d.test/four");
  CHECK(urls[4] == "https://e.test/five");
  CHECK(urls[5] == "https://f.test/six");
  // sublist property: every URL literally appears in the body
  for (const std::string& url : urls) CHECK(body.find(url) != std::string::npos);
}

TEST_CASE("extract_sources edge cases") {
  CHECK(dr::extract_sources("no heading here").empty());
  CHECK(dr::extract_sources("").empty());

  // last Sources heading wins; lower-case and other levels accepted
  std::string body =
      "## Sources\n- https://early.test\n\nMore prose.\n\n### sources\n- https://late.test\n";
  std::vector<std::string> urls = dr::extract_sources(body);
  REQUIRE(urls.size() == 1);
  CHECK(urls[0] == "https://late.test");

  // section ends at the next heading
  body = "## Sources\n- https://in.test\n## Appendix\n- https://out.test\n";
  urls = dr::extract_sources(body);
  REQUIRE(urls.size() == 1);
  CHECK(urls[0] == "https://in.test");

  // non-URL lines inside the section are skipped
  body = "## Sources\nplain text line\n- https://ok.test\n";
  urls = dr::extract_sources(body);
  REQUIRE(urls.size() == 1);
}

TEST_CASE("word_count counts whitespace tokens outside the sources section") {
  CHECK(dr::word_count("one two  three\n") == 3);
  CHECK(dr::word_count("") == 0);
  CHECK(dr::word_count("alpha beta\n\n## Sources\n- https://x.test/a\n- https://x.test/b\n") == 2);
  CHECK(dr::word_count("## Sources\n- https://x.test\n") == 0);
}

TEST_CASE("make_record derives counts from the body") {
  dr::ReportName name{7, "o3", "orkg", 2, 2};
  dr::ReportRecord record =
      dr::make_record(name, "word one two\n\n## Sources\n- https://x.test/1\n- https://x.test/2\n");
  CHECK(record.index == 7);
  CHECK(record.n_sources == 2);
  CHECK(record.sources.size() == 2);
  CHECK(record.word_count == 3);
}

TEST_CASE("align_groups pairs exactly the index intersection, ascending") {
  dr::ConfigGroup a;
  a.label = {"o3", "orkg", 1, 1};
  dr::ConfigGroup b;
  b.label = {"o3", "orkg", 4, 4};
  for (int i : {1, 2, 3}) a.records[i] = dr::ReportRecord{i, "o3", "orkg", 1, 1, "a", {}, 1, 0};
  for (int i : {2, 3, 4}) b.records[i] = dr::ReportRecord{i, "o3", "orkg", 4, 4, "b", {}, 1, 0};

  std::vector<dr::AlignedPair> pairs = dr::align_groups(a, b);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].index == 2);
  CHECK(pairs[1].index == 3);
  CHECK(pairs[0].left->body == "a");
  CHECK(pairs[0].right->body == "b");

  // symmetric up to component swap
  std::vector<dr::AlignedPair> swapped = dr::align_groups(b, a);
  REQUIRE(swapped.size() == 2);
  CHECK(swapped[0].index == 2);
  CHECK(swapped[0].left->body == "b");

  dr::ConfigGroup empty;
  CHECK(dr::align_groups(a, empty).empty());
  CHECK(dr::align_groups(a, a).size() == 3);
}

TEST_CASE("load_corpus groups by configuration and skips malformed names") {
  fs::path dir = fs::temp_directory_path() / ("dr_corpus_test_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& body) {
    std::ofstream out(dir / name);
    out << body;
  };
  write("1_o3_orkg_d1_b1.md", "alpha\n\n## Sources\n- https://a.test\n");
  write("2_o3_orkg_d1_b1.md", "beta\n");
  write("1_o3_orkg_d4_b4.md", "gamma\n");
  write("README.md", "not a report");

  dr::CorpusLoad load = dr::load_corpus(dir.string());
  REQUIRE(load.groups.size() == 2);
  CHECK(load.skipped == std::vector<std::string>{"README.md"});
  CHECK(load.groups[0].label.str() == "o3_orkg_d1_b1");
  CHECK(load.groups[0].records.size() == 2);
  CHECK(load.groups[1].label.str() == "o3_orkg_d4_b4");
  CHECK(load.groups[1].records.at(1).n_sources == 0);
  CHECK(load.groups[0].records.at(1).n_sources == 1);

  std::ostringstream manifest;
  dr::write_manifest_csv(manifest, load.groups);
  std::string text = manifest.str();
  CHECK(text.find("index,model,engine,depth,breadth,n_sources,word_count") == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);  // header + 3 records

  fs::remove_all(dir);
}

TEST_CASE("csv_escape quotes only when needed") {
  CHECK(dr::csv_escape("plain") == "plain");
  CHECK(dr::csv_escape("a,b") == "\"a,b\"");
  CHECK(dr::csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}
