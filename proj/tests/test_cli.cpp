#include "deepresearch/cli.hpp"

#include "deepresearch/vocabulary.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace dr = deepresearch;
namespace fs = std::filesystem;

namespace {

int run(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"deepresearch"};
  for (const std::string& a : args) argv.push_back(a.c_str());
  return dr::run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           (tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int value = 0;
    return value;
  }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("research subcommand writes report, manifest and trace") {
  TempDir dir("dr_cli_research");
  std::string trace_path = (dir.path / "trace.jsonl").string();
  int code = run({"research", "--question", "Does drought alter soil biota?", "--depth", "4",
                  "--breadth", "4", "--engine", "mock", "--out", dir.str(), "--index", "3",
                  "--trace", trace_path});
  REQUIRE(code == dr::kExitOk);

  fs::path report = dir.path / "3_mock_mock_d4_b4.md";
  REQUIRE(fs::exists(report));
  std::string body = slurp(report);
  CHECK(body.find("## Sources") != std::string::npos);

  nlohmann::json manifest =
      nlohmann::json::parse(slurp(dir.path / "3_mock_mock_d4_b4.md.manifest.json"));
  CHECK(manifest["stats"]["total_queries"] == 28);
  CHECK(manifest["stats"]["per_level_breadth"] == nlohmann::json({4, 2, 1, 1}));
  CHECK(manifest["params"]["depth"] == 4);

  std::istringstream trace(slurp(trace_path));
  std::string line;
  int lines = 0;
  while (std::getline(trace, line)) {
    if (line.empty()) continue;
    nlohmann::json record = nlohmann::json::parse(line);
    CHECK(record.contains("level"));
    CHECK(record.contains("query"));
    CHECK(record.contains("research_goal"));
    CHECK(record.contains("n_docs"));
    ++lines;
  }
  CHECK(lines == 28);
}

TEST_CASE("research assigns the lowest unused index by default") {
  TempDir dir("dr_cli_index");
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);
  CHECK(fs::exists(dir.path / "1_mock_mock_d1_b3.md"));
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);
  CHECK(fs::exists(dir.path / "2_mock_mock_d1_b3.md"));
}

TEST_CASE("research runs are idempotent for a fixed seed and index") {
  TempDir dir("dr_cli_idem");
  auto once = [&]() {
    REQUIRE(run({"research", "--question", "Same question", "--depth", "2", "--breadth", "2",
                 "--engine", "mock", "--out", dir.str(), "--index", "1", "--seed", "7"}) == 0);
    return slurp(dir.path / "1_mock_mock_d2_b2.md");
  };
  std::string first = once();
  std::string second = once();
  CHECK(first == second);
  CHECK_FALSE(first.empty());
}

TEST_CASE("missing provider credentials exit with code 3") {
  TempDir dir("dr_cli_creds");
  ::unsetenv("DR_LLM_API_KEY");
  ::unsetenv("DR_CONFIG");
  CHECK(run({"research", "--question", "q", "--engine", "orkg", "--out", dir.str()}) ==
        dr::kExitProvider);
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run({"research"}) == dr::kExitUsage);                      // missing --question
  CHECK(run({"research", "--question", "q", "--depth", "0"}) == dr::kExitUsage);
  CHECK(run({"score"}) == dr::kExitUsage);                         // missing --input
  CHECK(run({"nonsense"}) == dr::kExitUsage);
  CHECK(run({}) == dr::kExitUsage);
  CHECK(run({"score", "--input", "/definitely/missing/dir"}) == dr::kExitUsage);
}

TEST_CASE("score subcommand writes per-report and aggregate CSVs") {
  TempDir dir("dr_cli_score");
  for (int i = 1; i <= 2; ++i) {
    REQUIRE(run({"research", "--question", "Question " + std::to_string(i), "--engine", "mock",
                 "--out", dir.str(), "--index", std::to_string(i), "--seed",
                 std::to_string(i)}) == 0);
  }
  REQUIRE(run({"research", "--question", "Deep question", "--depth", "2", "--breadth", "2",
               "--engine", "mock", "--out", dir.str(), "--index", "1"}) == 0);

  TempDir out("dr_cli_score_out");
  REQUIRE(run({"score", "--input", dir.str(), "--out", out.str()}) == 0);

  std::string per_report = slurp(out.path / "report_scores.csv");
  CHECK(std::count(per_report.begin(), per_report.end(), '\n') == 4);  // header + 3 reports
  CHECK(per_report.find("s_density") != std::string::npos);

  std::string aggregate = slurp(out.path / "config_scores.csv");
  CHECK(std::count(aggregate.begin(), aggregate.end(), '\n') == 3);  // header + 2 configs
  CHECK(aggregate.find("mock_mock_d1_b3") != std::string::npos);
  CHECK(aggregate.find("mock_mock_d2_b2") != std::string::npos);
}

TEST_CASE("score emits the corpus manifest alongside the score CSVs") {
  TempDir dir("dr_cli_manifest");
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);
  TempDir out("dr_cli_manifest_out");
  REQUIRE(run({"score", "--input", dir.str(), "--out", out.str()}) == 0);
  std::string manifest = slurp(out.path / "corpus_manifest.csv");
  CHECK(manifest.rfind("index,model,engine,depth,breadth,n_sources,word_count", 0) == 0);
  CHECK(manifest.find("1,mock,mock,1,3,") != std::string::npos);
}

TEST_CASE("score applies composite weights from a JSON file") {
  TempDir dir("dr_cli_weights");
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);

  fs::path weights_path = dir.path / "weights.json";
  {
    std::ofstream out(weights_path);
    out << R"({"weights": {"depth": 0, "breadth": 0, "ecological": 0,
                "rigor": 0, "innovation": 0, "density": 1.0}})";
  }
  TempDir out("dr_cli_weights_out");
  REQUIRE(run({"score", "--input", dir.str(), "--weights", weights_path.string(), "--out",
               out.str()}) == 0);

  // with density-only weights the composite column equals the density column
  std::istringstream csv(slurp(out.path / "report_scores.csv"));
  std::string line;
  std::getline(csv, line);  // header
  while (std::getline(csv, line)) {
    std::vector<std::string> fields;
    std::istringstream row(line);
    std::string field;
    while (std::getline(row, field, ',')) fields.push_back(field);
    REQUIRE(fields.size() == 31);
    CHECK(fields[29] == fields[30]);
  }

  // weights that do not sum to one are rejected
  {
    std::ofstream bad(weights_path);
    bad << R"({"weights": {"depth": 0.9}})";
  }
  CHECK(run({"score", "--input", dir.str(), "--weights", weights_path.string(), "--out",
             out.str()}) == dr::kExitInternal);
}

TEST_CASE("score honors a custom vocabulary file") {
  TempDir dir("dr_cli_vocab");
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);

  nlohmann::json vocab_json;
  for (const auto& [category, phrases] : dr::default_vocabulary().categories) {
    vocab_json[category] = phrases;
  }
  fs::path vocab_path = dir.path / "vocab.json";
  {
    std::ofstream out(vocab_path);
    out << vocab_json.dump();
  }
  TempDir out("dr_cli_vocab_out");
  CHECK(run({"score", "--input", dir.str(), "--vocab", vocab_path.string(), "--out",
             out.str()}) == 0);
  CHECK(fs::exists(out.path / "report_scores.csv"));
}

TEST_CASE("compare writes one matrix per metric with an intact diagonal") {
  TempDir dir("dr_cli_compare");
  // two configurations sharing indices 1 and 2
  for (const char* breadth : {"1", "2"}) {
    for (const char* index : {"1", "2"}) {
      REQUIRE(run({"research", "--question", std::string("Question ") + index, "--breadth",
                   breadth, "--engine", "mock", "--out", dir.str(), "--index", index}) == 0);
    }
  }
  TempDir out("dr_cli_compare_out");
  REQUIRE(run({"compare", "--input", dir.str(), "--metrics", "rouge,wmd", "--embed-endpoint",
               "stub", "--out", out.str()}) == 0);

  for (const char* name : {"similarity_rouge_l.csv", "similarity_wmd.csv", "pairs_rouge_l.csv",
                           "pairs_wmd.csv"}) {
    CAPTURE(name);
    CHECK(fs::exists(out.path / name));
  }
  std::string rouge = slurp(out.path / "similarity_rouge_l.csv");
  CHECK(rouge.find("1.000000") != std::string::npos);
}

TEST_CASE("compare without an embedder fails only for embedding metrics") {
  TempDir dir("dr_cli_embed");
  REQUIRE(run({"research", "--question", "q", "--engine", "mock", "--out", dir.str()}) == 0);
  TempDir out("dr_cli_embed_out");
  ::unsetenv("DR_EMBED_ENDPOINT");
  CHECK(run({"compare", "--input", dir.str(), "--metrics", "wmd", "--out", out.str()}) ==
        dr::kExitProvider);
  CHECK(run({"compare", "--input", dir.str(), "--metrics", "rouge", "--out", out.str()}) ==
        dr::kExitOk);
}

TEST_CASE("compare survives groups with no index overlap") {
  TempDir dir("dr_cli_overlap");
  REQUIRE(run({"research", "--question", "q1", "--breadth", "1", "--engine", "mock", "--out",
               dir.str(), "--index", "1"}) == 0);
  REQUIRE(run({"research", "--question", "q2", "--breadth", "2", "--engine", "mock", "--out",
               dir.str(), "--index", "2"}) == 0);
  TempDir out("dr_cli_overlap_out");
  REQUIRE(run({"compare", "--input", dir.str(), "--metrics", "rouge", "--out", out.str()}) == 0);
  std::string csv = slurp(out.path / "similarity_rouge_l.csv");
  // off-diagonal cells are empty fields
  CHECK(csv.find(",1.000000,\n") != std::string::npos);
}
