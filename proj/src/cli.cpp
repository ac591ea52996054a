#include "deepresearch/cli.hpp"

#include "deepresearch/corpus.hpp"
#include "deepresearch/errors.hpp"
#include "deepresearch/http_providers.hpp"
#include "deepresearch/mock_providers.hpp"
#include "deepresearch/quality.hpp"
#include "deepresearch/similarity.hpp"
#include "deepresearch/vocabulary.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

namespace deepresearch {

namespace {

namespace fs = std::filesystem;

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value != nullptr && *value != '\0' ? value : fallback;
}

// Optional JSON config (DR_CONFIG); flags > env > config file.
nlohmann::json load_config() {
  std::string path = env_or("DR_CONFIG", "");
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) return nlohmann::json::object();
  nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
  return parsed.is_object() ? parsed : nlohmann::json::object();
}

std::string config_string(const nlohmann::json& config, const std::string& key,
                          const std::string& fallback) {
  if (config.contains(key) && config[key].is_string()) return config[key].get<std::string>();
  return fallback;
}

struct ResearchArgs {
  ResearchParams params;
  std::string out_dir = ".";
  int index = -1;  // -1 = lowest unused in out_dir
  std::uint64_t seed = 0;
  std::string trace_path;
};

struct Providers {
  std::unique_ptr<LlmProvider> llm;
  std::unique_ptr<SearchProvider> search;
};

Providers make_providers(const ResearchArgs& args, const nlohmann::json& config) {
  Providers p;
  if (args.params.engine_id == "mock") {
    MockLlmOptions llm_options;
    llm_options.seed = args.seed;
    p.llm = std::make_unique<MockLlm>(llm_options);
    MockSearchOptions search_options;
    search_options.seed = args.seed;
    p.search = std::make_unique<MockSearch>(search_options);
    return p;
  }

  std::string llm_key = env_or("DR_LLM_API_KEY", config_string(config, "llm_api_key", ""));
  if (llm_key.empty()) {
    throw ProviderError("DR_LLM_API_KEY is required for engine '" + args.params.engine_id + "'");
  }
  std::string llm_base =
      env_or("DR_LLM_BASE_URL", config_string(config, "llm_base_url", "https://api.openai.com"));
  p.llm = std::make_unique<HttpLlmClient>(llm_base, llm_key, args.params.model_id);

  if (args.params.engine_id == "orkg") {
    std::string base = config_string(config, "scholarly_base_url", "https://api.ask.orkg.org");
    p.search = std::make_unique<ScholarlyIndexClient>(base);
  } else if (args.params.engine_id == "web") {
    std::string key = env_or("DR_SEARCH_API_KEY", config_string(config, "search_api_key", ""));
    if (key.empty()) throw ProviderError("DR_SEARCH_API_KEY is required for engine 'web'");
    std::string base =
        config_string(config, "web_search_base_url", "https://api.firecrawl.dev");
    p.search = std::make_unique<WebCrawlClient>(base, key);
  } else {
    throw Error("unknown engine '" + args.params.engine_id + "' (expected mock, orkg or web)");
  }
  return p;
}

int lowest_unused_index(const fs::path& dir) {
  std::set<int> used;
  if (fs::exists(dir)) {
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (!entry.is_regular_file()) continue;
      try {
        used.insert(parse_filename(entry.path().filename().string()).index);
      } catch (const MalformedName&) {
      }
    }
  }
  int index = 1;
  while (used.count(index)) ++index;
  return index;
}

int cmd_research(const ResearchArgs& args_in) {
  ResearchArgs args = args_in;
  nlohmann::json config = load_config();
  args.params.validate();

  fs::create_directories(args.out_dir);
  if (args.index < 0) args.index = lowest_unused_index(args.out_dir);

  ReportName name{args.index, args.params.model_id, args.params.engine_id, args.params.depth,
                  args.params.breadth};
  std::string filename = encode_filename(name);  // validates the identifiers early

  Providers providers = make_providers(args, config);

  std::ofstream trace_out;
  TraceSink sink;
  if (!args.trace_path.empty()) {
    trace_out.open(args.trace_path);
    if (!trace_out) throw Error("cannot open trace file '" + args.trace_path + "'");
    sink = [&trace_out](const TraceRecord& record) { trace_out << record.to_json() << "\n"; };
  }

  AgentOptions agent_options;
  std::string prompt_dir = env_or("DR_PROMPT_DIR", config_string(config, "prompt_dir", ""));
  if (!prompt_dir.empty()) {
    agent_options.templates = PromptTemplates::load_dir(prompt_dir);
  }
  agent_options.warn = [](const std::string& message) {
    std::cerr << "warning: " << message << "\n";
  };

  RunManifest manifest;
  manifest.params = args.params;
  manifest.started_at = iso_timestamp();
  ResearchOutcome outcome =
      run_deep_research(args.params, *providers.llm, *providers.search, agent_options, sink);
  manifest.finished_at = iso_timestamp();
  manifest.stats = outcome.stats;
  manifest.llm_provider = providers.llm->model_id();
  manifest.search_provider = providers.search->engine_id();

  fs::path report_path = fs::path(args.out_dir) / filename;
  manifest.output_path = report_path.string();
  {
    std::ofstream out(report_path);
    if (!out) throw Error("cannot write report file '" + report_path.string() + "'");
    out << outcome.report_markdown;
  }
  {
    fs::path manifest_path = report_path;
    manifest_path += ".manifest.json";
    std::ofstream out(manifest_path);
    out << manifest.to_json().dump(2) << "\n";
  }

  std::cout << "report: " << report_path.string() << "\n"
            << "queries: " << outcome.stats.total_queries
            << "  documents: " << outcome.stats.total_documents
            << "  unique sources: " << outcome.visited_urls.size()
            << "  learnings: " << outcome.learnings.size() << "\n"
            << "per-level breadth:";
  for (int b : outcome.stats.per_level_breadth) std::cout << ' ' << b;
  std::cout << "\n";
  return kExitOk;
}

struct ScoreArgs {
  std::string input_dir;
  std::string vocab_path;
  std::string weights_path;
  std::string out_dir = ".";
};

ScoreOptions load_score_options(const std::string& weights_path) {
  ScoreOptions options;
  if (weights_path.empty()) return options;
  std::ifstream in(weights_path);
  if (!in) throw Error("cannot open weights file '" + weights_path + "'");
  nlohmann::json parsed = nlohmann::json::parse(in, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error("weights file must be a JSON object");
  }
  if (parsed.contains("weights")) {
    const nlohmann::json& w = parsed["weights"];
    auto get = [&](const char* key, double fallback) {
      return w.contains(key) ? w[key].get<double>() : fallback;
    };
    options.weights.depth = get("depth", options.weights.depth);
    options.weights.breadth = get("breadth", options.weights.breadth);
    options.weights.ecological = get("ecological", options.weights.ecological);
    options.weights.rigor = get("rigor", options.weights.rigor);
    options.weights.innovation = get("innovation", options.weights.innovation);
    options.weights.density = get("density", options.weights.density);
  }
  if (parsed.contains("modes") && parsed["modes"].is_object()) {
    for (auto it = parsed["modes"].begin(); it != parsed["modes"].end(); ++it) {
      std::string mode = it.value().get<std::string>();
      if (mode != "occurrences" && mode != "unique") {
        throw Error("mode for '" + it.key() + "' must be 'occurrences' or 'unique'");
      }
      options.mode_overrides[it.key()] =
          mode == "unique" ? CountMode::unique : CountMode::occurrences;
    }
  }
  if (parsed.contains("temporal_zero_policy")) {
    options.temporal.zero_policy = parsed["temporal_zero_policy"].get<double>();
  }
  options.weights.validate();
  return options;
}

int cmd_score(const ScoreArgs& args) {
  if (!fs::is_directory(args.input_dir)) {
    std::cerr << "error: --input '" << args.input_dir << "' is not a directory\n";
    return kExitUsage;
  }
  Vocabulary vocab =
      args.vocab_path.empty() ? default_vocabulary() : load_vocabulary_json(args.vocab_path);
  ScoreOptions options = load_score_options(args.weights_path);

  CorpusLoad corpus = load_corpus(args.input_dir);
  for (const std::string& skipped : corpus.skipped) {
    std::cerr << "warning: skipping malformed report name '" << skipped << "'\n";
  }
  std::size_t total = 0;
  std::vector<std::vector<QualityScores>> scores;
  for (const ConfigGroup& group : corpus.groups) {
    std::vector<QualityScores> group_scores;
    for (const auto& [index, record] : group.records) {
      group_scores.push_back(score_report(record, vocab, options));
      ++total;
    }
    scores.push_back(std::move(group_scores));
  }
  if (total == 0) {
    std::cerr << "error: no scorable reports in '" << args.input_dir << "'\n";
    return kExitInternal;
  }

  fs::create_directories(args.out_dir);
  fs::path per_report = fs::path(args.out_dir) / "report_scores.csv";
  fs::path aggregate = fs::path(args.out_dir) / "config_scores.csv";
  fs::path manifest = fs::path(args.out_dir) / "corpus_manifest.csv";
  {
    std::ofstream out(per_report);
    write_scores_csv(out, corpus.groups, scores);
  }
  {
    std::ofstream out(aggregate);
    write_aggregate_csv(out, corpus.groups, scores);
  }
  {
    std::ofstream out(manifest);
    write_manifest_csv(out, corpus.groups);
  }
  std::cout << "scored " << total << " reports across " << corpus.groups.size()
            << " configurations\n"
            << "wrote " << per_report.string() << ", " << aggregate.string() << " and "
            << manifest.string() << "\n";
  return kExitOk;
}

struct CompareArgs {
  std::string input_dir;
  std::vector<std::string> metrics{"rouge"};
  std::string embed_endpoint;
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
};

std::unique_ptr<Embedder> make_embedder(const CompareArgs& args) {
  std::string endpoint = args.embed_endpoint.empty()
                             ? env_or("DR_EMBED_ENDPOINT", "")
                             : args.embed_endpoint;
  if (endpoint.empty()) return nullptr;
  if (endpoint == "stub") return std::make_unique<HashedStubEmbedder>(16, args.seed);
  if (endpoint == "stub-orthonormal") return std::make_unique<OrthonormalStubEmbedder>();
  return std::make_unique<HttpEmbedder>(endpoint);
}

int cmd_compare(const CompareArgs& args) {
  if (!fs::is_directory(args.input_dir)) {
    std::cerr << "error: --input '" << args.input_dir << "' is not a directory\n";
    return kExitUsage;
  }
  std::vector<Metric> metrics;
  for (const std::string& name : args.metrics) metrics.push_back(metric_from_name(name));

  CorpusLoad corpus = load_corpus(args.input_dir);
  if (corpus.groups.empty()) {
    std::cerr << "error: no reports in '" << args.input_dir << "'\n";
    return kExitInternal;
  }

  std::unique_ptr<Embedder> embedder = make_embedder(args);
  for (Metric metric : metrics) {
    if (metric != Metric::rouge_l && embedder == nullptr) {
      std::cerr << "error: metric " << metric_name(metric)
                << " needs --embed-endpoint or DR_EMBED_ENDPOINT\n";
      return kExitProvider;
    }
  }

  fs::create_directories(args.out_dir);
  PairwiseOptions options;
  options.jobs = args.jobs;
  for (Metric metric : metrics) {
    SimilarityMatrix matrix = pairwise_matrix(corpus.groups, metric, embedder.get(), options);
    int missing = 0;
    for (int i = 0; i < matrix.pair_counts.rows(); ++i) {
      for (int j = 0; j < matrix.pair_counts.cols(); ++j) {
        if (matrix.pair_counts(i, j) == 0) ++missing;
      }
    }
    if (missing > 0) {
      std::cerr << "warning: " << missing << " cell(s) have no aligned reports and stay empty\n";
    }
    fs::path values_path =
        fs::path(args.out_dir) / ("similarity_" + metric_name(metric) + ".csv");
    fs::path counts_path = fs::path(args.out_dir) / ("pairs_" + metric_name(metric) + ".csv");
    {
      std::ofstream out(values_path);
      write_matrix_csv(out, matrix);
    }
    {
      std::ofstream out(counts_path);
      write_pair_counts_csv(out, matrix);
    }
    std::cout << "wrote " << values_path.string() << " and " << counts_path.string() << "\n";
  }
  return kExitOk;
}

}  // namespace

nlohmann::json RunManifest::to_json() const {
  return nlohmann::json{
      {"params",
       {{"question", params.question},
        {"feedback", params.feedback},
        {"depth", params.depth},
        {"breadth", params.breadth},
        {"model", params.model_id},
        {"engine", params.engine_id},
        {"per_query_doc_limit", params.per_query_doc_limit},
        {"max_learnings", params.max_learnings},
        {"max_followups", params.max_followups}}},
      {"started_at", started_at},
      {"finished_at", finished_at},
      {"output_path", output_path},
      {"stats",
       {{"total_queries", stats.total_queries},
        {"total_documents", stats.total_documents},
        {"per_level_breadth", stats.per_level_breadth}}},
      {"llm_provider", llm_provider},
      {"search_provider", search_provider}};
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Recursive depth/breadth-controlled research runs and report evaluation"};
  app.require_subcommand(1);

  ResearchArgs research;
  CLI::App* research_cmd =
      app.add_subcommand("research", "Run the recursive research workflow and write a report");
  research_cmd->add_option("--question", research.params.question, "Research question")
      ->required();
  research_cmd->add_option("--feedback", research.params.feedback,
                           "Optional feedback folded into the first query round");
  research_cmd->add_option("--depth", research.params.depth, "Recursive layers (>= 1)")
      ->check(CLI::PositiveNumber);
  research_cmd->add_option("--breadth", research.params.breadth, "Level-1 queries (>= 1)")
      ->check(CLI::PositiveNumber);
  research_cmd->add_option("--model", research.params.model_id, "Model identifier (no '_')");
  research_cmd
      ->add_option("--engine", research.params.engine_id, "Search engine: mock, orkg or web")
      ->check(CLI::IsMember({"mock", "orkg", "web"}));
  research_cmd->add_option("--out", research.out_dir, "Output directory");
  research_cmd->add_option("--index", research.index,
                           "Question index for the filename (default: lowest unused)");
  research_cmd->add_option("--seed", research.seed, "Mock provider seed");
  research_cmd->add_option("--trace", research.trace_path, "Write a JSONL node trace here");
  research_cmd->add_option("--jobs", research.params.jobs, "Sibling-node worker cap")
      ->check(CLI::PositiveNumber);
  research_cmd
      ->add_option("--doc-limit", research.params.per_query_doc_limit, "Documents per query")
      ->check(CLI::PositiveNumber);
  research_cmd->add_option("--max-learnings", research.params.max_learnings,
                           "Learnings kept per node")
      ->check(CLI::PositiveNumber);
  research_cmd->add_option("--max-followups", research.params.max_followups,
                           "Follow-up questions kept per node")
      ->check(CLI::PositiveNumber);

  ScoreArgs score;
  CLI::App* score_cmd =
      app.add_subcommand("score", "Score a directory of reports on the six quality dimensions");
  score_cmd->add_option("--input", score.input_dir, "Directory of <idx>_<model>_<engine>_dD_bB.md files")
      ->required();
  score_cmd->add_option("--vocab", score.vocab_path, "Vocabulary JSON (default: built-in)");
  score_cmd->add_option("--weights", score.weights_path,
                        "JSON with composite weights / mode overrides");
  score_cmd->add_option("--out", score.out_dir, "Output directory for the two CSVs");

  CompareArgs compare;
  CLI::App* compare_cmd =
      app.add_subcommand("compare", "Pairwise similarity matrices between configuration groups");
  compare_cmd->add_option("--input", compare.input_dir, "Directory of report files")->required();
  compare_cmd
      ->add_option("--metrics", compare.metrics,
                   "Comma-separated subset of rouge,bertscore,wmd")
      ->delimiter(',');
  compare_cmd->add_option("--embed-endpoint", compare.embed_endpoint,
                          "Embedding endpoint URL, or 'stub' / 'stub-orthonormal'");
  compare_cmd->add_option("--out", compare.out_dir, "Output directory for matrix CSVs");
  compare_cmd->add_option("--jobs", compare.jobs, "Matrix cell worker cap")
      ->check(CLI::PositiveNumber);
  compare_cmd->add_option("--seed", compare.seed, "Stub embedder seed");

  try {
    app.parse(argc, const_cast<char**>(argv));
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (research_cmd->parsed()) return cmd_research(research);
    if (score_cmd->parsed()) return cmd_score(score);
    if (compare_cmd->parsed()) return cmd_compare(compare);
    return kExitUsage;
  } catch (const ProviderError& e) {
    std::cerr << "provider error: " << e.what() << "\n";
    return kExitProvider;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace deepresearch
