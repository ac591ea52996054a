#pragma once

#include "deepresearch/agents.hpp"
#include "deepresearch/providers.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <vector>

namespace deepresearch {

struct ResearchParams {
  std::string question;
  std::string feedback;  // optional user feedback folded into the level-1 context
  int depth = 1;         // recursive layers
  int breadth = 3;       // queries per node at level 1; halves (clamped) per level
  std::string model_id = "mock";
  std::string engine_id = "mock";
  int per_query_doc_limit = 10;
  int max_learnings = 3;
  int max_followups = 3;

  // Hard caps bounding runaway recursion with misbehaving providers.
  int max_total_queries = 512;
  int max_total_documents = 5120;

  // Worker cap for sibling nodes; 1 = strictly sequential.
  int jobs = 1;

  void validate() const;  // throws Error on an invariant breach
};

struct EngineStats {
  int total_queries = 0;    // realized SERP query nodes
  int total_documents = 0;  // documents retrieved before deduplication
  std::vector<int> per_level_breadth;  // query budget per node at levels 1..depth
};

struct ResearchOutcome {
  std::string report_markdown;
  std::vector<std::string> learnings;     // depth-first, left-to-right tree order
  std::vector<std::string> visited_urls;  // first-seen order, no duplicates
  EngineStats stats;
};

// One line of the optional JSONL trace, emitted per node in tree order.
struct TraceRecord {
  int level = 0;
  std::string query;
  std::string research_goal;
  int n_docs = 0;
  std::vector<std::string> learnings;
  std::vector<std::string> followups;

  nlohmann::json to_json() const;
};

using TraceSink = std::function<void(const TraceRecord&)>;

// Query budget for the next recursion level: breadth // 2, clamped to 1 so
// levels below breadth-exhaustion still run one query.
int next_breadth(int breadth);

struct RecursionPlan {
  std::vector<int> per_level_breadth;
  long long worst_case_queries = 0;
  long long worst_case_documents = 0;
};

// Dry-run cost preview: what run_deep_research realizes when every node
// produces its full query budget.
RecursionPlan recursion_plan(int depth, int breadth, int per_query_doc_limit = 10);

// Drives the recursive explore-summarize-refine loop and final report
// generation. Sibling nodes may run concurrently (params.jobs > 1); results
// are merged in tree order, so outcomes are byte-identical for any job
// count given deterministic providers.
ResearchOutcome run_deep_research(const ResearchParams& params, LlmProvider& llm,
                                  SearchProvider& search, const AgentOptions& agent_options = {},
                                  const TraceSink& trace = nullptr);

}  // namespace deepresearch
