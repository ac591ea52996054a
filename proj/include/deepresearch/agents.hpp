#pragma once

#include "deepresearch/providers.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace deepresearch {

// A search-engine-optimized sub-query plus the goal it serves.
struct SerpQuery {
  std::string query;
  std::string research_goal;
};

// What one query node contributes: condensed insights, questions for the
// next round, and the URLs of every document that fed the summary
// (order preserved, duplicates kept — deduplication is the engine's job).
struct NodeResult {
  std::vector<std::string> learnings;
  std::vector<std::string> followups;
  std::vector<std::string> source_urls;
};

struct ReportPayload {
  std::string report_markdown;
};

// Prompt templates are configuration, not code. Placeholders: {context},
// {n}, {query}, {goal}, {contents}, {max_learnings}, {max_followups},
// {prompt}, {learnings}.
struct PromptTemplates {
  std::string system;
  std::string serp_queries;
  std::string summarize;
  std::string report;

  static PromptTemplates defaults();
  // Reads system.txt, serp_queries.txt, summarize.txt, report.txt from a
  // directory; missing files keep their default text.
  static PromptTemplates load_dir(const std::string& dir);
};

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values);

struct AgentOptions {
  PromptTemplates templates = PromptTemplates::defaults();
  // Bounded corrective re-prompts after a schema violation.
  int max_schema_retries = 2;
  std::function<void(const std::string&)> warn;
};

// Parses and type-checks raw LLM text against one of the three shipped
// schemas. Unknown extra fields are rejected for "report" and tolerated
// elsewhere. Throws SchemaViolation with a path to the offending field.
nlohmann::json validate_structured_output(const std::string& raw, const std::string& schema_id);

// Asks for up to n SERP-style queries with research goals. Over-long
// model output is truncated to n with a warning.
std::vector<SerpQuery> generate_serp_queries(const std::string& context, int n,
                                             LlmProvider& llm, const AgentOptions& options = {});

// Merges the documents into one summarization prompt and extracts up to
// max_learnings learnings and max_followups follow-up questions. An empty
// document list short-circuits to an empty NodeResult without an LLM call.
NodeResult summarize_results(const SerpQuery& query, const std::vector<Document>& documents,
                             int max_learnings, int max_followups, LlmProvider& llm,
                             const AgentOptions& options = {});

// Synthesizes the final Markdown report and appends the Sources section
// itself — the URL list is never delegated to the model.
ReportPayload generate_report(const std::string& original_prompt,
                              const std::vector<std::string>& learnings,
                              const std::vector<std::string>& visited_urls, LlmProvider& llm,
                              const AgentOptions& options = {});

// Appends "## Sources" with one list item per URL, dropping any
// model-authored sources section first.
std::string append_sources_section(std::string body, const std::vector<std::string>& urls);

}  // namespace deepresearch
