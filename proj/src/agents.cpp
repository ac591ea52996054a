#include "deepresearch/agents.hpp"

#include "deepresearch/corpus.hpp"
#include "deepresearch/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace deepresearch {

namespace {

std::string read_file_or(const std::filesystem::path& path, const std::string& fallback) {
  std::ifstream in(path);
  if (!in) return fallback;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string require_string(const nlohmann::json& node, const std::string& path,
                           bool allow_empty = false) {
  if (!node.is_string()) throw SchemaViolation(path, "expected a string");
  std::string value = node.get<std::string>();
  if (!allow_empty && value.empty()) throw SchemaViolation(path, "must be non-empty");
  return value;
}

nlohmann::json parse_json(const std::string& raw) {
  nlohmann::json parsed = nlohmann::json::parse(raw, nullptr, false);
  if (parsed.is_discarded()) throw SchemaViolation("$", "response is not valid JSON");
  return parsed;
}

nlohmann::json validate_with_retries(const std::string& prompt, const std::string& schema_id,
                                     LlmProvider& llm, const AgentOptions& options) {
  std::string current = prompt;
  int attempts_left = options.max_schema_retries;
  for (;;) {
    std::string raw = llm.complete_structured(current, schema_id);
    try {
      return validate_structured_output(raw, schema_id);
    } catch (const SchemaViolation& violation) {
      if (attempts_left == 0) throw;
      --attempts_left;
      if (options.warn) {
        options.warn(std::string("schema violation, re-prompting: ") + violation.what());
      }
      current = prompt + "\n\nThe previous response was rejected (" + violation.what() +
                "). Respond again with only valid JSON for this request.";
    }
  }
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  PromptTemplates t;
  t.system =
      "You are a meticulous research assistant working inside an automated "
      "literature-exploration pipeline. Today is part of a multi-step run: your "
      "outputs feed later steps verbatim, so respond with only the requested JSON, "
      "keep every item self-contained and information-dense, and never invent "
      "sources or URLs.";
  t.serp_queries =
      "Given the research context below, produce up to {n} search-engine-optimized "
      "(SERP-style) queries that would surface the most relevant literature. Queries "
      "must be keyword-style rather than conversational, mutually non-overlapping, "
      "and each must come with the research goal it serves.\n\n"
      "Context:\n{context}\n\n"
      "Respond with JSON: {\"queries\": [{\"query\": \"...\", \"researchGoal\": \"...\"}]}.";
  t.summarize =
      "The query \"{query}\" (goal: {goal}) returned the documents below. Extract up "
      "to {max_learnings} learnings — concise, information-dense insights, each "
      "standing on its own — and up to {max_followups} follow-up questions that would "
      "deepen the investigation.\n\n"
      "Documents:\n{contents}\n\n"
      "Respond with JSON: {\"learnings\": [\"...\"], \"followUpQuestions\": [\"...\"]}.";
  t.report =
      "Write a comprehensive Markdown research report answering the prompt below, "
      "weaving together every learning provided. Aim for the length and coherence of "
      "a multi-page literature overview. Do not add a sources or references section; "
      "it is appended separately.\n\n"
      "Prompt:\n{prompt}\n\n"
      "Learnings:\n{learnings}\n\n"
      "Respond with JSON: {\"reportMarkdown\": \"...\"}.";
  return t;
}

PromptTemplates PromptTemplates::load_dir(const std::string& dir) {
  PromptTemplates t = defaults();
  std::filesystem::path base(dir);
  t.system = read_file_or(base / "system.txt", t.system);
  t.serp_queries = read_file_or(base / "serp_queries.txt", t.serp_queries);
  t.summarize = read_file_or(base / "summarize.txt", t.summarize);
  t.report = read_file_or(base / "report.txt", t.report);
  return t;
}

std::string render_template(std::string_view tmpl,
                            const std::map<std::string, std::string>& values) {
  std::string out;
  out.reserve(tmpl.size());
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    std::size_t open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    std::size_t close = tmpl.find('}', open);
    if (close == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    std::string key(tmpl.substr(open + 1, close - open - 1));
    auto it = values.find(key);
    if (it != values.end()) {
      out.append(it->second);
    } else {
      out.append(tmpl.substr(open, close - open + 1));
    }
    pos = close + 1;
  }
  return out;
}

nlohmann::json validate_structured_output(const std::string& raw, const std::string& schema_id) {
  if (schema_id == "serp_queries") {
    nlohmann::json parsed = parse_json(raw);
    if (!parsed.is_object()) throw SchemaViolation("$", "expected an object");
    if (!parsed.contains("queries")) throw SchemaViolation("$.queries", "missing required field");
    const nlohmann::json& queries = parsed["queries"];
    if (!queries.is_array()) throw SchemaViolation("$.queries", "expected an array");
    for (std::size_t i = 0; i < queries.size(); ++i) {
      std::string at = "$.queries[" + std::to_string(i) + "]";
      if (!queries[i].is_object()) throw SchemaViolation(at, "expected an object");
      if (!queries[i].contains("query")) throw SchemaViolation(at + ".query", "missing required field");
      require_string(queries[i]["query"], at + ".query");
      if (!queries[i].contains("researchGoal")) {
        throw SchemaViolation(at + ".researchGoal", "missing required field");
      }
      require_string(queries[i]["researchGoal"], at + ".researchGoal");
    }
    return parsed;
  }
  if (schema_id == "node_result") {
    nlohmann::json parsed = parse_json(raw);
    if (!parsed.is_object()) throw SchemaViolation("$", "expected an object");
    for (const char* key : {"learnings", "followUpQuestions"}) {
      std::string at = std::string("$.") + key;
      if (!parsed.contains(key)) throw SchemaViolation(at, "missing required field");
      if (!parsed[key].is_array()) throw SchemaViolation(at, "expected an array");
      for (std::size_t i = 0; i < parsed[key].size(); ++i) {
        require_string(parsed[key][i], at + "[" + std::to_string(i) + "]");
      }
    }
    return parsed;
  }
  if (schema_id == "report") {
    nlohmann::json parsed = parse_json(raw);
    if (!parsed.is_object()) throw SchemaViolation("$", "expected an object");
    if (!parsed.contains("reportMarkdown")) {
      throw SchemaViolation("$.reportMarkdown", "missing required field");
    }
    require_string(parsed["reportMarkdown"], "$.reportMarkdown");
    // The report schema is closed: a single field, nothing else.
    for (auto it = parsed.begin(); it != parsed.end(); ++it) {
      if (it.key() != "reportMarkdown") {
        throw SchemaViolation("$." + it.key(), "unknown field not allowed here");
      }
    }
    return parsed;
  }
  throw SchemaViolation("$", "unknown schema_id '" + schema_id + "'");
}

std::vector<SerpQuery> generate_serp_queries(const std::string& context, int n,
                                             LlmProvider& llm, const AgentOptions& options) {
  if (n < 1) throw Error("generate_serp_queries: n must be >= 1");
  if (context.empty()) throw Error("generate_serp_queries: context must be non-empty");

  std::string prompt = options.templates.system + "\n\n" +
                       render_template(options.templates.serp_queries,
                                       {{"context", context}, {"n", std::to_string(n)}});
  nlohmann::json parsed = validate_with_retries(prompt, "serp_queries", llm, options);

  std::vector<SerpQuery> queries;
  for (const nlohmann::json& item : parsed["queries"]) {
    queries.push_back(SerpQuery{item["query"].get<std::string>(),
                                item["researchGoal"].get<std::string>()});
  }
  if (queries.size() > static_cast<std::size_t>(n)) {
    if (options.warn) {
      options.warn("model produced " + std::to_string(queries.size()) + " queries, keeping first " +
                   std::to_string(n));
    }
    queries.resize(static_cast<std::size_t>(n));
  }
  return queries;
}

NodeResult summarize_results(const SerpQuery& query, const std::vector<Document>& documents,
                             int max_learnings, int max_followups, LlmProvider& llm,
                             const AgentOptions& options) {
  NodeResult result;
  if (documents.empty()) return result;

  std::ostringstream contents;
  for (std::size_t i = 0; i < documents.size(); ++i) {
    contents << "--- Document " << (i + 1) << " ---\n";
    if (documents[i].title) contents << "Title: " << *documents[i].title << "\n";
    contents << documents[i].body << "\n";
    result.source_urls.push_back(documents[i].url);
  }

  std::string prompt =
      options.templates.system + "\n\n" +
      render_template(options.templates.summarize,
                      {{"query", query.query},
                       {"goal", query.research_goal},
                       {"contents", contents.str()},
                       {"max_learnings", std::to_string(max_learnings)},
                       {"max_followups", std::to_string(max_followups)}});
  nlohmann::json parsed = validate_with_retries(prompt, "node_result", llm, options);

  for (const nlohmann::json& l : parsed["learnings"]) {
    result.learnings.push_back(l.get<std::string>());
  }
  for (const nlohmann::json& f : parsed["followUpQuestions"]) {
    result.followups.push_back(f.get<std::string>());
  }
  auto truncate = [&](std::vector<std::string>& items, int cap, const char* what) {
    if (items.size() > static_cast<std::size_t>(cap)) {
      if (options.warn) {
        options.warn(std::string("model produced ") + std::to_string(items.size()) + " " + what +
                     ", keeping first " + std::to_string(cap));
      }
      items.resize(static_cast<std::size_t>(cap));
    }
  };
  truncate(result.learnings, max_learnings, "learnings");
  truncate(result.followups, max_followups, "follow-ups");
  return result;
}

std::string append_sources_section(std::string body, const std::vector<std::string>& urls) {
  std::size_t existing = sources_heading_pos(body);
  if (existing != std::string::npos) body.resize(existing);
  while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.pop_back();
  body.append("\n\n## Sources\n\n");
  for (const std::string& url : urls) {
    body.append("- ").append(url).append("\n");
  }
  return body;
}

ReportPayload generate_report(const std::string& original_prompt,
                              const std::vector<std::string>& learnings,
                              const std::vector<std::string>& visited_urls, LlmProvider& llm,
                              const AgentOptions& options) {
  if (learnings.empty()) throw Error("generate_report: learnings must be non-empty");

  std::ostringstream learning_block;
  for (const std::string& l : learnings) learning_block << "- " << l << "\n";

  std::string prompt = options.templates.system + "\n\n" +
                       render_template(options.templates.report,
                                       {{"prompt", original_prompt},
                                        {"learnings", learning_block.str()}});
  nlohmann::json parsed = validate_with_retries(prompt, "report", llm, options);

  ReportPayload payload;
  payload.report_markdown =
      append_sources_section(parsed["reportMarkdown"].get<std::string>(), visited_urls);
  return payload;
}

}  // namespace deepresearch
