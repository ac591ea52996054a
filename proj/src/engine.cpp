#include "deepresearch/engine.hpp"

#include "deepresearch/errors.hpp"

#include <atomic>
#include <future>
#include <sstream>
#include <unordered_set>

namespace deepresearch {

namespace {

// Everything one subtree contributes, kept separate until merged in
// sibling order so concurrent execution cannot perturb the outcome.
struct SubtreeOutcome {
  std::vector<std::string> learnings;
  std::vector<std::string> urls;  // duplicates allowed here; deduplicated globally
  std::vector<TraceRecord> trace;
  int queries = 0;
  int documents = 0;
};

void append_subtree(SubtreeOutcome& into, SubtreeOutcome&& from) {
  into.learnings.insert(into.learnings.end(), std::make_move_iterator(from.learnings.begin()),
                        std::make_move_iterator(from.learnings.end()));
  into.urls.insert(into.urls.end(), std::make_move_iterator(from.urls.begin()),
                   std::make_move_iterator(from.urls.end()));
  into.trace.insert(into.trace.end(), std::make_move_iterator(from.trace.begin()),
                    std::make_move_iterator(from.trace.end()));
  into.queries += from.queries;
  into.documents += from.documents;
}

class EngineRun {
 public:
  EngineRun(const ResearchParams& params, LlmProvider& llm, SearchProvider& search,
            const AgentOptions& agent_options)
      : params_(params), llm_(llm), search_(search), agent_options_(agent_options) {}

  SubtreeOutcome explore(const std::string& context, int level, int breadth,
                         const std::vector<std::string>& inherited, const std::string& path) {
    std::vector<SerpQuery> queries;
    try {
      queries = generate_serp_queries(context, breadth, llm_, agent_options_);
    } catch (const ProviderError& e) {
      rethrow_with_path(e, path.empty() ? "root" : path);
    }
    // Empty frontier: the branch prunes silently.
    SubtreeOutcome merged;
    if (queries.empty()) return merged;

    std::vector<SubtreeOutcome> siblings(queries.size());
    auto run_node = [&](std::size_t i) {
      siblings[i] = run_query_node(queries[i], level, breadth, inherited,
                                   path.empty() ? std::to_string(i + 1)
                                                : path + "." + std::to_string(i + 1));
    };

    if (params_.jobs > 1 && queries.size() > 1) {
      std::vector<std::future<void>> pending;
      for (std::size_t i = 1; i < queries.size(); ++i) {
        pending.push_back(std::async(std::launch::async, run_node, i));
      }
      run_node(0);
      for (auto& f : pending) f.get();
    } else {
      for (std::size_t i = 0; i < queries.size(); ++i) run_node(i);
    }

    for (SubtreeOutcome& s : siblings) append_subtree(merged, std::move(s));
    return merged;
  }

 private:
  SubtreeOutcome run_query_node(const SerpQuery& query, int level, int breadth,
                                const std::vector<std::string>& inherited,
                                const std::string& path) {
    int count = ++query_count_;
    if (count > params_.max_total_queries) {
      throw BudgetExceeded("query budget of " + std::to_string(params_.max_total_queries) +
                           " exceeded at node " + path);
    }

    SubtreeOutcome out;
    std::vector<Document> docs;
    try {
      docs = search_.search(query.query, params_.per_query_doc_limit);
    } catch (const ProviderError& e) {
      rethrow_with_path(e, path);
    }
    out.queries = 1;
    out.documents = static_cast<int>(docs.size());
    int total_docs = doc_count_ += out.documents;
    if (total_docs > params_.max_total_documents) {
      throw BudgetExceeded("document budget of " + std::to_string(params_.max_total_documents) +
                           " exceeded at node " + path);
    }

    NodeResult result;
    try {
      result = summarize_results(query, docs, params_.max_learnings, params_.max_followups, llm_,
                                 agent_options_);
    } catch (const ProviderError& e) {
      rethrow_with_path(e, path);
    }

    TraceRecord record;
    record.level = level;
    record.query = query.query;
    record.research_goal = query.research_goal;
    record.n_docs = static_cast<int>(docs.size());
    record.learnings = result.learnings;
    record.followups = result.followups;
    out.trace.push_back(std::move(record));

    out.learnings = result.learnings;
    out.urls = result.source_urls;

    if (level < params_.depth) {
      std::vector<std::string> child_inherited = inherited;
      child_inherited.insert(child_inherited.end(), result.learnings.begin(),
                             result.learnings.end());
      std::string child_context = compose_context(query.research_goal, result.followups,
                                                  child_inherited);
      SubtreeOutcome child = explore(child_context, level + 1, next_breadth(breadth),
                                     child_inherited, path);
      append_subtree(out, std::move(child));
    }
    return out;
  }

  // Child context order is fixed: research goal, follow-up questions, then
  // the learnings snapshot the branch inherited at spawn time.
  static std::string compose_context(const std::string& research_goal,
                                     const std::vector<std::string>& followups,
                                     const std::vector<std::string>& learnings) {
    std::ostringstream ctx;
    ctx << "Previous research goal: " << research_goal << "\n";
    if (!followups.empty()) {
      ctx << "Follow-up questions:\n";
      for (const std::string& f : followups) ctx << "- " << f << "\n";
    }
    if (!learnings.empty()) {
      ctx << "Accumulated learnings:\n";
      for (const std::string& l : learnings) ctx << "- " << l << "\n";
    }
    return ctx.str();
  }

  [[noreturn]] static void rethrow_with_path(const ProviderError& e, const std::string& path) {
    throw ProviderError("node " + path + ": " + e.what());
  }

  const ResearchParams& params_;
  LlmProvider& llm_;
  SearchProvider& search_;
  const AgentOptions& agent_options_;
  std::atomic<int> query_count_{0};
  std::atomic<int> doc_count_{0};
};

}  // namespace

void ResearchParams::validate() const {
  if (question.empty()) throw Error("question must be non-empty");
  if (depth < 1) throw Error("depth must be >= 1");
  if (breadth < 1) throw Error("breadth must be >= 1");
  if (per_query_doc_limit < 1) throw Error("per_query_doc_limit must be >= 1");
  if (max_learnings < 1) throw Error("max_learnings must be >= 1");
  if (max_followups < 1) throw Error("max_followups must be >= 1");
  if (max_total_queries < 1 || max_total_documents < 1) {
    throw Error("budget caps must be >= 1");
  }
  if (jobs < 1) throw Error("jobs must be >= 1");
}

int next_breadth(int breadth) {
  if (breadth < 1) throw Error("next_breadth: breadth must be >= 1");
  return std::max(1, breadth / 2);
}

RecursionPlan recursion_plan(int depth, int breadth, int per_query_doc_limit) {
  if (depth < 1 || breadth < 1) throw Error("recursion_plan: depth and breadth must be >= 1");
  RecursionPlan plan;
  long long nodes_at_level = 0;
  int level_breadth = breadth;
  for (int level = 1; level <= depth; ++level) {
    plan.per_level_breadth.push_back(level_breadth);
    nodes_at_level = level == 1 ? level_breadth : nodes_at_level * level_breadth;
    plan.worst_case_queries += nodes_at_level;
    level_breadth = next_breadth(level_breadth);
  }
  plan.worst_case_documents = plan.worst_case_queries * per_query_doc_limit;
  return plan;
}

nlohmann::json TraceRecord::to_json() const {
  return nlohmann::json{{"level", level},
                        {"query", query},
                        {"research_goal", research_goal},
                        {"n_docs", n_docs},
                        {"learnings", learnings},
                        {"followups", followups}};
}

ResearchOutcome run_deep_research(const ResearchParams& params, LlmProvider& llm,
                                  SearchProvider& search, const AgentOptions& agent_options,
                                  const TraceSink& trace) {
  params.validate();

  std::string root_context = params.question;
  if (!params.feedback.empty()) {
    root_context += "\nAdditional feedback:\n" + params.feedback;
  }

  EngineRun run(params, llm, search, agent_options);
  SubtreeOutcome tree = run.explore(root_context, 1, params.breadth, {}, "");

  ResearchOutcome outcome;
  outcome.learnings = std::move(tree.learnings);
  outcome.stats.total_queries = tree.queries;
  outcome.stats.total_documents = tree.documents;
  for (int level = 1, b = params.breadth; level <= params.depth; ++level, b = next_breadth(b)) {
    outcome.stats.per_level_breadth.push_back(b);
  }

  std::unordered_set<std::string> seen;
  for (std::string& url : tree.urls) {
    if (seen.insert(url).second) outcome.visited_urls.push_back(std::move(url));
  }

  if (trace) {
    for (const TraceRecord& record : tree.trace) trace(record);
  }

  if (!outcome.learnings.empty()) {
    outcome.report_markdown =
        generate_report(root_context, outcome.learnings, outcome.visited_urls, llm, agent_options)
            .report_markdown;
  } else {
    // Nothing was learned (pruned or empty frontier); keep the artifact
    // shape without calling the report agent on an empty learning set.
    outcome.report_markdown = append_sources_section(
        "# Research Report\n\nNo learnings were collected for this run.", outcome.visited_urls);
  }
  return outcome;
}

}  // namespace deepresearch
