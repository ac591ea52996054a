#include "deepresearch/quality.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <regex>

namespace deepresearch {

namespace {

double clamp_unit(double x) { return std::min(x, 1.0); }

// Occurrence scan with span claiming: a longer phrase takes its span first
// and shorter phrases cannot re-count inside it.
struct CategoryCount {
  int occurrences = 0;
  int unique = 0;
};

CategoryCount scan_category(const std::string& lowered_text,
                            const std::vector<std::string>& phrases) {
  std::vector<const std::string*> order;
  order.reserve(phrases.size());
  for (const std::string& p : phrases) order.push_back(&p);
  std::sort(order.begin(), order.end(), [](const std::string* a, const std::string* b) {
    if (a->size() != b->size()) return a->size() > b->size();
    return *a < *b;
  });

  std::vector<char> claimed(lowered_text.size(), 0);
  CategoryCount count;
  for (const std::string* phrase : order) {
    if (phrase->empty()) continue;
    int hits = 0;
    std::size_t pos = 0;
    while ((pos = lowered_text.find(*phrase, pos)) != std::string::npos) {
      bool free = true;
      for (std::size_t k = pos; k < pos + phrase->size(); ++k) {
        if (claimed[k]) {
          free = false;
          break;
        }
      }
      if (free) {
        std::fill(claimed.begin() + static_cast<std::ptrdiff_t>(pos),
                  claimed.begin() + static_cast<std::ptrdiff_t>(pos + phrase->size()), 1);
        ++hits;
        pos += phrase->size();
      } else {
        ++pos;
      }
    }
    if (hits > 0) {
      count.occurrences += hits;
      ++count.unique;
    }
  }
  return count;
}

int count_regex(const std::string& text, const std::regex& pattern) {
  auto begin = std::sregex_iterator(text.begin(), text.end(), pattern);
  return static_cast<int>(std::distance(begin, std::sregex_iterator()));
}

// Quantified intervals, numeric durations, and year ranges. Year ranges
// come first so "1990-2020" is not split into a bare duration.
const std::regex& specific_temporal_regex() {
  static const std::regex pattern(
      R"((?:19|20)\d{2}\s*(?:-|to)\s*(?:19|20)\d{2})"
      R"(|\b\d+(?:\.\d+)?(?:\s*(?:-|to)\s*\d+(?:\.\d+)?)?\s*(?:years?|months?|weeks?|days?|decades?|hours?|seasons?)\b)",
      std::regex::ECMAScript | std::regex::icase);
  return pattern;
}

// UTF-8 en/em dashes fold to '-' so "1990–2020" style ranges match
// without multibyte regex alternations.
std::string normalize_dashes(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size();) {
    if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        (static_cast<unsigned char>(text[i + 2]) == 0x93 ||
         static_cast<unsigned char>(text[i + 2]) == 0x94)) {
      out.push_back('-');
      i += 3;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

}  // namespace

int count_vocab_matches(const std::string& text, const std::string& category,
                        const Vocabulary& vocab, CountMode mode) {
  const std::vector<std::string>& phrases = vocab.at(category);
  CategoryCount count = scan_category(to_lower(text), phrases);
  return mode == CountMode::occurrences ? count.occurrences : count.unique;
}

const std::vector<std::string>& TemporalOptions::default_vague_phrases() {
  static const std::vector<std::string> phrases{
      "long-term",  "long term",   "short-term",    "short term", "several years",
      "several decades", "many years", "historically", "recently", "over time",
      "in the past", "eventually", "in the long run", "in the future",
  };
  return phrases;
}

double temporal_precision(const std::string& text, const TemporalOptions& options) {
  std::string normalized = normalize_dashes(text);
  int specific = count_regex(normalized, specific_temporal_regex());

  const std::vector<std::string>& vague_list =
      options.vague_phrases.empty() ? TemporalOptions::default_vague_phrases()
                                    : options.vague_phrases;
  CategoryCount vague = scan_category(to_lower(normalized), vague_list);

  int total = specific + vague.occurrences;
  if (total == 0) return options.zero_policy;
  return static_cast<double>(specific) / static_cast<double>(total);
}

const std::vector<std::string>& default_citation_patterns() {
  static const std::vector<std::string> patterns{
      // (Smith et al., 2021) / (e.g., Smith & Jones 2020a)
      R"(\((?:e\.g\.,?\s*|see\s+)?[A-Z][A-Za-z'\-]+[^()]*(?:19|20)\d{2}[a-z]?\))",
      // Smith et al. (2021) / Smith and Jones (2020)
      R"([A-Z][A-Za-z'\-]+(?:\s+(?:&|and)\s+[A-Z][A-Za-z'\-]+)?\s+(?:et al\.?\s*)?\(\s*(?:19|20)\d{2}[a-z]?\s*\))",
  };
  return patterns;
}

int count_citations(const std::string& text, const std::vector<std::string>& patterns) {
  const std::vector<std::string>& effective =
      patterns.empty() ? default_citation_patterns() : patterns;
  int total = 0;
  for (const std::string& pattern : effective) {
    total += count_regex(text, std::regex(pattern));
  }
  return total;
}

double score_depth(const DepthSignals& s) {
  return clamp_unit(0.4 * clamp_unit(s.m_mech / 20.0) + 0.3 * clamp_unit(s.m_causal / 10.0) +
                    0.3 * s.m_temporal);
}

double score_breadth(const BreadthSignals& s) {
  return clamp_unit(0.25 * clamp_unit(s.g_regions / 8.0) + 0.25 * clamp_unit(s.i_types / 12.0) +
                    0.25 * clamp_unit(s.d_dims / 8.0) + 0.15 * clamp_unit(s.e_services / 10.0) +
                    0.10 * clamp_unit(s.s_scales / 6.0));
}

double score_ecological(const EcologicalSignals& s) {
  return clamp_unit(0.4 * clamp_unit(s.c_conservation / 8.0) +
                    0.3 * clamp_unit(s.c_climate / 6.0) +
                    0.3 * clamp_unit(s.e_complexity / 5.0));
}

double score_rigor(const RigorSignals& s) {
  return clamp_unit(0.4 * clamp_unit(s.r_statistical / 5.0) + 0.4 * clamp_unit(s.c_formal / 20.0) +
                    0.2 * clamp_unit(s.u_acknowledgment / 5.0));
}

double score_innovation(const InnovationSignals& s) {
  return clamp_unit(0.4 * clamp_unit(s.i_speculative / 3.0) +
                    0.3 * clamp_unit(s.i_indicators / 3.0) +
                    0.3 * clamp_unit(s.g_research / 3.0));
}

double information_density(double n_sources, double word_count) {
  return n_sources / (word_count / 1000.0);
}

double score_density(double n_sources, double word_count) {
  if (word_count < 1.0) throw ZeroLength("score_density: word_count must be >= 1");
  return clamp_unit(information_density(n_sources, word_count) / 50.0);
}

void ScoreWeights::validate() const {
  double sum = depth + breadth + ecological + rigor + innovation + density;
  if (std::abs(sum - 1.0) > 1e-9) {
    throw Error("score weights must sum to 1.0, got " + std::to_string(sum));
  }
  for (double w : {depth, breadth, ecological, rigor, innovation, density}) {
    if (w < 0.0) throw Error("score weights must be non-negative");
  }
}

namespace {

CountMode mode_for(const std::string& category, const ScoreOptions& options) {
  auto it = options.mode_overrides.find(category);
  if (it != options.mode_overrides.end()) return it->second;
  static const std::vector<std::string> unique_defaults{
      "geographic_regions", "intervention_types", "biodiversity_dimensions",
      "ecosystem_services", "spatial_scales"};
  bool unique = std::find(unique_defaults.begin(), unique_defaults.end(), category) !=
                unique_defaults.end();
  return unique ? CountMode::unique : CountMode::occurrences;
}

int count(const std::string& prose, const std::string& category, const Vocabulary& vocab,
          const ScoreOptions& options) {
  return count_vocab_matches(prose, category, vocab, mode_for(category, options));
}

}  // namespace

QualityScores score_report(const ReportRecord& record, const Vocabulary& vocab,
                           const ScoreOptions& options) {
  options.weights.validate();

  // Signals are read from the prose only; the URL list in the Sources
  // section would otherwise leak into substring counts.
  std::size_t cut = sources_heading_pos(record.body);
  std::string prose = cut == std::string::npos ? record.body : record.body.substr(0, cut);

  QualityScores q;
  q.depth_signals.m_mech = count(prose, "mechanistic_terms", vocab, options);
  q.depth_signals.m_causal = count(prose, "causal_connectives", vocab, options) +
                             count(prose, "result_indicators", vocab, options) +
                             count(prose, "mechanistic_verbs", vocab, options);
  q.depth_signals.m_temporal = temporal_precision(prose, options.temporal);

  q.breadth_signals.g_regions = count(prose, "geographic_regions", vocab, options);
  q.breadth_signals.i_types = count(prose, "intervention_types", vocab, options);
  q.breadth_signals.d_dims = count(prose, "biodiversity_dimensions", vocab, options);
  q.breadth_signals.e_services = count(prose, "ecosystem_services", vocab, options);
  q.breadth_signals.s_scales = count(prose, "spatial_scales", vocab, options);

  q.ecological_signals.c_conservation = count(prose, "conservation_terms", vocab, options);
  q.ecological_signals.c_climate = count(prose, "climate_terms", vocab, options);
  q.ecological_signals.e_complexity = count(prose, "complexity_terms", vocab, options);

  q.rigor_signals.r_statistical = count(prose, "statistical_terms", vocab, options);
  q.rigor_signals.c_formal = count_citations(prose, options.citation_patterns);
  q.rigor_signals.u_acknowledgment = count(prose, "uncertainty_terms", vocab, options);

  q.innovation_signals.i_speculative = count(prose, "speculative_terms", vocab, options);
  q.innovation_signals.i_indicators = count(prose, "novelty_terms", vocab, options);
  q.innovation_signals.g_research = count(prose, "gap_terms", vocab, options);

  q.s_depth = score_depth(q.depth_signals);
  q.s_breadth = score_breadth(q.breadth_signals);
  q.s_ecological = score_ecological(q.ecological_signals);
  q.s_rigor = score_rigor(q.rigor_signals);
  q.s_innovation = score_innovation(q.innovation_signals);
  q.s_density = record.word_count >= 1 ? score_density(record.n_sources, record.word_count) : 0.0;

  const ScoreWeights& w = options.weights;
  q.composite =
      clamp_unit(w.depth * q.s_depth + w.breadth * q.s_breadth + w.ecological * q.s_ecological +
                 w.rigor * q.s_rigor + w.innovation * q.s_innovation + w.density * q.s_density);
  return q;
}

namespace {

const char* kScoreNames[] = {"s_depth", "s_breadth", "s_ecological",
                             "s_rigor", "s_innovation", "s_density", "composite"};

double score_by_index(const QualityScores& q, std::size_t i) {
  switch (i) {
    case 0: return q.s_depth;
    case 1: return q.s_breadth;
    case 2: return q.s_ecological;
    case 3: return q.s_rigor;
    case 4: return q.s_innovation;
    case 5: return q.s_density;
    default: return q.composite;
  }
}

}  // namespace

void write_scores_csv(std::ostream& out, const std::vector<ConfigGroup>& groups,
                      const std::vector<std::vector<QualityScores>>& scores) {
  out << "index,model,engine,depth,breadth,word_count,n_sources,"
         "m_mech,m_causal,m_temporal,g_regions,i_types,d_dims,e_services,s_scales,"
         "c_conservation,c_climate,e_complexity,r_statistical,c_formal,u_acknowledgment,"
         "i_speculative,i_indicators,g_research,"
         "s_depth,s_breadth,s_ecological,s_rigor,s_innovation,s_density,composite\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::size_t r = 0;
    for (const auto& [index, record] : groups[g].records) {
      const QualityScores& q = scores[g][r++];
      out << index << ',' << csv_escape(record.model) << ',' << csv_escape(record.engine) << ','
          << record.depth << ',' << record.breadth << ',' << record.word_count << ','
          << record.n_sources << ',' << q.depth_signals.m_mech << ',' << q.depth_signals.m_causal
          << ',' << q.depth_signals.m_temporal << ',' << q.breadth_signals.g_regions << ','
          << q.breadth_signals.i_types << ',' << q.breadth_signals.d_dims << ','
          << q.breadth_signals.e_services << ',' << q.breadth_signals.s_scales << ','
          << q.ecological_signals.c_conservation << ',' << q.ecological_signals.c_climate << ','
          << q.ecological_signals.e_complexity << ',' << q.rigor_signals.r_statistical << ','
          << q.rigor_signals.c_formal << ',' << q.rigor_signals.u_acknowledgment << ','
          << q.innovation_signals.i_speculative << ',' << q.innovation_signals.i_indicators << ','
          << q.innovation_signals.g_research;
      for (std::size_t i = 0; i < 7; ++i) out << ',' << score_by_index(q, i);
      out << '\n';
    }
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<ConfigGroup>& groups,
                         const std::vector<std::vector<QualityScores>>& scores) {
  out << "config,n";
  for (const char* name : kScoreNames) out << ',' << name << "_mean," << name << "_std";
  out << '\n';
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const std::vector<QualityScores>& group_scores = scores[g];
    out << csv_escape(groups[g].label.str()) << ',' << group_scores.size();
    for (std::size_t i = 0; i < 7; ++i) {
      double mean = 0.0;
      for (const QualityScores& q : group_scores) mean += score_by_index(q, i);
      if (!group_scores.empty()) mean /= static_cast<double>(group_scores.size());
      double var = 0.0;
      for (const QualityScores& q : group_scores) {
        double d = score_by_index(q, i) - mean;
        var += d * d;
      }
      if (!group_scores.empty()) var /= static_cast<double>(group_scores.size());
      out << ',' << mean << ',' << std::sqrt(var);
    }
    out << '\n';
  }
}

}  // namespace deepresearch
