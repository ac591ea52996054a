#pragma once

#include "deepresearch/corpus.hpp"
#include "deepresearch/vocabulary.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace deepresearch {

enum class CountMode { occurrences, unique };

// Case-insensitive substring counting. Matching is non-overlapping and
// longest-phrase-first within the category, so a longer phrase claims its
// span before any of its fragments can. `occurrences` counts every claimed
// span; `unique` counts distinct phrases matched at least once.
int count_vocab_matches(const std::string& text, const std::string& category,
                        const Vocabulary& vocab, CountMode mode);

// Specific temporal mentions (quantified intervals, numeric durations,
// year ranges) over all temporal mentions (specific + configured vague
// phrases). No temporal content at all yields `zero_policy`.
struct TemporalOptions {
  double zero_policy = 0.0;  // set to 0.5 for a neutral reading
  std::vector<std::string> vague_phrases;  // empty = built-in default list

  static const std::vector<std::string>& default_vague_phrases();
};
double temporal_precision(const std::string& text, const TemporalOptions& options = {});

// Parenthetical author-year citations plus narrative "Name et al. (year)"
// patterns; the regexes are overridable configuration.
int count_citations(const std::string& text, const std::vector<std::string>& patterns = {});
const std::vector<std::string>& default_citation_patterns();

struct DepthSignals {
  int m_mech = 0;
  int m_causal = 0;
  double m_temporal = 0.0;
};

struct BreadthSignals {
  int g_regions = 0;
  int i_types = 0;
  int d_dims = 0;
  int e_services = 0;
  int s_scales = 0;
};

struct EcologicalSignals {
  int c_conservation = 0;
  int c_climate = 0;
  int e_complexity = 0;
};

struct RigorSignals {
  int r_statistical = 0;
  int c_formal = 0;
  int u_acknowledgment = 0;
};

struct InnovationSignals {
  int i_speculative = 0;
  int i_indicators = 0;
  int g_research = 0;
};

double score_depth(const DepthSignals& s);
double score_breadth(const BreadthSignals& s);
double score_ecological(const EcologicalSignals& s);
double score_rigor(const RigorSignals& s);
double score_innovation(const InnovationSignals& s);

// Sources integrated per 1,000 words, saturating at 50/kword.
// Throws ZeroLength when word_count < 1.
double score_density(double n_sources, double word_count);

// Raw sources-per-1,000-words ratio before saturation.
double information_density(double n_sources, double word_count);

struct ScoreWeights {
  double depth = 1.0 / 6.0;
  double breadth = 1.0 / 6.0;
  double ecological = 1.0 / 6.0;
  double rigor = 1.0 / 6.0;
  double innovation = 1.0 / 6.0;
  double density = 1.0 / 6.0;

  void validate() const;  // weights must sum to 1
};

struct QualityScores {
  DepthSignals depth_signals;
  BreadthSignals breadth_signals;
  EcologicalSignals ecological_signals;
  RigorSignals rigor_signals;
  InnovationSignals innovation_signals;

  double s_depth = 0.0;
  double s_breadth = 0.0;
  double s_ecological = 0.0;
  double s_rigor = 0.0;
  double s_innovation = 0.0;
  double s_density = 0.0;
  double composite = 0.0;
};

struct ScoreOptions {
  ScoreWeights weights;
  TemporalOptions temporal;
  std::vector<std::string> citation_patterns;  // empty = defaults
  // Per-category counting mode overrides; unset categories use the
  // documented defaults (unique for the five breadth axes, occurrences
  // elsewhere).
  std::map<std::string, CountMode> mode_overrides;
};

// Extracts every signal from the record body (excluding its Sources
// section), applies the six equations, and folds the weighted composite.
QualityScores score_report(const ReportRecord& record, const Vocabulary& vocab,
                           const ScoreOptions& options = {});

// One row per report with all signals and scores.
void write_scores_csv(std::ostream& out, const std::vector<ConfigGroup>& groups,
                      const std::vector<std::vector<QualityScores>>& scores);

// Mean and standard deviation of every score per configuration.
void write_aggregate_csv(std::ostream& out, const std::vector<ConfigGroup>& groups,
                         const std::vector<std::vector<QualityScores>>& scores);

}  // namespace deepresearch
