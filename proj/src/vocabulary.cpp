#include "deepresearch/vocabulary.hpp"

#include "deepresearch/errors.hpp"
#include "deepresearch/text.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace deepresearch {

const std::vector<std::string>& Vocabulary::at(const std::string& category) const {
  auto it = categories.find(category);
  if (it == categories.end()) throw UnknownCategory("unknown vocabulary category '" + category + "'");
  return it->second;
}

bool Vocabulary::has(const std::string& category) const {
  return categories.find(category) != categories.end();
}

const std::vector<std::string>& required_vocab_categories() {
  static const std::vector<std::string> names{
      "mechanistic_terms",    "causal_connectives",  "result_indicators",
      "mechanistic_verbs",    "geographic_regions",  "intervention_types",
      "biodiversity_dimensions", "ecosystem_services", "spatial_scales",
      "conservation_terms",   "climate_terms",       "complexity_terms",
      "statistical_terms",    "uncertainty_terms",   "speculative_terms",
      "novelty_terms",        "gap_terms",
  };
  return names;
}

Vocabulary default_vocabulary() {
  Vocabulary v;
  v.categories["mechanistic_terms"] = {
      "mechanism",     "pathway",        "feedback",       "trophic",
      "nutrient cycling", "energy flow", "predation",      "competition",
      "mutualism",     "succession",     "disturbance",    "resilience",
      "adaptation",    "selection pressure", "gene flow",  "decomposition",
      "mineralization", "nitrification", "photosynthesis", "respiration",
      "herbivory",     "facilitation",   "inhibition",
  };
  v.categories["causal_connectives"] = {
      "because", "due to", "owing to", "as a result", "therefore", "thereby",
      "consequently", "hence", "caused by", "attributable to", "driven by",
  };
  v.categories["result_indicators"] = {
      "results in", "resulting in", "leads to", "led to", "leading to", "induces",
      "induced", "gives rise to", "brings about", "translates into", "culminates in",
  };
  v.categories["mechanistic_verbs"] = {
      "drives", "regulates", "mediates", "modulates", "governs", "controls",
      "triggers", "promotes", "suppresses", "inhibits", "enhances", "accelerates",
      "amplifies", "underpins", "shapes",
  };
  v.categories["geographic_regions"] = {
      "north america", "south america", "europe", "asia", "africa", "australia",
      "antarctica", "tropical", "subtropical", "temperate", "boreal", "arctic",
      "alpine", "mediterranean", "savanna", "tundra", "palearctic", "nearctic",
      "neotropical", "afrotropical",
  };
  v.categories["intervention_types"] = {
      "fertilizer", "stocking", "mowing", "grazing", "irrigation", "organic",
      "controlled burn", "restoration", "reforestation", "afforestation",
      "rewilding", "habitat creation", "invasive species control", "predator control",
      "captive breeding", "protected area", "translocation",
  };
  v.categories["biodiversity_dimensions"] = {
      "taxonomic diversity", "functional diversity", "phylogenetic diversity",
      "genetic diversity", "species richness", "species diversity", "alpha diversity",
      "beta diversity", "gamma diversity", "spatial diversity", "functional traits",
      "species evenness",
  };
  v.categories["ecosystem_services"] = {
      "provisioning", "regulating services", "supporting services", "cultural services",
      "pollination", "carbon sequestration", "water purification", "soil formation",
      "climate regulation", "food production", "water regulation", "erosion control",
      "pest control", "primary production", "nutrient retention",
  };
  v.categories["spatial_scales"] = {
      "local", "regional", "continental", "global", "landscape", "plot-level",
      "field-scale", "watershed", "catchment", "microhabitat", "site-level",
  };
  v.categories["conservation_terms"] = {
      "biodiversity", "conservation", "restoration", "habitat loss", "endangered",
      "threatened", "extinction", "habitat fragmentation", "degradation",
      "species loss", "protected", "refugia",
  };
  v.categories["climate_terms"] = {
      "climate change", "global warming", "warming", "drought", "precipitation",
      "extreme weather", "greenhouse", "elevated co2", "heat stress",
      "climate variability", "carbon emissions",
  };
  v.categories["complexity_terms"] = {
      "synergistic", "nonlinear", "non-linear", "interconnected", "emergent",
      "feedback loop", "threshold", "tipping point", "cascading", "interdependent",
      "complex interactions",
  };
  v.categories["statistical_terms"] = {
      "regression", "anova", "meta-analysis", "confidence interval", "p-value",
      "statistically significant", "effect size", "correlation", "bayesian",
      "standard deviation", "variance", "sample size", "randomized", "significance",
  };
  v.categories["uncertainty_terms"] = {
      "unknown", "unclear", "limited evidence", "uncertain", "uncertainty",
      "poorly understood", "remains to be", "not well understood", "inconclusive",
      "data gaps", "confounded",
  };
  v.categories["speculative_terms"] = {
      "might", "could", "may", "hypothetical", "hypothesize", "potentially",
      "possibly", "speculative", "plausibly", "conceivably",
  };
  v.categories["novelty_terms"] = {
      "novel", "pioneering", "emerging", "innovative", "unprecedented",
      "new approach", "cutting-edge", "state-of-the-art", "first evidence",
  };
  v.categories["gap_terms"] = {
      "research gap", "understudied", "knowledge gap", "unanswered", "future research",
      "remains unexplored", "little is known", "underexplored", "open question",
  };
  return v;
}

namespace {

std::string normalize_phrase(std::string phrase) {
  std::string lowered = to_lower(phrase);
  std::size_t begin = lowered.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  std::size_t end = lowered.find_last_not_of(" \t\r\n");
  return lowered.substr(begin, end - begin + 1);
}

}  // namespace

Vocabulary vocabulary_from_json_text(const std::string& json_text) {
  nlohmann::json parsed = nlohmann::json::parse(json_text, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) {
    throw Error("vocabulary file must be a JSON object of category -> phrase list");
  }
  Vocabulary v;
  for (auto it = parsed.begin(); it != parsed.end(); ++it) {
    if (!it.key().empty() && it.key()[0] == '_') continue;
    if (!it.value().is_array()) {
      throw Error("vocabulary category '" + it.key() + "' must be an array of phrases");
    }
    std::vector<std::string> phrases;
    std::set<std::string> seen;
    for (const nlohmann::json& item : it.value()) {
      if (!item.is_string()) {
        throw Error("vocabulary category '" + it.key() + "' contains a non-string phrase");
      }
      std::string phrase = normalize_phrase(item.get<std::string>());
      if (phrase.empty()) continue;
      if (seen.insert(phrase).second) phrases.push_back(std::move(phrase));
    }
    v.categories[it.key()] = std::move(phrases);
  }
  for (const std::string& required : required_vocab_categories()) {
    auto it = v.categories.find(required);
    if (it == v.categories.end() || it->second.empty()) {
      throw Error("vocabulary is missing required category '" + required + "'");
    }
  }
  return v;
}

Vocabulary load_vocabulary_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open vocabulary file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return vocabulary_from_json_text(buf.str());
}

}  // namespace deepresearch
