#include "deepresearch/text.hpp"

#include <cctype>

namespace deepresearch {

std::vector<std::string> word_tokens(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> tokenize_for_rouge(std::string_view text) {
  std::vector<std::string> tokens = word_tokens(text);
  for (std::string& t : tokens) t = porter_stem(t);
  return tokens;
}

const std::unordered_set<std::string>& default_stopwords() {
  static const std::unordered_set<std::string> words{
      "a",       "about",   "above",  "after",   "again",  "against", "all",    "am",
      "an",      "and",     "any",    "are",     "as",     "at",      "be",     "because",
      "been",    "before",  "being",  "below",   "between", "both",   "but",    "by",
      "can",     "cannot",  "could",  "did",     "do",     "does",    "doing",  "down",
      "during",  "each",    "few",    "for",     "from",   "further", "had",    "has",
      "have",    "having",  "he",     "her",     "here",   "hers",    "herself", "him",
      "himself", "his",     "how",    "i",       "if",     "in",      "into",   "is",
      "it",      "its",     "itself", "just",    "me",     "more",    "most",   "my",
      "myself",  "no",      "nor",    "not",     "now",    "of",      "off",    "on",
      "once",    "only",    "or",     "other",   "our",    "ours",    "ourselves", "out",
      "over",    "own",     "same",   "she",     "should", "so",      "some",   "such",
      "than",    "that",    "the",    "their",   "theirs", "them",    "themselves", "then",
      "there",   "these",   "they",   "this",    "those",  "through", "to",     "too",
      "under",   "until",   "up",     "very",    "was",    "we",      "were",   "what",
      "when",    "where",   "which",  "while",   "who",    "whom",    "why",    "will",
      "with",    "would",   "you",    "your",    "yours",  "yourself", "yourselves",
  };
  return words;
}

std::vector<std::vector<std::string>> chunk_by_tokens(const std::vector<std::string>& tokens,
                                                      int max_tokens) {
  std::vector<std::vector<std::string>> chunks;
  if (max_tokens < 1) max_tokens = 1;
  for (std::size_t start = 0; start < tokens.size();
       start += static_cast<std::size_t>(max_tokens)) {
    std::size_t end = std::min(tokens.size(), start + static_cast<std::size_t>(max_tokens));
    chunks.emplace_back(tokens.begin() + static_cast<std::ptrdiff_t>(start),
                        tokens.begin() + static_cast<std::ptrdiff_t>(end));
  }
  return chunks;
}

std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::size_t estimate_tokens(std::string_view text) {
  std::size_t count = 0;
  bool in_token = false;
  for (unsigned char c : text) {
    if (std::isspace(c)) {
      in_token = false;
    } else if (!in_token) {
      in_token = true;
      ++count;
    }
  }
  return count;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out.append(sep);
    out.append(parts[i]);
  }
  return out;
}

}  // namespace deepresearch
