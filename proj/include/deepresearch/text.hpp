#pragma once

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace deepresearch {

// Lowercase alphanumeric word tokens; every other byte is a separator.
std::vector<std::string> word_tokens(std::string_view text);

// Porter's suffix-stripping algorithm (the original 1980 rule set).
// Expects a lowercase word; words of length <= 2 are returned unchanged.
std::string porter_stem(std::string_view word);

// word_tokens followed by Porter stemming, the tokenization used for ROUGE-L.
std::vector<std::string> tokenize_for_rouge(std::string_view text);

// English stopword list used when building word distributions.
const std::unordered_set<std::string>& default_stopwords();

// Greedy sequential chunking: consecutive runs of at most max_tokens tokens.
// Concatenating the chunks reproduces the input token sequence.
std::vector<std::vector<std::string>> chunk_by_tokens(const std::vector<std::string>& tokens,
                                                      int max_tokens);

std::string to_lower(std::string_view text);

// Rough token count used for provider context-limit estimates.
std::size_t estimate_tokens(std::string_view text);

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace deepresearch
