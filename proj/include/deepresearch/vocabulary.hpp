#pragma once

#include <map>
#include <string>
#include <vector>

namespace deepresearch {

// Category -> phrase list, lowercase-normalized, no duplicates within a
// category. All scoring behavior is data-driven through this table.
struct Vocabulary {
  std::map<std::string, std::vector<std::string>> categories;

  const std::vector<std::string>& at(const std::string& category) const;  // throws UnknownCategory
  bool has(const std::string& category) const;
};

// The 17 categories every vocabulary must provide.
const std::vector<std::string>& required_vocab_categories();

// Built-in defaults; the mechanistic and intervention lists mirror the
// released dictionary, the rest are curated to the documented caps.
Vocabulary default_vocabulary();

// JSON object mapping category -> array of phrases (keys starting with
// "_" are ignored as annotations). Phrases are lowercased and trimmed;
// duplicates are dropped, first occurrence wins. Throws Error when a
// required category is missing or empty.
Vocabulary load_vocabulary_json(const std::string& path);
Vocabulary vocabulary_from_json_text(const std::string& json_text);

}  // namespace deepresearch
