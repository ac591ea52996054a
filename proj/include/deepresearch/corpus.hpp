#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

namespace deepresearch {

// Fields encoded by the report filename pattern
// <index>_<model>_<engine>_d<depth>_b<breadth>.md. Model and engine
// identifiers must not contain underscores (the codec could not survive
// the round trip otherwise).
struct ReportName {
  int index = 0;
  std::string model;
  std::string engine;
  int depth = 1;
  int breadth = 1;
};

ReportName parse_filename(std::string_view name);  // throws MalformedName
std::string encode_filename(const ReportName& name);

// Byte offset of the line that starts the final Sources section: the last
// heading (any level) whose text equals "Sources" case-insensitively.
// Returns npos when absent.
std::size_t sources_heading_pos(const std::string& body);

// URLs listed under the final Sources heading, order preserved. Accepts
// bare lines, list items, <...> and [...](...) forms; missing section
// yields an empty list.
std::vector<std::string> extract_sources(const std::string& body);

// Whitespace-delimited word tokens in the body, excluding the Sources
// section (a page of URLs says nothing about prose length).
int word_count(const std::string& body);

struct ReportRecord {
  int index = 0;
  std::string model;
  std::string engine;
  int depth = 1;
  int breadth = 1;
  std::string body;
  std::vector<std::string> sources;
  int word_count = 0;
  int n_sources = 0;
};

ReportRecord make_record(const ReportName& name, std::string body);

struct ConfigLabel {
  std::string model;
  std::string engine;
  int depth = 1;
  int breadth = 1;

  std::string str() const;  // e.g. "o3_orkg_d4_b4"
  friend bool operator==(const ConfigLabel&, const ConfigLabel&) = default;
  friend auto operator<=>(const ConfigLabel& a, const ConfigLabel& b) {
    return std::tie(a.model, a.engine, a.depth, a.breadth) <=>
           std::tie(b.model, b.engine, b.depth, b.breadth);
  }
};

// Reports sharing (model, engine, depth, breadth), keyed by question index.
struct ConfigGroup {
  ConfigLabel label;
  std::map<int, ReportRecord> records;
};

struct AlignedPair {
  int index = 0;
  const ReportRecord* left = nullptr;
  const ReportRecord* right = nullptr;
};

// Pairs for exactly the index intersection, ascending by index.
std::vector<AlignedPair> align_groups(const ConfigGroup& a, const ConfigGroup& b);

struct CorpusLoad {
  std::vector<ConfigGroup> groups;  // sorted by label
  std::vector<std::string> skipped;  // filenames that failed to parse
};

CorpusLoad load_corpus(const std::string& directory);

// CSV: index,model,engine,depth,breadth,n_sources,word_count per record.
void write_manifest_csv(std::ostream& out, const std::vector<ConfigGroup>& groups);

std::string csv_escape(std::string_view field);

}  // namespace deepresearch
