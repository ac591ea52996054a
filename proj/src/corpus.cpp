#include "deepresearch/corpus.hpp"

#include "deepresearch/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

namespace deepresearch {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

int parse_int(std::string_view s, const char* what) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw MalformedName(std::string("non-numeric ") + what + " in report filename");
  }
  return value;
}

// True when `line` is a markdown heading whose text is "Sources"
// (case-insensitive, optional trailing colon or closing hashes).
bool is_sources_heading(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t hashes = 0;
  while (i < line.size() && line[i] == '#' && hashes < 7) {
    ++i;
    ++hashes;
  }
  if (hashes == 0 || hashes > 6) return false;
  if (i < line.size() && line[i] != ' ' && line[i] != '\t') return false;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t end = line.size();
  while (end > i && (line[end - 1] == ' ' || line[end - 1] == '\t' || line[end - 1] == '#' ||
                     line[end - 1] == ':' || line[end - 1] == '\r')) {
    --end;
  }
  std::string_view text = line.substr(i, end - i);
  if (text.size() != 7) return false;
  static constexpr std::string_view target = "sources";
  for (std::size_t k = 0; k < 7; ++k) {
    if (std::tolower(static_cast<unsigned char>(text[k])) != target[k]) return false;
  }
  return true;
}

bool is_heading(std::string_view line) {
  std::size_t i = 0;
  while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
  std::size_t hashes = 0;
  while (i < line.size() && line[i] == '#') {
    ++i;
    ++hashes;
  }
  return hashes >= 1 && hashes <= 6 && (i == line.size() || line[i] == ' ' || line[i] == '\t');
}

// First http(s) URL inside the line, unwrapping list markers, <...> and
// [text](url); empty when the line carries none.
std::string url_from_line(std::string_view line) {
  std::size_t pos = line.find("http://");
  std::size_t pos_s = line.find("https://");
  if (pos_s != std::string_view::npos && (pos == std::string_view::npos || pos_s < pos)) {
    pos = pos_s;
  }
  if (pos == std::string_view::npos) return {};
  std::size_t end = pos;
  while (end < line.size()) {
    char c = line[end];
    if (c == ' ' || c == '\t' || c == '\r' || c == '>' || c == ')' || c == ']' || c == '"') break;
    ++end;
  }
  while (end > pos && (line[end - 1] == '.' || line[end - 1] == ',' || line[end - 1] == ';')) {
    --end;
  }
  return std::string(line.substr(pos, end - pos));
}

template <typename LineFn>
void for_each_line(const std::string& body, LineFn fn) {
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t nl = body.find('\n', start);
    std::size_t end = nl == std::string::npos ? body.size() : nl;
    fn(std::string_view(body).substr(start, end - start), start);
    if (nl == std::string::npos) break;
    start = nl + 1;
  }
}

}  // namespace

ReportName parse_filename(std::string_view name) {
  constexpr std::string_view ext = ".md";
  if (name.size() <= ext.size() || name.substr(name.size() - ext.size()) != ext) {
    throw MalformedName("report filename must end in .md");
  }
  std::string_view stem = name.substr(0, name.size() - ext.size());

  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t us = stem.find('_', start);
    if (us == std::string_view::npos) {
      parts.push_back(stem.substr(start));
      break;
    }
    parts.push_back(stem.substr(start, us - start));
    start = us + 1;
  }
  if (parts.size() != 5) {
    throw MalformedName("expected <index>_<model>_<engine>_d<depth>_b<breadth>.md");
  }
  if (!all_digits(parts[0])) throw MalformedName("non-numeric index in report filename");
  if (parts[1].empty() || parts[2].empty()) {
    throw MalformedName("empty model or engine in report filename");
  }
  if (parts[3].size() < 2 || parts[3][0] != 'd' || !all_digits(parts[3].substr(1))) {
    throw MalformedName("missing d<depth> segment in report filename");
  }
  if (parts[4].size() < 2 || parts[4][0] != 'b' || !all_digits(parts[4].substr(1))) {
    throw MalformedName("missing b<breadth> segment in report filename");
  }

  ReportName parsed;
  parsed.index = parse_int(parts[0], "index");
  parsed.model = std::string(parts[1]);
  parsed.engine = std::string(parts[2]);
  parsed.depth = parse_int(parts[3].substr(1), "depth");
  parsed.breadth = parse_int(parts[4].substr(1), "breadth");
  if (parsed.depth < 1 || parsed.breadth < 1) {
    throw MalformedName("depth and breadth must be >= 1");
  }
  return parsed;
}

std::string encode_filename(const ReportName& name) {
  if (name.index < 0) throw MalformedName("index must be >= 0");
  if (name.depth < 1 || name.breadth < 1) throw MalformedName("depth and breadth must be >= 1");
  for (const std::string* id : {&name.model, &name.engine}) {
    if (id->empty()) throw MalformedName("model and engine must be non-empty");
    if (id->find('_') != std::string::npos || id->find('/') != std::string::npos) {
      throw MalformedName("model and engine identifiers must not contain '_' or '/'");
    }
  }
  std::ostringstream out;
  out << name.index << '_' << name.model << '_' << name.engine << "_d" << name.depth << "_b"
      << name.breadth << ".md";
  return out.str();
}

std::size_t sources_heading_pos(const std::string& body) {
  std::size_t found = std::string::npos;
  for_each_line(body, [&](std::string_view line, std::size_t offset) {
    if (is_sources_heading(line)) found = offset;
  });
  return found;
}

std::vector<std::string> extract_sources(const std::string& body) {
  std::vector<std::string> urls;
  std::size_t heading = sources_heading_pos(body);
  if (heading == std::string::npos) return urls;

  std::string_view rest = std::string_view(body).substr(heading);
  std::size_t first_nl = rest.find('\n');
  if (first_nl == std::string_view::npos) return urls;
  rest = rest.substr(first_nl + 1);

  std::size_t start = 0;
  while (start <= rest.size()) {
    std::size_t nl = rest.find('\n', start);
    std::size_t end = nl == std::string_view::npos ? rest.size() : nl;
    std::string_view line = rest.substr(start, end - start);
    if (is_heading(line)) break;
    std::string url = url_from_line(line);
    if (!url.empty()) urls.push_back(std::move(url));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return urls;
}

int word_count(const std::string& body) {
  std::size_t limit = sources_heading_pos(body);
  std::string_view prose =
      limit == std::string::npos ? std::string_view(body) : std::string_view(body).substr(0, limit);
  int count = 0;
  bool in_word = false;
  for (unsigned char c : prose) {
    if (std::isspace(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++count;
    }
  }
  return count;
}

ReportRecord make_record(const ReportName& name, std::string body) {
  ReportRecord record;
  record.index = name.index;
  record.model = name.model;
  record.engine = name.engine;
  record.depth = name.depth;
  record.breadth = name.breadth;
  record.sources = extract_sources(body);
  record.n_sources = static_cast<int>(record.sources.size());
  record.word_count = word_count(body);
  record.body = std::move(body);
  return record;
}

std::string ConfigLabel::str() const {
  std::ostringstream out;
  out << model << '_' << engine << "_d" << depth << "_b" << breadth;
  return out.str();
}

std::vector<AlignedPair> align_groups(const ConfigGroup& a, const ConfigGroup& b) {
  std::vector<AlignedPair> pairs;
  for (const auto& [index, record] : a.records) {
    auto it = b.records.find(index);
    if (it != b.records.end()) {
      pairs.push_back(AlignedPair{index, &record, &it->second});
    }
  }
  return pairs;  // std::map iteration is already index-ascending
}

CorpusLoad load_corpus(const std::string& directory) {
  CorpusLoad load;
  std::map<ConfigLabel, ConfigGroup> by_label;

  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(directory)) {
    if (entry.is_regular_file() && entry.path().extension() == ".md") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());

  for (const auto& path : files) {
    ReportName name;
    try {
      name = parse_filename(path.filename().string());
    } catch (const MalformedName&) {
      load.skipped.push_back(path.filename().string());
      continue;
    }
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    ConfigLabel label{name.model, name.engine, name.depth, name.breadth};
    ConfigGroup& group = by_label[label];
    group.label = label;
    group.records[name.index] = make_record(name, buf.str());
  }

  for (auto& [label, group] : by_label) load.groups.push_back(std::move(group));
  return load;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

void write_manifest_csv(std::ostream& out, const std::vector<ConfigGroup>& groups) {
  out << "index,model,engine,depth,breadth,n_sources,word_count\n";
  for (const ConfigGroup& group : groups) {
    for (const auto& [index, record] : group.records) {
      out << index << ',' << csv_escape(record.model) << ',' << csv_escape(record.engine) << ','
          << record.depth << ',' << record.breadth << ',' << record.n_sources << ','
          << record.word_count << '\n';
    }
  }
}

}  // namespace deepresearch
