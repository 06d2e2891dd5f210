#include "cks/scaling.hpp"

#include "cks/error.hpp"
#include "cks/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace cks {

namespace {

constexpr std::size_t kTitleLimit = 120;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n\f\v");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n\f\v");
  return s.substr(first, last - first + 1);
}

std::string collapse_space(std::string_view s) {
  std::string out;
  bool gap = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      gap = true;
      continue;
    }
    if (gap && !out.empty()) out.push_back(' ');
    gap = false;
    out.push_back(c);
  }
  return out;
}

std::vector<std::string> split_words(std::string_view line) {
  std::vector<std::string> words;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return words;
}

std::string detect_format(std::string_view file_name, std::string_view bytes) {
  const auto dot = file_name.rfind('.');
  const std::string ext = dot == std::string_view::npos ? "" : lower(file_name.substr(dot + 1));
  if (ext == "ps" || ext == "eps") return "postscript";
  if (ext == "html" || ext == "htm") return "html";
  if (ext == "txt") return "text";
  if (bytes.starts_with("%!PS")) return "postscript";
  const std::string head = lower(bytes.substr(0, 1024));
  if (head.find("<html") != std::string::npos || head.find("<!doctype html") != std::string::npos) {
    return "html";
  }
  return "text";
}

std::string truncate_title(std::string title) {
  if (title.size() > kTitleLimit) title.resize(kTitleLimit);
  return title;
}

std::string html_title(std::string_view bytes) {
  static const std::regex title_re("<title[^>]*>([\\s\\S]*?)</title>", std::regex::icase);
  std::match_results<std::string_view::const_iterator> m;
  if (std::regex_search(bytes.begin(), bytes.end(), m, title_re)) return collapse_space(m[1].str());
  return {};
}

std::string first_line(std::string_view bytes) {
  std::size_t pos = 0;
  while (pos < bytes.size()) {
    auto end = bytes.find('\n', pos);
    if (end == std::string_view::npos) end = bytes.size();
    const auto line = trim(bytes.substr(pos, end - pos));
    if (!line.empty()) return std::string(line);
    pos = end + 1;
  }
  return {};
}

std::vector<std::string> html_links(std::string_view bytes) {
  static const std::regex href_re("href\\s*=\\s*[\"']([^\"']*)[\"']", std::regex::icase);
  std::vector<std::string> links;
  using It = std::string_view::const_iterator;
  for (std::regex_iterator<It> it(bytes.begin(), bytes.end(), href_re), end; it != end; ++it) {
    links.push_back((*it)[1].str());
  }
  return links;
}

double parse_number(const std::string& text, const std::string& tag) {
  double value = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty()) {
    throw Error(ErrorKind::ScaleValueError, "value '" + text + "' of '" + tag + "' is not numeric");
  }
  return value;
}

bool value_leq(const std::string& a, const std::string& b, Comparator cmp, const std::string& tag) {
  if (cmp == Comparator::Numeric) return parse_number(a, tag) <= parse_number(b, tag);
  return a <= b;
}

void check_values(const ConceptualScale& s) {
  if (s.tag.empty()) throw Error(ErrorKind::ScaleValueError, "scale with empty tag");
  if (s.values.empty()) throw Error(ErrorKind::ScaleValueError, "scale '" + s.tag + "' has no values");
  std::set<std::string> seen;
  for (const auto& v : s.values) {
    if (!seen.insert(v).second) {
      throw Error(ErrorKind::ScaleValueError, "scale '" + s.tag + "' repeats value '" + v + "'");
    }
  }
}

// Records sharing an id collapse into one, pairs concatenated.
std::vector<MetadataRecord> merged(std::span<const MetadataRecord> records) {
  std::vector<MetadataRecord> out;
  std::map<std::string, std::size_t> at;
  for (const auto& r : records) {
    if (r.object_id.empty()) throw Error(ErrorKind::InvalidContext, "metadata record without an id");
    auto [it, fresh] = at.emplace(r.object_id, out.size());
    if (fresh) {
      out.push_back(r);
    } else {
      auto& pairs = out[it->second].pairs;
      pairs.insert(pairs.end(), r.pairs.begin(), r.pairs.end());
    }
  }
  return out;
}

}  // namespace

std::vector<std::string> MetadataRecord::values(std::string_view tag) const {
  std::vector<std::string> out;
  for (const auto& [t, v] : pairs) {
    if (t == tag) out.push_back(v);
  }
  return out;
}

ConceptualScale ConceptualScale::nominal(std::string tag, std::vector<std::string> values) {
  ConceptualScale s{std::move(tag), ScaleKind::Nominal, std::move(values), Comparator::Lexicographic};
  check_values(s);
  return s;
}

ConceptualScale ConceptualScale::ordinal(std::string tag, Comparator comparator,
                                         std::vector<std::string> values) {
  ConceptualScale s{std::move(tag), ScaleKind::Ordinal, std::move(values), comparator};
  check_values(s);
  if (comparator == Comparator::Numeric) {
    for (const auto& v : s.values) parse_number(v, s.tag);
  }
  for (std::size_t i = 1; i < s.values.size(); ++i) {
    if (!value_leq(s.values[i - 1], s.values[i], comparator, s.tag)) {
      throw Error(ErrorKind::ScaleValueError, "ordinal scale '" + s.tag + "' values do not ascend");
    }
  }
  return s;
}

MetadataRecord summarize_bytes(std::string_view file_name, std::string_view bytes,
                               std::string object_id) {
  MetadataRecord record;
  record.object_id = object_id.empty() ? std::string(file_name) : std::move(object_id);
  const std::string format = detect_format(file_name, bytes);
  record.pairs.emplace_back("format", format);
  record.pairs.emplace_back("size", std::to_string(bytes.size()));
  std::string title = format == "html" ? html_title(bytes) : std::string{};
  if (title.empty()) title = first_line(bytes);
  if (!title.empty()) record.pairs.emplace_back("title", truncate_title(std::move(title)));
  if (format == "html") {
    for (auto& link : html_links(bytes)) record.pairs.emplace_back("link", std::move(link));
  }
  return record;
}

MetadataRecord summarize_document(const std::filesystem::path& path, std::string object_id) {
  const std::string bytes = read_file(path);
  return summarize_bytes(path.filename().string(), bytes, std::move(object_id));
}

std::vector<std::string> record_ids(std::span<const MetadataRecord> records) {
  std::vector<std::string> ids;
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (seen.insert(r.object_id).second) ids.push_back(r.object_id);
  }
  return ids;
}

FormalContext apply_scale(std::span<const MetadataRecord> records, const ConceptualScale& scale) {
  check_values(scale);
  const auto rows_in = merged(records);
  const std::size_t m = scale.values.size();

  std::vector<AttributeToken> attributes;
  for (const auto& v : scale.values) {
    attributes.push_back({scale.tag, scale.kind == ScaleKind::Nominal ? Relator::Eq : Relator::Le, v});
  }

  std::vector<std::string> objects;
  std::vector<AttributeSet> rows;
  for (const auto& record : rows_in) {
    objects.push_back(record.object_id);
    AttributeSet row(m);
    for (const auto& raw : record.values(scale.tag)) {
      for (std::size_t i = 0; i < m; ++i) {
        if (scale.kind == ScaleKind::Nominal) {
          if (raw == scale.values[i]) row.set(i);
        } else if (value_leq(raw, scale.values[i], scale.comparator, scale.tag)) {
          row.set(i);
        }
      }
    }
    rows.push_back(std::move(row));
  }

  PartialOrder order;
  if (scale.kind == ScaleKind::Ordinal) {
    std::vector<std::vector<std::size_t>> below(m);
    for (std::size_t i = 1; i < m; ++i) below[i] = {i - 1};
    order = PartialOrder::from_predecessors(std::move(below));
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows), PartialOrder{},
                       std::move(order));
}

FormalContext interpret(std::span<const MetadataRecord> records,
                        std::span<const ConceptualScale> scales) {
  const auto ids = record_ids(records);
  FormalContext result(ids, {}, std::vector<AttributeSet>(ids.size(), AttributeSet(0)));
  for (std::size_t i = 0; i < scales.size(); ++i) {
    FormalContext part = apply_scale(records, scales[i]);
    const bool collides = std::any_of(part.attributes().begin(), part.attributes().end(),
                                      [&](const auto& t) { return result.find_attribute(t).has_value(); });
    if (collides) part = namespaced(part, "s" + std::to_string(i + 1) + ":");
    result = apposition(result, part);
  }
  return result;
}

ScaleConfig parse_scale_config(std::string_view text) {
  ScaleConfig config;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto words = split_words(t);
    const SourceLocation where{line_no, 1};
    try {
      if (words[0] == "nominal") {
        if (words.size() < 3) throw Error(ErrorKind::SyntaxError, "nominal scale needs a tag and values", where);
        config.scales.push_back(ConceptualScale::nominal(words[1], {words.begin() + 2, words.end()}));
      } else if (words[0] == "ordinal") {
        if (words.size() < 4) {
          throw Error(ErrorKind::SyntaxError, "ordinal scale needs a comparator, a tag and values", where);
        }
        Comparator cmp;
        if (words[1] == "numeric") {
          cmp = Comparator::Numeric;
        } else if (words[1] == "lex") {
          cmp = Comparator::Lexicographic;
        } else {
          throw Error(ErrorKind::SyntaxError, "unknown comparator '" + words[1] + "'", where);
        }
        config.scales.push_back(ConceptualScale::ordinal(words[2], cmp, {words.begin() + 3, words.end()}));
      } else if (words[0] == "view") {
        if (words.size() < 2) throw Error(ErrorKind::SyntaxError, "view needs a name", where);
        ConceptualView view{words[1], {}};
        for (std::size_t i = 2; i < words.size(); ++i) view.intent.push_back(AttributeToken::parse(words[i]));
        config.views.push_back(std::move(view));
      } else {
        throw Error(ErrorKind::SyntaxError, "unknown directive '" + words[0] + "'", where);
      }
    } catch (const Error& e) {
      if (e.where().line) throw;
      throw Error(e.kind(), e.what(), where);
    }
  }
  return config;
}

ScaleConfig load_scale_config(const std::filesystem::path& path) {
  return parse_scale_config(read_file(path));
}

std::vector<MetadataRecord> parse_records(std::string_view text) {
  std::vector<MetadataRecord> records;
  bool in_block = false;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty()) {
      in_block = false;
      continue;
    }
    if (t.front() == '#') continue;
    const auto space = t.find_first_of(" \t");
    const std::string key(t.substr(0, space));
    const std::string value(space == std::string_view::npos ? std::string_view{} : trim(t.substr(space)));
    if (!in_block) {
      if (key != "object" || value.empty()) {
        throw Error(ErrorKind::SyntaxError, "expected 'object <id>'", {line_no, 1});
      }
      records.push_back({value, {}});
      in_block = true;
      continue;
    }
    if (value.empty()) throw Error(ErrorKind::SyntaxError, "tag '" + key + "' has no value", {line_no, 1});
    records.back().pairs.emplace_back(key, value);
  }
  return records;
}

std::vector<MetadataRecord> load_records(const std::filesystem::path& path) {
  return parse_records(read_file(path));
}

std::string format_records(std::span<const MetadataRecord> records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (i) out += '\n';
    out += "object " + records[i].object_id + '\n';
    for (const auto& [tag, value] : records[i].pairs) out += tag + ' ' + value + '\n';
  }
  return out;
}

}  // namespace cks
