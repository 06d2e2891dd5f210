#pragma once

// Raw metadata records, conceptual scales, and interpretation
// (summarization followed by scaling).

#include "cks/context.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cks {

/// Raw, possibly multi-valued metadata about one resource.
struct MetadataRecord {
  std::string object_id;
  std::vector<std::pair<std::string, std::string>> pairs;

  std::vector<std::string> values(std::string_view tag) const;

  friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

enum class ScaleKind { Nominal, Ordinal };
enum class Comparator { Numeric, Lexicographic };

struct ConceptualScale {
  std::string tag;
  ScaleKind kind = ScaleKind::Nominal;
  std::vector<std::string> values;
  Comparator comparator = Comparator::Lexicographic;

  /// Both throw ScaleValueError for empty or repeated values; ordinal values
  /// must ascend under the comparator.
  static ConceptualScale nominal(std::string tag, std::vector<std::string> values);
  static ConceptualScale ordinal(std::string tag, Comparator comparator,
                                 std::vector<std::string> values);

  friend bool operator==(const ConceptualScale&, const ConceptualScale&) = default;
};

/// Format, size, title and outgoing links of a document. `object_id`
/// defaults to the file name. Throws IoError.
MetadataRecord summarize_document(const std::filesystem::path& path, std::string object_id = {});
MetadataRecord summarize_bytes(std::string_view file_name, std::string_view bytes,
                               std::string object_id);

/// Nominal scales yield `tag=v` attributes, ordinal scales `tag<=v`
/// attributes ordered by value. Records sharing an id are merged. Values a
/// nominal scale does not list are ignored; a non-numeric value under a
/// numeric ordinal scale throws ScaleValueError.
FormalContext apply_scale(std::span<const MetadataRecord> records, const ConceptualScale& scale);

/// Apposition of every scale's context over all record ids. A scale whose
/// attributes collide with earlier ones is namespaced `s<i>:`.
FormalContext interpret(std::span<const MetadataRecord> records,
                        std::span<const ConceptualScale> scales);

/// Distinct record ids in first-appearance order.
std::vector<std::string> record_ids(std::span<const MetadataRecord> records);

struct ScaleConfig {
  std::vector<ConceptualScale> scales;
  std::vector<ConceptualView> views;
};

/// One directive per line:
///   nominal <tag> <v1> <v2> ...
///   ordinal <numeric|lex> <tag> <v1> <v2> ...
///   view <name> <token> ...
/// Blank lines and lines starting with '#' are skipped. Throws SyntaxError.
ScaleConfig parse_scale_config(std::string_view text);
ScaleConfig load_scale_config(const std::filesystem::path& path);

/// Blocks separated by blank lines; first line `object <id>`, then
/// `<tag> <value>` lines (the value runs to the end of the line).
std::vector<MetadataRecord> parse_records(std::string_view text);
std::vector<MetadataRecord> load_records(const std::filesystem::path& path);
std::string format_records(std::span<const MetadataRecord> records);

}  // namespace cks
