#pragma once

// Hyperlink graphs as formal contexts, enrichment of metadata by link
// incidence, and the batch pipeline from records to crisp links and pages.

#include "cks/context.hpp"
#include "cks/lattice.hpp"
#include "cks/linkage.hpp"
#include "cks/scaling.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cks {

struct WebObjectGraph {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
};

enum class IncidenceOrientation { CrossReferential, Hierarchical };

/// `node <name>` and `edge <source> <target>` lines; `#` starts a comment.
/// Syntax errors carry a line location.
WebObjectGraph parse_link_graph(std::string_view text);
WebObjectGraph load_link_graph(const std::filesystem::path& path);

/// Objects are the nodes, attributes the bare tokens `link:<node>`.
/// Cross-referential: the source has its target; hierarchical: the target
/// has its source. Self-links are dropped and reported in `warnings`.
/// Throws GraphIntegrity for undeclared endpoints or repeated nodes.
FormalContext ingest_link_graph(const WebObjectGraph& g, IncidenceOrientation orientation,
                                std::vector<std::string>* warnings = nullptr);

/// Link attributes apposed before the metadata attributes, both sides
/// namespaced on collision. The link context is reordered to the metadata
/// objects; a context without objects or attributes leaves `meta` as is.
/// Throws ObjectSetMismatch when the object sets differ.
FormalContext enrich(const FormalContext& link_ctx, const FormalContext& meta_ctx);

struct HyperizationConfig {
  ScaleConfig scales;
  double threshold = 1.0;
  IncidenceOrientation orientation = IncidenceOrientation::CrossReferential;
  std::optional<WebObjectGraph> links;
};

struct Hyperization {
  FormalContext interpreted;
  Purified purified;
  Reduced reduced;
  ConceptLattice lattice;
  LinkageMatrix matrix;
  std::vector<CrispLink> links;
  std::vector<std::string> warnings;
};

/// interpret, enrich (when a link graph is given), purify, reduce, build,
/// extensional linkage, crispify. Throws EmptyInput for no records and
/// ThresholdOutOfRange before doing any work.
Hyperization hyperize(std::span<const MetadataRecord> records, const HyperizationConfig& config);

struct ObjectLink {
  std::string source;
  std::string target;
  double weight = 0.0;

  friend bool operator==(const ObjectLink&, const ObjectLink&) = default;
};

/// Concept links pushed down to the objects whose object concepts they join.
std::vector<ObjectLink> project_to_objects(const ConceptLattice& l, std::span<const CrispLink> links);

/// Page name of concept `k` (zero-based index, one-based in the name).
std::string page_name(ConceptIndex k);

/// Text of the page for named concept `k`: its label, intent, extent and an
/// anchor per link leaving `k` towards another named concept.
std::string render_page(const ConceptLattice& l, ConceptIndex k, std::span<const CrispLink> links);

/// Writes one page per named concept plus `links.txt`, creating `out_dir`.
/// Returns the written file names in order. Throws IoError.
std::vector<std::string> emit_web(std::span<const CrispLink> links, const ConceptLattice& l,
                                  const std::filesystem::path& out_dir);

}  // namespace cks
