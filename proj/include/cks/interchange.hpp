#pragma once

// FCIF (formal context interchange) and CLIF (concept lattice interchange)
// documents: parsing, canonical emission, and conversion through lattice
// generation and readout.

#include "cks/context.hpp"
#include "cks/lattice.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cks {

struct FcifObject {
  std::string name;
  std::vector<std::string> predecessors;

  friend bool operator==(const FcifObject&, const FcifObject&) = default;
};

struct FcifAttribute {
  AttributeToken token;
  std::vector<AttributeToken> predecessors;

  friend bool operator==(const FcifAttribute&, const FcifAttribute&) = default;
};

struct FcifRow {
  std::string object;
  std::vector<AttributeToken> attributes;

  friend bool operator==(const FcifRow&, const FcifRow&) = default;
};

struct FcifDocument {
  std::string type_name;
  std::vector<FcifObject> objects;
  std::vector<FcifAttribute> attributes;
  std::vector<FcifRow> incidence;
  std::vector<ConceptualView> views;  ///< optional VIEW section

  friend bool operator==(const FcifDocument&, const FcifDocument&) = default;
};

/// One-based concept index with a list of names.
template <typename Item>
struct ClifEntry {
  std::size_t index = 0;
  std::vector<Item> items;

  friend bool operator==(const ClifEntry&, const ClifEntry&) = default;
};

struct LayoutEntry {
  std::size_t index = 0;
  std::size_t x = 0;
  std::size_t y = 0;

  friend bool operator==(const LayoutEntry&, const LayoutEntry&) = default;
};

struct ClifDocument {
  std::string type_name;
  std::vector<ClifEntry<std::string>> object_generators;
  std::vector<ClifEntry<AttributeToken>> attribute_generators;
  std::vector<ClifEntry<std::string>> view_generators;  ///< optional GENERATOR: VIEW
  /// Immediate upper covers (more general neighbours) of each concept.
  std::vector<ClifEntry<std::size_t>> successors;
  std::optional<std::vector<LayoutEntry>> layout;

  std::size_t concept_count() const noexcept { return successors.size(); }

  friend bool operator==(const ClifDocument&, const ClifDocument&) = default;
};

/// Throw SyntaxError, UndeclaredName or DuplicateDeclaration, located by
/// line and column.
FcifDocument parse_fcif(std::string_view text);
std::string emit_fcif(const FcifDocument& doc);

/// As parse_fcif; also IndexOutOfRange for indexes outside 1..p, CyclicOrder
/// for a cyclic successor relation and InvalidLattice when top or bottom is
/// not unique.
ClifDocument parse_clif(std::string_view text);
std::string emit_clif(const ClifDocument& doc);

/// Throws CyclicOrder for cyclic predecessor lists and InvalidContext when
/// the incidence is not inherited along the orders.
FormalContext fcif_context(const FcifDocument& doc);
FcifDocument fcif_document(const FormalContext& ctx, std::string type_name);

/// Concept indexes as in the lattice, printed one-based.
ClifDocument clif_document(const ConceptLattice& l, std::string type_name, bool with_layout = false);

/// Readout: objects, attributes and views from the generators (each sorted
/// by name), gIm iff gamma(g) <= mu(m) in the successor order. Views take
/// the attributes above their concept. Same errors as parse_clif.
FormalContext clif_context(const ClifDocument& doc);

/// Lattice of the read-out context. Throws InvalidLattice when the
/// generators do not account for every concept of the document.
ConceptLattice clif_lattice(const ClifDocument& doc);

ClifDocument fcif_to_clif(const FcifDocument& doc);
FcifDocument clif_to_fcif(const ClifDocument& doc);

/// Layered drawing positions: y is the longest path from the top, x the
/// rank within the layer.
std::vector<LayoutEntry> compute_layout(const ConceptLattice& l);

/// Name quoting used by both formats.
std::string quote_name(std::string_view name);
std::string quote_token(const AttributeToken& token);

}  // namespace cks
