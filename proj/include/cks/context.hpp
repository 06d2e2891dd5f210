#pragma once

// Formal contexts: objects, single-valued attribute tokens, and the incidence
// relation between them, together with the derivation operators and the
// context-level optimizations (purification, reduction) and apposition.

#include "cks/order.hpp"

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cks {

using ObjectSet = Bitset;     ///< indexed by object position
using AttributeSet = Bitset;  ///< indexed by attribute position

enum class Relator { Eq, Le, Ge };

/// A single-valued attribute `tag#value`. An empty value denotes a bare
/// boolean tag and always serializes as just `tag`.
struct AttributeToken {
  std::string tag;
  Relator relator = Relator::Eq;
  std::string value;

  static AttributeToken bare(std::string tag);
  static AttributeToken parse(std::string_view text);  ///< throws SyntaxError

  bool is_bare() const noexcept { return value.empty(); }
  std::string str() const;

  friend bool operator==(const AttributeToken&, const AttributeToken&) = default;
  friend std::strong_ordering operator<=>(const AttributeToken& a, const AttributeToken& b) {
    return a.str() <=> b.str();
  }
};

/// A named, explicitly specified concept, defined by the attributes it
/// abstracts. Its concept is the closure of `intent`.
struct ConceptualView {
  std::string name;
  std::vector<AttributeToken> intent;

  friend bool operator==(const ConceptualView&, const ConceptualView&) = default;
};

class FormalContext {
public:
  FormalContext() = default;

  /// `rows[g]` is the attribute set of object `g`. Throws DuplicateDeclaration
  /// for repeated names, InvalidContext for malformed rows, views over unknown
  /// attributes, or an attribute order the incidence does not inherit upward.
  FormalContext(std::vector<std::string> objects, std::vector<AttributeToken> attributes,
                std::vector<AttributeSet> rows, PartialOrder object_order = {},
                PartialOrder attribute_order = {}, std::vector<ConceptualView> views = {});

  /// Builds from (object, attribute) name pairs.
  static FormalContext from_pairs(
      std::vector<std::string> objects, std::vector<AttributeToken> attributes,
      std::span<const std::pair<std::string, AttributeToken>> incidence);

  std::size_t object_count() const noexcept { return objects_.size(); }
  std::size_t attribute_count() const noexcept { return attributes_.size(); }

  const std::vector<std::string>& objects() const noexcept { return objects_; }
  const std::vector<AttributeToken>& attributes() const noexcept { return attributes_; }
  const std::vector<ConceptualView>& views() const noexcept { return views_; }
  const PartialOrder& object_order() const noexcept { return object_order_; }
  const PartialOrder& attribute_order() const noexcept { return attribute_order_; }

  bool incident(std::size_t object, std::size_t attribute) const {
    return rows_.at(object).test(attribute);
  }
  const AttributeSet& row(std::size_t object) const { return rows_.at(object); }
  const ObjectSet& column(std::size_t attribute) const { return columns_.at(attribute); }

  std::optional<std::size_t> find_object(std::string_view name) const;
  std::optional<std::size_t> find_attribute(const AttributeToken& token) const;
  std::size_t object_index(std::string_view name) const;               ///< NotInContext
  std::size_t attribute_index(const AttributeToken& token) const;      ///< NotInContext

  ObjectSet object_set(std::span<const std::string> names) const;            ///< NotInContext
  AttributeSet attribute_set(std::span<const AttributeToken> tokens) const;  ///< NotInContext

  ObjectSet no_objects() const { return ObjectSet(object_count()); }
  AttributeSet no_attributes() const { return AttributeSet(attribute_count()); }

  /// A' : attributes shared by every object in `objects`.
  AttributeSet common_attributes(const ObjectSet& objects) const;
  /// B' : objects having every attribute in `attributes`.
  ObjectSet common_objects(const AttributeSet& attributes) const;

  AttributeSet close_intent(const AttributeSet& attributes) const {
    return common_attributes(common_objects(attributes));
  }
  ObjectSet close_extent(const ObjectSet& objects) const {
    return common_objects(common_attributes(objects));
  }

  std::vector<std::string> object_names(const ObjectSet& objects) const;
  std::vector<AttributeToken> attribute_tokens(const AttributeSet& attributes) const;

  /// Same context with a different view list (validated).
  FormalContext with_views(std::vector<ConceptualView> views) const;

  friend bool operator==(const FormalContext& a, const FormalContext& b);

private:
  void validate_views() const;

  std::vector<std::string> objects_;
  std::vector<AttributeToken> attributes_;
  std::vector<AttributeSet> rows_;
  std::vector<ObjectSet> columns_;
  PartialOrder object_order_;
  PartialOrder attribute_order_;
  std::vector<ConceptualView> views_;
  std::map<std::string, std::size_t, std::less<>> object_lookup_;
  std::map<std::string, std::size_t, std::less<>> attribute_lookup_;
};

// Name-level derivation operators.
std::vector<AttributeToken> derive_objects(const FormalContext& ctx,
                                           std::span<const std::string> objects);
std::vector<std::string> derive_attrs(const FormalContext& ctx,
                                      std::span<const AttributeToken> attributes);

struct ConceptPair {
  ObjectSet extent;
  AttributeSet intent;

  friend bool operator==(const ConceptPair&, const ConceptPair&) = default;
};

inline constexpr std::size_t kOracleObjectLimit = 20;

/// Every concept of `ctx`, found by closing each subset of the objects.
/// Exponential; refuses (OracleScaleExceeded) above kOracleObjectLimit objects.
/// Sorted by extent for stable comparison.
std::vector<ConceptPair> enumerate_concepts_oracle(const FormalContext& ctx);

/// Original name to surviving representative, for objects and attributes
/// (attributes keyed by their serialized token).
struct MergeMap {
  std::map<std::string, std::string> objects;
  std::map<std::string, std::string> attributes;

  std::string object(std::string_view name) const;
  std::string attribute(std::string_view token) const;
};

struct Purified {
  FormalContext context;
  MergeMap merge;
};

/// Fuses objects with identical rows and attributes with identical columns.
/// The lexicographically least name of each group survives at the position
/// of the group's first member.
Purified purify(const FormalContext& ctx);

bool is_purified(const FormalContext& ctx);

enum class ElementKind { Object, Attribute };

/// A dropped reducible element, now available as a named view.
struct PromotedView {
  std::string name;
  ElementKind kind;
  std::vector<std::string> extent;
  std::vector<AttributeToken> intent;
};

struct Reduced {
  FormalContext context;
  std::vector<PromotedView> promoted;
};

/// Irreducibility computed directly on the incidence: an object is reducible
/// when its row is the intersection of the strictly larger rows (the empty
/// intersection being all attributes); dually for attributes. In a context
/// whose lattice has a single concept every element counts as irreducible.
struct ContextIrreducibles {
  std::vector<bool> objects;
  std::vector<bool> attributes;
};
ContextIrreducibles context_irreducibles(const FormalContext& ctx);

/// Drops reducible objects and attributes, promoting each to a view named
/// after it. Existing views are re-expressed over the surviving attributes.
/// Throws NotPurified if `ctx` has duplicate rows or columns.
Reduced reduce(const FormalContext& ctx);

/// Namespace prefixes applied to every attribute tag of the respective
/// context when the two attribute lists collide.
struct Namespaces {
  std::string first;
  std::string second;
};

/// Shared objects, concatenated attributes, union of incidences. Throws
/// ObjectSetMismatch if the object lists differ and AttributeCollision if a
/// token occurs in both and cannot be separated by `namespaces`.
FormalContext apposition(const FormalContext& left, const FormalContext& right,
                         std::optional<Namespaces> namespaces = std::nullopt);

/// Objects become bare-tag attributes and attributes become objects named by
/// their serialized token. Orders swap; views are dropped.
FormalContext transpose(const FormalContext& ctx);

/// Prefixes every attribute tag (and view intents) with `prefix`, unless the
/// tag already carries it.
FormalContext namespaced(const FormalContext& ctx, std::string_view prefix);

/// Same incidence with objects permuted into `order`, which must be a
/// permutation of the current object names (ObjectSetMismatch otherwise).
FormalContext reorder_objects(const FormalContext& ctx, std::span<const std::string> order);

}  // namespace cks
