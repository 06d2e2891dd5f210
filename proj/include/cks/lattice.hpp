#pragma once

#include "cks/context.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace cks {

/// Zero-based position of a concept in its lattice. Concepts are numbered in
/// canonical order: topologically from the top (position 0), ties broken by
/// the lexicographically least intent. Interchange files and the service
/// print these one-based.
using ConceptIndex = std::size_t;

struct Concept {
  ConceptIndex index = 0;
  ObjectSet extent;
  AttributeSet intent;
};

class ConceptLattice {
public:
  /// Concept generation (NextClosure over attributes, covers by upper
  /// neighbour counting).
  explicit ConceptLattice(FormalContext context);

  const FormalContext& context() const noexcept { return context_; }
  std::size_t size() const noexcept { return concepts_.size(); }
  const std::vector<Concept>& concepts() const noexcept { return concepts_; }
  const Concept& concept_at(ConceptIndex k) const;  ///< IndexOutOfRange

  ConceptIndex top() const noexcept { return 0; }
  ConceptIndex bottom() const noexcept { return concepts_.size() - 1; }

  /// Immediate generalizations / specializations, sorted ascending.
  const std::vector<ConceptIndex>& upper_covers(ConceptIndex k) const;
  const std::vector<ConceptIndex>& lower_covers(ConceptIndex k) const;
  std::size_t cover_count() const noexcept { return cover_count_; }

  ConceptIndex object_concept(std::size_t object) const { return gamma_.at(object); }
  ConceptIndex attribute_concept(std::size_t attribute) const { return mu_.at(attribute); }
  const std::vector<ConceptIndex>& object_concepts() const noexcept { return gamma_; }
  const std::vector<ConceptIndex>& attribute_concepts() const noexcept { return mu_; }

  /// Concept of each context view, in view order.
  const std::vector<ConceptIndex>& view_concepts() const noexcept { return views_; }

  std::optional<ConceptIndex> find_extent(const ObjectSet& extent) const;
  std::optional<ConceptIndex> find_intent(const AttributeSet& intent) const;
  /// Concept generated by an arbitrary object set (its closure).
  ConceptIndex concept_of_objects(const ObjectSet& objects) const;
  ConceptIndex concept_of_attributes(const AttributeSet& attributes) const;

private:
  void check(ConceptIndex k) const;

  FormalContext context_;
  std::vector<Concept> concepts_;
  std::vector<std::vector<ConceptIndex>> upper_;
  std::vector<std::vector<ConceptIndex>> lower_;
  std::size_t cover_count_ = 0;
  std::vector<ConceptIndex> gamma_;
  std::vector<ConceptIndex> mu_;
  std::vector<ConceptIndex> views_;
  std::map<ObjectSet, ConceptIndex> by_extent_;
};

ConceptLattice build_lattice(const FormalContext& ctx);

/// extent(k0) ⊆ extent(k1)
bool leq(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1);
ConceptIndex meet(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1);
ConceptIndex join(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1);

/// Classified by cover counting: join-irreducible iff exactly one lower cover,
/// meet-irreducible iff exactly one upper cover.
struct Irreducibles {
  std::vector<ConceptIndex> join;
  std::vector<ConceptIndex> meet;
};
Irreducibles irreducibles(const ConceptLattice& l);

enum class NeighborhoodKind {
  Extensional,  ///< restriction to the seed's extent (meet restriction)
  Intensional,  ///< restriction to the seed's intent (join restriction)
};

/// Local lattice around a seed concept. `projection` maps each global concept
/// to its local image (k ∧ x, or k ∨ x for the intensional kind); `embedding`
/// maps each local concept back to the global concept it realizes.
struct NeighborhoodLattice {
  NeighborhoodKind kind = NeighborhoodKind::Extensional;
  ConceptLattice lattice;
  ConceptIndex seed = 0;
  std::vector<ConceptIndex> projection;
  std::vector<ConceptIndex> embedding;
  /// Local object (attribute, for the intensional kind) position -> global position.
  std::vector<std::size_t> element_map;

  ConceptIndex local_seed() const { return projection.at(seed); }
};

/// Restriction of the system to extent(k): all attributes are retained, those
/// with empty restricted columns landing at the local bottom. Views whose
/// concept lies below the seed are carried over.
NeighborhoodLattice meet_restrict(const ConceptLattice& l, ConceptIndex k);

/// Dual restriction to intent(k): all objects retained, views above the seed
/// carried over.
NeighborhoodLattice join_restrict(const ConceptLattice& l, ConceptIndex k);

/// Context recovered from the lattice alone: objects from object-concept
/// preimages, attributes from attribute-concept preimages, and gIm iff
/// gamma(g) <= mu(m). Views are re-expressed by the intent of their concept.
FormalContext readout(const ConceptLattice& l);

}  // namespace cks
