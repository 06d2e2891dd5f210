#pragma once

// Ranked orders over named concepts, browsing sessions moving between
// conceptual states, and goal queries.

#include "cks/lattice.hpp"
#include "cks/linkage.hpp"

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cks {

enum class Mode { Extensional, Intensional };
enum class Scope { Global, Local };
enum class Display { Direct, Reverse };

/// Which generators contribute names to a label.
enum class LabelKinds {
  ViewsAttributes,
  ViewsObjects,
  All,
};

struct DisplayLabel {
  ConceptIndex concept_index = 0;
  /// Views, then attribute tokens, then objects, each sorted.
  std::vector<std::string> names;

  bool empty() const noexcept { return names.empty(); }
  std::string str() const;  ///< "[a, b]"
};

/// Label of every concept (empty names for unnamed concepts).
std::vector<DisplayLabel> concept_labels(const ConceptLattice& l, LabelKinds kinds);

struct RankedEntry {
  DisplayLabel label;
  std::size_t rank = 0;
  std::optional<Ratio> coefficient;
};

struct RankedOrder {
  Display display = Display::Direct;
  /// Sorted by rank in display order, ties by concept index.
  std::vector<RankedEntry> entries;

  const RankedEntry* find(ConceptIndex k) const;
  std::optional<std::size_t> max_rank() const;
  /// One line per rank, `<rank> { [a, b] [c] }`. REVERSE runs from the
  /// highest rank down to 0 and keeps empty rows; DIRECT runs upward and
  /// shows only occupied ranks.
  std::string render() const;
};

/// Entries whose coefficient (or, lacking one, rank) is at least `tau`.
/// Throws ThresholdOutOfRange for negative `tau`.
RankedOrder threshold_filter(const RankedOrder& r, double tau);

class BrowseSession {
public:
  /// Global scope at the top concept.
  static BrowseSession start(std::shared_ptr<const ConceptLattice> lattice, Mode mode);

  Mode mode() const noexcept { return mode_; }
  Scope scope() const noexcept { return scope_; }
  ConceptIndex state() const noexcept { return state_; }
  const ConceptLattice& lattice() const noexcept { return *lattice_; }
  const std::optional<NeighborhoodLattice>& local() const noexcept { return local_; }

  /// Moves to a named concept of the current scope (global index). Throws
  /// NotDisplayable for unnamed concepts and for concepts outside the
  /// neighbourhood in local scope.
  void transition(ConceptIndex target);
  /// Local scope restricts to the neighbourhood of the current state;
  /// returning to global scope discards it.
  void enter_scope(Scope scope);
  /// The mode is fixed for a session; asking for the other one throws
  /// WrongMode.
  void choose_mode(Mode mode) const;

  /// Global scope only (WrongScope otherwise).
  RankedOrder rank_similarity() const;
  /// Local scope only (WrongScope otherwise).
  RankedOrder rank_difference() const;

  /// Names of every concept the current scope can display, by global index.
  std::vector<DisplayLabel> displayable() const;

private:
  BrowseSession(std::shared_ptr<const ConceptLattice> lattice, Mode mode)
      : lattice_(std::move(lattice)), mode_(mode) {}

  std::shared_ptr<const ConceptLattice> lattice_;
  Mode mode_;
  Scope scope_ = Scope::Global;
  ConceptIndex state_ = 0;
  std::optional<NeighborhoodLattice> local_;
};

struct QueryResult {
  RankedOrder ranking;
  /// Concept of the original lattice generated by the query.
  ConceptIndex nearest = 0;
  /// Set when the goal lands exactly on an existing concept.
  std::optional<ConceptIndex> coincides;
  /// Existing objects (attributes) whose row (column) equals the query.
  std::vector<std::string> twins;
};

/// A temporary goal object holding exactly `attributes`; ranks views and
/// objects by shared attributes, with the intensional linkage from the goal
/// as coefficient. Throws NotInContext for unknown attributes.
QueryResult intensional_query(const ConceptLattice& l, std::span<const AttributeToken> attributes);

/// Dual: a temporary goal attribute held by exactly `objects`, ranking
/// views and attributes.
QueryResult extensional_query(const ConceptLattice& l, std::span<const std::string> objects);

std::string_view to_string(Mode mode);
std::string_view to_string(Scope scope);

}  // namespace cks
