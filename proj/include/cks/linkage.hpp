#pragma once

// Similarity, linkage and difference between concepts, in both modes, plus
// the linkage matrix and its crispification into links.

#include "cks/context.hpp"
#include "cks/lattice.hpp"

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace cks {

/// Exact quotient of two counts. Comparison cross-multiplies; a zero
/// denominator is never stored by the measures.
struct Ratio {
  std::size_t num = 0;
  std::size_t den = 1;

  double value() const noexcept { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
  bool is_one() const noexcept { return num == den; }
  bool at_least(double threshold) const noexcept {
    return static_cast<double>(num) >= threshold * static_cast<double>(den);
  }

  friend bool operator==(const Ratio& a, const Ratio& b) noexcept { return a.num * b.den == b.num * a.den; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) noexcept {
    return a.num * b.den <=> b.num * a.den;
  }
};

enum class LinkageMode { Extensional, Intensional };

/// Number of elements each concept counts as: `extent[k]` objects and
/// `intent[k]` attributes. Left empty, the lattice's own context is counted.
struct Counting {
  std::vector<std::size_t> extent;
  std::vector<std::size_t> intent;

  bool empty() const noexcept { return extent.empty(); }
};

/// Counts taken on the raw context the lattice was purified and reduced
/// from: each concept counts the raw objects having all its (merged)
/// attributes and the raw attributes shared by all its objects.
Counting raw_counting(const ConceptLattice& l, const FormalContext& raw, const MergeMap& merge);

// Extensional mode.
std::size_t ext_similarity(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});
/// σ(k0,k1) / |extent(k0)|. Throws EmptyExtent.
Ratio ext_linkage(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});
/// intent(k1) \ intent(k0)
AttributeSet int_difference(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1);
std::size_t int_diff_measure(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});

// Intensional mode.
std::size_t int_similarity(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});
/// Throws EmptyIntent.
Ratio int_linkage(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});
/// extent(k1) \ extent(k0)
ObjectSet ext_difference(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1);
std::size_t ext_diff_measure(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c = {});

class LinkageMatrix {
public:
  LinkageMatrix(LinkageMode mode, std::vector<std::vector<Ratio>> entries)
      : mode_(mode), entries_(std::move(entries)) {}

  LinkageMode mode() const noexcept { return mode_; }
  std::size_t dimension() const noexcept { return entries_.size(); }
  const Ratio& entry(ConceptIndex i, ConceptIndex j) const { return entries_.at(i).at(j); }
  double operator()(ConceptIndex i, ConceptIndex j) const { return entry(i, j).value(); }

private:
  LinkageMode mode_;
  std::vector<std::vector<Ratio>> entries_;
};

/// λ in the chosen mode for every pair. A row whose source counts no
/// elements (the bottom's empty extent, the top's empty intent) implies
/// everything vacuously and is filled with 1.
LinkageMatrix linkage_matrix(const ConceptLattice& l, LinkageMode mode, const Counting& c = {});

struct CrispLink {
  ConceptIndex source = 0;
  ConceptIndex target = 0;
  double weight = 0.0;

  friend bool operator==(const CrispLink&, const CrispLink&) = default;
};

/// Off-diagonal entries at or above `threshold`, ordered by source then
/// target. Throws ThresholdOutOfRange unless 0 < threshold <= 1.
std::vector<CrispLink> crispify(const LinkageMatrix& m, double threshold);

/// `source target weight` per line, indexes one-based, weight to 6 decimals.
std::string format_crisp_links(const std::vector<CrispLink>& links);

}  // namespace cks
