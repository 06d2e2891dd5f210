#pragma once

#include <boost/dynamic_bitset.hpp>

#include <cstddef>
#include <optional>
#include <vector>

namespace cks {

using Bitset = boost::dynamic_bitset<>;

/// Finite strict partial order over elements 0..n-1, stored as immediate
/// predecessor lists (transitively reduced). A default-constructed order is
/// flat: no element lies below any other.
class PartialOrder {
public:
  PartialOrder() = default;

  /// `below[i]` lists elements strictly below `i`. Redundant (transitive)
  /// entries are accepted and reduced away. Throws CyclicOrder on cycles and
  /// IndexOutOfRange on references past `below.size()`.
  static PartialOrder from_predecessors(std::vector<std::vector<std::size_t>> below);

  bool flat() const noexcept;
  std::size_t size() const noexcept { return below_.size(); }

  /// Immediate predecessors of `i`, sorted ascending. Empty for elements
  /// outside the stored range.
  const std::vector<std::size_t>& predecessors(std::size_t i) const;

  /// `result[i]` has bit `j` set iff `j < i` in the order (transitive closure).
  std::vector<Bitset> strictly_below(std::size_t n) const;

  bool less(std::size_t a, std::size_t b) const;

  /// Order induced on equivalence classes. Pairs inside one class vanish.
  PartialOrder quotient(const std::vector<std::size_t>& class_of, std::size_t class_count) const;

  /// Order induced on the kept elements (`new_index[i]` empty means dropped).
  /// Relations through dropped elements are preserved.
  PartialOrder restricted(const std::vector<std::optional<std::size_t>>& new_index,
                          std::size_t new_count) const;

  /// Disjoint sum: `other`'s elements are shifted by `own_size`.
  PartialOrder disjoint_sum(std::size_t own_size, const PartialOrder& other,
                            std::size_t other_size) const;

  friend bool operator==(const PartialOrder& a, const PartialOrder& b);

private:
  explicit PartialOrder(std::vector<std::vector<std::size_t>> reduced) : below_(std::move(reduced)) {}

  static PartialOrder from_closure(const std::vector<Bitset>& below);

  std::vector<std::vector<std::size_t>> below_;
};

/// Topological order of a DAG given as adjacency lists (edge i -> j for j in
/// next[i]); std::nullopt when the graph has a cycle.
std::optional<std::vector<std::size_t>> topological_order(
    const std::vector<std::vector<std::size_t>>& next);

}  // namespace cks
