#include "cks/order.hpp"

#include "cks/error.hpp"

#include <algorithm>

namespace cks {

namespace {

const std::vector<std::size_t> kNone;

bool is_flat(const std::vector<std::vector<std::size_t>>& below) {
  return std::all_of(below.begin(), below.end(), [](const auto& v) { return v.empty(); });
}

}  // namespace

std::optional<std::vector<std::size_t>> topological_order(
    const std::vector<std::vector<std::size_t>>& next) {
  const std::size_t n = next.size();
  std::vector<std::size_t> indegree(n, 0);
  for (const auto& targets : next) {
    for (std::size_t j : targets) ++indegree[j];
  }
  std::vector<std::size_t> ready;
  for (std::size_t i = n; i-- > 0;) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    std::size_t i = ready.back();
    ready.pop_back();
    order.push_back(i);
    for (std::size_t j : next[i]) {
      if (--indegree[j] == 0) ready.push_back(j);
    }
  }
  if (order.size() != n) return std::nullopt;
  return order;
}

PartialOrder PartialOrder::from_predecessors(std::vector<std::vector<std::size_t>> below) {
  const std::size_t n = below.size();
  for (const auto& preds : below) {
    for (std::size_t j : preds) {
      if (j >= n) throw Error(ErrorKind::IndexOutOfRange, "order references element past the end");
    }
  }
  // Edges j -> i for j below i; a topological order lists lower elements first.
  std::vector<std::vector<std::size_t>> up(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j : below[i]) {
      if (j == i) throw Error(ErrorKind::CyclicOrder, "element listed below itself");
      up[j].push_back(i);
    }
  }
  auto order = topological_order(up);
  if (!order) throw Error(ErrorKind::CyclicOrder, "order relation contains a cycle");

  std::vector<Bitset> closure(n, Bitset(n));
  for (std::size_t i : *order) {
    for (std::size_t j : below[i]) {
      closure[i].set(j);
      closure[i] |= closure[j];
    }
  }
  return from_closure(closure);
}

PartialOrder PartialOrder::from_closure(const std::vector<Bitset>& below) {
  const std::size_t n = below.size();
  std::vector<std::vector<std::size_t>> reduced(n);
  for (std::size_t i = 0; i < n; ++i) {
    // j is an immediate predecessor unless some k with j < k < i exists.
    Bitset covered(n);
    for (std::size_t k = below[i].find_first(); k != Bitset::npos; k = below[i].find_next(k)) {
      covered |= below[k];
    }
    for (std::size_t j = below[i].find_first(); j != Bitset::npos; j = below[i].find_next(j)) {
      if (!covered.test(j)) reduced[i].push_back(j);
    }
  }
  if (is_flat(reduced)) return PartialOrder{};
  return PartialOrder(std::move(reduced));
}

bool PartialOrder::flat() const noexcept { return is_flat(below_); }

const std::vector<std::size_t>& PartialOrder::predecessors(std::size_t i) const {
  return i < below_.size() ? below_[i] : kNone;
}

std::vector<Bitset> PartialOrder::strictly_below(std::size_t n) const {
  std::vector<Bitset> closure(n, Bitset(n));
  std::vector<std::vector<std::size_t>> up(n);
  for (std::size_t i = 0; i < below_.size() && i < n; ++i) {
    for (std::size_t j : below_[i]) {
      if (j < n) up[j].push_back(i);
    }
  }
  auto order = topological_order(up);
  for (std::size_t i : *order) {
    for (std::size_t j : predecessors(i)) {
      if (j >= n) continue;
      closure[i].set(j);
      closure[i] |= closure[j];
    }
  }
  return closure;
}

bool PartialOrder::less(std::size_t a, std::size_t b) const {
  if (flat()) return false;
  const std::size_t n = std::max({below_.size(), a + 1, b + 1});
  return strictly_below(n)[b].test(a);
}

PartialOrder PartialOrder::quotient(const std::vector<std::size_t>& class_of,
                                    std::size_t class_count) const {
  if (flat()) return {};
  const std::size_t n = class_of.size();
  auto closure = strictly_below(n);
  std::vector<Bitset> q(class_count, Bitset(class_count));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = closure[i].find_first(); j != Bitset::npos; j = closure[i].find_next(j)) {
      if (class_of[i] != class_of[j]) q[class_of[i]].set(class_of[j]);
    }
  }
  // Re-close: class-level relations may compose through merged members.
  std::vector<std::vector<std::size_t>> lists(class_count);
  for (std::size_t c = 0; c < class_count; ++c) {
    for (std::size_t d = q[c].find_first(); d != Bitset::npos; d = q[c].find_next(d)) {
      lists[c].push_back(d);
    }
  }
  return from_predecessors(std::move(lists));
}

PartialOrder PartialOrder::restricted(const std::vector<std::optional<std::size_t>>& new_index,
                                      std::size_t new_count) const {
  if (flat()) return {};
  const std::size_t n = new_index.size();
  auto closure = strictly_below(n);
  std::vector<Bitset> r(new_count, Bitset(new_count));
  for (std::size_t i = 0; i < n; ++i) {
    if (!new_index[i]) continue;
    for (std::size_t j = closure[i].find_first(); j != Bitset::npos; j = closure[i].find_next(j)) {
      if (new_index[j]) r[*new_index[i]].set(*new_index[j]);
    }
  }
  return from_closure(r);
}

PartialOrder PartialOrder::disjoint_sum(std::size_t own_size, const PartialOrder& other,
                                        std::size_t other_size) const {
  if (flat() && other.flat()) return {};
  std::vector<std::vector<std::size_t>> lists(own_size + other_size);
  for (std::size_t i = 0; i < own_size; ++i) lists[i] = predecessors(i);
  for (std::size_t i = 0; i < other_size; ++i) {
    for (std::size_t j : other.predecessors(i)) lists[own_size + i].push_back(own_size + j);
  }
  return PartialOrder(std::move(lists));
}

bool operator==(const PartialOrder& a, const PartialOrder& b) {
  if (a.flat() || b.flat()) return a.flat() && b.flat();
  const std::size_t n = std::max(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a.predecessors(i) != b.predecessors(i)) return false;
  }
  return true;
}

}  // namespace cks
