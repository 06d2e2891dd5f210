#include "cks/linkage.hpp"

#include "cks/error.hpp"

#include <cstdio>

namespace cks {

namespace {

std::size_t extent_count(const ConceptLattice& l, ConceptIndex k, const Counting& c) {
  return c.empty() ? l.concept_at(k).extent.count() : c.extent.at(k);
}

std::size_t intent_count(const ConceptLattice& l, ConceptIndex k, const Counting& c) {
  return c.empty() ? l.concept_at(k).intent.count() : c.intent.at(k);
}

}  // namespace

Counting raw_counting(const ConceptLattice& l, const FormalContext& raw, const MergeMap& merge) {
  const auto& ctx = l.context();
  // raw rows and columns over the lattice's surviving elements
  std::vector<AttributeSet> rows(raw.object_count(), ctx.no_attributes());
  std::vector<ObjectSet> columns(raw.attribute_count(), ctx.no_objects());
  for (std::size_t m = 0; m < raw.attribute_count(); ++m) {
    const auto survivor = ctx.find_attribute(AttributeToken::parse(merge.attribute(raw.attributes()[m].str())));
    if (!survivor) continue;
    for (std::size_t g = 0; g < raw.object_count(); ++g) {
      if (raw.incident(g, m)) rows[g].set(*survivor);
    }
  }
  for (std::size_t g = 0; g < raw.object_count(); ++g) {
    const auto survivor = ctx.find_object(merge.object(raw.objects()[g]));
    if (!survivor) continue;
    for (std::size_t m = 0; m < raw.attribute_count(); ++m) {
      if (raw.incident(g, m)) columns[m].set(*survivor);
    }
  }

  Counting c;
  for (const auto& node : l.concepts()) {
    std::size_t objects = 0;
    for (const auto& row : rows) objects += node.intent.is_subset_of(row);
    std::size_t attributes = 0;
    for (const auto& column : columns) attributes += node.extent.is_subset_of(column);
    c.extent.push_back(objects);
    c.intent.push_back(attributes);
  }
  return c;
}

std::size_t ext_similarity(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  return extent_count(l, meet(l, k0, k1), c);
}

Ratio ext_linkage(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  const std::size_t den = extent_count(l, k0, c);
  if (den == 0) throw Error(ErrorKind::EmptyExtent, "concept " + std::to_string(k0 + 1) + " has an empty extent");
  return {ext_similarity(l, k0, k1, c), den};
}

AttributeSet int_difference(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1) {
  return l.concept_at(k1).intent - l.concept_at(k0).intent;
}

std::size_t int_diff_measure(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  return intent_count(l, k1, c) - intent_count(l, join(l, k0, k1), c);
}

std::size_t int_similarity(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  return intent_count(l, join(l, k0, k1), c);
}

Ratio int_linkage(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  const std::size_t den = intent_count(l, k0, c);
  if (den == 0) throw Error(ErrorKind::EmptyIntent, "concept " + std::to_string(k0 + 1) + " has an empty intent");
  return {int_similarity(l, k0, k1, c), den};
}

ObjectSet ext_difference(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1) {
  return l.concept_at(k1).extent - l.concept_at(k0).extent;
}

std::size_t ext_diff_measure(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1, const Counting& c) {
  return extent_count(l, k1, c) - extent_count(l, meet(l, k0, k1), c);
}

LinkageMatrix linkage_matrix(const ConceptLattice& l, LinkageMode mode, const Counting& c) {
  const std::size_t n = l.size();
  std::vector<std::vector<Ratio>> entries(n, std::vector<Ratio>(n));
  for (ConceptIndex i = 0; i < n; ++i) {
    const bool ext = mode == LinkageMode::Extensional;
    const std::size_t den = ext ? extent_count(l, i, c) : intent_count(l, i, c);
    for (ConceptIndex j = 0; j < n; ++j) {
      if (den == 0) {
        entries[i][j] = {1, 1};
      } else {
        entries[i][j] = {ext ? ext_similarity(l, i, j, c) : int_similarity(l, i, j, c), den};
      }
    }
  }
  return LinkageMatrix(mode, std::move(entries));
}

std::vector<CrispLink> crispify(const LinkageMatrix& m, double threshold) {
  if (!(threshold > 0.0 && threshold <= 1.0)) {
    throw Error(ErrorKind::ThresholdOutOfRange, "threshold must lie in (0,1], got " + std::to_string(threshold));
  }
  std::vector<CrispLink> links;
  for (ConceptIndex i = 0; i < m.dimension(); ++i) {
    for (ConceptIndex j = 0; j < m.dimension(); ++j) {
      if (i != j && m.entry(i, j).at_least(threshold)) links.push_back({i, j, m(i, j)});
    }
  }
  return links;
}

std::string format_crisp_links(const std::vector<CrispLink>& links) {
  std::string out;
  char buffer[64];
  for (const auto& link : links) {
    std::snprintf(buffer, sizeof buffer, "%zu %zu %.6f\n", link.source + 1, link.target + 1, link.weight);
    out += buffer;
  }
  return out;
}

}  // namespace cks
