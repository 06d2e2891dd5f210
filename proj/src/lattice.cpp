#include "cks/lattice.hpp"

#include "cks/error.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace cks {

namespace {

// NextClosure: all closed attribute sets in lectic order.
std::vector<AttributeSet> closed_intents(const FormalContext& ctx) {
  const std::size_t m = ctx.attribute_count();
  std::vector<AttributeSet> intents;
  AttributeSet current = ctx.close_intent(ctx.no_attributes());
  while (true) {
    intents.push_back(current);
    bool advanced = false;
    AttributeSet prefix = current;
    for (std::size_t i = m; i-- > 0;) {
      if (prefix.test(i)) {
        prefix.reset(i);
        continue;
      }
      AttributeSet candidate = prefix;
      candidate.set(i);
      candidate = ctx.close_intent(candidate);
      // Accept when the closure adds nothing before position i.
      AttributeSet added = candidate - prefix;
      std::size_t first = added.find_first();
      if (first == i) {
        current = std::move(candidate);
        advanced = true;
        break;
      }
    }
    if (!advanced) break;
  }
  return intents;
}

std::vector<std::string> intent_key(const FormalContext& ctx, const AttributeSet& intent) {
  std::vector<std::string> key;
  for (std::size_t m = intent.find_first(); m != Bitset::npos; m = intent.find_next(m)) {
    key.push_back(ctx.attributes()[m].str());
  }
  std::sort(key.begin(), key.end());
  return key;
}

}  // namespace

ConceptLattice::ConceptLattice(FormalContext context) : context_(std::move(context)) {
  const FormalContext& ctx = context_;
  const std::size_t n = ctx.object_count();

  // Unordered concepts, then upper covers by counting generating objects.
  std::vector<Concept> raw;
  std::map<ObjectSet, std::size_t> raw_index;
  for (auto& intent : closed_intents(ctx)) {
    ObjectSet extent = ctx.common_objects(intent);
    raw_index.emplace(extent, raw.size());
    raw.push_back({0, std::move(extent), std::move(intent)});
  }
  const std::size_t count = raw.size();
  std::vector<std::vector<std::size_t>> raw_upper(count);
  for (std::size_t c = 0; c < count; ++c) {
    const ObjectSet& extent = raw[c].extent;
    std::map<std::size_t, std::size_t> hits;
    for (std::size_t g = 0; g < n; ++g) {
      if (extent.test(g)) continue;
      ObjectSet grown = extent;
      grown.set(g);
      ++hits[raw_index.at(ctx.close_extent(grown))];
    }
    for (auto [candidate, generated_by] : hits) {
      if (generated_by == raw[candidate].extent.count() - extent.count()) {
        raw_upper[c].push_back(candidate);
      }
    }
  }

  // Canonical numbering: a concept is ready once all its upper covers are
  // numbered; the ready concept with the least intent goes next.
  std::vector<std::vector<std::size_t>> raw_lower(count);
  std::vector<std::size_t> pending(count);
  for (std::size_t c = 0; c < count; ++c) {
    pending[c] = raw_upper[c].size();
    for (std::size_t u : raw_upper[c]) raw_lower[u].push_back(c);
  }
  std::vector<std::vector<std::string>> keys(count);
  for (std::size_t c = 0; c < count; ++c) keys[c] = intent_key(ctx, raw[c].intent);
  std::set<std::pair<std::vector<std::string>, std::size_t>> ready;
  for (std::size_t c = 0; c < count; ++c) {
    if (pending[c] == 0) ready.emplace(keys[c], c);
  }
  std::vector<std::size_t> position(count);
  std::vector<std::size_t> order;
  while (!ready.empty()) {
    std::size_t c = ready.begin()->second;
    ready.erase(ready.begin());
    position[c] = order.size();
    order.push_back(c);
    for (std::size_t d : raw_lower[c]) {
      if (--pending[d] == 0) ready.emplace(keys[d], d);
    }
  }

  concepts_.resize(count);
  upper_.resize(count);
  lower_.resize(count);
  for (std::size_t c = 0; c < count; ++c) {
    const std::size_t k = position[c];
    concepts_[k] = {k, raw[c].extent, raw[c].intent};
    for (std::size_t u : raw_upper[c]) {
      upper_[k].push_back(position[u]);
      lower_[position[u]].push_back(k);
    }
    cover_count_ += raw_upper[c].size();
  }
  for (auto& list : upper_) std::sort(list.begin(), list.end());
  for (auto& list : lower_) std::sort(list.begin(), list.end());
  for (const auto& node : concepts_) by_extent_.emplace(node.extent, node.index);

  for (std::size_t g = 0; g < n; ++g) {
    ObjectSet single = ctx.no_objects();
    single.set(g);
    gamma_.push_back(concept_of_objects(single));
  }
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    mu_.push_back(by_extent_.at(ctx.column(m)));
  }
  for (const auto& view : ctx.views()) {
    views_.push_back(concept_of_attributes(ctx.attribute_set(view.intent)));
  }
}

void ConceptLattice::check(ConceptIndex k) const {
  if (k >= concepts_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "concept index " + std::to_string(k) + " out of range");
  }
}

const Concept& ConceptLattice::concept_at(ConceptIndex k) const {
  check(k);
  return concepts_[k];
}

const std::vector<ConceptIndex>& ConceptLattice::upper_covers(ConceptIndex k) const {
  check(k);
  return upper_[k];
}

const std::vector<ConceptIndex>& ConceptLattice::lower_covers(ConceptIndex k) const {
  check(k);
  return lower_[k];
}

std::optional<ConceptIndex> ConceptLattice::find_extent(const ObjectSet& extent) const {
  auto it = by_extent_.find(extent);
  if (it == by_extent_.end()) return std::nullopt;
  return it->second;
}

std::optional<ConceptIndex> ConceptLattice::find_intent(const AttributeSet& intent) const {
  auto k = find_extent(context_.common_objects(intent));
  if (!k || concepts_[*k].intent != intent) return std::nullopt;
  return k;
}

ConceptIndex ConceptLattice::concept_of_objects(const ObjectSet& objects) const {
  return by_extent_.at(context_.close_extent(objects));
}

ConceptIndex ConceptLattice::concept_of_attributes(const AttributeSet& attributes) const {
  return by_extent_.at(context_.common_objects(attributes));
}

ConceptLattice build_lattice(const FormalContext& ctx) { return ConceptLattice(ctx); }

bool leq(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1) {
  return l.concept_at(k0).extent.is_subset_of(l.concept_at(k1).extent);
}

ConceptIndex meet(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1) {
  return *l.find_extent(l.concept_at(k0).extent & l.concept_at(k1).extent);
}

ConceptIndex join(const ConceptLattice& l, ConceptIndex k0, ConceptIndex k1) {
  return l.concept_of_attributes(l.concept_at(k0).intent & l.concept_at(k1).intent);
}

Irreducibles irreducibles(const ConceptLattice& l) {
  Irreducibles result;
  for (ConceptIndex k = 0; k < l.size(); ++k) {
    if (l.lower_covers(k).size() == 1) result.join.push_back(k);
    if (l.upper_covers(k).size() == 1) result.meet.push_back(k);
  }
  return result;
}

namespace {

std::vector<ConceptualView> views_where(const ConceptLattice& l, auto keep) {
  std::vector<ConceptualView> views;
  const auto& all = l.context().views();
  for (std::size_t v = 0; v < all.size(); ++v) {
    if (keep(l.view_concepts()[v])) views.push_back(all[v]);
  }
  return views;
}

}  // namespace

NeighborhoodLattice meet_restrict(const ConceptLattice& l, ConceptIndex k) {
  const FormalContext& ctx = l.context();
  const ObjectSet& seed_extent = l.concept_at(k).extent;

  std::vector<std::size_t> element_map;
  std::vector<std::optional<std::size_t>> local_of(ctx.object_count());
  std::vector<std::string> names;
  std::vector<AttributeSet> rows;
  for (std::size_t g = seed_extent.find_first(); g != Bitset::npos; g = seed_extent.find_next(g)) {
    local_of[g] = element_map.size();
    element_map.push_back(g);
    names.push_back(ctx.objects()[g]);
    rows.push_back(ctx.row(g));
  }
  FormalContext local(std::move(names), ctx.attributes(), std::move(rows),
                      ctx.object_order().restricted(local_of, element_map.size()),
                      ctx.attribute_order(),
                      views_where(l, [&](ConceptIndex v) { return leq(l, v, k); }));

  NeighborhoodLattice hood{NeighborhoodKind::Extensional, ConceptLattice(std::move(local)), k, {}, {},
                           std::move(element_map)};
  const ConceptLattice& inner = hood.lattice;

  auto to_local = [&](const ObjectSet& global_extent) {
    ObjectSet local_extent = inner.context().no_objects();
    for (std::size_t g = global_extent.find_first(); g != Bitset::npos;
         g = global_extent.find_next(g)) {
      if (local_of[g]) local_extent.set(*local_of[g]);
    }
    return local_extent;
  };
  for (ConceptIndex x = 0; x < l.size(); ++x) {
    hood.projection.push_back(*inner.find_extent(to_local(l.concepts()[meet(l, k, x)].extent)));
  }
  for (const auto& node : inner.concepts()) {
    ObjectSet global_extent = ctx.no_objects();
    for (std::size_t g = node.extent.find_first(); g != Bitset::npos;
         g = node.extent.find_next(g)) {
      global_extent.set(hood.element_map[g]);
    }
    hood.embedding.push_back(*l.find_extent(global_extent));
  }
  return hood;
}

NeighborhoodLattice join_restrict(const ConceptLattice& l, ConceptIndex k) {
  const FormalContext& ctx = l.context();
  const AttributeSet& seed_intent = l.concept_at(k).intent;

  std::vector<std::size_t> element_map;
  std::vector<std::optional<std::size_t>> local_of(ctx.attribute_count());
  std::vector<AttributeToken> tokens;
  for (std::size_t m = seed_intent.find_first(); m != Bitset::npos; m = seed_intent.find_next(m)) {
    local_of[m] = element_map.size();
    element_map.push_back(m);
    tokens.push_back(ctx.attributes()[m]);
  }
  std::vector<AttributeSet> rows(ctx.object_count(), AttributeSet(element_map.size()));
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    for (std::size_t i = 0; i < element_map.size(); ++i) rows[g][i] = ctx.incident(g, element_map[i]);
  }
  FormalContext local(ctx.objects(), std::move(tokens), std::move(rows), ctx.object_order(),
                      ctx.attribute_order().restricted(local_of, element_map.size()),
                      views_where(l, [&](ConceptIndex v) { return leq(l, k, v); }));

  NeighborhoodLattice hood{NeighborhoodKind::Intensional, ConceptLattice(std::move(local)), k, {}, {},
                           std::move(element_map)};
  const ConceptLattice& inner = hood.lattice;

  for (ConceptIndex x = 0; x < l.size(); ++x) {
    const AttributeSet& intent = l.concepts()[join(l, k, x)].intent;
    AttributeSet local_intent = inner.context().no_attributes();
    for (std::size_t m = intent.find_first(); m != Bitset::npos; m = intent.find_next(m)) {
      local_intent.set(*local_of[m]);
    }
    hood.projection.push_back(*inner.find_intent(local_intent));
  }
  for (const auto& node : inner.concepts()) {
    AttributeSet global_intent = ctx.no_attributes();
    for (std::size_t m = node.intent.find_first(); m != Bitset::npos;
         m = node.intent.find_next(m)) {
      global_intent.set(hood.element_map[m]);
    }
    hood.embedding.push_back(*l.find_intent(global_intent));
  }
  return hood;
}

FormalContext readout(const ConceptLattice& l) {
  const FormalContext& ctx = l.context();
  std::vector<AttributeSet> rows(ctx.object_count(), AttributeSet(ctx.attribute_count()));
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
      rows[g][m] = leq(l, l.object_concept(g), l.attribute_concept(m));
    }
  }
  std::vector<ConceptualView> views;
  for (std::size_t v = 0; v < ctx.views().size(); ++v) {
    views.push_back({ctx.views()[v].name,
                     ctx.attribute_tokens(l.concepts()[l.view_concepts()[v]].intent)});
  }
  return FormalContext(ctx.objects(), ctx.attributes(), std::move(rows), ctx.object_order(),
                       ctx.attribute_order(), std::move(views));
}

}  // namespace cks
