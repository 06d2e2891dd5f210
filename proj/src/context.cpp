#include "cks/context.hpp"

#include "cks/error.hpp"

#include <algorithm>
#include <set>

namespace cks {

// ---------------------------------------------------------------- tokens

AttributeToken AttributeToken::bare(std::string tag) {
  return AttributeToken{std::move(tag), Relator::Eq, {}};
}

AttributeToken AttributeToken::parse(std::string_view text) {
  const std::size_t pos = text.find_first_of("<>=");
  if (pos == 0 || text.empty()) {
    throw Error(ErrorKind::SyntaxError, "attribute token has an empty tag: '" + std::string(text) + "'");
  }
  if (pos == std::string_view::npos) return bare(std::string(text));

  AttributeToken token;
  token.tag = std::string(text.substr(0, pos));
  std::size_t value_start = pos + 1;
  if (text[pos] == '=') {
    token.relator = Relator::Eq;
  } else if (pos + 1 < text.size() && text[pos + 1] == '=') {
    token.relator = text[pos] == '<' ? Relator::Le : Relator::Ge;
    value_start = pos + 2;
  } else {
    throw Error(ErrorKind::SyntaxError, "expected '<=' or '>=' in '" + std::string(text) + "'");
  }
  token.value = std::string(text.substr(value_start));
  if (token.value.empty()) token.relator = Relator::Eq;
  return token;
}

std::string AttributeToken::str() const {
  if (value.empty()) return tag;
  switch (relator) {
    case Relator::Eq: return tag + "=" + value;
    case Relator::Le: return tag + "<=" + value;
    case Relator::Ge: return tag + ">=" + value;
  }
  return tag;
}

// ---------------------------------------------------------------- context

FormalContext::FormalContext(std::vector<std::string> objects,
                             std::vector<AttributeToken> attributes,
                             std::vector<AttributeSet> rows, PartialOrder object_order,
                             PartialOrder attribute_order, std::vector<ConceptualView> views)
    : objects_(std::move(objects)),
      attributes_(std::move(attributes)),
      rows_(std::move(rows)),
      object_order_(std::move(object_order)),
      attribute_order_(std::move(attribute_order)),
      views_(std::move(views)) {
  const std::size_t n = objects_.size();
  const std::size_t m = attributes_.size();
  if (rows_.size() != n) {
    throw Error(ErrorKind::InvalidContext, "incidence row count does not match object count");
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (rows_[g].size() != m) {
      throw Error(ErrorKind::InvalidContext, "incidence row for '" + objects_[g] + "' has wrong width");
    }
    if (!object_lookup_.emplace(objects_[g], g).second) {
      throw Error(ErrorKind::DuplicateDeclaration, "duplicate object '" + objects_[g] + "'");
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    const auto& tag = attributes_[a].tag;
    if (tag.empty() || tag.find_first_of("<>=") != std::string::npos) {
      throw Error(ErrorKind::InvalidContext, "invalid attribute tag '" + tag + "'");
    }
    if (!attribute_lookup_.emplace(attributes_[a].str(), a).second) {
      throw Error(ErrorKind::DuplicateDeclaration,
                  "duplicate attribute '" + attributes_[a].str() + "'");
    }
  }
  if (object_order_.size() > n || attribute_order_.size() > m) {
    throw Error(ErrorKind::InvalidContext, "order covers more elements than the context declares");
  }

  columns_.assign(m, ObjectSet(n));
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t a = rows_[g].find_first(); a != Bitset::npos; a = rows_[g].find_next(a)) {
      columns_[a].set(g);
    }
  }

  // Incidence must be inherited upward along the attribute order.
  if (!attribute_order_.flat()) {
    const auto below = attribute_order_.strictly_below(m);
    for (std::size_t upper = 0; upper < m; ++upper) {
      for (std::size_t lower = below[upper].find_first(); lower != Bitset::npos;
           lower = below[upper].find_next(lower)) {
        if (!columns_[lower].is_subset_of(columns_[upper])) {
          throw Error(ErrorKind::InvalidContext,
                      "incidence is not order-preserving: '" + attributes_[lower].str() +
                          "' <= '" + attributes_[upper].str() + "'");
        }
      }
    }
  }
  validate_views();
}

void FormalContext::validate_views() const {
  std::set<std::string_view> names;
  for (const auto& view : views_) {
    if (view.name.empty()) throw Error(ErrorKind::InvalidContext, "view with empty name");
    if (!names.insert(view.name).second) {
      throw Error(ErrorKind::DuplicateDeclaration, "duplicate view '" + view.name + "'");
    }
    for (const auto& token : view.intent) {
      if (!find_attribute(token)) {
        throw Error(ErrorKind::UndeclaredName,
                    "view '" + view.name + "' uses undeclared attribute '" + token.str() + "'");
      }
    }
  }
}

FormalContext FormalContext::from_pairs(
    std::vector<std::string> objects, std::vector<AttributeToken> attributes,
    std::span<const std::pair<std::string, AttributeToken>> incidence) {
  std::vector<AttributeSet> rows(objects.size(), AttributeSet(attributes.size()));
  FormalContext shape(objects, attributes, rows);
  for (const auto& [object, token] : incidence) {
    rows[shape.object_index(object)].set(shape.attribute_index(token));
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

std::optional<std::size_t> FormalContext::find_object(std::string_view name) const {
  auto it = object_lookup_.find(name);
  if (it == object_lookup_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> FormalContext::find_attribute(const AttributeToken& token) const {
  auto it = attribute_lookup_.find(token.str());
  if (it == attribute_lookup_.end()) return std::nullopt;
  return it->second;
}

std::size_t FormalContext::object_index(std::string_view name) const {
  if (auto g = find_object(name)) return *g;
  throw Error(ErrorKind::NotInContext, "unknown object '" + std::string(name) + "'");
}

std::size_t FormalContext::attribute_index(const AttributeToken& token) const {
  if (auto m = find_attribute(token)) return *m;
  throw Error(ErrorKind::NotInContext, "unknown attribute '" + token.str() + "'");
}

ObjectSet FormalContext::object_set(std::span<const std::string> names) const {
  ObjectSet set = no_objects();
  for (const auto& name : names) set.set(object_index(name));
  return set;
}

AttributeSet FormalContext::attribute_set(std::span<const AttributeToken> tokens) const {
  AttributeSet set = no_attributes();
  for (const auto& token : tokens) set.set(attribute_index(token));
  return set;
}

AttributeSet FormalContext::common_attributes(const ObjectSet& objects) const {
  AttributeSet result = no_attributes();
  result.set();
  for (std::size_t g = objects.find_first(); g != Bitset::npos; g = objects.find_next(g)) {
    result &= rows_[g];
  }
  return result;
}

ObjectSet FormalContext::common_objects(const AttributeSet& attributes) const {
  ObjectSet result = no_objects();
  result.set();
  for (std::size_t m = attributes.find_first(); m != Bitset::npos; m = attributes.find_next(m)) {
    result &= columns_[m];
  }
  return result;
}

std::vector<std::string> FormalContext::object_names(const ObjectSet& objects) const {
  std::vector<std::string> names;
  for (std::size_t g = objects.find_first(); g != Bitset::npos; g = objects.find_next(g)) {
    names.push_back(objects_[g]);
  }
  return names;
}

std::vector<AttributeToken> FormalContext::attribute_tokens(const AttributeSet& attributes) const {
  std::vector<AttributeToken> tokens;
  for (std::size_t m = attributes.find_first(); m != Bitset::npos; m = attributes.find_next(m)) {
    tokens.push_back(attributes_[m]);
  }
  return tokens;
}

FormalContext FormalContext::with_views(std::vector<ConceptualView> views) const {
  return FormalContext(objects_, attributes_, rows_, object_order_, attribute_order_,
                       std::move(views));
}

bool operator==(const FormalContext& a, const FormalContext& b) {
  return a.objects_ == b.objects_ && a.attributes_ == b.attributes_ && a.rows_ == b.rows_ &&
         a.object_order_ == b.object_order_ && a.attribute_order_ == b.attribute_order_ &&
         a.views_ == b.views_;
}

std::vector<AttributeToken> derive_objects(const FormalContext& ctx,
                                           std::span<const std::string> objects) {
  return ctx.attribute_tokens(ctx.common_attributes(ctx.object_set(objects)));
}

std::vector<std::string> derive_attrs(const FormalContext& ctx,
                                      std::span<const AttributeToken> attributes) {
  return ctx.object_names(ctx.common_objects(ctx.attribute_set(attributes)));
}

// ---------------------------------------------------------------- oracle

std::vector<ConceptPair> enumerate_concepts_oracle(const FormalContext& ctx) {
  const std::size_t n = ctx.object_count();
  if (n > kOracleObjectLimit) {
    throw Error(ErrorKind::OracleScaleExceeded,
                "oracle refuses contexts with more than " + std::to_string(kOracleObjectLimit) +
                    " objects");
  }
  std::map<ObjectSet, AttributeSet> found;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < subsets; ++mask) {
    ObjectSet subset(n, mask);
    AttributeSet intent = ctx.common_attributes(subset);
    ObjectSet extent = ctx.common_objects(intent);
    found.emplace(std::move(extent), std::move(intent));
  }
  std::vector<ConceptPair> concepts;
  concepts.reserve(found.size());
  for (auto& [extent, intent] : found) concepts.push_back({extent, intent});
  return concepts;
}

// ---------------------------------------------------------------- purification

std::string MergeMap::object(std::string_view name) const {
  auto it = objects.find(std::string(name));
  return it == objects.end() ? std::string(name) : it->second;
}

std::string MergeMap::attribute(std::string_view token) const {
  auto it = attributes.find(std::string(token));
  return it == attributes.end() ? std::string(token) : it->second;
}

namespace {

struct Grouping {
  std::vector<std::size_t> class_of;       // element -> class
  std::vector<std::size_t> representative;  // class -> first member (position)
  std::vector<std::size_t> survivor;        // class -> member whose name survives
};

template <typename NameOf>
Grouping group_identical(const std::vector<Bitset>& vectors, NameOf name_of) {
  Grouping grouping;
  grouping.class_of.resize(vectors.size());
  std::map<Bitset, std::size_t> seen;
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    auto [it, inserted] = seen.emplace(vectors[i], grouping.representative.size());
    if (inserted) {
      grouping.representative.push_back(i);
      grouping.survivor.push_back(i);
    } else if (name_of(i) < name_of(grouping.survivor[it->second])) {
      grouping.survivor[it->second] = i;
    }
    grouping.class_of[i] = it->second;
  }
  return grouping;
}

std::vector<Bitset> columns_of(const FormalContext& ctx) {
  std::vector<Bitset> cols;
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) cols.push_back(ctx.column(m));
  return cols;
}

std::vector<Bitset> rows_of(const FormalContext& ctx) {
  std::vector<Bitset> rows;
  for (std::size_t g = 0; g < ctx.object_count(); ++g) rows.push_back(ctx.row(g));
  return rows;
}

// Rebuilds `ctx` keeping only selected objects/attributes (by old index).
std::vector<AttributeSet> select_incidence(const FormalContext& ctx,
                                           const std::vector<std::size_t>& objects,
                                           const std::vector<std::size_t>& attributes) {
  std::vector<AttributeSet> rows(objects.size(), AttributeSet(attributes.size()));
  for (std::size_t i = 0; i < objects.size(); ++i) {
    for (std::size_t j = 0; j < attributes.size(); ++j) {
      if (ctx.incident(objects[i], attributes[j])) rows[i].set(j);
    }
  }
  return rows;
}

std::vector<AttributeToken> dedupe(std::vector<AttributeToken> tokens) {
  std::vector<AttributeToken> out;
  for (auto& token : tokens) {
    if (std::find(out.begin(), out.end(), token) == out.end()) out.push_back(std::move(token));
  }
  return out;
}

}  // namespace

Purified purify(const FormalContext& ctx) {
  const Grouping objects = group_identical(rows_of(ctx), [&](std::size_t g) { return ctx.objects()[g]; });
  const Grouping attributes =
      group_identical(columns_of(ctx), [&](std::size_t m) { return ctx.attributes()[m].str(); });

  Purified result;
  std::vector<std::string> object_names;
  for (std::size_t c = 0; c < objects.representative.size(); ++c) {
    object_names.push_back(ctx.objects()[objects.survivor[c]]);
  }
  std::vector<AttributeToken> tokens;
  for (std::size_t c = 0; c < attributes.representative.size(); ++c) {
    tokens.push_back(ctx.attributes()[attributes.survivor[c]]);
  }
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    result.merge.objects[ctx.objects()[g]] = object_names[objects.class_of[g]];
  }
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    result.merge.attributes[ctx.attributes()[m].str()] = tokens[attributes.class_of[m]].str();
  }

  std::vector<ConceptualView> views;
  for (const auto& view : ctx.views()) {
    std::vector<AttributeToken> intent;
    for (const auto& token : view.intent) {
      intent.push_back(tokens[attributes.class_of[ctx.attribute_index(token)]]);
    }
    views.push_back({view.name, dedupe(std::move(intent))});
  }

  auto rows = select_incidence(ctx, objects.representative, attributes.representative);
  result.context = FormalContext(
      std::move(object_names), std::move(tokens), std::move(rows),
      ctx.object_order().quotient(objects.class_of, objects.representative.size()),
      ctx.attribute_order().quotient(attributes.class_of, attributes.representative.size()),
      std::move(views));
  return result;
}

bool is_purified(const FormalContext& ctx) {
  std::set<Bitset> rows;
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    if (!rows.insert(ctx.row(g)).second) return false;
  }
  std::set<Bitset> cols;
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    if (!cols.insert(ctx.column(m)).second) return false;
  }
  return true;
}

// ---------------------------------------------------------------- reduction

namespace {

// True where vectors[i] differs from the intersection of all strictly larger
// vectors (intersection over nothing = all ones of `width`).
std::vector<bool> irreducible_members(const std::vector<Bitset>& vectors, std::size_t width) {
  std::vector<bool> result(vectors.size());
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    Bitset meet(width);
    meet.set();
    for (std::size_t j = 0; j < vectors.size(); ++j) {
      if (vectors[i].is_proper_subset_of(vectors[j])) meet &= vectors[j];
    }
    result[i] = meet != vectors[i];
  }
  return result;
}

}  // namespace

ContextIrreducibles context_irreducibles(const FormalContext& ctx) {
  const std::size_t n = ctx.object_count();
  const std::size_t m = ctx.attribute_count();
  bool single_concept = true;
  for (std::size_t g = 0; g < n && single_concept; ++g) single_concept = ctx.row(g).all();
  if (single_concept) {
    return {std::vector<bool>(n, true), std::vector<bool>(m, true)};
  }
  return {irreducible_members(rows_of(ctx), m), irreducible_members(columns_of(ctx), n)};
}

Reduced reduce(const FormalContext& ctx) {
  if (!is_purified(ctx)) {
    throw Error(ErrorKind::NotPurified, "reduction requires a purified context");
  }
  const auto keep = context_irreducibles(ctx);

  std::vector<std::size_t> kept_objects, kept_attributes;
  std::vector<std::optional<std::size_t>> object_index(ctx.object_count());
  std::vector<std::optional<std::size_t>> attribute_index(ctx.attribute_count());
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    if (keep.objects[g]) {
      object_index[g] = kept_objects.size();
      kept_objects.push_back(g);
    }
  }
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    if (keep.attributes[m]) {
      attribute_index[m] = kept_attributes.size();
      kept_attributes.push_back(m);
    }
  }

  AttributeSet surviving = ctx.no_attributes();
  for (std::size_t m : kept_attributes) surviving.set(m);
  auto surviving_tokens = [&](const AttributeSet& intent) {
    return ctx.attribute_tokens(intent & surviving);
  };

  Reduced result;
  std::vector<ConceptualView> views;
  for (const auto& view : ctx.views()) {
    views.push_back({view.name, surviving_tokens(ctx.close_intent(ctx.attribute_set(view.intent)))});
  }
  auto add_view = [&](const std::string& name, const AttributeSet& intent) {
    auto clash = std::find_if(views.begin(), views.end(), [&](const auto& v) { return v.name == name; });
    if (clash == views.end()) views.push_back({name, surviving_tokens(intent)});
  };

  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    if (keep.objects[g]) continue;
    const AttributeSet intent = ctx.row(g);
    result.promoted.push_back({ctx.objects()[g], ElementKind::Object,
                               ctx.object_names(ctx.common_objects(intent)),
                               ctx.attribute_tokens(intent)});
    add_view(ctx.objects()[g], intent);
  }
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    if (keep.attributes[m]) continue;
    const ObjectSet extent = ctx.column(m);
    const AttributeSet intent = ctx.common_attributes(extent);
    result.promoted.push_back({ctx.attributes()[m].str(), ElementKind::Attribute,
                               ctx.object_names(extent), ctx.attribute_tokens(intent)});
    add_view(ctx.attributes()[m].str(), intent);
  }

  std::vector<std::string> names;
  for (std::size_t g : kept_objects) names.push_back(ctx.objects()[g]);
  std::vector<AttributeToken> tokens;
  for (std::size_t m : kept_attributes) tokens.push_back(ctx.attributes()[m]);

  result.context = FormalContext(
      std::move(names), std::move(tokens), select_incidence(ctx, kept_objects, kept_attributes),
      ctx.object_order().restricted(object_index, kept_objects.size()),
      ctx.attribute_order().restricted(attribute_index, kept_attributes.size()), std::move(views));
  return result;
}

// ---------------------------------------------------------------- apposition

namespace {

bool collides(const FormalContext& left, const FormalContext& right) {
  return std::any_of(right.attributes().begin(), right.attributes().end(),
                     [&](const AttributeToken& t) { return left.find_attribute(t).has_value(); });
}

PartialOrder merged_order(const PartialOrder& a, const PartialOrder& b, std::size_t n) {
  if (a.flat()) return b;
  if (b.flat()) return a;
  std::vector<std::vector<std::size_t>> lists(n);
  for (std::size_t i = 0; i < n; ++i) {
    lists[i] = a.predecessors(i);
    for (std::size_t j : b.predecessors(i)) lists[i].push_back(j);
  }
  return PartialOrder::from_predecessors(std::move(lists));
}

}  // namespace

FormalContext namespaced(const FormalContext& ctx, std::string_view prefix) {
  auto rename = [&](AttributeToken token) {
    if (!token.tag.starts_with(prefix)) token.tag = std::string(prefix) + token.tag;
    return token;
  };
  std::vector<AttributeToken> tokens;
  for (const auto& token : ctx.attributes()) tokens.push_back(rename(token));
  std::vector<ConceptualView> views;
  for (const auto& view : ctx.views()) {
    ConceptualView renamed{view.name, {}};
    for (const auto& token : view.intent) renamed.intent.push_back(rename(token));
    views.push_back(std::move(renamed));
  }
  return FormalContext(ctx.objects(), std::move(tokens), rows_of(ctx), ctx.object_order(),
                       ctx.attribute_order(), std::move(views));
}

FormalContext apposition(const FormalContext& left, const FormalContext& right,
                         std::optional<Namespaces> namespaces) {
  if (left.objects() != right.objects()) {
    throw Error(ErrorKind::ObjectSetMismatch, "apposition requires identical object lists");
  }
  const FormalContext* a = &left;
  const FormalContext* b = &right;
  FormalContext renamed_left, renamed_right;
  if (collides(*a, *b)) {
    if (!namespaces) {
      throw Error(ErrorKind::AttributeCollision, "apposed contexts share attribute tokens");
    }
    if (!namespaces->first.empty()) {
      renamed_left = namespaced(left, namespaces->first);
      a = &renamed_left;
    }
    if (!namespaces->second.empty()) {
      renamed_right = namespaced(right, namespaces->second);
      b = &renamed_right;
    }
    if (collides(*a, *b)) {
      throw Error(ErrorKind::AttributeCollision, "namespacing did not separate attribute tokens");
    }
  }

  const std::size_t n = a->object_count();
  const std::size_t ma = a->attribute_count();
  const std::size_t mb = b->attribute_count();
  std::vector<AttributeToken> tokens = a->attributes();
  tokens.insert(tokens.end(), b->attributes().begin(), b->attributes().end());
  std::vector<AttributeSet> rows(n, AttributeSet(ma + mb));
  for (std::size_t g = 0; g < n; ++g) {
    for (std::size_t m = 0; m < ma; ++m) rows[g][m] = a->incident(g, m);
    for (std::size_t m = 0; m < mb; ++m) rows[g][ma + m] = b->incident(g, m);
  }
  std::vector<ConceptualView> views = a->views();
  for (const auto& view : b->views()) {
    auto same = std::find_if(views.begin(), views.end(), [&](const auto& v) { return v.name == view.name; });
    if (same == views.end()) {
      views.push_back(view);
    } else if (!(*same == view)) {
      throw Error(ErrorKind::DuplicateDeclaration, "apposed contexts define view '" + view.name + "' differently");
    }
  }
  return FormalContext(a->objects(), std::move(tokens), std::move(rows),
                       merged_order(a->object_order(), b->object_order(), n),
                       a->attribute_order().disjoint_sum(ma, b->attribute_order(), mb),
                       std::move(views));
}

FormalContext transpose(const FormalContext& ctx) {
  std::vector<std::string> objects;
  for (const auto& token : ctx.attributes()) objects.push_back(token.str());
  std::vector<AttributeToken> attributes;
  for (const auto& name : ctx.objects()) attributes.push_back(AttributeToken::parse(name));
  return FormalContext(std::move(objects), std::move(attributes), columns_of(ctx),
                       ctx.attribute_order(), ctx.object_order());
}

FormalContext reorder_objects(const FormalContext& ctx, std::span<const std::string> order) {
  if (order.size() != ctx.object_count()) {
    throw Error(ErrorKind::ObjectSetMismatch, "object lists differ in size");
  }
  std::vector<std::optional<std::size_t>> new_index(ctx.object_count());
  std::vector<AttributeSet> rows;
  for (std::size_t i = 0; i < order.size(); ++i) {
    auto g = ctx.find_object(order[i]);
    if (!g || new_index[*g]) {
      throw Error(ErrorKind::ObjectSetMismatch, "object '" + order[i] + "' does not match");
    }
    new_index[*g] = i;
    rows.push_back(ctx.row(*g));
  }
  return FormalContext({order.begin(), order.end()}, ctx.attributes(), std::move(rows),
                       ctx.object_order().restricted(new_index, order.size()),
                       ctx.attribute_order(), ctx.views());
}

}  // namespace cks
