#pragma once

// Shared test fixtures: the three-object context K1 and the document universe
// DOCS, plus a seeded random context generator.

#include "cks/context.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cks::testing {

inline AttributeToken tok(std::string_view text) { return AttributeToken::parse(text); }

using Rows = std::vector<std::pair<std::string, std::vector<std::string>>>;

inline FormalContext make_context(std::vector<std::string> objects,
                                  std::vector<std::string> attributes, const Rows& rows,
                                  std::vector<ConceptualView> views = {}) {
  std::vector<AttributeToken> tokens;
  for (const auto& a : attributes) tokens.push_back(tok(a));
  std::vector<std::pair<std::string, AttributeToken>> pairs;
  for (const auto& [object, attrs] : rows) {
    for (const auto& a : attrs) pairs.emplace_back(object, tok(a));
  }
  auto ctx = FormalContext::from_pairs(std::move(objects), std::move(tokens), pairs);
  return views.empty() ? ctx : ctx.with_views(std::move(views));
}

/// g1 -> {a,b}, g2 -> {b,c}, g3 -> {c}
inline FormalContext k1() {
  return make_context({"g1", "g2", "g3"}, {"a", "b", "c"},
                      {{"g1", {"a", "b"}}, {"g2", {"b", "c"}}, {"g3", {"c"}}});
}

inline std::vector<ConceptualView> docs_views() {
  return {{"Object", {}},
          {"Document", {}},
          {"PostScript", {tok("format=postscript")}},
          {"Plan1", {tok("project=plan1")}},
          {"Plan2", {tok("project=plan2")}}};
}

/// The document universe before purification.
inline FormalContext docs() {
  return make_context(
      {"plan1.ps", "plan2.ps", "plan2.doc", "notes0.txt", "notes1.txt", "notes2.txt"},
      {"project=plan1", "project=plan2", "format=postscript", "format=text"},
      {{"plan1.ps", {"project=plan1", "format=postscript"}},
       {"plan2.ps", {"project=plan2", "format=postscript"}},
       {"plan2.doc", {"project=plan2", "format=text"}},
       {"notes0.txt", {"project=plan1", "format=text"}},
       {"notes1.txt", {"project=plan2", "format=text"}},
       {"notes2.txt", {"project=plan2", "format=text"}}},
      docs_views());
}

inline FormalContext docs_reduced() { return reduce(purify(docs()).context).context; }

/// Same incidence with objects, attributes and views sorted by name and
/// view intents in attribute order. Orders are dropped.
inline FormalContext canonical(const FormalContext& ctx) {
  auto objects = ctx.objects();
  auto attributes = ctx.attributes();
  std::sort(objects.begin(), objects.end());
  std::sort(attributes.begin(), attributes.end());
  std::vector<AttributeSet> rows;
  for (const auto& g : objects) {
    AttributeSet row(attributes.size());
    for (std::size_t m = 0; m < attributes.size(); ++m) {
      row[m] = ctx.incident(ctx.object_index(g), ctx.attribute_index(attributes[m]));
    }
    rows.push_back(std::move(row));
  }
  auto views = ctx.views();
  std::sort(views.begin(), views.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  for (auto& v : views) std::sort(v.intent.begin(), v.intent.end());
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows), PartialOrder{},
                       PartialOrder{}, std::move(views));
}

/// Random context with up to `max_objects` x `max_attributes` entries.
inline FormalContext random_context(std::mt19937& rng, std::size_t max_objects,
                                    std::size_t max_attributes) {
  std::uniform_int_distribution<std::size_t> objects_dist(0, max_objects);
  std::uniform_int_distribution<std::size_t> attributes_dist(0, max_attributes);
  std::uniform_real_distribution<double> density_dist(0.15, 0.85);
  const std::size_t n = objects_dist(rng);
  const std::size_t m = attributes_dist(rng);
  const double density = density_dist(rng);
  std::bernoulli_distribution cell(density);

  std::vector<std::string> objects;
  for (std::size_t g = 0; g < n; ++g) objects.push_back("o" + std::to_string(g));
  std::vector<AttributeToken> attributes;
  for (std::size_t a = 0; a < m; ++a) attributes.push_back(AttributeToken::bare("m" + std::to_string(a)));
  std::vector<AttributeSet> rows(n, AttributeSet(m));
  for (auto& row : rows) {
    for (std::size_t a = 0; a < m; ++a) row[a] = cell(rng);
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows));
}

}  // namespace cks::testing
