#include "cks/browsing.hpp"

#include "cks/error.hpp"

#include <algorithm>

namespace cks {

namespace {

std::vector<DisplayLabel> labels_of(const ConceptLattice& l, LabelKinds kinds) {
  const auto& ctx = l.context();
  std::vector<std::vector<std::string>> views(l.size()), attributes(l.size()), objects(l.size());
  for (std::size_t v = 0; v < ctx.views().size(); ++v) views[l.view_concepts()[v]].push_back(ctx.views()[v].name);
  if (kinds != LabelKinds::ViewsObjects) {
    for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
      attributes[l.attribute_concept(m)].push_back(ctx.attributes()[m].str());
    }
  }
  if (kinds != LabelKinds::ViewsAttributes) {
    for (std::size_t g = 0; g < ctx.object_count(); ++g) objects[l.object_concept(g)].push_back(ctx.objects()[g]);
  }
  std::vector<DisplayLabel> out(l.size());
  for (ConceptIndex k = 0; k < l.size(); ++k) {
    out[k].concept_index = k;
    for (auto* part : {&views[k], &attributes[k], &objects[k]}) {
      std::sort(part->begin(), part->end());
      out[k].names.insert(out[k].names.end(), part->begin(), part->end());
    }
  }
  return out;
}

RankedOrder ordered(Display display, std::vector<RankedEntry> entries) {
  std::sort(entries.begin(), entries.end(), [&](const RankedEntry& a, const RankedEntry& b) {
    if (a.rank != b.rank) return display == Display::Reverse ? a.rank > b.rank : a.rank < b.rank;
    return a.label.concept_index < b.label.concept_index;
  });
  return {display, std::move(entries)};
}

std::string fresh_object(const FormalContext& ctx) {
  std::string name = "?goal";
  while (ctx.find_object(name)) name += '\'';
  return name;
}

AttributeToken fresh_attribute(const FormalContext& ctx) {
  auto token = AttributeToken::bare("?goal");
  while (ctx.find_attribute(token)) token.tag += '\'';
  return token;
}

std::vector<AttributeSet> rows_of(const FormalContext& ctx) {
  std::vector<AttributeSet> rows;
  for (std::size_t g = 0; g < ctx.object_count(); ++g) rows.push_back(ctx.row(g));
  return rows;
}

}  // namespace

std::string_view to_string(Mode mode) { return mode == Mode::Extensional ? "extensional" : "intensional"; }
std::string_view to_string(Scope scope) { return scope == Scope::Global ? "global" : "local"; }

std::string DisplayLabel::str() const {
  std::string out = "[";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += names[i];
  }
  return out + ']';
}

std::vector<DisplayLabel> concept_labels(const ConceptLattice& l, LabelKinds kinds) { return labels_of(l, kinds); }

const RankedEntry* RankedOrder::find(ConceptIndex k) const {
  for (const auto& e : entries) {
    if (e.label.concept_index == k) return &e;
  }
  return nullptr;
}

std::optional<std::size_t> RankedOrder::max_rank() const {
  std::optional<std::size_t> best;
  for (const auto& e : entries) best = std::max(best.value_or(0), e.rank);
  return best;
}

std::string RankedOrder::render() const {
  std::string out;
  auto row = [&](std::size_t rank) {
    out += std::to_string(rank) + " {";
    for (const auto& e : entries) {
      if (e.rank == rank) out += ' ' + e.label.str();
    }
    out += " }\n";
  };
  const auto top = max_rank();
  if (!top) return out;
  if (display == Display::Reverse) {
    for (std::size_t r = *top + 1; r-- > 0;) row(r);
  } else {
    for (std::size_t r = 0; r <= *top; ++r) {
      if (std::any_of(entries.begin(), entries.end(), [&](const auto& e) { return e.rank == r; })) row(r);
    }
  }
  return out;
}

RankedOrder threshold_filter(const RankedOrder& r, double tau) {
  if (tau < 0) throw Error(ErrorKind::ThresholdOutOfRange, "threshold must not be negative");
  RankedOrder out{r.display, {}};
  for (const auto& e : r.entries) {
    const double score = e.coefficient ? e.coefficient->value() : static_cast<double>(e.rank);
    if (e.coefficient ? e.coefficient->at_least(tau) : score >= tau) out.entries.push_back(e);
  }
  return out;
}

// ---- sessions -------------------------------------------------------------

BrowseSession BrowseSession::start(std::shared_ptr<const ConceptLattice> lattice, Mode mode) {
  if (!lattice) throw Error(ErrorKind::InvalidLattice, "session needs a lattice");
  BrowseSession s(std::move(lattice), mode);
  s.state_ = s.lattice_->top();
  return s;
}

std::vector<DisplayLabel> BrowseSession::displayable() const {
  std::vector<DisplayLabel> out;
  if (scope_ == Scope::Global) {
    for (auto& label : labels_of(*lattice_, LabelKinds::All)) {
      if (!label.empty()) out.push_back(std::move(label));
    }
    return out;
  }
  for (auto& label : labels_of(local_->lattice, LabelKinds::All)) {
    if (label.empty()) continue;
    label.concept_index = local_->embedding[label.concept_index];
    out.push_back(std::move(label));
  }
  return out;
}

void BrowseSession::transition(ConceptIndex target) {
  lattice_->concept_at(target);
  if (target == state_) return;
  const auto shown = displayable();
  const bool ok = std::any_of(shown.begin(), shown.end(), [&](const auto& d) { return d.concept_index == target; });
  if (!ok) {
    throw Error(ErrorKind::NotDisplayable, "concept " + std::to_string(target + 1) + " is not displayable in " +
                                               std::string(to_string(scope_)) + " scope");
  }
  state_ = target;
}

void BrowseSession::enter_scope(Scope scope) {
  if (scope == scope_) return;
  scope_ = scope;
  if (scope == Scope::Local) {
    local_ = mode_ == Mode::Extensional ? meet_restrict(*lattice_, state_) : join_restrict(*lattice_, state_);
  } else {
    local_.reset();
  }
}

void BrowseSession::choose_mode(Mode mode) const {
  if (mode != mode_) {
    throw Error(ErrorKind::WrongMode, "session is in " + std::string(to_string(mode_)) +
                                          " mode; modes cannot change within a session");
  }
}

RankedOrder BrowseSession::rank_similarity() const {
  if (scope_ != Scope::Global) throw Error(ErrorKind::WrongScope, "similarity ranking needs global scope");
  const auto& l = *lattice_;
  const bool ext = mode_ == Mode::Extensional;
  std::vector<RankedEntry> entries;
  for (auto& label : labels_of(l, ext ? LabelKinds::ViewsAttributes : LabelKinds::ViewsObjects)) {
    if (label.empty()) continue;
    const auto x = label.concept_index;
    entries.push_back({std::move(label), ext ? ext_similarity(l, state_, x) : int_similarity(l, state_, x), {}});
  }
  return ordered(Display::Reverse, std::move(entries));
}

RankedOrder BrowseSession::rank_difference() const {
  if (scope_ != Scope::Local) throw Error(ErrorKind::WrongScope, "difference ranking needs local scope");
  const auto& n = *local_;
  const bool ext = mode_ == Mode::Extensional;
  std::vector<RankedEntry> entries;
  for (auto& label : labels_of(n.lattice, ext ? LabelKinds::ViewsObjects : LabelKinds::ViewsAttributes)) {
    if (label.empty()) continue;
    const auto y = label.concept_index;
    const std::size_t rank =
        ext ? int_diff_measure(n.lattice, n.local_seed(), y) : ext_diff_measure(n.lattice, n.local_seed(), y);
    label.concept_index = n.embedding[y];
    entries.push_back({std::move(label), rank, {}});
  }
  return ordered(Display::Direct, std::move(entries));
}

// ---- queries --------------------------------------------------------------

QueryResult intensional_query(const ConceptLattice& l, std::span<const AttributeToken> attributes) {
  const auto& ctx = l.context();
  const AttributeSet query = ctx.attribute_set(attributes);

  auto objects = ctx.objects();
  objects.push_back(fresh_object(ctx));
  auto rows = rows_of(ctx);
  rows.push_back(query);
  const ConceptLattice goal_lattice(FormalContext(std::move(objects), ctx.attributes(), std::move(rows),
                                                  ctx.object_order(), PartialOrder{}, ctx.views()));
  const auto goal = goal_lattice.object_concept(ctx.object_count());

  QueryResult result;
  result.nearest = l.concept_of_attributes(query);
  result.coincides = l.find_intent(query);
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    if (ctx.row(g) == query) result.twins.push_back(ctx.objects()[g]);
  }

  const std::size_t size = query.count();
  std::vector<RankedEntry> entries;
  for (auto& label : labels_of(l, LabelKinds::ViewsObjects)) {
    if (label.empty()) continue;
    const auto x = *goal_lattice.find_intent(l.concept_at(label.concept_index).intent);
    const std::size_t shared = int_similarity(goal_lattice, goal, x);
    entries.push_back({std::move(label), shared, size == 0 ? Ratio{1, 1} : Ratio{shared, size}});
  }
  result.ranking = ordered(Display::Reverse, std::move(entries));
  return result;
}

QueryResult extensional_query(const ConceptLattice& l, std::span<const std::string> objects) {
  const auto& ctx = l.context();
  const ObjectSet query = ctx.object_set(objects);

  auto attributes = ctx.attributes();
  attributes.push_back(fresh_attribute(ctx));
  std::vector<AttributeSet> rows;
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    AttributeSet row = ctx.row(g);
    row.push_back(query.test(g));
    rows.push_back(std::move(row));
  }
  const ConceptLattice goal_lattice(
      FormalContext(ctx.objects(), std::move(attributes), std::move(rows), ctx.object_order(), PartialOrder{}));
  const auto goal = goal_lattice.attribute_concept(ctx.attribute_count());

  QueryResult result;
  result.nearest = l.concept_of_objects(query);
  result.coincides = l.find_extent(query);
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    if (ctx.column(m) == query) result.twins.push_back(ctx.attributes()[m].str());
  }

  const std::size_t size = query.count();
  std::vector<RankedEntry> entries;
  for (auto& label : labels_of(l, LabelKinds::ViewsAttributes)) {
    if (label.empty()) continue;
    const auto x = *goal_lattice.find_extent(l.concept_at(label.concept_index).extent);
    const std::size_t shared = ext_similarity(goal_lattice, goal, x);
    entries.push_back({std::move(label), shared, size == 0 ? Ratio{1, 1} : Ratio{shared, size}});
  }
  result.ranking = ordered(Display::Reverse, std::move(entries));
  return result;
}

}  // namespace cks
