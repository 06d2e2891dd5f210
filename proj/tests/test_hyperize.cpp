#include "doctest.h"

#include "cks/browsing.hpp"
#include "cks/error.hpp"
#include "cks/hyperize.hpp"
#include "cks/io.hpp"
#include "support/fixtures.hpp"

#include <filesystem>
#include <random>
#include <regex>
#include <set>

using namespace cks;
using namespace cks::testing;

namespace {

const std::filesystem::path kData = CKS_TEST_DATA;

using PairSet = std::set<std::pair<ConceptIndex, ConceptIndex>>;

PairSet strict_order(const ConceptLattice& l) {
  PairSet out;
  for (ConceptIndex x = 0; x < l.size(); ++x) {
    for (ConceptIndex y = 0; y < l.size(); ++y) {
      if (x != y && l.concept_at(x).extent.is_subset_of(l.concept_at(y).extent)) out.emplace(x, y);
    }
  }
  return out;
}

PairSet link_pairs(const std::vector<CrispLink>& links) {
  PairSet out;
  for (const auto& link : links) out.emplace(link.source, link.target);
  return out;
}

HyperizationConfig docs_config(double threshold) {
  HyperizationConfig config;
  config.scales = load_scale_config(kData / "docs.cfg");
  config.threshold = threshold;
  return config;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("cks_hyperize_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

WebObjectGraph random_graph(std::mt19937& rng) {
  WebObjectGraph g;
  const std::size_t n = rng() % 7;
  for (std::size_t i = 0; i < n; ++i) g.nodes.push_back("n" + std::to_string(i));
  for (std::size_t s = 0; s < n; ++s) {
    for (std::size_t t = 0; t < n; ++t) {
      if (rng() % 3 == 0) g.edges.emplace_back(g.nodes[s], g.nodes[t]);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("ingest two nodes") {
  const WebObjectGraph g{{"A", "B"}, {{"A", "B"}}};
  const auto cross = ingest_link_graph(g, IncidenceOrientation::CrossReferential);
  CHECK(cross.attributes() == std::vector<AttributeToken>{AttributeToken::bare("link:A"), AttributeToken::bare("link:B")});
  CHECK(cross.incident(0, 1));
  CHECK(cross.row(0).count() == 1);
  CHECK(cross.row(1).none());

  const auto hier = ingest_link_graph(g, IncidenceOrientation::Hierarchical);
  CHECK(hier.incident(1, 0));
  CHECK(hier.row(1).count() == 1);
  CHECK(hier.row(0).none());

  const auto empty = ingest_link_graph({}, IncidenceOrientation::CrossReferential);
  CHECK(empty.object_count() == 0);
  CHECK(empty.attribute_count() == 0);
}

TEST_CASE("ingest errors and self-links") {
  CHECK_THROWS_AS(ingest_link_graph({{"A"}, {{"A", "B"}}}, IncidenceOrientation::CrossReferential), Error);
  try {
    ingest_link_graph({{"A", "A"}, {}}, IncidenceOrientation::CrossReferential);
    FAIL("duplicate node accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::GraphIntegrity);
  }
  std::vector<std::string> warnings;
  const auto ctx = ingest_link_graph({{"A", "B"}, {{"A", "A"}, {"B", "A"}}}, IncidenceOrientation::CrossReferential,
                                     &warnings);
  CHECK(warnings.size() == 1);
  CHECK_FALSE(ctx.incident(0, 0));
  CHECK(ctx.incident(1, 0));
}

TEST_CASE("link graph files") {
  const auto g = load_link_graph(kData / "docs.links");
  CHECK(g.nodes.size() == 6);
  CHECK(g.edges.size() == 6);
  try {
    parse_link_graph("node a\n\n  link a b\n");
    FAIL("bad line accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SyntaxError);
    CHECK(e.where().line == 3);
    CHECK(e.where().column == 3);
  }
  CHECK_THROWS_AS(load_link_graph(kData / "missing.links"), Error);
}

TEST_CASE("enrich") {
  const auto meta = docs();
  CHECK(enrich(ingest_link_graph({}, IncidenceOrientation::CrossReferential), meta) == meta);

  const WebObjectGraph g{{"A", "B"}, {{"A", "B"}}};
  const auto link = ingest_link_graph(g, IncidenceOrientation::CrossReferential);
  const auto meta2 = make_context({"B", "A"}, {"kind=page"}, {{"A", {"kind=page"}}});
  const auto both = enrich(link, meta2);
  CHECK(both.attribute_count() == 3);
  CHECK(both.objects() == meta2.objects());
  CHECK(both.incident(both.object_index("A"), both.attribute_index(tok("link:B"))));
  CHECK(both.incident(both.object_index("A"), both.attribute_index(tok("kind=page"))));
  CHECK(both.row(both.object_index("B")).none());

  const auto other = make_context({"A", "C"}, {"x"}, {});
  CHECK_THROWS_AS(enrich(link, other), Error);

  // a metadata attribute named like a link attribute is pushed into meta:
  const auto clash = make_context({"A", "B"}, {"link:A"}, {{"B", {"link:A"}}});
  const auto spaced = enrich(link, clash);
  CHECK(spaced.find_attribute(tok("meta:link:A")).has_value());
}

TEST_CASE("DOCS enriched by its link graph") {
  const auto ctx = enrich(ingest_link_graph(load_link_graph(kData / "docs.links"),
                                            IncidenceOrientation::CrossReferential),
                          docs());
  CHECK(ctx.attribute_count() == 10);
  const auto l = build_lattice(ctx);
  CHECK(l.size() == enumerate_concepts_oracle(ctx).size());
}

TEST_CASE("hyperize DOCS") {
  const auto records = load_records(kData / "docs.rec");
  const auto h = hyperize(records, docs_config(1.0));
  CHECK(h.interpreted == docs());
  CHECK(h.lattice.size() == 10);
  CHECK(link_pairs(h.links) == strict_order(h.lattice));
  for (const auto& link : h.links) CHECK(link.weight == 1.0);

  const auto loose = hyperize(records, docs_config(0.4));
  const auto strict = link_pairs(h.links), wide = link_pairs(loose.links);
  CHECK(std::includes(wide.begin(), wide.end(), strict.begin(), strict.end()));
  CHECK(wide.size() > strict.size());
  // Plan1 -> PostScript at 1/2
  const auto& ctx = loose.lattice.context();
  const auto plan1 = *loose.lattice.find_intent(ctx.attribute_set(std::vector{tok("project=plan1")}));
  const auto ps = *loose.lattice.find_intent(ctx.attribute_set(std::vector{tok("format=postscript")}));
  CHECK(wide.count({plan1, ps}) == 1);
  CHECK_FALSE(strict.count({plan1, ps}));

  auto with_links = docs_config(1.0);
  with_links.links = load_link_graph(kData / "docs.links");
  const auto hl = hyperize(records, with_links);
  CHECK(link_pairs(hl.links) == strict_order(hl.lattice));
  CHECK(hl.lattice.size() == enumerate_concepts_oracle(hl.reduced.context).size());
}

TEST_CASE("hyperize edge cases") {
  const std::vector<MetadataRecord> one{{"only", {{"project", "plan1"}}}};
  HyperizationConfig own;
  own.scales = parse_scale_config("nominal project plan1\n");
  const auto h = hyperize(one, own);
  CHECK(h.lattice.size() == 1);
  CHECK(h.links.empty());

  try {
    hyperize({}, docs_config(1.0));
    FAIL("empty input accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::EmptyInput);
  }
  const auto records = load_records(kData / "docs.rec");
  CHECK_THROWS_AS(hyperize(records, docs_config(0.0)), Error);
  CHECK_THROWS_AS(hyperize(records, docs_config(1.5)), Error);
}

TEST_CASE("object projection") {
  const auto l = build_lattice(k1());
  const auto g1 = l.object_concept(0), g2 = l.object_concept(1);
  const std::vector<CrispLink> links{{g1, g2, 0.5}, {l.top(), g1, 1.0}};
  const auto objects = project_to_objects(l, links);
  REQUIRE(objects.size() == 1);
  CHECK(objects[0] == ObjectLink{"g1", "g2", 0.5});
}

TEST_CASE("emit_web on DOCS matches the golden pages") {
  const auto records = load_records(kData / "docs.rec");
  const auto h = hyperize(records, docs_config(1.0));
  const auto dir = scratch("docs");
  const auto files = emit_web(h.links, h.lattice, dir);

  const auto labels = concept_labels(h.lattice, LabelKinds::All);
  std::set<ConceptIndex> named;
  for (const auto& d : labels) {
    if (!d.empty()) named.insert(d.concept_index);
  }
  CHECK(files.size() == named.size() + 1);

  const auto golden = kData / "web" / "docs";
  for (const auto& name : files) {
    INFO(name);
    CHECK(read_file(dir / name) == read_file(golden / name));
  }
  std::size_t golden_count = 0;
  for (const auto& entry : std::filesystem::directory_iterator(golden)) golden_count += entry.is_regular_file();
  CHECK(golden_count == files.size());

  // anchors realise the order among named concepts
  PairSet anchors, expected;
  const std::regex href(R"(href="c(\d+)\.html")");
  for (ConceptIndex k : named) {
    const auto page = read_file(dir / page_name(k));
    for (std::sregex_iterator it(page.begin(), page.end(), href), end; it != end; ++it) {
      anchors.emplace(k, std::stoul((*it)[1].str()) - 1);
    }
  }
  for (const auto& p : strict_order(h.lattice)) {
    if (named.count(p.first) && named.count(p.second)) expected.insert(p);
  }
  CHECK(anchors == expected);
  CHECK(read_file(dir / "links.txt") == format_crisp_links(h.links));
}

TEST_CASE("emit_web without links") {
  const auto l = build_lattice(k1());
  const auto dir = scratch("empty");
  const auto files = emit_web({}, l, dir);
  CHECK(files.size() == 5);
  for (const auto& name : files) CHECK(read_file(dir / name).find("href") == std::string::npos);
  CHECK(read_file(dir / "links.txt").empty());
}

TEST_CASE("property: orientations transpose and readout returns the link context") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = random_graph(rng);
    const auto cross = ingest_link_graph(g, IncidenceOrientation::CrossReferential);
    const auto hier = ingest_link_graph(g, IncidenceOrientation::Hierarchical);
    const auto n = g.nodes.size();
    for (std::size_t s = 0; s < n; ++s) {
      CHECK_FALSE(cross.incident(s, s));
      for (std::size_t t = 0; t < n; ++t) CHECK(cross.incident(s, t) == hier.incident(t, s));
    }
    CHECK(canonical(readout(build_lattice(cross))) == canonical(cross));

    const auto h = build_lattice(cross);
    CHECK(link_pairs(crispify(linkage_matrix(h, LinkageMode::Extensional), 1.0)) == strict_order(h));
  }
}
