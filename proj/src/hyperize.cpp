#include "cks/hyperize.hpp"

#include "cks/browsing.hpp"
#include "cks/error.hpp"
#include "cks/io.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace cks {

namespace {

std::vector<std::string> words_of(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> words;
  for (std::string w; in >> w;) words.push_back(w);
  return words;
}

std::string escape_html(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string weight_text(double w) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", w);
  return buffer;
}

}  // namespace

WebObjectGraph parse_link_graph(std::string_view text) {
  WebObjectGraph g;
  std::istringstream in{std::string(text)};
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    const auto words = words_of(line);
    if (words.empty() || words[0].front() == '#') continue;
    const SourceLocation where{line_no, line.find_first_not_of(" \t") + 1};
    if (words[0] == "node" && words.size() == 2) {
      g.nodes.push_back(words[1]);
    } else if (words[0] == "edge" && words.size() == 3) {
      g.edges.emplace_back(words[1], words[2]);
    } else {
      throw Error(ErrorKind::SyntaxError, "expected 'node <name>' or 'edge <source> <target>'", where);
    }
  }
  return g;
}

WebObjectGraph load_link_graph(const std::filesystem::path& path) { return parse_link_graph(read_file(path)); }

FormalContext ingest_link_graph(const WebObjectGraph& g, IncidenceOrientation orientation,
                                std::vector<std::string>* warnings) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    if (!index.emplace(g.nodes[i], i).second) {
      throw Error(ErrorKind::GraphIntegrity, "node '" + g.nodes[i] + "' is declared twice");
    }
  }
  const std::size_t n = g.nodes.size();
  std::vector<AttributeToken> attributes;
  for (const auto& node : g.nodes) attributes.push_back(AttributeToken::bare("link:" + node));
  std::vector<AttributeSet> rows(n, AttributeSet(n));
  for (const auto& [source, target] : g.edges) {
    const auto s = index.find(source), t = index.find(target);
    if (s == index.end() || t == index.end()) {
      throw Error(ErrorKind::GraphIntegrity, "edge " + source + " -> " + target + " names an undeclared node");
    }
    if (s->second == t->second) {
      if (warnings) warnings->push_back("dropped self-link on '" + source + "'");
      continue;
    }
    if (orientation == IncidenceOrientation::CrossReferential) {
      rows[s->second].set(t->second);
    } else {
      rows[t->second].set(s->second);
    }
  }
  return FormalContext(g.nodes, std::move(attributes), std::move(rows));
}

FormalContext enrich(const FormalContext& link_ctx, const FormalContext& meta_ctx) {
  if (link_ctx.object_count() == 0 && link_ctx.attribute_count() == 0) return meta_ctx;
  if (link_ctx.object_count() != meta_ctx.object_count()) {
    throw Error(ErrorKind::ObjectSetMismatch, "link graph and metadata describe different objects");
  }
  const auto aligned = reorder_objects(link_ctx, meta_ctx.objects());
  return apposition(aligned, meta_ctx, Namespaces{"link:", "meta:"});
}

Hyperization hyperize(std::span<const MetadataRecord> records, const HyperizationConfig& config) {
  if (records.empty()) throw Error(ErrorKind::EmptyInput, "no metadata records to hyperize");
  if (!(config.threshold > 0.0 && config.threshold <= 1.0)) {
    throw Error(ErrorKind::ThresholdOutOfRange,
                "threshold must lie in (0,1], got " + std::to_string(config.threshold));
  }
  std::vector<std::string> warnings;
  auto interpreted = interpret(records, config.scales.scales).with_views(config.scales.views);
  if (config.links) interpreted = enrich(ingest_link_graph(*config.links, config.orientation, &warnings), interpreted);
  auto purified = purify(interpreted);
  auto reduced = reduce(purified.context);
  ConceptLattice lattice(reduced.context);
  auto matrix = linkage_matrix(lattice, LinkageMode::Extensional);
  auto links = crispify(matrix, config.threshold);
  return {std::move(interpreted), std::move(purified), std::move(reduced), std::move(lattice),
          std::move(matrix),      std::move(links),    std::move(warnings)};
}

std::vector<ObjectLink> project_to_objects(const ConceptLattice& l, std::span<const CrispLink> links) {
  const auto& ctx = l.context();
  std::vector<std::vector<std::size_t>> at(l.size());
  for (std::size_t g = 0; g < ctx.object_count(); ++g) at[l.object_concept(g)].push_back(g);
  std::vector<ObjectLink> out;
  for (const auto& link : links) {
    for (std::size_t s : at[link.source]) {
      for (std::size_t t : at[link.target]) out.push_back({ctx.objects()[s], ctx.objects()[t], link.weight});
    }
  }
  return out;
}

std::string page_name(ConceptIndex k) { return "c" + std::to_string(k + 1) + ".html"; }

std::string render_page(const ConceptLattice& l, ConceptIndex k, std::span<const CrispLink> links) {
  const auto labels = concept_labels(l, LabelKinds::All);
  const auto& ctx = l.context();
  const auto& node = l.concept_at(k);
  const std::string title = escape_html(labels[k].str());

  std::string out = "<!DOCTYPE html>\n<html>\n<head><meta charset=\"utf-8\"><title>" + title +
                    "</title></head>\n<body>\n<h1>" + title + "</h1>\n";
  out += "<h2>Intent</h2>\n<ul>\n";
  for (const auto& token : ctx.attribute_tokens(node.intent)) out += "<li>" + escape_html(token.str()) + "</li>\n";
  out += "</ul>\n<h2>Extent</h2>\n<ul>\n";
  for (const auto& name : ctx.object_names(node.extent)) out += "<li>" + escape_html(name) + "</li>\n";
  out += "</ul>\n<h2>Links</h2>\n<ul>\n";
  for (const auto& link : links) {
    if (link.source != k || link.target >= l.size() || labels[link.target].empty()) continue;
    out += "<li><a href=\"" + page_name(link.target) + "\">" + escape_html(labels[link.target].str()) + "</a> " +
           weight_text(link.weight) + "</li>\n";
  }
  out += "</ul>\n</body>\n</html>\n";
  return out;
}

std::vector<std::string> emit_web(std::span<const CrispLink> links, const ConceptLattice& l,
                                  const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create '" + out_dir.string() + "': " + ec.message());
  std::vector<std::string> written;
  const auto labels = concept_labels(l, LabelKinds::All);
  for (ConceptIndex k = 0; k < l.size(); ++k) {
    if (labels[k].empty()) continue;
    write_file(out_dir / page_name(k), render_page(l, k, links));
    written.push_back(page_name(k));
  }
  write_file(out_dir / "links.txt", format_crisp_links({links.begin(), links.end()}));
  written.push_back("links.txt");
  return written;
}

}  // namespace cks
