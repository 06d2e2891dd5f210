#include "cks/interchange.hpp"

#include "cks/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <map>
#include <set>
#include <utility>

namespace cks {

namespace {

constexpr std::array<std::string_view, 8> kKeywords{"TYPE",     "OBJECT",    "ATTRIBUTE", "INCIDENCE",
                                                    "VIEW",     "SUCCESSOR", "LAYOUT",    "GENERATOR:"};

bool is_keyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

[[noreturn]] void fail(ErrorKind kind, const std::string& message, std::size_t line, std::size_t column = 1) {
  if (line == 0) throw Error(kind, message);
  throw Error(kind, message, {line, column});
}

// ---- lexer ----------------------------------------------------------------

struct Tok {
  enum Kind { Word, Quoted, Open, Close } kind;
  std::string text;
  std::size_t column;
};

struct Line {
  std::size_t number;
  std::vector<Tok> toks;

  bool keyword(std::string_view a) const {
    return toks.size() == 1 && toks[0].kind == Tok::Word && toks[0].text == a;
  }
  bool keyword(std::string_view a, std::string_view b) const {
    return toks.size() == 2 && toks[0].kind == Tok::Word && toks[0].text == a &&
           toks[1].kind == Tok::Word && toks[1].text == b;
  }
  bool starts_with_keyword() const {
    return !toks.empty() && toks[0].kind == Tok::Word && is_keyword(toks[0].text);
  }
};

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; }

std::vector<Line> lex(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(pos, end - pos);
    ++number;
    pos = end + 1;

    Line line{number, {}};
    std::size_t i = 0;
    while (i < raw.size() && is_space(raw[i])) ++i;
    if (i < raw.size() && raw[i] == '#') continue;
    while (i < raw.size()) {
      const char c = raw[i];
      if (is_space(c)) {
        ++i;
      } else if (c == '{' || c == '}') {
        line.toks.push_back({c == '{' ? Tok::Open : Tok::Close, std::string(1, c), i + 1});
        ++i;
      } else if (c == '"') {
        const std::size_t start = i++;
        std::string value;
        bool closed = false;
        while (i < raw.size()) {
          const char d = raw[i++];
          if (d == '"') {
            closed = true;
            break;
          }
          if (d == '\\') {
            if (i >= raw.size()) break;
            const char e = raw[i++];
            value.push_back(e == 'n' ? '\n' : e == 't' ? '\t' : e);
          } else {
            value.push_back(d);
          }
        }
        if (!closed) fail(ErrorKind::SyntaxError, "unterminated quoted name", number, start + 1);
        line.toks.push_back({Tok::Quoted, std::move(value), start + 1});
      } else {
        const std::size_t start = i;
        while (i < raw.size() && !is_space(raw[i]) && raw[i] != '{' && raw[i] != '}' && raw[i] != '"') ++i;
        line.toks.push_back({Tok::Word, std::string(raw.substr(start, i - start)), start + 1});
      }
    }
    if (!line.toks.empty()) lines.push_back(std::move(line));
    if (end == text.size()) break;
  }
  return lines;
}

struct Entry {
  Tok head;
  std::vector<Tok> items;
  std::size_t line;
};

Entry entry(const Line& line) {
  const auto& t = line.toks;
  if (t[0].kind == Tok::Open || t[0].kind == Tok::Close) {
    fail(ErrorKind::SyntaxError, "expected a name before '{'", line.number, t[0].column);
  }
  if (t.size() < 2 || t[1].kind != Tok::Open) {
    const std::size_t col = t.size() < 2 ? t[0].column + t[0].text.size() : t[1].column;
    fail(ErrorKind::SyntaxError, "expected '{' after '" + t[0].text + "'", line.number, col);
  }
  Entry e{t[0], {}, line.number};
  std::size_t i = 2;
  for (; i < t.size() && t[i].kind != Tok::Close; ++i) {
    if (t[i].kind == Tok::Open) fail(ErrorKind::SyntaxError, "nested '{'", line.number, t[i].column);
    e.items.push_back(t[i]);
  }
  if (i == t.size()) fail(ErrorKind::SyntaxError, "missing '}'", line.number, t.back().column);
  if (i + 1 != t.size()) {
    fail(ErrorKind::SyntaxError, "unexpected text after '}'", line.number, t[i + 1].column);
  }
  return e;
}

AttributeToken token_at(const Tok& t, std::size_t line) {
  try {
    return AttributeToken::parse(t.text);
  } catch (const Error& e) {
    fail(e.kind(), e.what(), line, t.column);
  }
}

std::size_t index_at(const Tok& t, std::size_t line) {
  std::size_t value = 0;
  const auto* first = t.text.data();
  const auto* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (t.kind != Tok::Word || ec != std::errc{} || ptr != last) {
    fail(ErrorKind::SyntaxError, "expected a concept index, got '" + t.text + "'", line, t.column);
  }
  return value;
}

class Cursor {
public:
  explicit Cursor(std::vector<Line> lines) : lines_(std::move(lines)) {}

  bool done() const { return at_ >= lines_.size(); }
  const Line& peek() const { return lines_[at_]; }
  const Line& next() { return lines_[at_++]; }
  std::size_t last_line() const { return lines_.empty() ? 1 : lines_.back().number; }

  std::string type_line() {
    if (done()) fail(ErrorKind::SyntaxError, "expected 'TYPE <name>'", 1);
    const Line& l = next();
    if (l.toks.size() != 2 || l.toks[0].kind != Tok::Word || l.toks[0].text != "TYPE" ||
        l.toks[1].kind == Tok::Open || l.toks[1].kind == Tok::Close) {
      fail(ErrorKind::SyntaxError, "expected 'TYPE <name>'", l.number, 1);
    }
    return l.toks[1].text;
  }

  template <typename... Words>
  void expect(std::string_view what, Words... words) {
    if (done()) fail(ErrorKind::SyntaxError, "expected '" + std::string(what) + "'", last_line());
    const Line& l = next();
    if (!l.keyword(words...)) {
      fail(ErrorKind::SyntaxError, "expected '" + std::string(what) + "'", l.number, l.toks[0].column);
    }
  }

  /// Entries until the next keyword line.
  std::vector<Entry> entries() {
    std::vector<Entry> out;
    while (!done() && !peek().starts_with_keyword()) out.push_back(entry(next()));
    return out;
  }

private:
  std::vector<Line> lines_;
  std::size_t at_ = 0;
};

// ---- emission -------------------------------------------------------------

bool plain(std::string_view s, bool relators) {
  if (s.empty() || s.front() == '#' || is_keyword(s)) return false;
  return std::all_of(s.begin(), s.end(), [&](char c) {
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) return true;
    if (c == '.' || c == '_' || c == '/' || c == ':' || c == '#' || c == '-') return true;
    return relators && (c == '<' || c == '>' || c == '=');
  });
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out += '\\';
      out += c;
    } else if (c == '\n') {
      out += "\\n";
    } else if (c == '\t') {
      out += "\\t";
    } else {
      out += c;
    }
  }
  return out + '"';
}

template <typename Item, typename Render>
void emit_entry(std::string& out, const std::string& head, const std::vector<Item>& items, Render render) {
  out += head;
  out += " {";
  for (const auto& item : items) {
    out += ' ';
    out += render(item);
  }
  out += " }\n";
}

// ---- CLIF structure -------------------------------------------------------

struct ClifLines {
  std::vector<std::size_t> objects, attributes, views, successors, layout;
};

std::size_t line_of(const std::vector<std::size_t>& lines, std::size_t i) {
  return i < lines.size() ? lines[i] : 0;
}

/// Zero-based upper-cover adjacency after validation.
std::vector<std::vector<std::size_t>> validate_clif(const ClifDocument& doc, const ClifLines& lines) {
  const std::size_t p = doc.successors.size();
  if (p == 0) fail(ErrorKind::InvalidLattice, "lattice has no concepts", 0);

  std::vector<std::vector<std::size_t>> up(p);
  std::vector<bool> seen(p);
  for (std::size_t e = 0; e < p; ++e) {
    const auto& s = doc.successors[e];
    const auto line = line_of(lines.successors, e);
    if (s.index < 1 || s.index > p) {
      fail(ErrorKind::IndexOutOfRange, "concept index " + std::to_string(s.index) + " outside 1.." + std::to_string(p), line);
    }
    if (seen[s.index - 1]) fail(ErrorKind::DuplicateDeclaration, "concept " + std::to_string(s.index) + " listed twice", line);
    seen[s.index - 1] = true;
    for (std::size_t t : s.items) {
      if (t < 1 || t > p) {
        fail(ErrorKind::IndexOutOfRange, "successor " + std::to_string(t) + " outside 1.." + std::to_string(p), line);
      }
      up[s.index - 1].push_back(t - 1);
    }
  }

  auto check_generators = [&](const auto& generators, const std::vector<std::size_t>& gen_lines,
                              const char* what, auto key) {
    std::set<std::size_t> indexes;
    std::set<std::string> names;
    for (std::size_t e = 0; e < generators.size(); ++e) {
      const auto& g = generators[e];
      const auto line = line_of(gen_lines, e);
      if (g.index < 1 || g.index > p) {
        fail(ErrorKind::IndexOutOfRange, std::string(what) + " generator index " + std::to_string(g.index) + " out of range", line);
      }
      if (!indexes.insert(g.index).second) {
        fail(ErrorKind::DuplicateDeclaration, std::string(what) + " generators for concept " + std::to_string(g.index) + " listed twice", line);
      }
      for (const auto& item : g.items) {
        if (!names.insert(key(item)).second) {
          fail(ErrorKind::DuplicateDeclaration, std::string(what) + " '" + key(item) + "' generates two concepts", line);
        }
      }
    }
  };
  auto same = [](const std::string& s) { return s; };
  check_generators(doc.object_generators, lines.objects, "object", same);
  check_generators(doc.attribute_generators, lines.attributes, "attribute",
                   [](const AttributeToken& t) { return t.str(); });
  check_generators(doc.view_generators, lines.views, "view", same);

  if (doc.layout) {
    std::set<std::size_t> placed;
    for (std::size_t e = 0; e < doc.layout->size(); ++e) {
      const auto& entry = (*doc.layout)[e];
      const auto line = line_of(lines.layout, e);
      if (entry.index < 1 || entry.index > p) {
        fail(ErrorKind::IndexOutOfRange, "layout index " + std::to_string(entry.index) + " out of range", line);
      }
      if (!placed.insert(entry.index).second) {
        fail(ErrorKind::DuplicateDeclaration, "concept " + std::to_string(entry.index) + " placed twice", line);
      }
    }
  }

  if (!topological_order(up)) fail(ErrorKind::CyclicOrder, "successor relation has a cycle", 0);
  std::vector<bool> has_lower(p);
  std::size_t tops = 0;
  for (std::size_t k = 0; k < p; ++k) {
    if (up[k].empty()) ++tops;
    for (std::size_t t : up[k]) has_lower[t] = true;
  }
  const auto bottoms = static_cast<std::size_t>(std::count(has_lower.begin(), has_lower.end(), false));
  if (tops != 1) fail(ErrorKind::InvalidLattice, "lattice needs exactly one top, found " + std::to_string(tops), 0);
  if (bottoms != 1) {
    fail(ErrorKind::InvalidLattice, "lattice needs exactly one bottom, found " + std::to_string(bottoms), 0);
  }
  return up;
}

}  // namespace

// ---- quoting --------------------------------------------------------------

std::string quote_name(std::string_view name) {
  return plain(name, false) ? std::string(name) : quoted(name);
}

std::string quote_token(const AttributeToken& token) {
  const std::string s = token.str();
  return plain(s, true) ? s : quoted(s);
}

// ---- FCIF -----------------------------------------------------------------

FcifDocument parse_fcif(std::string_view text) {
  Cursor in(lex(text));
  FcifDocument doc;
  doc.type_name = in.type_line();

  in.expect("OBJECT", "OBJECT");
  std::map<std::string, std::size_t> objects;
  std::vector<std::vector<Tok>> object_preds;
  std::vector<std::size_t> object_lines;
  for (auto& e : in.entries()) {
    if (!objects.emplace(e.head.text, doc.objects.size()).second) {
      fail(ErrorKind::DuplicateDeclaration, "duplicate object '" + e.head.text + "'", e.line, e.head.column);
    }
    doc.objects.push_back({e.head.text, {}});
    object_preds.push_back(e.items);
    object_lines.push_back(e.line);
  }
  for (std::size_t i = 0; i < doc.objects.size(); ++i) {
    for (const auto& t : object_preds[i]) {
      if (!objects.count(t.text)) {
        fail(ErrorKind::UndeclaredName, "undeclared object '" + t.text + "'", object_lines[i], t.column);
      }
      doc.objects[i].predecessors.push_back(t.text);
    }
  }

  in.expect("ATTRIBUTE", "ATTRIBUTE");
  std::set<std::string> attributes;
  std::vector<std::vector<Tok>> attribute_preds;
  std::vector<std::size_t> attribute_lines;
  for (auto& e : in.entries()) {
    auto token = token_at(e.head, e.line);
    if (!attributes.insert(token.str()).second) {
      fail(ErrorKind::DuplicateDeclaration, "duplicate attribute '" + token.str() + "'", e.line, e.head.column);
    }
    doc.attributes.push_back({std::move(token), {}});
    attribute_preds.push_back(e.items);
    attribute_lines.push_back(e.line);
  }
  auto declared_token = [&](const Tok& t, std::size_t line) {
    auto token = token_at(t, line);
    if (!attributes.count(token.str())) {
      fail(ErrorKind::UndeclaredName, "undeclared attribute '" + token.str() + "'", line, t.column);
    }
    return token;
  };
  for (std::size_t i = 0; i < doc.attributes.size(); ++i) {
    for (const auto& t : attribute_preds[i]) {
      doc.attributes[i].predecessors.push_back(declared_token(t, attribute_lines[i]));
    }
  }

  in.expect("INCIDENCE", "INCIDENCE");
  std::set<std::string> rows;
  for (auto& e : in.entries()) {
    if (!objects.count(e.head.text)) {
      fail(ErrorKind::UndeclaredName, "undeclared object '" + e.head.text + "'", e.line, e.head.column);
    }
    if (!rows.insert(e.head.text).second) {
      fail(ErrorKind::DuplicateDeclaration, "second incidence row for '" + e.head.text + "'", e.line, e.head.column);
    }
    FcifRow row{e.head.text, {}};
    for (const auto& t : e.items) row.attributes.push_back(declared_token(t, e.line));
    doc.incidence.push_back(std::move(row));
  }

  if (!in.done() && in.peek().keyword("VIEW")) {
    in.next();
    std::set<std::string> views;
    for (auto& e : in.entries()) {
      if (!views.insert(e.head.text).second) {
        fail(ErrorKind::DuplicateDeclaration, "duplicate view '" + e.head.text + "'", e.line, e.head.column);
      }
      ConceptualView view{e.head.text, {}};
      for (const auto& t : e.items) view.intent.push_back(declared_token(t, e.line));
      doc.views.push_back(std::move(view));
    }
  }
  if (!in.done()) {
    const Line& l = in.peek();
    fail(ErrorKind::SyntaxError, "unexpected section '" + l.toks[0].text + "'", l.number, l.toks[0].column);
  }
  return doc;
}

std::string emit_fcif(const FcifDocument& doc) {
  std::string out = "TYPE " + quote_name(doc.type_name) + "\nOBJECT\n";
  for (const auto& o : doc.objects) emit_entry(out, quote_name(o.name), o.predecessors, quote_name);
  out += "ATTRIBUTE\n";
  for (const auto& a : doc.attributes) emit_entry(out, quote_token(a.token), a.predecessors, quote_token);
  out += "INCIDENCE\n";
  for (const auto& r : doc.incidence) emit_entry(out, quote_name(r.object), r.attributes, quote_token);
  if (!doc.views.empty()) {
    out += "VIEW\n";
    for (const auto& v : doc.views) emit_entry(out, quote_name(v.name), v.intent, quote_token);
  }
  return out;
}

FormalContext fcif_context(const FcifDocument& doc) {
  std::vector<std::string> objects;
  std::map<std::string, std::size_t> object_at;
  for (const auto& o : doc.objects) {
    object_at.emplace(o.name, objects.size());
    objects.push_back(o.name);
  }
  std::vector<AttributeToken> attributes;
  std::map<std::string, std::size_t> attribute_at;
  for (const auto& a : doc.attributes) {
    attribute_at.emplace(a.token.str(), attributes.size());
    attributes.push_back(a.token);
  }
  auto object_index = [&](const std::string& name) {
    auto it = object_at.find(name);
    if (it == object_at.end()) throw Error(ErrorKind::UndeclaredName, "undeclared object '" + name + "'");
    return it->second;
  };
  auto attribute_index = [&](const AttributeToken& t) {
    auto it = attribute_at.find(t.str());
    if (it == attribute_at.end()) throw Error(ErrorKind::UndeclaredName, "undeclared attribute '" + t.str() + "'");
    return it->second;
  };

  std::vector<std::vector<std::size_t>> object_below(objects.size());
  for (std::size_t i = 0; i < doc.objects.size(); ++i) {
    for (const auto& p : doc.objects[i].predecessors) object_below[i].push_back(object_index(p));
  }
  std::vector<std::vector<std::size_t>> attribute_below(attributes.size());
  for (std::size_t i = 0; i < doc.attributes.size(); ++i) {
    for (const auto& p : doc.attributes[i].predecessors) attribute_below[i].push_back(attribute_index(p));
  }
  std::vector<AttributeSet> rows(objects.size(), AttributeSet(attributes.size()));
  for (const auto& r : doc.incidence) {
    auto& row = rows[object_index(r.object)];
    for (const auto& t : r.attributes) row.set(attribute_index(t));
  }
  return FormalContext(std::move(objects), std::move(attributes), std::move(rows),
                       PartialOrder::from_predecessors(std::move(object_below)),
                       PartialOrder::from_predecessors(std::move(attribute_below)), doc.views);
}

FcifDocument fcif_document(const FormalContext& ctx, std::string type_name) {
  FcifDocument doc;
  doc.type_name = std::move(type_name);
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    FcifObject o{ctx.objects()[g], {}};
    for (std::size_t p : ctx.object_order().predecessors(g)) o.predecessors.push_back(ctx.objects()[p]);
    doc.objects.push_back(std::move(o));
  }
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    FcifAttribute a{ctx.attributes()[m], {}};
    for (std::size_t p : ctx.attribute_order().predecessors(m)) a.predecessors.push_back(ctx.attributes()[p]);
    doc.attributes.push_back(std::move(a));
  }
  for (std::size_t g = 0; g < ctx.object_count(); ++g) {
    doc.incidence.push_back({ctx.objects()[g], ctx.attribute_tokens(ctx.row(g))});
  }
  doc.views = ctx.views();
  return doc;
}

// ---- CLIF -----------------------------------------------------------------

ClifDocument parse_clif(std::string_view text) {
  Cursor in(lex(text));
  ClifDocument doc;
  ClifLines lines;
  doc.type_name = in.type_line();

  in.expect("GENERATOR: OBJECT", "GENERATOR:", "OBJECT");
  for (auto& e : in.entries()) {
    ClifEntry<std::string> g{index_at(e.head, e.line), {}};
    for (const auto& t : e.items) g.items.push_back(t.text);
    doc.object_generators.push_back(std::move(g));
    lines.objects.push_back(e.line);
  }
  in.expect("GENERATOR: ATTRIBUTE", "GENERATOR:", "ATTRIBUTE");
  for (auto& e : in.entries()) {
    ClifEntry<AttributeToken> g{index_at(e.head, e.line), {}};
    for (const auto& t : e.items) g.items.push_back(token_at(t, e.line));
    doc.attribute_generators.push_back(std::move(g));
    lines.attributes.push_back(e.line);
  }
  if (!in.done() && in.peek().keyword("GENERATOR:", "VIEW")) {
    in.next();
    for (auto& e : in.entries()) {
      ClifEntry<std::string> g{index_at(e.head, e.line), {}};
      for (const auto& t : e.items) g.items.push_back(t.text);
      doc.view_generators.push_back(std::move(g));
      lines.views.push_back(e.line);
    }
  }
  in.expect("SUCCESSOR", "SUCCESSOR");
  for (auto& e : in.entries()) {
    ClifEntry<std::size_t> s{index_at(e.head, e.line), {}};
    for (const auto& t : e.items) s.items.push_back(index_at(t, e.line));
    doc.successors.push_back(std::move(s));
    lines.successors.push_back(e.line);
  }
  if (!in.done() && in.peek().keyword("LAYOUT")) {
    in.next();
    doc.layout.emplace();
    for (auto& e : in.entries()) {
      if (e.items.size() != 2) {
        fail(ErrorKind::SyntaxError, "layout entry needs '{ x y }'", e.line, e.head.column);
      }
      doc.layout->push_back({index_at(e.head, e.line), index_at(e.items[0], e.line), index_at(e.items[1], e.line)});
      lines.layout.push_back(e.line);
    }
  }
  if (!in.done()) {
    const Line& l = in.peek();
    fail(ErrorKind::SyntaxError, "unexpected section '" + l.toks[0].text + "'", l.number, l.toks[0].column);
  }
  validate_clif(doc, lines);
  return doc;
}

std::string emit_clif(const ClifDocument& doc) {
  auto index = [](std::size_t k) { return std::to_string(k); };
  std::string out = "TYPE " + quote_name(doc.type_name) + "\nGENERATOR: OBJECT\n";
  for (const auto& g : doc.object_generators) emit_entry(out, index(g.index), g.items, quote_name);
  out += "GENERATOR: ATTRIBUTE\n";
  for (const auto& g : doc.attribute_generators) emit_entry(out, index(g.index), g.items, quote_token);
  if (!doc.view_generators.empty()) {
    out += "GENERATOR: VIEW\n";
    for (const auto& g : doc.view_generators) emit_entry(out, index(g.index), g.items, quote_name);
  }
  out += "SUCCESSOR\n";
  for (const auto& s : doc.successors) emit_entry(out, index(s.index), s.items, index);
  if (doc.layout) {
    out += "LAYOUT\n";
    for (const auto& e : *doc.layout) {
      out += index(e.index) + " { " + index(e.x) + ' ' + index(e.y) + " }\n";
    }
  }
  return out;
}

std::vector<LayoutEntry> compute_layout(const ConceptLattice& l) {
  std::vector<std::size_t> depth(l.size(), 0);
  std::map<std::size_t, std::size_t> width;
  std::vector<LayoutEntry> out;
  for (ConceptIndex k = 0; k < l.size(); ++k) {
    for (ConceptIndex up : l.upper_covers(k)) depth[k] = std::max(depth[k], depth[up] + 1);
    out.push_back({k + 1, width[depth[k]]++, depth[k]});
  }
  return out;
}

ClifDocument clif_document(const ConceptLattice& l, std::string type_name, bool with_layout) {
  const auto& ctx = l.context();
  std::vector<std::vector<std::string>> objects(l.size());
  std::vector<std::vector<AttributeToken>> attributes(l.size());
  std::vector<std::vector<std::string>> views(l.size());
  for (std::size_t g = 0; g < ctx.object_count(); ++g) objects[l.object_concept(g)].push_back(ctx.objects()[g]);
  for (std::size_t m = 0; m < ctx.attribute_count(); ++m) {
    attributes[l.attribute_concept(m)].push_back(ctx.attributes()[m]);
  }
  for (std::size_t v = 0; v < ctx.views().size(); ++v) views[l.view_concepts()[v]].push_back(ctx.views()[v].name);

  ClifDocument doc;
  doc.type_name = std::move(type_name);
  for (ConceptIndex k = 0; k < l.size(); ++k) {
    std::sort(objects[k].begin(), objects[k].end());
    std::sort(attributes[k].begin(), attributes[k].end());
    std::sort(views[k].begin(), views[k].end());
    if (!objects[k].empty()) doc.object_generators.push_back({k + 1, objects[k]});
    if (!attributes[k].empty()) doc.attribute_generators.push_back({k + 1, attributes[k]});
    if (!views[k].empty()) doc.view_generators.push_back({k + 1, views[k]});
    ClifEntry<std::size_t> s{k + 1, {}};
    for (ConceptIndex up : l.upper_covers(k)) s.items.push_back(up + 1);
    doc.successors.push_back(std::move(s));
  }
  if (with_layout) doc.layout = compute_layout(l);
  return doc;
}

FormalContext clif_context(const ClifDocument& doc) {
  const auto up = validate_clif(doc, {});
  const std::size_t p = up.size();

  // above[k]: concepts reachable upward from k, k included
  const auto order = *topological_order(up);
  std::vector<Bitset> above(p, Bitset(p));
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    above[*it].set(*it);
    for (std::size_t t : up[*it]) above[*it] |= above[t];
  }

  std::vector<std::pair<std::string, std::size_t>> objects;
  for (const auto& g : doc.object_generators) {
    for (const auto& name : g.items) objects.emplace_back(name, g.index - 1);
  }
  std::vector<std::pair<AttributeToken, std::size_t>> attributes;
  for (const auto& g : doc.attribute_generators) {
    for (const auto& t : g.items) attributes.emplace_back(t, g.index - 1);
  }
  std::sort(objects.begin(), objects.end());
  std::sort(attributes.begin(), attributes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<std::string> object_names;
  std::vector<AttributeToken> attribute_tokens;
  for (const auto& o : objects) object_names.push_back(o.first);
  for (const auto& a : attributes) attribute_tokens.push_back(a.first);
  std::vector<AttributeSet> rows(objects.size(), AttributeSet(attributes.size()));
  for (std::size_t g = 0; g < objects.size(); ++g) {
    for (std::size_t m = 0; m < attributes.size(); ++m) {
      if (above[objects[g].second].test(attributes[m].second)) rows[g].set(m);
    }
  }
  std::vector<ConceptualView> views;
  for (const auto& g : doc.view_generators) {
    for (const auto& name : g.items) {
      ConceptualView view{name, {}};
      for (const auto& a : attributes) {
        if (above[g.index - 1].test(a.second)) view.intent.push_back(a.first);
      }
      views.push_back(std::move(view));
    }
  }
  std::sort(views.begin(), views.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  return FormalContext(std::move(object_names), std::move(attribute_tokens), std::move(rows), PartialOrder{},
                       PartialOrder{}, std::move(views));
}

ConceptLattice clif_lattice(const ClifDocument& doc) {
  ConceptLattice l(clif_context(doc));
  if (l.size() != doc.concept_count()) {
    throw Error(ErrorKind::InvalidLattice, "generators determine " + std::to_string(l.size()) +
                                              " concepts but the document has " +
                                              std::to_string(doc.concept_count()));
  }
  return l;
}

ClifDocument fcif_to_clif(const FcifDocument& doc) {
  return clif_document(ConceptLattice(fcif_context(doc)), doc.type_name);
}

FcifDocument clif_to_fcif(const ClifDocument& doc) {
  return fcif_document(clif_context(doc), doc.type_name);
}

}  // namespace cks
