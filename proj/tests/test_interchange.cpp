#include "doctest.h"

#include "cks/error.hpp"
#include "cks/interchange.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace cks;
using namespace cks::testing;

namespace {

const std::filesystem::path kData = CKS_TEST_DATA;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::EmptyInput;
}

SourceLocation where_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.where();
  }
  FAIL("no error raised");
  return {};
}

}  // namespace

TEST_CASE("K1 golden FCIF") {
  const std::string text = slurp(kData / "k1.fcif");
  const auto doc = parse_fcif(text);
  CHECK(doc.type_name == "K1");
  CHECK(fcif_context(doc) == k1());
  CHECK(emit_fcif(doc) == text);
  CHECK(emit_fcif(fcif_document(k1(), "K1")) == text);
}

TEST_CASE("K1 golden CLIF") {
  const std::string fcif = slurp(kData / "k1.fcif");
  const std::string clif = slurp(kData / "k1.clif");
  CHECK(emit_clif(clif_document(build_lattice(k1()), "K1")) == clif);
  CHECK(emit_clif(fcif_to_clif(parse_fcif(fcif))) == clif);
  CHECK(emit_fcif(clif_to_fcif(parse_clif(clif))) == fcif);
  const auto doc = parse_clif(clif);
  CHECK(doc.concept_count() == 6);
  std::size_t edges = 0;
  for (const auto& s : doc.successors) edges += s.items.size();
  CHECK(edges == 7);
}

TEST_CASE("DOCS") {
  const auto doc = parse_fcif(slurp(kData / "docs.fcif"));
  CHECK(fcif_context(doc) == docs());
  const auto clif = fcif_to_clif(doc);
  CHECK(clif.concept_count() == enumerate_concepts_oracle(docs()).size());
  CHECK(parse_clif(emit_clif(clif)) == clif);

  const auto reduced = docs_reduced();
  const auto reduced_clif = clif_document(build_lattice(reduced), "DOCS");
  CHECK(reduced_clif.view_generators.size() == 4);
  CHECK(clif_context(reduced_clif) == canonical(reduced));
  CHECK(clif_lattice(reduced_clif).size() == 10);
}

TEST_CASE("empty documents") {
  const auto doc = parse_fcif("TYPE E\nOBJECT\nATTRIBUTE\nINCIDENCE\n");
  const auto ctx = fcif_context(doc);
  CHECK(ctx.object_count() == 0);
  CHECK(ctx.attribute_count() == 0);
  const auto clif = fcif_to_clif(doc);
  CHECK(clif.concept_count() == 1);
  CHECK(clif.object_generators.empty());
  CHECK(emit_clif(clif) == "TYPE E\nGENERATOR: OBJECT\nGENERATOR: ATTRIBUTE\nSUCCESSOR\n1 { }\n");

  const auto one = parse_clif("TYPE One\nGENERATOR: OBJECT\nGENERATOR: ATTRIBUTE\nSUCCESSOR\n1 { }\n");
  CHECK(clif_lattice(one).size() == 1);
}

TEST_CASE("FCIF errors") {
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { }\nATTRIBUTE\na { }\nINCIDENCE\ng9 { a }\n"); }) ==
        ErrorKind::UndeclaredName);
  const auto at = where_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { }\nATTRIBUTE\na { }\nINCIDENCE\ng9 { a }\n"); });
  CHECK(at.line == 7);
  CHECK(at.column == 1);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { }\nATTRIBUTE\na { }\nINCIDENCE\ng1 { z }\n"); }) ==
        ErrorKind::UndeclaredName);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { }\ng1 { }\nATTRIBUTE\nINCIDENCE\n"); }) ==
        ErrorKind::DuplicateDeclaration);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { g2 }\nATTRIBUTE\nINCIDENCE\n"); }) ==
        ErrorKind::UndeclaredName);
  CHECK(kind_of([] { parse_fcif("OBJECT\nATTRIBUTE\nINCIDENCE\n"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_fcif("TYPE T\nATTRIBUTE\nOBJECT\nINCIDENCE\n"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 {\nATTRIBUTE\nINCIDENCE\n"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { } x\nATTRIBUTE\nINCIDENCE\n"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_fcif("TYPE T\nOBJECT\n\"g1 { }\nATTRIBUTE\nINCIDENCE\n"); }) == ErrorKind::SyntaxError);
  const auto col = where_of([] { parse_fcif("TYPE T\nOBJECT\ng1 { } x\nATTRIBUTE\nINCIDENCE\n"); });
  CHECK(col.line == 3);
  CHECK(col.column == 8);
  CHECK(kind_of([] { fcif_context(parse_fcif("TYPE T\nOBJECT\ng1 { g2 }\ng2 { g1 }\nATTRIBUTE\nINCIDENCE\n")); }) ==
        ErrorKind::CyclicOrder);
}

TEST_CASE("CLIF errors") {
  const std::string head = "TYPE T\nGENERATOR: OBJECT\nGENERATOR: ATTRIBUTE\nSUCCESSOR\n";
  CHECK(kind_of([&] { parse_clif(head + "1 { 2 }\n2 { 1 }\n"); }) == ErrorKind::CyclicOrder);
  CHECK(kind_of([&] { parse_clif(head + "1 { 3 }\n2 { 1 }\n"); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([&] { parse_clif(head + "1 { }\n1 { }\n"); }) == ErrorKind::DuplicateDeclaration);
  CHECK(kind_of([&] { parse_clif(head + "1 { }\n2 { }\n"); }) == ErrorKind::InvalidLattice);
  CHECK(kind_of([&] { parse_clif(head + "1 { }\n2 { 1 }\n3 { 1 }\n"); }) == ErrorKind::InvalidLattice);
  CHECK(kind_of([&] { parse_clif(head); }) == ErrorKind::InvalidLattice);
  CHECK(kind_of([&] { parse_clif(head + "x { }\n"); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] {
          parse_clif("TYPE T\nGENERATOR: OBJECT\n1 { g }\n2 { g }\nGENERATOR: ATTRIBUTE\nSUCCESSOR\n1 { }\n2 { 1 }\n");
        }) == ErrorKind::DuplicateDeclaration);
  CHECK(kind_of([&] { parse_clif(head + "1 { }\nLAYOUT\n1 { 0 }\n"); }) == ErrorKind::SyntaxError);
  // generators that miss a concept
  CHECK(kind_of([&] { clif_lattice(parse_clif(head + "1 { }\n2 { 1 }\n")); }) == ErrorKind::InvalidLattice);
}

TEST_CASE("quoting") {
  CHECK(quote_name("notes0.txt") == "notes0.txt");
  CHECK(quote_name("two words") == "\"two words\"");
  CHECK(quote_name("OBJECT") == "\"OBJECT\"");
  CHECK(quote_name("#tag") == "\"#tag\"");
  CHECK(quote_name("a\"b\\c") == "\"a\\\"b\\\\c\"");
  CHECK(quote_name("x=y") == "\"x=y\"");
  CHECK(quote_token(tok("size<=10")) == "size<=10");
  CHECK(quote_token(tok("title=Two words")) == "\"title=Two words\"");

  const auto ctx = make_context({"my file", "OBJECT", "#x", "q\"t"}, {"title=Two words", "k"},
                                {{"my file", {"title=Two words"}}, {"OBJECT", {"k"}}});
  const auto text = emit_fcif(fcif_document(ctx, "odd name"));
  const auto doc = parse_fcif(text);
  CHECK(doc.type_name == "odd name");
  CHECK(fcif_context(doc) == ctx);
  CHECK(emit_fcif(doc) == text);
}

TEST_CASE("orders in FCIF") {
  const std::string text =
      "TYPE S\nOBJECT\nd { }\nATTRIBUTE\nsize<=10 { }\nsize<=100 { size<=10 }\nINCIDENCE\nd { size<=10 size<=100 }\n";
  const auto ctx = fcif_context(parse_fcif(text));
  CHECK(ctx.attribute_order().less(0, 1));
  CHECK(emit_fcif(fcif_document(ctx, "S")) == text);
  CHECK(kind_of([] {
          fcif_context(parse_fcif(
              "TYPE S\nOBJECT\nd { }\nATTRIBUTE\na { }\nb { a }\nINCIDENCE\nd { a }\n"));
        }) == ErrorKind::InvalidContext);
}

TEST_CASE("layout") {
  const auto l = build_lattice(k1());
  const auto doc = clif_document(l, "K1", true);
  REQUIRE(doc.layout.has_value());
  const std::vector<LayoutEntry> expected{{1, 0, 0}, {2, 0, 1}, {3, 0, 2}, {4, 1, 1}, {5, 1, 2}, {6, 0, 3}};
  CHECK(*doc.layout == expected);
  const auto text = emit_clif(doc);
  CHECK(text.find("LAYOUT\n1 { 0 0 }\n") != std::string::npos);
  CHECK(parse_clif(text) == doc);
}

TEST_CASE("comments and spacing") {
  const auto doc = parse_fcif("# header\n  TYPE   K1\nOBJECT\n\n g1{ }\n# note\nATTRIBUTE\nINCIDENCE\ng1 {}\n");
  CHECK(doc.objects.size() == 1);
  CHECK(emit_fcif(doc) == "TYPE K1\nOBJECT\ng1 { }\nATTRIBUTE\nINCIDENCE\ng1 { }\n");
}

TEST_CASE("property: generation and readout are inverse") {
  std::mt19937 rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto raw = random_context(rng, 8, 8);
    const auto ctx = canonical(reduce(purify(raw).context).context);

    const auto fcif = fcif_document(ctx, "R");
    const auto clif = fcif_to_clif(fcif);
    // names already sort the way readout orders them
    const auto back = clif_to_fcif(clif);
    CHECK(back == fcif);
    CHECK(order_isomorphic(enumerate_concepts_oracle(fcif_context(back)), enumerate_concepts_oracle(raw)));
    CHECK(fcif_to_clif(back) == clif);
    CHECK(clif_to_fcif(fcif_to_clif(back)) == back);

    // emission is canonical
    const auto text = emit_fcif(fcif);
    CHECK(emit_fcif(parse_fcif(text)) == text);
    CHECK(parse_fcif(text) == fcif);
    const auto clif_text = emit_clif(clif);
    CHECK(parse_clif(clif_text) == clif);
    CHECK(emit_clif(parse_clif(clif_text)) == clif_text);
  }
}
