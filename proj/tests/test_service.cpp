#include "doctest.h"

#include "cks/error.hpp"
#include "cks/io.hpp"
#include "cks/service.hpp"
#include "support/fixtures.hpp"

#include <httplib.h>
#include <json.hpp>

#include <filesystem>
#include <set>
#include <thread>

using namespace cks;
using namespace cks::testing;
using json = nlohmann::json;

namespace {

const std::filesystem::path kData = CKS_TEST_DATA;

std::filesystem::path make_workspace(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("cks_ws_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir / "contexts");
  std::filesystem::create_directories(dir / "lattices");
  std::filesystem::copy_file(kData / "docs.fcif", dir / "contexts" / "docs.fcif");
  std::filesystem::copy_file(kData / "k1.fcif", dir / "contexts" / "k1.fcif");
  std::filesystem::copy_file(kData / "k1.clif", dir / "lattices" / "k1.clif");
  return dir;
}

struct Call {
  int status;
  json body;
};

Call call(Service& s, const std::string& method, const std::string& path, const json& body = nullptr) {
  const auto r = s.handle(method, path, body.is_null() ? std::string() : body.dump());
  return {r.status, json::parse(r.body)};
}

// 1-based index of the concept whose labels contain `name`
std::size_t concept_named(Service& s, const std::string& lattice, const std::string& name) {
  const auto all = call(s, "GET", "/lattices/" + lattice + "/concepts");
  for (const auto& c : all.body["concepts"]) {
    for (const auto& n : c["labels"]) {
      if (n == name) return c["index"].get<std::size_t>();
    }
  }
  FAIL("no concept labelled " << name);
  return 0;
}

}  // namespace

TEST_CASE("workspace listing and concepts") {
  Service s(Workspace::load(make_workspace("listing")));
  const auto contexts = call(s, "GET", "/contexts");
  CHECK(contexts.status == 200);
  REQUIRE(contexts.body["contexts"].size() == 2);
  CHECK(contexts.body["contexts"][0]["id"] == "docs");
  CHECK(contexts.body["contexts"][0]["objects"] == 6);

  const auto lattices = call(s, "GET", "/lattices");
  CHECK(lattices.body["lattices"].size() == 2);

  const auto concepts = call(s, "GET", "/lattices/k1/concepts");
  REQUIRE(concepts.body["concepts"].size() == 6);
  const auto top = call(s, "GET", "/lattices/k1/concepts/1");
  CHECK(top.status == 200);
  CHECK(top.body["extent"] == json({"g1", "g2", "g3"}));
  CHECK(top.body["intent"] == json::array());
  CHECK(top.body["upper_covers"] == json::array());
  CHECK(top.body["lower_covers"] == json({2, 4}));

  CHECK(call(s, "GET", "/lattices/k1/concepts/7").status == 404);
  CHECK(call(s, "GET", "/lattices/k1/concepts/0").status == 404);
  CHECK(call(s, "GET", "/lattices/k1/concepts/x").status == 404);
  CHECK(call(s, "GET", "/lattices/nope/concepts").status == 404);
  CHECK(call(s, "GET", "/nowhere").status == 404);
  CHECK(call(s, "POST", "/contexts").status == 405);
  CHECK(call(s, "GET", "/contexts/k1").body["fcif"].get<std::string>().starts_with("TYPE k1"));
}

TEST_CASE("DOCS session lifecycle") {
  Service s(Workspace::load(make_workspace("docs")));
  const auto created = call(s, "POST", "/sessions", {{"lattice", "docs"}, {"mode", "ext"}});
  REQUIRE(created.status == 201);
  CHECK(created.body["session"] == "s1");
  CHECK(created.body["scope"] == "global");
  CHECK(created.body["state"] == 1);

  const auto plan1 = concept_named(s, "docs", "Plan1");
  const auto moved = call(s, "POST", "/sessions/s1/transition", {{"target", plan1}});
  CHECK(moved.status == 200);
  CHECK(moved.body["state"] == plan1);

  const auto sim = call(s, "GET", "/sessions/s1/ranking");
  CHECK(sim.status == 200);
  CHECK(sim.body["kind"] == "similarity");
  CHECK(sim.body["display"] == "reverse");
  CHECK(sim.body["text"] ==
        "2 { [Document, Object] [Plan1, project=plan1] }\n"
        "1 { [PostScript, format=postscript] [format=text] }\n"
        "0 { [Plan2, project=plan2] }\n");
  REQUIRE(sim.body["groups"].size() == 3);
  CHECK(sim.body["groups"][2]["rank"] == 0);
  CHECK(sim.body["groups"][2]["labels"][0]["names"] == json({"Plan2", "project=plan2"}));

  CHECK(call(s, "POST", "/sessions/s1/scope", {{"scope", "local"}}).status == 200);
  const auto diff = call(s, "GET", "/sessions/s1/ranking");
  CHECK(diff.body["kind"] == "difference");
  CHECK(diff.body["display"] == "direct");
  CHECK(diff.body["text"] ==
        "0 { [Plan1] }\n"
        "1 { [plan1.ps] [notes0.txt] }\n");

  const auto plan2 = concept_named(s, "docs", "Plan2");
  CHECK(call(s, "POST", "/sessions/s1/transition", {{"target", plan2}}).status == 409);
  CHECK(call(s, "POST", "/sessions/s1/transition", {{"target", 99}}).status == 404);
  CHECK(call(s, "POST", "/sessions/s1/transition", {{"target", "x"}}).status == 422);
  CHECK(call(s, "POST", "/sessions/s1/mode", {{"mode", "int"}}).status == 409);
  CHECK(call(s, "POST", "/sessions/s1/mode", {{"mode", "ext"}}).status == 200);
  CHECK(call(s, "POST", "/sessions/s1/scope", {{"scope", "sideways"}}).status == 422);
  CHECK(call(s, "POST", "/sessions/s1/scope", {{"scope", "global"}}).status == 200);
  CHECK(call(s, "POST", "/sessions/s1/transition", {{"target", plan2}}).status == 200);

  CHECK(call(s, "DELETE", "/sessions/s1").status == 200);
  CHECK(call(s, "GET", "/sessions/s1").status == 404);
}

TEST_CASE("session protocol errors") {
  Service s(Workspace::load(make_workspace("protocol")));
  CHECK(call(s, "POST", "/sessions", {{"lattice", "docs"}, {"mode", "ext"}, {"scope", "local"}}).status == 409);
  CHECK(call(s, "POST", "/sessions", {{"lattice", "nope"}, {"mode", "ext"}}).status == 404);
  CHECK(call(s, "POST", "/sessions", {{"lattice", "docs"}, {"mode", "both"}}).status == 422);
  CHECK(call(s, "POST", "/sessions", {{"lattice", "docs"}}).status == 422);
  CHECK(s.handle("POST", "/sessions", "{not json").status == 422);
  CHECK(s.session_count() == 0);

  // K1's bottom concept has no name
  call(s, "POST", "/sessions", {{"lattice", "k1"}, {"mode", "int"}});
  CHECK(call(s, "POST", "/sessions/s1/transition", {{"target", 6}}).status == 409);
}

TEST_CASE("queries, linkage and crisp links") {
  Service s(Workspace::load(make_workspace("query")));
  const auto q = call(s, "POST", "/lattices/k1/query", {{"kind", "intensional"}, {"elements", {"b", "c"}}});
  REQUIRE(q.status == 200);
  const auto g2 = concept_named(s, "k1", "g2");
  CHECK(q.body["coincides"] == g2);
  CHECK(q.body["nearest"] == g2);
  CHECK(q.body["twins"] == json({"g2"}));

  const auto filtered =
      call(s, "POST", "/lattices/k1/query", {{"kind", "int"}, {"elements", {"b", "c"}}, {"threshold", 1.0}});
  for (const auto& group : filtered.body["groups"]) {
    for (const auto& label : group["labels"]) CHECK(label["coefficient"]["num"] == label["coefficient"]["den"]);
  }
  CHECK(call(s, "POST", "/lattices/k1/query", {{"kind", "int"}, {"elements", {"zz"}}}).status == 422);
  CHECK(call(s, "POST", "/lattices/k1/query", {{"kind", "sideways"}}).status == 422);
  CHECK(call(s, "POST", "/lattices/k1/query", {{"kind", "ext"}, {"elements", {"g1"}}, {"threshold", -1}}).status ==
        422);

  const auto linkage = call(s, "GET", "/lattices/k1/linkage?mode=int");
  CHECK(linkage.body["dimension"] == 6);
  CHECK(linkage.body["mode"] == "intensional");
  CHECK(call(s, "GET", "/lattices/k1/linkage?mode=odd").status == 422);

  const auto crisp = call(s, "GET", "/lattices/k1/crisp?threshold=1.0");
  REQUIRE(crisp.status == 200);
  std::set<std::pair<std::size_t, std::size_t>> got, expected;
  for (const auto& link : crisp.body["links"]) got.emplace(link["source"], link["target"]);
  const auto concepts = call(s, "GET", "/lattices/k1/concepts").body["concepts"];
  for (const auto& x : concepts) {
    for (const auto& y : concepts) {
      const auto ex = x["extent"].get<std::vector<std::string>>(), ey = y["extent"].get<std::vector<std::string>>();
      const bool subset = std::all_of(ex.begin(), ex.end(),
                                      [&](const auto& g) { return std::find(ey.begin(), ey.end(), g) != ey.end(); });
      if (x["index"] != y["index"] && subset) expected.emplace(x["index"], y["index"]);
    }
  }
  CHECK(got == expected);
  CHECK(call(s, "GET", "/lattices/k1/crisp?threshold=0").status == 422);
  CHECK(call(s, "GET", "/lattices/k1/crisp?threshold=abc").status == 422);
}

TEST_CASE("idle sessions expire") {
  auto clock = Service::Clock::now();
  Service s(Workspace::load(make_workspace("expiry")), std::chrono::minutes(30), [&] { return clock; });
  call(s, "POST", "/sessions", {{"lattice", "k1"}, {"mode", "ext"}});
  call(s, "POST", "/sessions", {{"lattice", "k1"}, {"mode", "ext"}});
  clock += std::chrono::minutes(20);
  CHECK(call(s, "GET", "/sessions/s1").status == 200);
  clock += std::chrono::minutes(20);
  CHECK(call(s, "GET", "/sessions/s1").status == 200);
  CHECK(call(s, "GET", "/sessions/s2").status == 404);
  clock += std::chrono::minutes(31);
  CHECK(call(s, "GET", "/sessions/s1").status == 404);
  CHECK(s.session_count() == 0);
}

TEST_CASE("replaying a request log reproduces responses") {
  const std::vector<std::tuple<std::string, std::string, std::string>> log{
      {"POST", "/sessions", R"({"lattice":"docs","mode":"ext"})"},
      {"POST", "/sessions/s1/transition", R"({"target":3})"},
      {"GET", "/sessions/s1/ranking", ""},
      {"POST", "/sessions/s1/scope", R"({"scope":"local"})"},
      {"GET", "/sessions/s1/ranking", ""},
      {"POST", "/sessions/s1/mode", R"({"mode":"int"})"},
      {"POST", "/lattices/docs/query", R"({"kind":"ext","elements":["plan1.ps"]})"},
      {"GET", "/lattices/docs/crisp?threshold=0.5", ""},
  };
  auto run = [&](const std::string& name) {
    Service s(Workspace::load(make_workspace(name)));
    std::vector<std::string> out;
    for (const auto& [method, path, body] : log) {
      const auto r = s.handle(method, path, body);
      out.push_back(std::to_string(r.status) + " " + r.body);
    }
    return out;
  };
  CHECK(run("replay_a") == run("replay_b"));
}

TEST_CASE("contexts can be stored") {
  const auto dir = make_workspace("store");
  Service s(Workspace::load(dir));
  const auto put = s.handle("PUT", "/contexts/tiny", "TYPE tiny\nOBJECT\nx { }\nATTRIBUTE\np { }\nINCIDENCE\nx { p }\n");
  CHECK(put.status == 201);
  CHECK(std::filesystem::exists(dir / "contexts" / "tiny.fcif"));
  CHECK(std::filesystem::exists(dir / "lattices" / "tiny.clif"));
  CHECK(call(s, "GET", "/lattices/tiny").body["concepts"] == 1);

  const auto reloaded = Workspace::load(dir);
  CHECK(reloaded.contexts().count("tiny") == 1);
  CHECK(reloaded.lattice("tiny")->size() == 1);

  const auto bad = call(s, "PUT", "/contexts/broken", nullptr);
  CHECK(bad.status == 422);
  const auto syntax = s.handle("PUT", "/contexts/broken", "TYPE t\nOBJECT\nx {\n");
  CHECK(syntax.status == 422);
  CHECK(json::parse(syntax.body).contains("line"));
  CHECK(s.handle("PUT", "/contexts/..", "TYPE t\n").status == 422);
}

TEST_CASE("workspace errors name the file") {
  const auto dir = make_workspace("broken");
  write_file(dir / "contexts" / "bad.fcif", "TYPE bad\nOBJECT\nx { }\nINCIDENCE\ny { }\n");
  try {
    Workspace::load(dir);
    FAIL("broken workspace loaded");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.fcif") != std::string::npos);
  }
  CHECK_THROWS_AS(Workspace::load(dir / "missing"), Error);
}

TEST_CASE("http transport") {
  Service s(Workspace::load(make_workspace("http")));
  HttpServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread worker([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  const auto listing = client.Get("/contexts");
  REQUIRE(listing);
  CHECK(listing->status == 200);
  CHECK(json::parse(listing->body)["contexts"].size() == 2);

  const auto created = client.Post("/sessions", R"({"lattice":"k1","mode":"ext"})", "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  const auto crisp = client.Get("/lattices/k1/crisp?threshold=0.5");
  REQUIRE(crisp);
  CHECK(crisp->status == 200);
  CHECK(json::parse(crisp->body)["threshold"] == 0.5);
  const auto flip = client.Post("/sessions/s1/mode", R"({"mode":"int"})", "application/json");
  REQUIRE(flip);
  CHECK(flip->status == 409);

  server.stop();
  worker.join();
}
