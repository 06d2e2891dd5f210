#include "cks/service.hpp"

#include "cks/error.hpp"
#include "cks/interchange.hpp"
#include "cks/io.hpp"
#include "cks/linkage.hpp"

#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <regex>

namespace cks {

using json = nlohmann::json;

namespace {

struct HttpError {
  int status;
  std::string error;
  std::string message;
};

[[noreturn]] void fail(int status, std::string error, std::string message) {
  throw HttpError{status, std::move(error), std::move(message)};
}

int status_of(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::WrongScope:
    case ErrorKind::WrongMode:
    case ErrorKind::NotDisplayable: return 409;
    case ErrorKind::IndexOutOfRange: return 404;
    case ErrorKind::IoError: return 500;
    default: return 422;
  }
}

Response reply(int status, const json& body) { return {status, body.dump()}; }

bool valid_id(std::string_view id) {
  static const std::regex pattern("[A-Za-z0-9._-]+");
  return !id.empty() && id != "." && id != ".." && std::regex_match(id.begin(), id.end(), pattern);
}

std::vector<std::string> segments(std::string_view path) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < path.size()) {
    const auto j = path.find('/', i);
    const auto part = path.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i);
    if (!part.empty()) out.emplace_back(part);
    if (j == std::string_view::npos) break;
    i = j + 1;
  }
  return out;
}

json parse_body(const std::string& body) {
  json parsed = json::parse(body, nullptr, false);
  if (parsed.is_discarded() || !parsed.is_object()) fail(422, "MalformedBody", "request body must be a JSON object");
  return parsed;
}

std::string string_field(const json& body, const char* key) {
  const auto it = body.find(key);
  if (it == body.end() || !it->is_string()) fail(422, "MalformedBody", std::string("missing string field '") + key + "'");
  return it->get<std::string>();
}

Mode parse_mode(const std::string& text) {
  if (text == "ext" || text == "extensional") return Mode::Extensional;
  if (text == "int" || text == "intensional") return Mode::Intensional;
  fail(422, "MalformedBody", "mode must be 'ext' or 'int', got '" + text + "'");
}

Scope parse_scope(const std::string& text) {
  if (text == "global") return Scope::Global;
  if (text == "local") return Scope::Local;
  fail(422, "MalformedBody", "scope must be 'global' or 'local', got '" + text + "'");
}

double parse_real(const std::string& text, const char* what) {
  double value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) {
    fail(422, "MalformedQuery", std::string(what) + " must be a number, got '" + text + "'");
  }
  return value;
}

ConceptIndex parse_index(const std::string& text, const ConceptLattice& l) {
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || end != text.data() + text.size()) fail(404, "NotFound", "no concept '" + text + "'");
  if (value == 0 || value > l.size()) fail(404, "NotFound", "no concept " + text);
  return value - 1;
}

json ratio_json(const Ratio& r) { return {{"num", r.num}, {"den", r.den}, {"value", r.value()}}; }

json concept_json(const ConceptLattice& l, ConceptIndex k, const std::vector<DisplayLabel>& labels) {
  const auto& ctx = l.context();
  const auto& node = l.concept_at(k);
  json intent = json::array();
  for (const auto& t : ctx.attribute_tokens(node.intent)) intent.push_back(t.str());
  auto one_based = [](const std::vector<ConceptIndex>& v) {
    json out = json::array();
    for (auto i : v) out.push_back(i + 1);
    return out;
  };
  return {{"index", k + 1},
          {"extent", ctx.object_names(node.extent)},
          {"intent", intent},
          {"labels", labels[k].names},
          {"upper_covers", one_based(l.upper_covers(k))},
          {"lower_covers", one_based(l.lower_covers(k))}};
}

json ranking_json(const RankedOrder& r) {
  json groups = json::array();
  auto group = [&](std::size_t rank) {
    json labels = json::array();
    for (const auto& e : r.entries) {
      if (e.rank != rank) continue;
      json entry{{"concept", e.label.concept_index + 1}, {"names", e.label.names}};
      if (e.coefficient) entry["coefficient"] = ratio_json(*e.coefficient);
      labels.push_back(std::move(entry));
    }
    return json{{"rank", rank}, {"labels", labels}};
  };
  if (const auto top = r.max_rank()) {
    if (r.display == Display::Reverse) {
      for (std::size_t k = *top + 1; k-- > 0;) groups.push_back(group(k));
    } else {
      for (std::size_t k = 0; k <= *top; ++k) {
        if (std::any_of(r.entries.begin(), r.entries.end(), [&](const auto& e) { return e.rank == k; })) {
          groups.push_back(group(k));
        }
      }
    }
  }
  return {{"display", r.display == Display::Reverse ? "reverse" : "direct"}, {"groups", groups}, {"text", r.render()}};
}

std::map<std::string, std::string> split_query(std::string& path) {
  std::map<std::string, std::string> out;
  const auto q = path.find('?');
  if (q == std::string::npos) return out;
  const std::string rest = path.substr(q + 1);
  path.resize(q);
  std::size_t i = 0;
  while (i <= rest.size()) {
    auto j = rest.find('&', i);
    if (j == std::string::npos) j = rest.size();
    const auto pair = rest.substr(i, j - i);
    if (!pair.empty()) {
      const auto eq = pair.find('=');
      out[pair.substr(0, eq)] = eq == std::string::npos ? "" : pair.substr(eq + 1);
    }
    i = j + 1;
  }
  return out;
}

}  // namespace

// ---- workspace ------------------------------------------------------------

Workspace Workspace::load(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw Error(ErrorKind::IoError, "workspace '" + dir.string() + "' is not a directory");
  }
  Workspace w;
  auto each = [&](const char* sub, const char* ext, auto&& f) {
    const auto root = dir / sub;
    if (!std::filesystem::is_directory(root)) return;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(root)) {
      if (entry.is_regular_file() && entry.path().extension() == ext) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      try {
        f(file.stem().string(), read_file(file));
      } catch (const Error& e) {
        throw Error(e.kind(), file.string() + (e.where().line ? ":" : ": ") + e.what());
      }
    }
  };
  each("contexts", ".fcif", [&](const std::string& id, const std::string& text) {
    w.contexts_.emplace(id, fcif_context(parse_fcif(text)));
  });
  each("lattices", ".clif", [&](const std::string& id, const std::string& text) {
    w.lattices_.emplace(id, std::make_shared<const ConceptLattice>(clif_lattice(parse_clif(text))));
  });
  for (const auto& [id, ctx] : w.contexts_) {
    if (!w.lattices_.count(id)) w.lattices_.emplace(id, std::make_shared<const ConceptLattice>(ctx));
  }
  w.dir_ = dir;
  return w;
}

void Workspace::put_context(const std::string& id, FormalContext ctx) {
  ConceptLattice lattice(ctx);
  if (dir_) {
    std::filesystem::create_directories(*dir_ / "contexts");
    write_file(*dir_ / "contexts" / (id + ".fcif"), emit_fcif(fcif_document(ctx, id)));
  }
  contexts_.insert_or_assign(id, std::move(ctx));
  put_lattice(id, std::move(lattice));
}

void Workspace::put_lattice(const std::string& id, ConceptLattice lattice) {
  if (dir_) {
    std::filesystem::create_directories(*dir_ / "lattices");
    write_file(*dir_ / "lattices" / (id + ".clif"), emit_clif(clif_document(lattice, id)));
  }
  lattices_.insert_or_assign(id, std::make_shared<const ConceptLattice>(std::move(lattice)));
}

std::shared_ptr<const ConceptLattice> Workspace::lattice(const std::string& id) const {
  const auto it = lattices_.find(id);
  return it == lattices_.end() ? nullptr : it->second;
}

// ---- service --------------------------------------------------------------

Service::Service(Workspace workspace, std::chrono::minutes idle, std::function<Clock::time_point()> now)
    : workspace_(std::move(workspace)), idle_(idle), now_(std::move(now)) {}

std::size_t Service::session_count() const {
  std::lock_guard guard(sessions_lock_);
  return sessions_.size();
}

void Service::expire() {
  std::lock_guard guard(sessions_lock_);
  const auto now = now_();
  std::erase_if(sessions_, [&](const auto& entry) { return now - entry.second->last_used > idle_; });
}

std::shared_ptr<Service::Session> Service::session(const std::string& id) {
  std::lock_guard guard(sessions_lock_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) fail(404, "NotFound", "no session '" + id + "'");
  it->second->last_used = now_();
  return it->second;
}

Response Service::handle(std::string method, std::string path, std::string body) {
  auto query = split_query(path);
  return handle(Request{std::move(method), std::move(path), std::move(query), std::move(body)});
}

Response Service::handle(const Request& request) {
  try {
    expire();
    return route(request);
  } catch (const HttpError& e) {
    return reply(e.status, {{"error", e.error}, {"message", e.message}});
  } catch (const Error& e) {
    json body{{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (e.where().line) body["line"] = e.where().line, body["column"] = e.where().column;
    return reply(status_of(e.kind()), body);
  } catch (const json::exception& e) {
    return reply(422, {{"error", "MalformedBody"}, {"message", e.what()}});
  }
}

Response Service::route(const Request& request) {
  const auto parts = segments(request.path);
  const auto& method = request.method;
  auto is = [&](std::initializer_list<const char*> shape) {
    if (parts.size() != shape.size()) return false;
    std::size_t i = 0;
    for (const char* s : shape) {
      if (std::string_view(s) != "*" && parts[i] != s) return false;
      ++i;
    }
    return true;
  };
  auto expect = [&](const char* wanted) {
    if (method != wanted) fail(405, "MethodNotAllowed", method + " is not allowed on " + request.path);
  };
  auto lattice_of = [&](const std::string& id) {
    std::shared_lock guard(workspace_lock_);
    auto l = workspace_.lattice(id);
    if (!l) fail(404, "NotFound", "no lattice '" + id + "'");
    return l;
  };

  if (is({"contexts"})) {
    expect("GET");
    std::shared_lock guard(workspace_lock_);
    json list = json::array();
    for (const auto& [id, ctx] : workspace_.contexts()) {
      list.push_back({{"id", id},
                      {"objects", ctx.object_count()},
                      {"attributes", ctx.attribute_count()},
                      {"views", ctx.views().size()}});
    }
    return reply(200, {{"contexts", list}});
  }

  if (is({"contexts", "*"})) {
    const auto& id = parts[1];
    if (method == "PUT") {
      if (!valid_id(id)) fail(422, "MalformedBody", "invalid identifier '" + id + "'");
      auto ctx = fcif_context(parse_fcif(request.body));
      std::unique_lock guard(workspace_lock_);
      workspace_.put_context(id, std::move(ctx));
      return reply(201, {{"id", id}, {"concepts", workspace_.lattice(id)->size()}});
    }
    expect("GET");
    std::shared_lock guard(workspace_lock_);
    const auto it = workspace_.contexts().find(id);
    if (it == workspace_.contexts().end()) fail(404, "NotFound", "no context '" + id + "'");
    return reply(200, {{"id", id}, {"fcif", emit_fcif(fcif_document(it->second, id))}});
  }

  if (is({"lattices"})) {
    expect("GET");
    std::shared_lock guard(workspace_lock_);
    json list = json::array();
    for (const auto& [id, l] : workspace_.lattices()) {
      list.push_back({{"id", id}, {"concepts", l->size()}, {"covers", l->cover_count()}});
    }
    return reply(200, {{"lattices", list}});
  }

  if (parts.size() >= 2 && parts[0] == "lattices") {
    const auto l = lattice_of(parts[1]);
    const auto labels = concept_labels(*l, LabelKinds::All);

    if (is({"lattices", "*"})) {
      expect("GET");
      return reply(200, {{"id", parts[1]},
                         {"concepts", l->size()},
                         {"covers", l->cover_count()},
                         {"objects", l->context().object_count()},
                         {"attributes", l->context().attribute_count()}});
    }
    if (is({"lattices", "*", "concepts"})) {
      expect("GET");
      json list = json::array();
      for (ConceptIndex k = 0; k < l->size(); ++k) list.push_back(concept_json(*l, k, labels));
      return reply(200, {{"lattice", parts[1]}, {"concepts", list}});
    }
    if (is({"lattices", "*", "concepts", "*"})) {
      expect("GET");
      return reply(200, concept_json(*l, parse_index(parts[3], *l), labels));
    }
    if (is({"lattices", "*", "query"})) {
      expect("POST");
      const auto body = parse_body(request.body);
      const auto kind = string_field(body, "kind");
      const auto elements = body.value("elements", json::array());
      if (!elements.is_array()) fail(422, "MalformedBody", "'elements' must be an array");
      std::vector<std::string> names;
      for (const auto& e : elements) {
        if (!e.is_string()) fail(422, "MalformedBody", "'elements' must hold strings");
        names.push_back(e.get<std::string>());
      }
      QueryResult result;
      if (kind == "intensional" || kind == "int") {
        std::vector<AttributeToken> tokens;
        for (const auto& n : names) tokens.push_back(AttributeToken::parse(n));
        result = intensional_query(*l, tokens);
      } else if (kind == "extensional" || kind == "ext") {
        result = extensional_query(*l, names);
      } else {
        fail(422, "MalformedBody", "kind must be 'intensional' or 'extensional'");
      }
      if (body.contains("threshold")) {
        if (!body["threshold"].is_number()) fail(422, "MalformedBody", "'threshold' must be a number");
        result.ranking = threshold_filter(result.ranking, body["threshold"].get<double>());
      }
      json out = ranking_json(result.ranking);
      out["nearest"] = result.nearest + 1;
      out["coincides"] = result.coincides ? json(*result.coincides + 1) : json(nullptr);
      out["twins"] = result.twins;
      return reply(200, out);
    }
    if (is({"lattices", "*", "linkage"})) {
      expect("GET");
      const auto it = request.query.find("mode");
      const Mode mode = it == request.query.end() ? Mode::Extensional : parse_mode(it->second);
      const auto m = linkage_matrix(*l, mode == Mode::Extensional ? LinkageMode::Extensional : LinkageMode::Intensional);
      json ratios = json::array(), values = json::array();
      for (ConceptIndex i = 0; i < m.dimension(); ++i) {
        json r = json::array(), v = json::array();
        for (ConceptIndex j = 0; j < m.dimension(); ++j) {
          r.push_back(std::to_string(m.entry(i, j).num) + "/" + std::to_string(m.entry(i, j).den));
          v.push_back(m(i, j));
        }
        ratios.push_back(std::move(r));
        values.push_back(std::move(v));
      }
      return reply(200, {{"lattice", parts[1]},
                         {"mode", to_string(mode)},
                         {"dimension", m.dimension()},
                         {"ratios", ratios},
                         {"values", values}});
    }
    if (is({"lattices", "*", "crisp"})) {
      expect("GET");
      const auto it = request.query.find("threshold");
      const double t = it == request.query.end() ? 1.0 : parse_real(it->second, "threshold");
      const auto it_mode = request.query.find("mode");
      const Mode mode = it_mode == request.query.end() ? Mode::Extensional : parse_mode(it_mode->second);
      const auto links = crispify(
          linkage_matrix(*l, mode == Mode::Extensional ? LinkageMode::Extensional : LinkageMode::Intensional), t);
      json list = json::array();
      for (const auto& link : links) {
        list.push_back({{"source", link.source + 1}, {"target", link.target + 1}, {"weight", link.weight}});
      }
      return reply(200, {{"lattice", parts[1]}, {"threshold", t}, {"mode", to_string(mode)}, {"links", list}});
    }
    fail(404, "NotFound", "no route " + request.path);
  }

  auto session_json = [&](const std::string& id, const Session& s) {
    const auto& b = s.browse;
    return json{{"session", id},
                {"lattice", s.lattice_id},
                {"mode", to_string(b.mode())},
                {"scope", to_string(b.scope())},
                {"state", b.state() + 1},
                {"labels", concept_labels(b.lattice(), LabelKinds::All)[b.state()].names}};
  };

  if (is({"sessions"})) {
    expect("POST");
    const auto body = parse_body(request.body);
    const auto lattice_id = string_field(body, "lattice");
    const Mode mode = parse_mode(string_field(body, "mode"));
    if (body.contains("scope")) {
      if (!body["scope"].is_string()) fail(422, "MalformedBody", "'scope' must be a string");
      if (parse_scope(body["scope"].get<std::string>()) == Scope::Local) {
        fail(409, "WrongScope", "browse globally before entering local scope");
      }
    }
    auto session = std::make_shared<Session>(lattice_id, BrowseSession::start(lattice_of(lattice_id), mode), now_());
    std::string id;
    {
      std::lock_guard guard(sessions_lock_);
      id = "s" + std::to_string(next_session_++);
      sessions_.emplace(id, session);
    }
    return reply(201, session_json(id, *session));
  }

  if (parts.size() >= 2 && parts[0] == "sessions") {
    const auto& id = parts[1];
    const auto s = session(id);
    std::lock_guard guard(s->lock);

    if (is({"sessions", "*"})) {
      if (method == "DELETE") {
        std::lock_guard all(sessions_lock_);
        sessions_.erase(id);
        return reply(200, {{"session", id}, {"deleted", true}});
      }
      expect("GET");
      return reply(200, session_json(id, *s));
    }
    if (is({"sessions", "*", "ranking"})) {
      expect("GET");
      const bool global = s->browse.scope() == Scope::Global;
      json out = ranking_json(global ? s->browse.rank_similarity() : s->browse.rank_difference());
      out.update(session_json(id, *s));
      out["kind"] = global ? "similarity" : "difference";
      return reply(200, out);
    }
    if (is({"sessions", "*", "transition"})) {
      expect("POST");
      const auto body = parse_body(request.body);
      if (!body.contains("target") || !body["target"].is_number_unsigned()) {
        fail(422, "MalformedBody", "'target' must be a concept number");
      }
      const auto target = body["target"].get<std::size_t>();
      if (target == 0 || target > s->browse.lattice().size()) fail(404, "NotFound", "no concept " + std::to_string(target));
      s->browse.transition(target - 1);
      return reply(200, session_json(id, *s));
    }
    if (is({"sessions", "*", "scope"})) {
      expect("POST");
      s->browse.enter_scope(parse_scope(string_field(parse_body(request.body), "scope")));
      return reply(200, session_json(id, *s));
    }
    if (is({"sessions", "*", "mode"})) {
      expect("POST");
      s->browse.choose_mode(parse_mode(string_field(parse_body(request.body), "mode")));
      return reply(200, session_json(id, *s));
    }
  }

  fail(404, "NotFound", "no route " + request.path);
}

// ---- http -----------------------------------------------------------------

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}

  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service) : impl_(std::make_unique<Impl>(service)) {
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    Request request{req.method, req.path, {}, req.body};
    for (const auto& [key, value] : req.params) request.query[key] = value;
    const auto response = impl_->service.handle(request);
    res.status = response.status;
    res.set_content(response.body, "application/json");
  };
  impl_->server.Get(".*", forward);
  impl_->server.Post(".*", forward);
  impl_->server.Put(".*", forward);
  impl_->server.Delete(".*", forward);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorKind::IoError, "cannot bind " + host + ":" + std::to_string(port));
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

}  // namespace cks
