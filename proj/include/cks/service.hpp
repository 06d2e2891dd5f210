#pragma once

// Workspace of named contexts and lattices, and the browsing/query service
// over it. `Service::handle` is transport free; `HttpServer` adapts it.

#include "cks/browsing.hpp"
#include "cks/context.hpp"
#include "cks/lattice.hpp"

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

namespace cks {

/// Contexts from `contexts/*.fcif` and lattices from `lattices/*.clif`, keyed
/// by file stem. A context without a stored lattice gets one built.
class Workspace {
public:
  Workspace() = default;
  static Workspace load(const std::filesystem::path& dir);

  /// Stores the context and its lattice; writes both canonical files when
  /// the workspace has a directory.
  void put_context(const std::string& id, FormalContext ctx);
  void put_lattice(const std::string& id, ConceptLattice lattice);

  const std::map<std::string, FormalContext>& contexts() const noexcept { return contexts_; }
  const std::map<std::string, std::shared_ptr<const ConceptLattice>>& lattices() const noexcept {
    return lattices_;
  }
  std::shared_ptr<const ConceptLattice> lattice(const std::string& id) const;  ///< nullptr if unknown
  const std::optional<std::filesystem::path>& directory() const noexcept { return dir_; }

private:
  std::optional<std::filesystem::path> dir_;
  std::map<std::string, FormalContext> contexts_;
  std::map<std::string, std::shared_ptr<const ConceptLattice>> lattices_;
};

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Response {
  int status = 200;
  std::string body;  ///< JSON
};

class Service {
public:
  using Clock = std::chrono::steady_clock;

  explicit Service(Workspace workspace, std::chrono::minutes idle = std::chrono::minutes(30),
                   std::function<Clock::time_point()> now = Clock::now);

  Response handle(const Request& request);
  Response handle(std::string method, std::string path, std::string body = {});

  std::size_t session_count() const;

private:
  struct Session {
    Session(std::string lattice, BrowseSession b, Clock::time_point t)
        : lattice_id(std::move(lattice)), browse(std::move(b)), last_used(t) {}

    std::string lattice_id;
    BrowseSession browse;
    Clock::time_point last_used;
    std::mutex lock;
  };

  Response route(const Request& request);
  std::shared_ptr<Session> session(const std::string& id);
  void expire();

  mutable std::shared_mutex workspace_lock_;
  Workspace workspace_;
  std::chrono::minutes idle_;
  std::function<Clock::time_point()> now_;
  mutable std::mutex sessions_lock_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::size_t next_session_ = 1;
};

/// Serves a `Service` over HTTP.
class HttpServer {
public:
  explicit HttpServer(Service& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds `host:port`; port 0 picks a free one. Returns the bound port.
  /// Throws IoError.
  int bind(const std::string& host, int port);
  /// Blocks until `stop`.
  void listen();
  void stop();

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cks
