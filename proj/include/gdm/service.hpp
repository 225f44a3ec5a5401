#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <shared_mutex>
#include <string>

#include "gdm/pipeline.hpp"
#include "gdm/session.hpp"

namespace gdm::service {

// Between-round feedback, recomputable from the stored rounds alone.
struct RoundFeedback {
  int rounds = 0;
  std::vector<double> uncertainty;             // per expert, latest round
  std::vector<double> uncertainty_cumulative;  // per expert, all rounds so far
  std::vector<double> deviation;               // per expert, latest round against the aggregate
  std::vector<double> deviation_cumulative;    // per expert, all rounds so far
  Grid<double> distance;                       // latest round, experts x alternatives
  Grid<TwoDULV> aggregate;                     // temporal aggregate of rounds 1..T

  bool operator==(const RoundFeedback&) const = default;
};

// Uses the session's alpha, and its round weights when they cover exactly
// the rounds present; equal weights otherwise. Requires at least one round.
RoundFeedback compute_feedback(const Session& session);
Json feedback_to_json(const RoundFeedback& feedback, const Session& session);

class NotFound : public Error {
 public:
  using Error::Error;
};

class RevisionConflict : public Error {
 public:
  RevisionConflict(std::uint64_t expected, std::uint64_t current)
      : Error("revision " + std::to_string(expected) + " is stale; current revision is " + std::to_string(current) +
              ", refresh and resubmit"),
        current_(current) {}
  std::uint64_t current() const noexcept { return current_; }

 private:
  std::uint64_t current_;
};

class SessionFinalized : public Error {
 public:
  using Error::Error;
};

// One committed state of a session. Immutable once published.
struct Snapshot {
  std::string id;
  std::uint64_t revision = 0;
  Session session;
  bool normalize_rows = false;
  std::optional<DecisionReport> report;
  std::string report_body;  // canonical report text, empty until finalized
};

Json snapshot_to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const Json& doc);

// Sessions keyed by id, written through to `<root>/<id>.json` on every
// mutation. Mutations to one session are serialized; readers take the last
// committed snapshot without waiting on writers.
class SessionStore {
 public:
  // Creates `root` if needed and loads every stored session from it.
  explicit SessionStore(std::filesystem::path root);

  std::string create(Session session);
  // Throws NotFound.
  std::shared_ptr<const Snapshot> get(const std::string& id) const;

  using Mutation = std::function<void(Snapshot&)>;
  // Applies `change` to a copy of the current snapshot, bumps the revision,
  // persists and publishes it. `expected` (when given) must equal the
  // current revision. Nothing is published if `change` or the write throws.
  std::shared_ptr<const Snapshot> update(const std::string& id, std::optional<std::uint64_t> expected,
                                         const Mutation& change);

  std::size_t size() const;
  const std::filesystem::path& root() const noexcept { return root_; }

 private:
  struct Slot {
    std::mutex write;
    std::shared_ptr<const Snapshot> current;  // accessed with std::atomic_load / atomic_store
  };

  std::shared_ptr<Slot> slot(const std::string& id) const;
  void persist(const Snapshot& snapshot) const;
  std::string fresh_id();

  std::filesystem::path root_;
  mutable std::shared_mutex map_mutex_;
  std::map<std::string, std::shared_ptr<Slot>> slots_;
  std::mutex rng_mutex_;
  std::mt19937_64 rng_;
};

struct HttpRequest {
  std::string method;
  std::string path;
  std::string body;
  std::map<std::string, std::string> headers;  // lower-case names
};

struct HttpResponse {
  int status = 200;
  std::string body;
  std::map<std::string, std::string> headers;
};

// Routing and status mapping, independent of the socket layer.
class SessionService {
 public:
  explicit SessionService(SessionStore& store) : store_(store) {}

  HttpResponse handle(const HttpRequest& request);

 private:
  HttpResponse create(const HttpRequest& request);
  HttpResponse get_session(const std::string& id);
  HttpResponse submit_round(const std::string& id, const HttpRequest& request);
  HttpResponse get_feedback(const std::string& id);
  HttpResponse finalize(const std::string& id, const HttpRequest& request);
  HttpResponse get_report(const std::string& id);

  SessionStore& store_;
};

// Binds a SessionService to a listening socket.
class HttpServer {
 public:
  explicit HttpServer(SessionService& service);
  ~HttpServer();
  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  // Port 0 picks a free port. Returns the bound port; throws IoError.
  int bind(const std::string& host, int port);
  // Blocks until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace gdm::service
