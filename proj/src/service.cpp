#include "gdm/service.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <system_error>

#include <fcntl.h>
#include <unistd.h>

#include "gdm/aggregation.hpp"
#include "gdm/weighting.hpp"

namespace gdm::service {

namespace {

std::vector<double> row_sums(const Grid<double>& g) {
  std::vector<double> out(g.rows(), 0.0);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (double v : g.row(i)) out[i] += v;
  }
  return out;
}

void accumulate(std::vector<double>& total, const std::vector<double>& add) {
  total.resize(add.size(), 0.0);
  for (std::size_t i = 0; i < add.size(); ++i) total[i] += add[i];
}

bool valid_id(const std::string& id) {
  if (id.size() != 16) return false;
  for (char c : id) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  }
  return true;
}

// Writes `text` to `path` so that readers see either the old or the new file.
void write_atomically(const std::filesystem::path& path, const std::string& text) {
  const auto tmp = path.string() + ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
  if (fd < 0) throw IoError("cannot write " + tmp);
  std::size_t done = 0;
  while (done < text.size()) {
    const auto n = ::write(fd, text.data() + done, text.size() - done);
    if (n <= 0) {
      ::close(fd);
      throw IoError("short write to " + tmp);
    }
    done += static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw IoError("cannot sync " + tmp);
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot replace " + path.string() + ": " + ec.message());
}

}  // namespace

RoundFeedback compute_feedback(const Session& s) {
  if (s.rounds.empty()) throw ValidationError("no_rounds", "feedback needs at least one round");
  const std::span<const RoundMatrix> rounds(s.rounds);
  const WeightVector weights = s.round_weights && s.round_weights->size() == rounds.size()
                                   ? WeightVector(*s.round_weights)
                                   : WeightVector::uniform(rounds.size());
  RoundFeedback f;
  f.rounds = static_cast<int>(rounds.size());
  for (const auto& round : rounds) {
    f.uncertainty = row_sums(uncertainty_grid(round, s.scale));
    accumulate(f.uncertainty_cumulative, f.uncertainty);
  }
  f.aggregate = temporal_aggregate(rounds, AlphaParam(s.alpha), weights);
  const auto grids = distance_grids(rounds, f.aggregate, s.scale);
  for (const auto& g : grids) {
    f.deviation = row_sums(g);
    accumulate(f.deviation_cumulative, f.deviation);
  }
  f.distance = grids.back();
  return f;
}

Json feedback_to_json(const RoundFeedback& f, const Session& s) {
  auto per_expert = [&](const std::vector<double>& v) {
    Json out = Json::object();
    for (std::size_t i = 0; i < v.size(); ++i) out[s.experts.at(i)] = round12(v[i]);
    return out;
  };
  Json distance = Json::object();
  Json aggregate = Json::object();
  for (std::size_t i = 0; i < s.experts.size(); ++i) {
    Json d = Json::object();
    Json a = Json::object();
    for (std::size_t j = 0; j < s.alternatives.size(); ++j) {
      d[s.alternatives[j]] = round12(f.distance(i, j));
      const auto& v = f.aggregate(i, j);
      a[s.alternatives[j]] = Json::array({subscript_json(v.judgment.lo), subscript_json(v.judgment.hi),
                                          subscript_json(v.reliability.lo), subscript_json(v.reliability.hi)});
    }
    distance[s.experts[i]] = std::move(d);
    aggregate[s.experts[i]] = std::move(a);
  }
  return Json{{"rounds", f.rounds},
              {"uncertainty", per_expert(f.uncertainty)},
              {"uncertainty_cumulative", per_expert(f.uncertainty_cumulative)},
              {"deviation", per_expert(f.deviation)},
              {"deviation_cumulative", per_expert(f.deviation_cumulative)},
              {"distance", std::move(distance)},
              {"aggregate", std::move(aggregate)}};
}

Json snapshot_to_json(const Snapshot& s) {
  Json doc{{"id", s.id},
           {"revision", s.revision},
           {"normalize_rows", s.normalize_rows},
           {"session", session_to_json(s.session)}};
  doc["report"] = s.report ? report_to_json(*s.report) : Json(nullptr);
  return doc;
}

Snapshot snapshot_from_json(const Json& doc) {
  try {
    Snapshot s;
    s.id = doc.at("id").get<std::string>();
    s.revision = doc.at("revision").get<std::uint64_t>();
    s.normalize_rows = doc.at("normalize_rows").get<bool>();
    s.session = validate_session(doc.at("session")).session;
    if (!doc.at("report").is_null()) {
      s.report = report_from_json(doc["report"]);
      s.report_body = canonical_report(*s.report);
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed stored session: ") + e.what());
  }
}

// ---------------------------------------------------------------------------

SessionStore::SessionStore(std::filesystem::path root) : root_(std::move(root)), rng_(std::random_device{}()) {
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw IoError("cannot create storage root " + root_.string() + ": " + ec.message());
  for (const auto& file : std::filesystem::directory_iterator(root_)) {
    const auto& path = file.path();
    if (path.extension() != ".json" || !valid_id(path.stem().string())) continue;
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
      auto snap = std::make_shared<Snapshot>(snapshot_from_json(Json::parse(buf.str())));
      if (snap->id != path.stem().string()) throw FormatError("id does not match file name");
      auto slot = std::make_shared<Slot>();
      slot->current = std::move(snap);
      slots_.emplace(path.stem().string(), std::move(slot));
    } catch (const std::exception& e) {
      std::cerr << "gdm-serve: skipping " << path.string() << ": " << e.what() << "\n";
    }
  }
}

std::string SessionStore::fresh_id() {
  std::lock_guard lock(rng_mutex_);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng_()));
  return buf;
}

void SessionStore::persist(const Snapshot& s) const {
  write_atomically(root_ / (s.id + ".json"), snapshot_to_json(s).dump(2) + "\n");
}

std::string SessionStore::create(Session session) {
  auto snap = std::make_shared<Snapshot>();
  snap->revision = 1;
  snap->session = std::move(session);
  std::unique_lock lock(map_mutex_);
  do {
    snap->id = fresh_id();
  } while (slots_.count(snap->id) != 0);
  persist(*snap);
  auto slot = std::make_shared<Slot>();
  slot->current = snap;
  slots_.emplace(snap->id, std::move(slot));
  return snap->id;
}

std::shared_ptr<SessionStore::Slot> SessionStore::slot(const std::string& id) const {
  std::shared_lock lock(map_mutex_);
  const auto it = slots_.find(id);
  if (it == slots_.end()) throw NotFound("no session '" + id + "'");
  return it->second;
}

std::shared_ptr<const Snapshot> SessionStore::get(const std::string& id) const {
  return std::atomic_load(&slot(id)->current);
}

std::shared_ptr<const Snapshot> SessionStore::update(const std::string& id, std::optional<std::uint64_t> expected,
                                                     const Mutation& change) {
  const auto target = slot(id);
  std::lock_guard lock(target->write);
  const auto current = std::atomic_load(&target->current);
  if (expected && *expected != current->revision) throw RevisionConflict(*expected, current->revision);
  auto next = std::make_shared<Snapshot>(*current);
  change(*next);
  next->revision = current->revision + 1;
  persist(*next);
  std::shared_ptr<const Snapshot> published = std::move(next);
  std::atomic_store(&target->current, published);
  return published;
}

std::size_t SessionStore::size() const {
  std::shared_lock lock(map_mutex_);
  return slots_.size();
}

// ---------------------------------------------------------------------------

namespace {

Json issue_json(const Issue& i) {
  Json out{{"code", i.code}, {"message", i.message}};
  if (i.round > 0) out["round"] = i.round;
  if (!i.expert.empty()) out["expert"] = i.expert;
  if (!i.alternative.empty()) out["alternative"] = i.alternative;
  return out;
}

Json issues_json(const std::vector<Issue>& issues) {
  Json out = Json::array();
  for (const auto& i : issues) out.push_back(issue_json(i));
  return out;
}

HttpResponse json_response(int status, const Json& body) { return {status, body.dump(2) + "\n", {}}; }

HttpResponse error_response(int status, const std::string& code, const std::string& message,
                            Json details = Json::array()) {
  return json_response(status, Json{{"code", code}, {"message", message}, {"details", std::move(details)}});
}

Json parse_body(const std::string& body, bool allow_empty) {
  if (allow_empty && body.find_first_not_of(" \t\r\n") == std::string::npos) return Json::object();
  try {
    return Json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("request body is not valid JSON: ") + e.what());
  }
}

struct BadRequest {
  std::string message;
};

struct PreconditionRequired {};

std::uint64_t parse_revision(const std::string& header) {
  std::string v = header;
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
  if (v.empty() || v.find_first_not_of("0123456789") != std::string::npos || v.size() > 19) {
    throw BadRequest{"If-Match must carry a revision number"};
  }
  return std::stoull(v);
}

std::string etag(std::uint64_t revision) { return "\"" + std::to_string(revision) + "\""; }

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start <= path.size()) {
    const auto end = path.find('/', start);
    const auto part = path.substr(start, end == std::string::npos ? std::string::npos : end - start);
    if (!part.empty()) parts.push_back(part);
    if (end == std::string::npos) break;
    start = end + 1;
  }
  return parts;
}

}  // namespace

HttpResponse SessionService::handle(const HttpRequest& request) {
  const auto parts = split_path(request.path);
  const auto& method = request.method;
  try {
    if (parts.empty() || parts[0] != "sessions" || parts.size() > 3) {
      return error_response(404, "not_found", "no route for " + request.path);
    }
    auto allow = [&](const char* expected) { return method == expected; };
    if (parts.size() == 1) {
      if (allow("POST")) return create(request);
    } else if (parts.size() == 2) {
      if (allow("GET")) return get_session(parts[1]);
    } else if (parts[2] == "rounds") {
      if (allow("POST")) return submit_round(parts[1], request);
    } else if (parts[2] == "feedback") {
      if (allow("GET")) return get_feedback(parts[1]);
    } else if (parts[2] == "finalize") {
      if (allow("POST")) return finalize(parts[1], request);
    } else if (parts[2] == "report") {
      if (allow("GET")) return get_report(parts[1]);
    } else {
      return error_response(404, "not_found", "no route for " + request.path);
    }
    return error_response(405, "method_not_allowed", method + " is not supported on " + request.path);
  } catch (const BadRequest& e) {
    return error_response(400, "bad_request", e.message);
  } catch (const PreconditionRequired&) {
    return error_response(428, "precondition_required", "submissions must carry If-Match: <revision>");
  } catch (const NotFound& e) {
    return error_response(404, "not_found", e.what());
  } catch (const RevisionConflict& e) {
    return error_response(409, "revision_conflict", e.what(), Json::array({Json{{"current_revision", e.current()}}}));
  } catch (const SessionFinalized& e) {
    return error_response(409, "session_finalized", e.what());
  } catch (const ValidationError& e) {
    return error_response(422, "validation_failed", e.what(), issues_json(e.issues()));
  } catch (const FormatError& e) {
    return error_response(400, "malformed_request", e.what());
  } catch (const DomainError& e) {
    Json details = Json::array();
    if (const auto& c = e.cell()) {
      details.push_back(Json{{"round", c->round + 1}, {"expert_index", c->expert}, {"alternative_index", c->alternative}});
    }
    return error_response(422, "domain_error", e.what(), std::move(details));
  } catch (const IoError& e) {
    return error_response(500, "storage_error", e.what());
  } catch (const std::exception& e) {
    return error_response(500, "internal_error", e.what());
  }
}

HttpResponse SessionService::create(const HttpRequest& request) {
  const Json doc = parse_body(request.body, false);
  ValidatedSession v;
  try {
    v = validate_session(doc);
  } catch (const FormatError& e) {
    throw ValidationError("unsupported_schema", e.what());
  }
  std::vector<Issue> errors;
  if (!v.session.rounds.empty()) errors.push_back({"rounds_not_allowed", "a new session starts with no rounds"});
  if (v.session.status != SessionStatus::Open) errors.push_back({"invalid_status", "a new session must be open"});
  if (!errors.empty()) throw ValidationError(std::move(errors));
  const auto id = store_.create(std::move(v.session));
  auto response = json_response(201, Json{{"id", id}, {"revision", 1}});
  response.headers["Location"] = "/sessions/" + id;
  response.headers["ETag"] = etag(1);
  return response;
}

HttpResponse SessionService::get_session(const std::string& id) {
  const auto snap = store_.get(id);
  auto response = json_response(200, Json{{"id", snap->id},
                                          {"revision", snap->revision},
                                          {"status", to_string(snap->session.status)},
                                          {"rounds", snap->session.rounds.size()},
                                          {"session", session_to_json(snap->session)}});
  response.headers["ETag"] = etag(snap->revision);
  return response;
}

HttpResponse SessionService::submit_round(const std::string& id, const HttpRequest& request) {
  const auto header = request.headers.find("if-match");
  if (header == request.headers.end()) throw PreconditionRequired{};
  const auto expected = parse_revision(header->second);
  Json doc = parse_body(request.body, false);
  if (doc.is_object() && doc.contains("entries")) doc = doc["entries"];

  std::vector<Issue> warnings;
  RoundFeedback feedback;
  const auto snap = store_.update(id, expected, [&](Snapshot& s) {
    if (s.session.status == SessionStatus::Finalized) throw SessionFinalized("session " + id + " is finalized");
    const int index = static_cast<int>(s.session.rounds.size()) + 1;
    s.session.rounds.push_back(round_from_json(doc, s.session, index, &warnings));
    feedback = compute_feedback(s.session);
  });
  auto response = json_response(201, Json{{"index", snap->session.rounds.size()},
                                          {"revision", snap->revision},
                                          {"feedback", feedback_to_json(feedback, snap->session)},
                                          {"warnings", issues_json(warnings)}});
  response.headers["ETag"] = etag(snap->revision);
  return response;
}

HttpResponse SessionService::get_feedback(const std::string& id) {
  const auto snap = store_.get(id);
  if (snap->session.rounds.empty()) {
    return error_response(404, "no_rounds", "no rounds have been submitted to session " + id);
  }
  auto response = json_response(200, Json{{"revision", snap->revision},
                                          {"feedback", feedback_to_json(compute_feedback(snap->session), snap->session)}});
  response.headers["ETag"] = etag(snap->revision);
  return response;
}

HttpResponse SessionService::finalize(const std::string& id, const HttpRequest& request) {
  if (const auto snap = store_.get(id); snap->report) {
    return {200, snap->report_body, {{"ETag", etag(snap->revision)}}};
  }
  const Json overrides = parse_body(request.body, true);
  std::vector<Issue> errors;
  if (!overrides.is_object()) throw ValidationError("invalid_overrides", "finalize body must be a JSON object");
  for (const auto& [key, value] : overrides.items()) {
    if (key == "eta" || key == "alpha") {
      if (!value.is_number()) errors.push_back({"invalid_overrides", key + " must be a number"});
    } else if (key == "normalize_rows") {
      if (!value.is_boolean()) errors.push_back({"invalid_overrides", "normalize_rows must be true or false"});
    } else {
      errors.push_back({"invalid_overrides", "unknown override '" + key + "'"});
    }
  }
  if (!errors.empty()) throw ValidationError(std::move(errors));

  std::optional<std::uint64_t> expected;
  if (const auto h = request.headers.find("if-match"); h != request.headers.end()) {
    expected = parse_revision(h->second);
  }
  try {
    const auto snap = store_.update(id, expected, [&](Snapshot& s) {
      if (s.report) throw SessionFinalized("finalized concurrently");
      if (s.session.rounds.empty()) throw ValidationError("no_rounds", "finalize needs at least one round");
      if (overrides.contains("eta")) s.session.eta = overrides["eta"].get<double>();
      if (overrides.contains("alpha")) s.session.alpha = overrides["alpha"].get<double>();
      if (overrides.contains("normalize_rows")) s.normalize_rows = overrides["normalize_rows"].get<bool>();
      if (!(s.session.eta >= 0.0 && s.session.eta <= 1.0)) {
        throw ValidationError("invalid_eta", "eta must lie in [0, 1]");
      }
      if (!(s.session.alpha != 0.0 && std::isfinite(s.session.alpha))) {
        throw ValidationError("invalid_alpha", "alpha must be finite and nonzero");
      }
      s.report = run_pipeline(s.session, {.normalize_rows = s.normalize_rows});
      s.session.status = SessionStatus::Finalized;
      s.report_body = canonical_report(*s.report);
    });
    return {200, snap->report_body, {{"ETag", etag(snap->revision)}}};
  } catch (const SessionFinalized&) {
    const auto snap = store_.get(id);
    return {200, snap->report_body, {{"ETag", etag(snap->revision)}}};
  }
}

HttpResponse SessionService::get_report(const std::string& id) {
  const auto snap = store_.get(id);
  if (!snap->report) return error_response(404, "not_finalized", "session " + id + " has not been finalized");
  return {200, snap->report_body, {{"ETag", etag(snap->revision)}}};
}

}  // namespace gdm::service
