#pragma once

// HTTP/JSON API. ApiService is transport independent (request in, response
// out); HttpServer binds it to cpp-httplib. Endpoints, status codes and the
// error code set are listed in docs/api.md.

#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "artherapist/codec.hpp"
#include "artherapist/domain.hpp"
#include "artherapist/error.hpp"
#include "artherapist/events.hpp"
#include "artherapist/metrics.hpp"
#include "artherapist/session_engine.hpp"
#include "artherapist/simulator.hpp"
#include "artherapist/storage.hpp"

namespace artherapist {

struct ApiRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> headers;  // keys lower-case
  std::map<std::string, std::string> query;
  std::string body;

  std::optional<std::string> header(const std::string& lower_name) const {
    auto it = headers.find(lower_name);
    if (it == headers.end()) return std::nullopt;
    return it->second;
  }
};

struct ApiResponse {
  int status = 200;
  json body;
  std::map<std::string, std::string> headers;
};

struct ApiError {
  int status = 500;
  std::string code;
  std::string message;
  ValidationIssues details;
};

inline json to_json(const ApiError& e) {
  json err = {{"status", e.status}, {"code", e.code}, {"message", e.message}};
  if (!e.details.empty()) err["details"] = to_json(e.details);
  return {{"error", std::move(err)}};
}

// Map of engine/storage errors onto the wire.
inline ApiError api_error_from(const Error& e) {
  switch (e.code()) {
    case ErrorCode::invalid_argument: return {400, "bad_request", e.what(), {}};
    case ErrorCode::validation_failed: return {400, "validation_failed", e.what(), {}};
    case ErrorCode::corrupt_log: return {400, "malformed_events", e.what(), {}};
    case ErrorCode::not_found: return {404, "not_found", e.what(), {}};
    case ErrorCode::duplicate: return {409, "duplicate", e.what(), {}};
    case ErrorCode::sequence_conflict: return {409, "sequence_conflict", e.what(), {}};
    case ErrorCode::sealed: return {409, "session_sealed", e.what(), {}};
    case ErrorCode::not_sealed: return {409, "session_not_sealed", e.what(), {}};
    case ErrorCode::version_conflict: return {412, "version_conflict", e.what(), {}};
    case ErrorCode::engine_state:
    case ErrorCode::divergence:
    case ErrorCode::io_failure: return {500, "internal", e.what(), {}};
  }
  return {500, "internal", e.what(), {}};
}

// Flat metrics document: session id, counts, then every measure with
// explicit nulls for absent values.
inline json session_metrics_document(const std::string& session_id, const SessionTally& t, const SessionMetrics& m) {
  json out = {{"session_id", session_id}, {"T", t.T}, {"C", t.C}, {"I", t.I()}, {"K", t.K}, {"OE", t.OE}, {"CE", t.CE}};
  const json measures = to_json(m);
  for (auto it = measures.begin(); it != measures.end(); ++it) out[it.key()] = it.value();
  return out;
}

// Replays a sealed stored session and scores it. Metrics are always
// recomputed from the log, never read from a cache.
inline std::pair<SessionTally, SessionMetrics> score_stored_session(Store& store, const std::string& session_id) {
  const auto header = store.events().header(session_id);
  if (!header) throw Error(ErrorCode::not_found, "session '" + session_id + "' not found");
  if (!store.events().sealed(session_id)) throw Error(ErrorCode::not_sealed, "session '" + session_id + "' is not sealed");
  if (!header->try_time || !header->planned_tries)
    throw Error(ErrorCode::corrupt_log, "segment header of '" + session_id + "' lacks its configuration");
  const auto events = store.events().load_session_events(session_id);
  const SessionTally t = replay(events, *header->try_time, *header->planned_tries);
  return {t, compute_session_metrics(t)};
}

class ApiService {
 public:
  explicit ApiService(Store& store) : store_(store) {}

  ApiResponse handle(const ApiRequest& request) {
    try {
      return route(request);
    } catch (const ApiFailure& f) {
      return error_response(f.error);
    } catch (const DocumentStore::ValidationFailure& e) {
      return error_response({400, "validation_failed", "document failed validation", e.issues()});
    } catch (const Error& e) {
      return error_response(api_error_from(e));
    } catch (const std::exception& e) {
      return error_response({500, "internal", e.what(), {}});
    }
  }

 private:
  struct ApiFailure {
    ApiError error;
  };

  [[noreturn]] static void fail(int status, std::string code, std::string message, ValidationIssues details = {}) {
    throw ApiFailure{{status, std::move(code), std::move(message), std::move(details)}};
  }

  static ApiResponse error_response(const ApiError& e) { return {e.status, to_json(e), {}}; }

  static std::vector<std::string> split_path(std::string_view path) {
    std::vector<std::string> parts;
    std::size_t pos = 0;
    while (pos < path.size()) {
      const auto slash = path.find('/', pos);
      const auto part = path.substr(pos, slash == std::string_view::npos ? std::string_view::npos : slash - pos);
      if (!part.empty()) parts.emplace_back(part);
      if (slash == std::string_view::npos) break;
      pos = slash + 1;
    }
    return parts;
  }

  static json parse_body(const ApiRequest& r) {
    json body = json::parse(r.body, nullptr, false);
    if (body.is_discarded()) fail(400, "bad_request", "request body is not valid JSON");
    return body;
  }

  static int if_match_version(const ApiRequest& r) {
    auto raw = r.header("if-match");
    if (!raw) fail(428, "precondition_required", "If-Match header with the current version is required");
    std::string v = *raw;
    if (v.rfind("W/", 0) == 0) v = v.substr(2);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') v = v.substr(1, v.size() - 2);
    auto n = parse_integer<int>(v);
    if (!n || *n < 1) fail(400, "bad_request", "If-Match must carry a positive version number");
    return *n;
  }

  static std::optional<DocType> collection_type(std::string_view name) {
    if (name == "patients") return DocType::patient;
    if (name == "doctors") return DocType::doctor;
    if (name == "games") return DocType::game;
    if (name == "programs") return DocType::program;
    if (name == "treatments") return DocType::treatment;
    return std::nullopt;
  }

  static std::string collection_name(DocType t) {
    switch (t) {
      case DocType::patient: return "patients";
      case DocType::doctor: return "doctors";
      case DocType::game: return "games";
      case DocType::program: return "programs";
      case DocType::treatment: return "treatments";
    }
    return "patients";
  }

  static ApiResponse envelope_response(int status, const DocumentEnvelope& env) {
    ApiResponse r{status, to_json(env), {}};
    r.headers["ETag"] = "\"" + std::to_string(env.version) + "\"";
    r.headers["Location"] = "/api/v1/" + collection_name(env.doc_type) + "/" + env.doc_id;
    return r;
  }

  ApiResponse route(const ApiRequest& r) {
    const auto parts = split_path(r.path);
    if (parts.size() < 3 || parts[0] != "api" || parts[1] != "v1") fail(404, "not_found", "no such endpoint");
    const std::string& collection = parts[2];
    const std::size_t depth = parts.size() - 3;

    if (collection == "sessions") {
      if (depth == 0 && r.method == "POST") return launch_session(r);
      if (depth == 2 && parts[4] == "events" && r.method == "POST") return ingest_events(r, parts[3]);
      if (depth == 2 && parts[4] == "metrics" && r.method == "GET") return session_metrics(parts[3]);
      fail(404, "not_found", "no such endpoint");
    }
    const auto type = collection_type(collection);
    if (!type) fail(404, "not_found", "no such endpoint");
    if (depth == 0 && r.method == "GET") return list(*type);
    if (depth == 0 && r.method == "POST") return create(*type, r);
    if (depth == 1 && r.method == "GET") return envelope_response(200, store_.documents().get_document(*type, parts[3]));
    if (depth == 1 && r.method == "PUT") return update(*type, parts[3], r);
    if (*type == DocType::patient && depth == 2 && parts[4] == "report" && r.method == "GET")
      return report(parts[3], r);
    if (*type == DocType::patient && depth == 2 && parts[4] == "level-override" && r.method == "POST")
      return level_override(parts[3], r);
    fail(404, "not_found", "no such endpoint");
  }

  // --- documents -----------------------------------------------------------

  ApiResponse list(DocType type) {
    return {200, {{"items", store_.documents().list_documents(type)}}, {}};
  }

  // Cross-document checks that single-document validation cannot make.
  void check_references(DocType type, const json& body) {
    if (type == DocType::program) {
      const auto program = validate_program(body);
      if (!program) return;  // reported by the store
      const auto issues = validate_program_references(program.value(), store_.catalog());
      if (!issues.empty()) fail(400, "validation_failed", "program references do not resolve", issues);
    } else if (type == DocType::treatment) {
      const auto treatment = validate_treatment(body, store_.catalog());
      if (!treatment && validate_treatment_shape(body))
        fail(400, "validation_failed", "treatment references do not resolve", treatment.issues());
    }
  }

  ApiResponse create(DocType type, const ApiRequest& r) {
    const json body = parse_body(r);
    const auto valid = validate_body(type, body);
    if (!valid) fail(400, "validation_failed", "document failed validation", valid.issues());
    check_references(type, body);
    DocumentEnvelope env{type, valid.value().at(id_field(type)).get<std::string>(), 0, body};
    env.version = store_.documents().put_document(env);
    env.body = valid.value();
    return envelope_response(201, env);
  }

  ApiResponse update(DocType type, const std::string& id, const ApiRequest& r) {
    const int expected = if_match_version(r);
    store_.documents().get_document(type, id);  // 404 before anything else
    const json body = parse_body(r);
    const auto valid = validate_body(type, body);
    if (!valid) fail(400, "validation_failed", "document failed validation", valid.issues());
    if (valid.value().at(id_field(type)).get<std::string>() != id)
      fail(400, "validation_failed", "body id does not match the URL", {{id_field(type), "must equal " + id}});
    check_references(type, body);
    DocumentEnvelope env{type, id, expected, body};
    env.version = store_.documents().put_document(env);
    env.body = valid.value();
    return envelope_response(200, env);
  }

  // --- helpers shared by session endpoints ---------------------------------

  DoctorProfile requesting_doctor(const ApiRequest& r) {
    auto id = r.header("x-doctor-id");
    if (!id || id->empty()) fail(400, "missing_doctor_header", "X-Doctor-Id header is required");
    auto doctor = store_.doctor(*id);
    if (!doctor) fail(403, "unknown_doctor", "doctor '" + *id + "' is not registered");
    return *doctor;
  }

  std::pair<PatientProfile, int> load_patient(const std::string& id) {
    const auto env = store_.documents().get_document(DocType::patient, id);
    auto profile = validate_patient_profile(env.body);
    return {profile.value(), env.version};
  }

  // The game a patient plays: from the first treatment naming the patient,
  // else the first game of the given program that has the patient's level.
  std::optional<GameDefinition> patient_game(const PatientProfile& patient, const TreatmentProgram* program) {
    for (const auto& tid : store_.documents().list_documents(DocType::treatment)) {
      const auto t = validate_treatment_shape(store_.documents().get_document(DocType::treatment, tid).body);
      if (t && t.value().patient_id == patient.id) return store_.game(t.value().game_id);
    }
    if (program) return program_game(*program, patient.level);
    return std::nullopt;
  }

  std::optional<GameDefinition> program_game(const TreatmentProgram& program, int level) {
    for (const auto& spec : program.session_specs)
      if (spec.level_number == level)
        if (auto g = store_.game(spec.game_id); g && g->level(level)) return g;
    for (const auto& spec : program.session_specs)
      if (auto g = store_.game(spec.game_id); g && g->level(level)) return g;
    return std::nullopt;
  }

  struct SessionPlan {
    PatientProfile patient;
    int patient_version = 0;
    TreatmentProgram program;
    GameDefinition game;
  };

  SessionPlan plan_session(const std::string& patient_id, const std::string& program_id) {
    SessionPlan plan;
    std::tie(plan.patient, plan.patient_version) = load_patient(patient_id);
    auto program = store_.program(program_id);
    if (!program) fail(404, "not_found", "program '" + program_id + "' not found");
    plan.program = *program;
    auto game = program_game(plan.program, plan.patient.level);
    if (!game)
      fail(400, "validation_failed", "program has no game with the patient's level " +
                                         std::to_string(plan.patient.level));
    plan.game = *game;
    return plan;
  }

  std::string next_session_id(const std::string& patient_id) {
    const auto history = store_.history().load(patient_id);
    std::size_t n = 1;
    for (const auto& h : history)
      if (h.kind == HistoryEntry::Kind::session) ++n;
    for (;; ++n) {
      char suffix[16];
      std::snprintf(suffix, sizeof suffix, "-s%04zu", n);
      std::string id = patient_id + suffix;
      if (id.size() <= 128 && !store_.events().exists(id)) return id;
      if (id.size() > 128) fail(400, "bad_request", "patient id too long to derive a session id");
    }
  }

  // Scores a sealed session and persists the profile update and history.
  FinalizedSession finalize_and_persist(const SessionTally& live, const std::vector<SessionEvent>& events,
                                        const SessionPlan& plan, const std::string& session_id) {
    const auto history = store_.history().load(plan.patient.id);
    ProgressionContext ctx{plan.program.progression_policy,
                           sessions_at_level(history, plan.patient.level) + 1, plan.game.max_level()};
    FinalizedSession done = finalize_session(live, events, ctx, plan.patient);
    store_.history().append(plan.patient.id, {HistoryEntry::Kind::session, session_id, "", done.transition});
    store_.documents().put_document({DocType::patient, plan.patient.id, plan.patient_version, to_json(done.profile)});
    return done;
  }

  // --- sessions ------------------------------------------------------------

  ApiResponse launch_session(const ApiRequest& r) {
    const json body = parse_body(r);
    ValidationIssues issues;
    detail::FieldReader reader(body, "", issues);
    auto patient_id = reader.id("patient_id");
    auto program_id = reader.id("program_id");
    std::optional<std::uint64_t> seed;
    if (const json* s = reader.find("seed", false)) {
      if (s->is_number_unsigned()) seed = s->get<std::uint64_t>();
      else reader.fail("seed", "expected a non-negative integer");
    }
    BehaviorParams behavior;
    bool behavior_seeded = false;
    if (const json* b = reader.find("behavior", false)) {
      auto parsed = behavior_from_json(*b);
      if (parsed) {
        behavior = parsed.value();
        behavior_seeded = b->contains("seed");
      } else {
        for (const auto& i : parsed.issues()) issues.push_back({"behavior." + i.field, i.message});
      }
    }
    if (!issues.empty()) fail(400, "validation_failed", "invalid launch request", issues);

    std::lock_guard lock(session_mutex_);
    SessionPlan plan = plan_session(*patient_id, *program_id);
    const std::string session_id = next_session_id(plan.patient.id);
    const std::uint64_t session_seed = seed ? *seed : derive_seed(fnv1a(session_id), {});
    if (!behavior_seeded) behavior.seed = derive_seed(session_seed, {1});
    const LevelDefinition& level = *plan.game.level(plan.patient.level);
    const SessionConfig config =
        derive_session_config(level, plan.program, {session_id, plan.patient.id, plan.game.game_id, session_seed});
    const SessionEngine engine = simulate_session(behavior, config);

    store_.events().create_segment(SegmentHeader::from_config(config));
    for (const auto& e : engine.events()) store_.events().append_event(session_id, e);
    const FinalizedSession done = finalize_and_persist(engine.live_tally(), engine.events(), plan, session_id);

    ApiResponse resp{201,
                     {{"session_id", session_id},
                      {"level", config.level_number},
                      {"seed", session_seed},
                      {"metrics", session_metrics_document(session_id, done.tally, done.metrics)},
                      {"transition", to_json(done.transition)}},
                     {}};
    resp.headers["Location"] = "/api/v1/sessions/" + session_id + "/metrics";
    return resp;
  }

  ApiResponse ingest_events(const ApiRequest& r, const std::string& session_id) {
    if (!is_valid_id(session_id)) fail(400, "bad_request", "invalid session id");
    const json body = parse_body(r);
    const json* raw_events = nullptr;
    if (body.is_array()) raw_events = &body;
    else if (body.is_object() && body.contains("events") && body.at("events").is_array()) raw_events = &body.at("events");
    if (!raw_events || raw_events->empty()) fail(400, "bad_request", "expected a non-empty events array");
    std::vector<SessionEvent> batch;
    for (const auto& raw : *raw_events) {
      SessionEvent e = event_from_json(raw, session_id);
      if (e.session_id != session_id) fail(400, "malformed_events", "event belongs to another session");
      batch.push_back(std::move(e));
    }

    std::lock_guard lock(session_mutex_);
    const bool is_new = !store_.events().exists(session_id);
    SegmentHeader header;
    std::optional<SessionPlan> plan;
    if (is_new) {
      if (!body.is_object() || !body.contains("patient_id") || !body.contains("program_id") ||
          !body.at("patient_id").is_string() || !body.at("program_id").is_string())
        fail(400, "bad_request", "the first batch of a session must name patient_id and program_id");
      plan = plan_session(body.at("patient_id").get<std::string>(), body.at("program_id").get<std::string>());
      const LevelDefinition& level = *plan->game.level(plan->patient.level);
      header = SegmentHeader::from_config(
          derive_session_config(level, plan->program, {session_id, plan->patient.id, plan->game.game_id, 0}));
    } else {
      header = *store_.events().header(session_id);
      if (store_.events().sealed(session_id)) fail(409, "session_sealed", "session is already sealed");
    }
    if (!header.planned_tries || !header.try_time)
      fail(409, "sequence_conflict", "session segment has no configuration");

    const std::int64_t next = store_.events().next_seq(session_id);
    for (std::size_t i = 0; i < batch.size(); ++i)
      if (batch[i].seq != next + static_cast<std::int64_t>(i))
        fail(409, "sequence_conflict", "expected seq " + std::to_string(next + static_cast<std::int64_t>(i)) +
                                           ", got " + std::to_string(batch[i].seq));

    // Validate the whole batch against the existing log before writing.
    ReplayAccumulator live(*header.try_time, *header.planned_tries);
    const auto existing = is_new ? std::vector<SessionEvent>{} : store_.events().load_session_events(session_id);
    for (const auto& e : existing) live.feed(e);
    for (const auto& e : batch) live.feed(e);

    if (is_new) store_.events().create_segment(header);
    for (const auto& e : batch) store_.events().append_event(session_id, e);

    json resp = {{"session_id", session_id},
                 {"accepted", batch.size()},
                 {"next_seq", store_.events().next_seq(session_id)},
                 {"sealed", live.finished()}};
    if (live.finished()) {
      if (!plan) {
        if (!header.patient_id || !header.program_id) fail(500, "internal", "segment header lacks its owner");
        plan = plan_session(*header.patient_id, *header.program_id);
      }
      const auto stored = store_.events().load_session_events(session_id);
      const FinalizedSession done = finalize_and_persist(live.finish(), stored, *plan, session_id);
      resp["metrics"] = session_metrics_document(session_id, done.tally, done.metrics);
      resp["transition"] = to_json(done.transition);
    }
    return {202, std::move(resp), {}};
  }

  std::pair<SessionTally, SessionMetrics> replay_session(const std::string& session_id) {
    return score_stored_session(store_, session_id);
  }

  ApiResponse session_metrics(const std::string& session_id) {
    const auto [tally, metrics] = replay_session(session_id);
    return {200, session_metrics_document(session_id, tally, metrics), {}};
  }

  // --- reports and overrides -----------------------------------------------

  ApiResponse report(const std::string& patient_id, const ApiRequest& r) {
    const DoctorProfile doctor = requesting_doctor(r);
    const auto [patient, version] = load_patient(patient_id);
    const auto include = r.query.find("include");
    const bool with_events = include != r.query.end() && include->second == "events";
    if (with_events && !doctor.may_read_raw_events())
      fail(403, "insufficient_experience", "raw event logs require senior or expert experience");

    json sessions = json::array();
    json pi_series = json::array();
    json transitions = json::array();
    json events = json::object();
    for (const auto& h : store_.history().load(patient_id)) {
      transitions.push_back(to_json(h));
      if (h.kind != HistoryEntry::Kind::session) continue;
      const auto [tally, metrics] = replay_session(h.session_id);
      json row = session_metrics_document(h.session_id, tally, metrics);
      row["level"] = h.transition.from_level;
      sessions.push_back(std::move(row));
      pi_series.push_back(optional_number(metrics.PI));
      if (with_events) {
        json log = json::array();
        for (const auto& e : store_.events().load_session_events(h.session_id)) log.push_back(to_json(e));
        events[h.session_id] = std::move(log);
      }
    }
    json out = {{"patient_id", patient.id},
                {"version", version},
                {"profile", to_json(patient)},
                {"current_level", patient.level},
                {"performance_index", optional_number(patient.performance_index)},
                {"sessions", std::move(sessions)},
                {"pi_series", std::move(pi_series)},
                {"transitions", std::move(transitions)}};
    if (with_events) out["events"] = std::move(events);
    return {200, std::move(out), {}};
  }

  ApiResponse level_override(const std::string& patient_id, const ApiRequest& r) {
    const DoctorProfile doctor = requesting_doctor(r);
    if (!doctor.may_override_level())
      fail(403, "insufficient_involvement", "level overrides require guide or full involvement");
    const int expected = if_match_version(r);
    const json body = parse_body(r);
    const std::string decision = body.is_object() ? body.value("decision", "") : "";
    if (decision != "advance" && decision != "stay" && decision != "regress")
      fail(400, "validation_failed", "decision must be advance, stay or regress",
           {{"decision", "expected advance, stay or regress"}});

    std::lock_guard lock(session_mutex_);
    auto [patient, version] = load_patient(patient_id);
    if (version != expected)
      fail(412, "version_conflict", "expected version " + std::to_string(expected) + ", current is " +
                                        std::to_string(version));
    const auto game = patient_game(patient, nullptr);
    if (!game) fail(400, "validation_failed", "patient has no treatment naming a game");
    LevelTransition t;
    t.from_level = patient.level;
    t.pi = patient.performance_index;
    t.reason = "doctor-override";
    t.decision = decision == "advance" ? TransitionDecision::advance
                 : decision == "regress" ? TransitionDecision::regress
                                         : TransitionDecision::stay;
    t.to_level = patient.level + (t.decision == TransitionDecision::advance ? 1
                                  : t.decision == TransitionDecision::regress ? -1
                                                                              : 0);
    if (t.to_level < 1 || t.to_level > game->max_level())
      fail(400, "validation_failed", "level " + std::to_string(t.to_level) + " is outside the game's levels",
           {{"decision", "would leave the level range 1.." + std::to_string(game->max_level())}});
    patient.level = t.to_level;
    const int new_version =
        store_.documents().put_document({DocType::patient, patient.id, version, to_json(patient)});
    store_.history().append(patient.id, {HistoryEntry::Kind::override, "", doctor.id, t});
    ApiResponse resp{200, {{"patient_id", patient.id}, {"version", new_version}, {"transition", to_json(t)}}, {}};
    resp.headers["ETag"] = "\"" + std::to_string(new_version) + "\"";
    return resp;
  }

  Store& store_;
  std::mutex session_mutex_;
};

// ---------------------------------------------------------------------------
// cpp-httplib binding.

class HttpServer {
 public:
  explicit HttpServer(ApiService& service) : service_(service) {
    auto handler = [this](const httplib::Request& req, httplib::Response& res) { dispatch(req, res); };
    server_.Get(R"(/.*)", handler);
    server_.Post(R"(/.*)", handler);
    server_.Put(R"(/.*)", handler);
    server_.Delete(R"(/.*)", handler);
  }

  bool bind(const std::string& host, int port) { return server_.bind_to_port(host, port); }
  int bind_any_port(const std::string& host) { return server_.bind_to_any_port(host); }
  bool listen_after_bind() { return server_.listen_after_bind(); }
  void wait_until_ready() const { server_.wait_until_ready(); }
  void stop() { server_.stop(); }

 private:
  void dispatch(const httplib::Request& req, httplib::Response& res) {
    ApiRequest r;
    r.method = req.method;
    r.path = req.path;
    r.body = req.body;
    for (const auto& [name, value] : req.headers) {
      std::string lower = name;
      for (auto& c : lower) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      r.headers[lower] = value;
    }
    for (const auto& [name, value] : req.params) r.query[name] = value;
    const ApiResponse out = service_.handle(r);
    res.status = out.status;
    for (const auto& [name, value] : out.headers) res.set_header(name, value);
    res.set_content(out.body.dump(), "application/json");
  }

  ApiService& service_;
  httplib::Server server_;
};

}  // namespace artherapist
