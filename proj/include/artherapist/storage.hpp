#pragma once

// Durable storage under a single root directory:
//
//   <root>/sessions/<session_id>/events.log     append-only event lines (see events.hpp)
//   <root>/sessions/<session_id>/segment.json   segment header (config summary, seal state, GT)
//   <root>/documents/<doc_type>/<doc_id>.json   versioned document envelopes
//   <root>/history/<patient_id>.jsonl           per-patient session and level-transition history
//
// Every append is fsync'ed before it is acknowledged. Whole-file writes go
// through a temporary file and rename.

#include <fcntl.h>
#include <sys/file.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "artherapist/codec.hpp"
#include "artherapist/domain.hpp"
#include "artherapist/error.hpp"
#include "artherapist/events.hpp"
#include "artherapist/session_engine.hpp"

namespace artherapist {

namespace fs = std::filesystem;

struct StoreOptions {
  bool redact_player_position = false;
  bool sync = true;  // fsync appends and whole-file writes
};

namespace detail {

inline void write_all(int fd, std::string_view data, const fs::path& path) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      throw Error(ErrorCode::io_failure, "write " + path.string() + ": " + std::strerror(errno));
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

class FileHandle {
 public:
  FileHandle(const fs::path& path, int flags) : path_(path), fd_(::open(path.c_str(), flags | O_CLOEXEC, 0644)) {
    if (fd_ < 0) throw Error(ErrorCode::io_failure, "open " + path.string() + ": " + std::strerror(errno));
  }
  FileHandle(const FileHandle&) = delete;
  FileHandle& operator=(const FileHandle&) = delete;
  ~FileHandle() {
    if (fd_ >= 0) ::close(fd_);
  }

  int fd() const { return fd_; }
  void write(std::string_view data) { write_all(fd_, data, path_); }

  void sync() {
    if (::fsync(fd_) != 0) throw Error(ErrorCode::io_failure, "fsync " + path_.string() + ": " + std::strerror(errno));
  }

 private:
  fs::path path_;
  int fd_;
};

// Exclusive advisory lock on a file, held for the object's lifetime. Makes
// read-check-write sequences atomic across processes sharing a store.
class FileLock {
 public:
  explicit FileLock(const fs::path& path) : file_(path, O_RDWR | O_CREAT) {
    while (::flock(file_.fd(), LOCK_EX) != 0)
      if (errno != EINTR) throw Error(ErrorCode::io_failure, "flock " + path.string() + ": " + std::strerror(errno));
  }

 private:
  FileHandle file_;  // closing the descriptor releases the lock
};

inline void sync_directory(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
  if (fd < 0) return;
  ::fsync(fd);
  ::close(fd);
}

inline void write_file_atomic(const fs::path& path, std::string_view content, bool sync) {
  const fs::path tmp = path.string() + ".tmp";
  {
    FileHandle f(tmp, O_WRONLY | O_CREAT | O_TRUNC);
    f.write(content);
    if (sync) f.sync();
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::io_failure, "rename " + tmp.string() + ": " + ec.message());
  if (sync) sync_directory(path.parent_path());
}

inline void append_line(const fs::path& path, const std::string& line, bool sync) {
  FileHandle f(path, O_WRONLY | O_CREAT | O_APPEND);
  f.write(line + "\n");  // one write call per record
  if (sync) f.sync();
}

inline std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_failure, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::io_failure, "create " + dir.string() + ": " + ec.message());
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Event log segments.

struct SegmentHeader {
  std::string session_id;
  std::optional<std::string> patient_id;
  std::optional<std::string> program_id;
  std::optional<std::string> game_id;
  std::optional<int> level_number;
  std::optional<int> planned_tries;
  std::optional<double> try_time;
  std::optional<double> max_time;
  std::optional<std::string> started_wall_clock;  // informational only, never inside event records
  bool sealed = false;
  std::optional<double> GT;

  bool operator==(const SegmentHeader&) const = default;

  static SegmentHeader from_config(const SessionConfig& c) {
    SegmentHeader h;
    h.session_id = c.session_id;
    h.patient_id = c.patient_id;
    h.program_id = c.program_id;
    h.game_id = c.game_id;
    h.level_number = c.level_number;
    h.planned_tries = c.planned_tries;
    h.try_time = c.try_time;
    h.max_time = c.max_time;
    return h;
  }
};

inline json to_json(const SegmentHeader& h) {
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  return {{"session_id", h.session_id},       {"patient_id", opt(h.patient_id)},
          {"program_id", opt(h.program_id)},  {"game_id", opt(h.game_id)},
          {"level_number", opt(h.level_number)}, {"planned_tries", opt(h.planned_tries)},
          {"try_time", opt(h.try_time)},      {"max_time", opt(h.max_time)},
          {"started_wall_clock", opt(h.started_wall_clock)}, {"sealed", h.sealed},
          {"GT", opt(h.GT)}};
}

inline SegmentHeader segment_header_from_json(const json& j) {
  auto get = [&j](const char* key, auto& out) {
    using T = typename std::decay_t<decltype(out)>::value_type;
    if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
  };
  SegmentHeader h;
  h.session_id = j.at("session_id").get<std::string>();
  get("patient_id", h.patient_id);
  get("program_id", h.program_id);
  get("game_id", h.game_id);
  get("level_number", h.level_number);
  get("planned_tries", h.planned_tries);
  get("try_time", h.try_time);
  get("max_time", h.max_time);
  get("started_wall_clock", h.started_wall_clock);
  h.sealed = j.value("sealed", false);
  get("GT", h.GT);
  return h;
}

class EventStore {
 public:
  explicit EventStore(fs::path root, StoreOptions options = {})
      : root_(std::move(root) / "sessions"), options_(options) {
    detail::ensure_directory(root_);
  }

  fs::path segment_dir(const std::string& session_id) const { return root_ / session_id; }
  fs::path log_path(const std::string& session_id) const { return segment_dir(session_id) / "events.log"; }
  fs::path header_path(const std::string& session_id) const { return segment_dir(session_id) / "segment.json"; }

  bool exists(const std::string& session_id) const {
    return is_valid_id(session_id) && fs::exists(header_path(session_id));
  }

  void create_segment(const SegmentHeader& header) {
    if (!is_valid_id(header.session_id)) throw Error(ErrorCode::invalid_argument, "invalid session id");
    std::lock_guard lock(mutex_);
    if (fs::exists(segment_dir(header.session_id)))
      throw Error(ErrorCode::duplicate, "session '" + header.session_id + "' already exists");
    detail::ensure_directory(segment_dir(header.session_id));
    SegmentHeader h = header;
    h.sealed = false;
    h.GT.reset();
    detail::write_file_atomic(header_path(h.session_id), to_json(h).dump(2) + "\n", options_.sync);
    segments_[h.session_id] = SegmentInfo{};
  }

  std::optional<SegmentHeader> header(const std::string& session_id) const {
    if (!exists(session_id)) return std::nullopt;
    std::lock_guard lock(mutex_);
    return read_header(session_id);
  }

  // Appends one event. The segment is created with a bare header when the
  // first event (seq 0) arrives for an unknown session.
  std::int64_t append_event(const std::string& session_id, SessionEvent event) {
    if (!is_valid_id(session_id)) throw Error(ErrorCode::invalid_argument, "invalid session id");
    if (event.session_id != session_id)
      throw Error(ErrorCode::invalid_argument, "event belongs to session '" + event.session_id + "'");
    std::lock_guard lock(mutex_);
    SegmentInfo& info = segment_for_append(session_id, event.seq);
    if (info.sealed) throw Error(ErrorCode::sealed, "session '" + session_id + "' is sealed");
    if (event.seq != info.next_seq)
      throw Error(ErrorCode::sequence_conflict, "expected seq " + std::to_string(info.next_seq) + ", got " +
                                                    std::to_string(event.seq));
    if (options_.redact_player_position)
      if (auto* r = std::get_if<ResponseRecorded>(&event.body)) r->player_position.reset();
    detail::append_line(log_path(session_id), encode_line(event), options_.sync);
    ++info.next_seq;
    if (event.is_terminal()) {
      info.sealed = true;
      SegmentHeader h = read_header(session_id);
      h.sealed = true;
      h.GT = event.at;
      detail::write_file_atomic(header_path(session_id), to_json(h).dump(2) + "\n", options_.sync);
    }
    return event.seq;
  }

  // Strict: any malformed or unterminated line is an error naming its line.
  std::vector<SessionEvent> load_session_events(const std::string& session_id) const {
    if (!exists(session_id)) throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
    std::lock_guard lock(mutex_);
    return parse_log(session_id);
  }

  bool sealed(const std::string& session_id) const {
    if (!exists(session_id)) throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
    std::lock_guard lock(mutex_);
    auto it = segments_.find(session_id);
    if (it != segments_.end()) return it->second.sealed;
    const auto events = parse_log(session_id, true);
    return !events.empty() && events.back().is_terminal();
  }

  std::int64_t next_seq(const std::string& session_id) const {
    if (!exists(session_id)) return 0;
    std::lock_guard lock(mutex_);
    auto it = segments_.find(session_id);
    if (it != segments_.end()) return it->second.next_seq;
    return static_cast<std::int64_t>(parse_log(session_id, true).size());
  }

  // Drops a trailing partial record, i.e. a write that was never
  // acknowledged. Returns the number of bytes removed.
  std::size_t recover_segment(const std::string& session_id) {
    if (!exists(session_id)) throw Error(ErrorCode::not_found, "unknown session '" + session_id + "'");
    std::lock_guard lock(mutex_);
    segments_.erase(session_id);
    return truncate_partial_tail(session_id);
  }

  std::vector<std::string> list_sessions() const {
    std::vector<std::string> out;
    for (const auto& entry : fs::directory_iterator(root_))
      if (entry.is_directory() && fs::exists(entry.path() / "segment.json")) out.push_back(entry.path().filename());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct SegmentInfo {
    std::int64_t next_seq = 0;
    bool sealed = false;
  };

  SegmentHeader read_header(const std::string& session_id) const {
    const json j = json::parse(detail::read_file(header_path(session_id)), nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::corrupt_log, "corrupt segment header for '" + session_id + "'");
    return segment_header_from_json(j);
  }

  // A partial final line is an append that was never acknowledged; readers
  // that only need the committed prefix may skip it.
  std::vector<SessionEvent> parse_log(const std::string& session_id, bool skip_partial_tail = false) const {
    const fs::path path = log_path(session_id);
    std::vector<SessionEvent> events;
    if (!fs::exists(path)) return events;
    const std::string content = detail::read_file(path);
    std::size_t pos = 0;
    std::size_t line_number = 0;
    while (pos < content.size()) {
      ++line_number;
      const auto nl = content.find('\n', pos);
      if (nl == std::string::npos && skip_partial_tail) break;
      if (nl == std::string::npos)
        throw Error(ErrorCode::corrupt_log, "line " + std::to_string(line_number) + ": truncated record in " +
                                                path.string());
      SessionEvent e = decode_line(std::string_view(content).substr(pos, nl - pos), line_number);
      if (e.session_id != session_id)
        throw Error(ErrorCode::corrupt_log, "line " + std::to_string(line_number) + ": foreign session id");
      if (e.seq != static_cast<std::int64_t>(events.size()))
        throw Error(ErrorCode::corrupt_log, "line " + std::to_string(line_number) + ": sequence gap");
      events.push_back(std::move(e));
      pos = nl + 1;
    }
    return events;
  }

  std::size_t truncate_partial_tail(const std::string& session_id) {
    const fs::path path = log_path(session_id);
    if (!fs::exists(path)) return 0;
    const std::string content = detail::read_file(path);
    const auto last_nl = content.rfind('\n');
    const std::size_t keep = last_nl == std::string::npos ? 0 : last_nl + 1;
    if (keep == content.size()) return 0;
    if (::truncate(path.c_str(), static_cast<off_t>(keep)) != 0)
      throw Error(ErrorCode::io_failure, "truncate " + path.string() + ": " + std::strerror(errno));
    return content.size() - keep;
  }

  SegmentInfo& segment_for_append(const std::string& session_id, std::int64_t seq) {
    auto it = segments_.find(session_id);
    if (it != segments_.end()) return it->second;
    if (!fs::exists(header_path(session_id))) {
      if (seq != 0) throw Error(ErrorCode::sequence_conflict, "new session must start at seq 0");
      detail::ensure_directory(segment_dir(session_id));
      SegmentHeader h;
      h.session_id = session_id;
      detail::write_file_atomic(header_path(session_id), to_json(h).dump(2) + "\n", options_.sync);
      return segments_[session_id];
    }
    truncate_partial_tail(session_id);
    const auto events = parse_log(session_id);
    SegmentInfo info;
    info.next_seq = static_cast<std::int64_t>(events.size());
    info.sealed = !events.empty() && events.back().is_terminal();
    return segments_[session_id] = info;
  }

  fs::path root_;
  StoreOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, SegmentInfo> segments_;
};

// ---------------------------------------------------------------------------
// Versioned documents.

enum class DocType { patient, doctor, game, program, treatment };

inline std::string_view to_string(DocType t) {
  switch (t) {
    case DocType::patient: return "patient";
    case DocType::doctor: return "doctor";
    case DocType::game: return "game";
    case DocType::program: return "program";
    case DocType::treatment: return "treatment";
  }
  return "patient";
}

inline std::optional<DocType> doc_type_from_string(std::string_view s) {
  for (const auto t : {DocType::patient, DocType::doctor, DocType::game, DocType::program, DocType::treatment})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct DocumentEnvelope {
  DocType doc_type = DocType::patient;
  std::string doc_id;
  int version = 0;
  json body;
};

inline json to_json(const DocumentEnvelope& e) {
  return {{"doc_type", to_string(e.doc_type)}, {"doc_id", e.doc_id}, {"version", e.version}, {"body", e.body}};
}

// Field holding the document id inside each body.
inline const char* id_field(DocType t) {
  switch (t) {
    case DocType::patient:
    case DocType::doctor: return "id";
    case DocType::game: return "game_id";
    case DocType::program: return "program_id";
    case DocType::treatment: return "treatment_id";
  }
  return "id";
}

// Single-document validation; returns the canonical body on success.
// Cross-references are the caller's concern.
inline Validated<json> validate_body(DocType type, const json& body) {
  auto canonical = [](const auto& validated) -> Validated<json> {
    if (!validated) return validated.issues();
    return to_json(validated.value());
  };
  switch (type) {
    case DocType::patient: return canonical(validate_patient_profile(body));
    case DocType::doctor: return canonical(validate_doctor_profile(body));
    case DocType::game: return canonical(validate_game(body));
    case DocType::program: return canonical(validate_program(body));
    case DocType::treatment: return canonical(validate_treatment_shape(body));
  }
  return ValidationIssues{{"doc_type", "unknown document type"}};
}

class DocumentStore {
 public:
  explicit DocumentStore(fs::path root, StoreOptions options = {})
      : root_(std::move(root) / "documents"), options_(options) {
    for (const auto t : {DocType::patient, DocType::doctor, DocType::game, DocType::program, DocType::treatment})
      detail::ensure_directory(root_ / std::string(to_string(t)));
  }

  // envelope.version is the version the writer last saw (0 to create). On
  // success the stored version is envelope.version + 1 and is returned.
  int put_document(const DocumentEnvelope& envelope) {
    if (!is_valid_id(envelope.doc_id)) throw Error(ErrorCode::invalid_argument, "invalid document id");
    const auto body = validate_body(envelope.doc_type, envelope.body);
    if (!body) throw ValidationFailure(body.issues());
    if (body.value().at(id_field(envelope.doc_type)).get<std::string>() != envelope.doc_id)
      throw ValidationFailure(ValidationIssues{{id_field(envelope.doc_type), "does not match the document id"}});

    std::lock_guard lock(mutex_);
    detail::FileLock process_lock(root_ / ".lock");
    const fs::path path = document_path(envelope.doc_type, envelope.doc_id);
    const auto current = read_envelope(path);
    if (envelope.version == 0 && current)
      throw Error(ErrorCode::duplicate, std::string(to_string(envelope.doc_type)) + " '" + envelope.doc_id +
                                            "' already exists");
    if (envelope.version > 0 && !current)
      throw Error(ErrorCode::not_found, std::string(to_string(envelope.doc_type)) + " '" + envelope.doc_id +
                                            "' not found");
    if (current && current->version != envelope.version)
      throw Error(ErrorCode::version_conflict, "expected version " + std::to_string(envelope.version) +
                                                   ", current is " + std::to_string(current->version));
    DocumentEnvelope stored{envelope.doc_type, envelope.doc_id, envelope.version + 1, body.value()};
    detail::write_file_atomic(path, to_json(stored).dump(2) + "\n", options_.sync);
    return stored.version;
  }

  std::optional<DocumentEnvelope> find_document(DocType type, const std::string& id) const {
    if (!is_valid_id(id)) return std::nullopt;
    std::lock_guard lock(mutex_);
    return read_envelope(document_path(type, id));
  }

  DocumentEnvelope get_document(DocType type, const std::string& id) const {
    auto doc = find_document(type, id);
    if (!doc) throw Error(ErrorCode::not_found, std::string(to_string(type)) + " '" + id + "' not found");
    return *doc;
  }

  std::vector<std::string> list_documents(DocType type) const {
    std::lock_guard lock(mutex_);
    std::vector<std::string> ids;
    for (const auto& entry : fs::directory_iterator(root_ / std::string(to_string(type)))) {
      const auto& p = entry.path();
      if (entry.is_regular_file() && p.extension() == ".json") ids.push_back(p.stem());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
  }

  // Carries the full issue list of a rejected body.
  class ValidationFailure : public Error {
   public:
    explicit ValidationFailure(ValidationIssues issues)
        : Error(ErrorCode::validation_failed, summarize(issues)), issues_(std::move(issues)) {}
    const ValidationIssues& issues() const { return issues_; }

   private:
    ValidationIssues issues_;
  };

 private:
  fs::path document_path(DocType type, const std::string& id) const {
    return root_ / std::string(to_string(type)) / (id + ".json");
  }

  std::optional<DocumentEnvelope> read_envelope(const fs::path& path) const {
    if (!fs::exists(path)) return std::nullopt;
    const json j = json::parse(detail::read_file(path), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error(ErrorCode::io_failure, "corrupt document " + path.string());
    DocumentEnvelope e;
    e.doc_type = doc_type_from_string(j.at("doc_type").get<std::string>()).value_or(DocType::patient);
    e.doc_id = j.at("doc_id").get<std::string>();
    e.version = j.at("version").get<int>();
    e.body = j.at("body");
    return e;
  }

  fs::path root_;
  StoreOptions options_;
  mutable std::mutex mutex_;
};

// ---------------------------------------------------------------------------
// Per-patient history: one JSON object per line, in the order things happened.

struct HistoryEntry {
  enum class Kind { session, override } kind = Kind::session;
  std::string session_id;  // session entries
  std::string doctor_id;   // override entries
  LevelTransition transition;

  bool operator==(const HistoryEntry&) const = default;
};

inline json to_json(const HistoryEntry& h) {
  json out = {{"kind", h.kind == HistoryEntry::Kind::session ? "session" : "override"},
              {"transition", to_json(h.transition)}};
  if (h.kind == HistoryEntry::Kind::session) out["session_id"] = h.session_id;
  else out["doctor_id"] = h.doctor_id;
  return out;
}

inline HistoryEntry history_entry_from_json(const json& j) {
  HistoryEntry h;
  h.kind = j.at("kind").get<std::string>() == "session" ? HistoryEntry::Kind::session : HistoryEntry::Kind::override;
  h.session_id = j.value("session_id", "");
  h.doctor_id = j.value("doctor_id", "");
  h.transition = transition_from_json(j.at("transition"));
  return h;
}

class PatientHistory {
 public:
  explicit PatientHistory(fs::path root, StoreOptions options = {})
      : root_(std::move(root) / "history"), options_(options) {
    detail::ensure_directory(root_);
  }

  void append(const std::string& patient_id, const HistoryEntry& entry) {
    if (!is_valid_id(patient_id)) throw Error(ErrorCode::invalid_argument, "invalid patient id");
    std::lock_guard lock(mutex_);
    detail::append_line(root_ / (patient_id + ".jsonl"), to_json(entry).dump(), options_.sync);
  }

  std::vector<HistoryEntry> load(const std::string& patient_id) const {
    std::vector<HistoryEntry> out;
    if (!is_valid_id(patient_id)) return out;
    std::lock_guard lock(mutex_);
    const fs::path path = root_ / (patient_id + ".jsonl");
    if (!fs::exists(path)) return out;
    std::istringstream in(detail::read_file(path));
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      const json j = json::parse(line, nullptr, false);
      if (j.is_discarded()) continue;  // partial tail from an interrupted append
      out.push_back(history_entry_from_json(j));
    }
    return out;
  }

 private:
  fs::path root_;
  StoreOptions options_;
  mutable std::mutex mutex_;
};

// Sessions already played at `level` since the patient last arrived there:
// the trailing run of session entries that started and ended at that level.
inline int sessions_at_level(const std::vector<HistoryEntry>& history, int level) {
  int count = 0;
  for (auto it = history.rbegin(); it != history.rend(); ++it) {
    const auto& t = it->transition;
    if (it->kind == HistoryEntry::Kind::override || t.from_level != level || t.to_level != level) break;
    ++count;
  }
  return count;
}

// ---------------------------------------------------------------------------

class Store {
 public:
  explicit Store(const fs::path& root, StoreOptions options = {})
      : root_(root), events_(root, options), documents_(root, options), history_(root, options) {}

  const fs::path& root() const { return root_; }
  EventStore& events() { return events_; }
  const EventStore& events() const { return events_; }
  DocumentStore& documents() { return documents_; }
  const DocumentStore& documents() const { return documents_; }
  PatientHistory& history() { return history_; }
  const PatientHistory& history() const { return history_; }

  template <class T, class Validator>
  std::optional<T> typed(DocType type, const std::string& id, Validator validator) const {
    const auto doc = documents_.find_document(type, id);
    if (!doc) return std::nullopt;
    auto v = validator(doc->body);
    if (!v) return std::nullopt;
    return v.value();
  }

  std::optional<PatientProfile> patient(const std::string& id) const {
    return typed<PatientProfile>(DocType::patient, id, validate_patient_profile);
  }
  std::optional<DoctorProfile> doctor(const std::string& id) const {
    return typed<DoctorProfile>(DocType::doctor, id, validate_doctor_profile);
  }
  std::optional<GameDefinition> game(const std::string& id) const {
    return typed<GameDefinition>(DocType::game, id, validate_game);
  }
  std::optional<TreatmentProgram> program(const std::string& id) const {
    return typed<TreatmentProgram>(DocType::program, id, validate_program);
  }

  Catalog catalog() const {
    return Catalog{[this](const std::string& id) { return patient(id); },
                   [this](const std::string& id) { return doctor(id); },
                   [this](const std::string& id) { return game(id); },
                   [this](const std::string& id) { return program(id); }};
  }

 private:
  fs::path root_;
  EventStore events_;
  DocumentStore documents_;
  PatientHistory history_;
};

}  // namespace artherapist
