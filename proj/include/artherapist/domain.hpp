#pragma once

// Validated domain model: patients, doctors, games with their levels and
// objects, treatment programs and whole treatments. Every type here is a
// plain value; once produced by a validate_* function it satisfies all of
// its invariants and is never mutated in place.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "artherapist/error.hpp"

namespace artherapist {

using json = nlohmann::json;

struct ValidationIssue {
  std::string field;
  std::string message;

  bool operator==(const ValidationIssue&) const = default;
};

using ValidationIssues = std::vector<ValidationIssue>;

inline std::string summarize(const ValidationIssues& issues) {
  std::string out;
  for (const auto& issue : issues) {
    if (!out.empty()) out += "; ";
    out += issue.field.empty() ? issue.message : issue.field + ": " + issue.message;
  }
  return out;
}

// Either a value satisfying every invariant of T or a non-empty list of every
// violated invariant.
template <class T>
class Validated {
 public:
  Validated(T value) : data_(std::move(value)) {}
  Validated(ValidationIssues issues) : data_(std::move(issues)) {
    if (std::get<ValidationIssues>(data_).empty())
      std::get<ValidationIssues>(data_).push_back({"", "unspecified validation failure"});
  }

  bool ok() const { return std::holds_alternative<T>(data_); }
  explicit operator bool() const { return ok(); }

  const T& value() const {
    if (!ok()) throw Error(ErrorCode::validation_failed, summary());
    return std::get<T>(data_);
  }

  const ValidationIssues& issues() const {
    static const ValidationIssues none;
    return ok() ? none : std::get<ValidationIssues>(data_);
  }

  std::string summary() const { return summarize(issues()); }

 private:
  std::variant<T, ValidationIssues> data_;
};

inline json to_json(const ValidationIssues& issues) {
  json out = json::array();
  for (const auto& issue : issues) out.push_back({{"field", issue.field}, {"message", issue.message}});
  return out;
}

// Identifiers are opaque but must be usable as file names and as
// whitespace-free tokens in the event line format.
inline bool is_valid_id(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
           c == '_' || c == '-' || c == ':';
  });
}

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Vec3&) const = default;
};

// Axis-aligned box in meters.
struct Box {
  Vec3 min;
  Vec3 max;

  bool contains(const Vec3& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z && p.z <= max.z;
  }

  bool operator==(const Box&) const = default;
};

enum class ShapeKind { cube, sphere, cone, custom };

struct Shape {
  ShapeKind kind = ShapeKind::cube;
  std::string label;  // only for custom

  bool operator==(const Shape&) const = default;
};

struct ObjectSpec {
  std::string object_id;
  Shape shape;
  double base_size = 0.0;  // nominal diameter, meters
  Box placement_region;

  bool operator==(const ObjectSpec&) const = default;
};

inline constexpr double kDefaultAppearanceInterval = 0.5;

struct LevelDefinition {
  int level_number = 1;
  std::vector<ObjectSpec> objects;
  double max_time = 0.0;  // whole-level budget, seconds
  double try_time = 0.0;  // per-try budget (theta), seconds
  int tries_per_session = 1;
  int distractors_per_try = 0;
  double appearance_interval = kDefaultAppearanceInterval;
  std::optional<std::string> effects;  // inert guidance metadata

  bool operator==(const LevelDefinition&) const = default;
};

enum class GameType { drag_and_drop, multiple_choice };

struct GameDefinition {
  std::string game_id;
  GameType type = GameType::drag_and_drop;
  std::vector<LevelDefinition> levels;

  int max_level() const { return static_cast<int>(levels.size()); }

  const LevelDefinition* level(int number) const {
    if (number < 1 || number > max_level()) return nullptr;
    return &levels[static_cast<std::size_t>(number - 1)];
  }

  bool operator==(const GameDefinition&) const = default;
};

struct PatientProfile {
  std::string id;
  int level = 1;
  std::optional<double> performance_index;
  std::set<std::string> preferences;  // opaque tags

  bool operator==(const PatientProfile&) const = default;
};

enum class Experience { junior, senior, expert };
enum class Involvement { monitor, guide, full };

struct DoctorProfile {
  std::string id;
  Experience experience = Experience::junior;
  Involvement involvement = Involvement::monitor;

  bool may_read_raw_events() const { return experience != Experience::junior; }
  bool may_override_level() const { return involvement != Involvement::monitor; }

  bool operator==(const DoctorProfile&) const = default;
};

struct ProgressionPolicy {
  double advance_threshold = 0.7;
  double regress_threshold = 0.3;
  int min_sessions_at_level = 1;

  bool operator==(const ProgressionPolicy&) const = default;
};

struct SessionSpec {
  std::string game_id;
  int level_number = 1;

  bool operator==(const SessionSpec&) const = default;
};

struct TreatmentProgram {
  std::string program_id;
  std::vector<SessionSpec> session_specs;
  double duration_cap = 0.0;  // minutes
  ProgressionPolicy progression_policy;

  bool operator==(const TreatmentProgram&) const = default;
};

struct Treatment {
  std::string treatment_id;
  std::string patient_id;
  std::string doctor_id;
  std::string game_id;
  std::vector<std::string> program_ids;

  bool operator==(const Treatment&) const = default;
};

// ---------------------------------------------------------------------------
// Enum names on the wire.

inline std::string_view to_string(GameType t) {
  return t == GameType::drag_and_drop ? "drag_and_drop" : "multiple_choice";
}

inline std::string_view to_string(Experience e) {
  switch (e) {
    case Experience::junior: return "junior";
    case Experience::senior: return "senior";
    case Experience::expert: return "expert";
  }
  return "junior";
}

inline std::string_view to_string(Involvement i) {
  switch (i) {
    case Involvement::monitor: return "monitor";
    case Involvement::guide: return "guide";
    case Involvement::full: return "full";
  }
  return "monitor";
}

inline std::string shape_name(const Shape& s) {
  switch (s.kind) {
    case ShapeKind::cube: return "cube";
    case ShapeKind::sphere: return "sphere";
    case ShapeKind::cone: return "cone";
    case ShapeKind::custom: return "custom:" + s.label;
  }
  return "cube";
}

// ---------------------------------------------------------------------------
// Field extraction that records every problem instead of stopping at the
// first one.

namespace detail {

class FieldReader {
 public:
  FieldReader(const json& object, std::string prefix, ValidationIssues& issues)
      : object_(object), prefix_(std::move(prefix)), issues_(issues) {
    if (!object_.is_object()) fail("", "expected an object");
  }

  bool is_object() const { return object_.is_object(); }

  std::string path(std::string_view key) const {
    if (prefix_.empty()) return std::string(key);
    if (key.empty()) return prefix_;
    return prefix_ + "." + std::string(key);
  }

  void fail(std::string_view key, std::string message) { issues_.push_back({path(key), std::move(message)}); }

  const json* find(std::string_view key, bool required) {
    if (!object_.is_object()) return nullptr;
    auto it = object_.find(std::string(key));
    if (it == object_.end() || (it->is_null() && required)) {
      if (required) fail(key, "missing required field");
      return nullptr;
    }
    if (it->is_null()) return nullptr;
    return &*it;
  }

  std::optional<std::string> string(std::string_view key, bool required = true) {
    const json* v = find(key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(key, "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::string> id(std::string_view key) {
    auto s = string(key);
    if (!s) return std::nullopt;
    if (s->empty()) {
      fail(key, "must be non-empty");
      return std::nullopt;
    }
    if (!is_valid_id(*s)) {
      fail(key, "must match [A-Za-z0-9._:-]{1,128}");
      return std::nullopt;
    }
    return s;
  }

  std::optional<std::int64_t> integer(std::string_view key, bool required = true) {
    const json* v = find(key, required);
    if (!v) return std::nullopt;
    if (v->is_number_unsigned()) {
      if (v->get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int32_t>::max())) {
        fail(key, "integer out of range");
        return std::nullopt;
      }
      return static_cast<std::int64_t>(v->get<std::uint64_t>());
    }
    if (!v->is_number_integer()) {
      fail(key, "expected an integer");
      return std::nullopt;
    }
    const auto value = v->get<std::int64_t>();
    if (value < std::numeric_limits<std::int32_t>::min() || value > std::numeric_limits<std::int32_t>::max()) {
      fail(key, "integer out of range");
      return std::nullopt;
    }
    return value;
  }

  std::optional<double> number(std::string_view key, bool required = true) {
    const json* v = find(key, required);
    if (!v) return std::nullopt;
    if (!v->is_number()) {
      fail(key, "expected a number");
      return std::nullopt;
    }
    const double d = v->get<double>();
    if (!std::isfinite(d)) {
      fail(key, "must be finite");
      return std::nullopt;
    }
    return d;
  }

  const json* array(std::string_view key, bool required = true) {
    const json* v = find(key, required);
    if (!v) return nullptr;
    if (!v->is_array()) {
      fail(key, "expected an array");
      return nullptr;
    }
    return v;
  }

  const json* object(std::string_view key) {
    const json* v = find(key, true);
    if (!v) return nullptr;
    if (!v->is_object()) {
      fail(key, "expected an object");
      return nullptr;
    }
    return v;
  }

 private:
  const json& object_;
  std::string prefix_;
  ValidationIssues& issues_;
};

inline std::optional<Vec3> read_vec3(const json& v, const std::string& field, ValidationIssues& issues) {
  if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); })) {
    issues.push_back({field, "expected [x, y, z] numbers"});
    return std::nullopt;
  }
  return Vec3{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline std::optional<ObjectSpec> read_object_spec(const json& raw, const std::string& prefix, ValidationIssues& issues) {
  FieldReader r(raw, prefix, issues);
  if (!r.is_object()) return std::nullopt;
  const auto before = issues.size();
  ObjectSpec spec;
  if (auto id = r.id("object_id")) spec.object_id = *id;
  if (auto shape = r.string("shape")) {
    if (*shape == "cube") spec.shape = {ShapeKind::cube, {}};
    else if (*shape == "sphere") spec.shape = {ShapeKind::sphere, {}};
    else if (*shape == "cone") spec.shape = {ShapeKind::cone, {}};
    else if (shape->rfind("custom:", 0) == 0 && shape->size() > 7) spec.shape = {ShapeKind::custom, shape->substr(7)};
    else r.fail("shape", "expected cube, sphere, cone or custom:<label>");
  }
  if (auto size = r.number("base_size")) {
    if (*size <= 0.0) r.fail("base_size", "must be > 0");
    spec.base_size = *size;
  }
  if (const json* region = r.object("placement_region")) {
    FieldReader rr(*region, r.path("placement_region"), issues);
    const json* lo = rr.find("min", true);
    const json* hi = rr.find("max", true);
    std::optional<Vec3> min_corner = lo ? read_vec3(*lo, rr.path("min"), issues) : std::nullopt;
    std::optional<Vec3> max_corner = hi ? read_vec3(*hi, rr.path("max"), issues) : std::nullopt;
    if (min_corner && max_corner) {
      if (!(max_corner->x > min_corner->x && max_corner->y > min_corner->y && max_corner->z > min_corner->z))
        r.fail("placement_region", "must have strictly positive extent on every axis");
      spec.placement_region = {*min_corner, *max_corner};
    }
  }
  if (issues.size() != before) return std::nullopt;
  return spec;
}

inline std::optional<LevelDefinition> read_level(const json& raw, const std::string& prefix, ValidationIssues& issues) {
  FieldReader r(raw, prefix, issues);
  if (!r.is_object()) return std::nullopt;
  const auto before = issues.size();
  LevelDefinition level;
  if (auto n = r.integer("level_number")) {
    if (*n < 1) r.fail("level_number", "must be >= 1");
    level.level_number = static_cast<int>(*n);
  }
  if (const json* objects = r.array("objects")) {
    if (objects->empty()) r.fail("objects", "must be non-empty");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < objects->size(); ++i) {
      auto spec = read_object_spec((*objects)[i], r.path("objects[" + std::to_string(i) + "]"), issues);
      if (!spec) continue;
      if (!seen.insert(spec->object_id).second)
        r.fail("objects[" + std::to_string(i) + "].object_id", "duplicate object id within level");
      level.objects.push_back(std::move(*spec));
    }
  }
  auto max_time = r.number("max_time");
  auto try_time = r.number("try_time");
  auto tries = r.integer("tries_per_session");
  auto distractors = r.integer("distractors_per_try");
  auto interval = r.number("appearance_interval", false);
  if (max_time) {
    if (*max_time <= 0.0) r.fail("max_time", "must be > 0");
    level.max_time = *max_time;
  }
  if (try_time) {
    if (*try_time <= 0.0) r.fail("try_time", "must be > 0");
    level.try_time = *try_time;
  }
  if (tries) {
    if (*tries < 1) r.fail("tries_per_session", "must be >= 1");
    level.tries_per_session = static_cast<int>(*tries);
  }
  if (distractors) {
    if (*distractors < 0) r.fail("distractors_per_try", "must be >= 0");
    level.distractors_per_try = static_cast<int>(*distractors);
  }
  if (interval) {
    if (*interval < 0.0) r.fail("appearance_interval", "must be >= 0");
    level.appearance_interval = *interval;
  }
  if (max_time && try_time && tries && *tries >= 1 && *try_time * static_cast<double>(*tries) > *max_time)
    r.fail("try_time", "try_time * tries_per_session must not exceed max_time");
  if (distractors && *distractors >= 0 && static_cast<std::size_t>(*distractors) + 1 > level.objects.size() &&
      !level.objects.empty())
    r.fail("distractors_per_try", "distractors_per_try + 1 must not exceed the number of objects");
  if (distractors && try_time && *distractors >= 0 &&
      static_cast<double>(*distractors) * level.appearance_interval >= *try_time)
    r.fail("appearance_interval", "the last object must appear before the try deadline");
  if (const json* effects = r.find("effects", false)) {
    if (!effects->is_string()) r.fail("effects", "expected a string");
    else level.effects = effects->get<std::string>();
  }
  if (issues.size() != before) return std::nullopt;
  return level;
}

inline std::optional<ProgressionPolicy> read_policy(const json& raw, const std::string& prefix, ValidationIssues& issues) {
  FieldReader r(raw, prefix, issues);
  if (!r.is_object()) return std::nullopt;
  const auto before = issues.size();
  ProgressionPolicy policy;
  auto advance = r.number("advance_threshold");
  auto regress = r.number("regress_threshold");
  auto min_sessions = r.integer("min_sessions_at_level");
  if (advance) {
    if (!(*advance > 0.0 && *advance <= 1.0)) r.fail("advance_threshold", "must lie in (0, 1]");
    policy.advance_threshold = *advance;
  }
  if (regress) {
    if (*regress < 0.0) r.fail("regress_threshold", "must be >= 0");
    policy.regress_threshold = *regress;
  }
  if (advance && regress && !(*regress < *advance))
    r.fail("regress_threshold", "must be < advance_threshold");
  if (min_sessions) {
    if (*min_sessions < 1) r.fail("min_sessions_at_level", "must be >= 1");
    policy.min_sessions_at_level = static_cast<int>(*min_sessions);
  }
  if (issues.size() != before) return std::nullopt;
  return policy;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Single-document validation.

inline Validated<PatientProfile> validate_patient_profile(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  PatientProfile p;
  if (r.is_object()) {
    if (auto id = r.id("id")) p.id = *id;
    if (auto level = r.integer("level")) {
      if (*level < 1) r.fail("level", "must be >= 1");
      p.level = static_cast<int>(*level);
    }
    if (auto pi = r.number("performance_index", false)) {
      if (*pi < 0.0 || *pi > 1.0) r.fail("performance_index", "must lie in [0, 1]");
      p.performance_index = *pi;
    }
    if (const json* prefs = r.array("preferences", false)) {
      for (std::size_t i = 0; i < prefs->size(); ++i) {
        const auto& tag = (*prefs)[i];
        if (!tag.is_string() || tag.get<std::string>().empty())
          r.fail("preferences[" + std::to_string(i) + "]", "expected a non-empty string");
        else
          p.preferences.insert(tag.get<std::string>());
      }
    }
  }
  if (!issues.empty()) return issues;
  return p;
}

inline Validated<DoctorProfile> validate_doctor_profile(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  DoctorProfile d;
  if (r.is_object()) {
    if (auto id = r.id("id")) d.id = *id;
    if (auto e = r.string("experience")) {
      if (*e == "junior") d.experience = Experience::junior;
      else if (*e == "senior") d.experience = Experience::senior;
      else if (*e == "expert") d.experience = Experience::expert;
      else r.fail("experience", "expected junior, senior or expert");
    }
    if (auto i = r.string("involvement")) {
      if (*i == "monitor") d.involvement = Involvement::monitor;
      else if (*i == "guide") d.involvement = Involvement::guide;
      else if (*i == "full") d.involvement = Involvement::full;
      else r.fail("involvement", "expected monitor, guide or full");
    }
  }
  if (!issues.empty()) return issues;
  return d;
}

inline Validated<LevelDefinition> validate_level(const json& raw) {
  ValidationIssues issues;
  auto level = detail::read_level(raw, "", issues);
  if (!level) return issues;
  return *level;
}

inline Validated<ObjectSpec> validate_object_spec(const json& raw) {
  ValidationIssues issues;
  auto spec = detail::read_object_spec(raw, "", issues);
  if (!spec) return issues;
  return *spec;
}

inline Validated<GameDefinition> validate_game(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  GameDefinition g;
  if (r.is_object()) {
    if (auto id = r.id("game_id")) g.game_id = *id;
    if (auto t = r.string("type")) {
      if (*t == "drag_and_drop") g.type = GameType::drag_and_drop;
      else if (*t == "multiple_choice") g.type = GameType::multiple_choice;
      else r.fail("type", "expected drag_and_drop or multiple_choice");
    }
    if (const json* levels = r.array("levels")) {
      if (levels->empty()) r.fail("levels", "must be non-empty");
      for (std::size_t i = 0; i < levels->size(); ++i) {
        const std::string path = "levels[" + std::to_string(i) + "]";
        auto level = detail::read_level((*levels)[i], path, issues);
        if (!level) continue;
        if (level->level_number != static_cast<int>(i) + 1)
          r.fail(path + ".level_number", "levels must be numbered 1..n contiguously");
        g.levels.push_back(std::move(*level));
      }
    }
  }
  if (!issues.empty()) return issues;
  return g;
}

inline Validated<ProgressionPolicy> validate_policy(const json& raw) {
  ValidationIssues issues;
  auto policy = detail::read_policy(raw, "", issues);
  if (!policy) return issues;
  return *policy;
}

// Structural checks only; cross-references against games are checked by
// validate_program_references / validate_treatment.
inline Validated<TreatmentProgram> validate_program(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  TreatmentProgram p;
  if (r.is_object()) {
    if (auto id = r.id("program_id")) p.program_id = *id;
    if (const json* specs = r.array("session_specs")) {
      if (specs->empty()) r.fail("session_specs", "must be non-empty");
      for (std::size_t i = 0; i < specs->size(); ++i) {
        detail::FieldReader sr((*specs)[i], "session_specs[" + std::to_string(i) + "]", issues);
        if (!sr.is_object()) continue;
        SessionSpec spec;
        auto game = sr.id("game_id");
        auto level = sr.integer("level_number");
        if (level && *level < 1) sr.fail("level_number", "must be >= 1");
        if (game && level) p.session_specs.push_back({*game, static_cast<int>(*level)});
      }
    }
    if (auto cap = r.number("duration_cap")) {
      if (*cap <= 0.0) r.fail("duration_cap", "must be > 0");
      p.duration_cap = *cap;
    }
    if (const json* policy = r.object("progression_policy")) {
      if (auto pol = detail::read_policy(*policy, "progression_policy", issues)) p.progression_policy = *pol;
    }
  }
  if (!issues.empty()) return issues;
  return p;
}

inline Validated<Treatment> validate_treatment_shape(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  Treatment t;
  if (r.is_object()) {
    if (auto id = r.id("treatment_id")) t.treatment_id = *id;
    if (auto id = r.id("patient_id")) t.patient_id = *id;
    if (auto id = r.id("doctor_id")) t.doctor_id = *id;
    if (auto id = r.id("game_id")) t.game_id = *id;
    if (const json* programs = r.array("program_ids")) {
      if (programs->empty()) r.fail("program_ids", "must be non-empty");
      for (std::size_t i = 0; i < programs->size(); ++i) {
        const auto& v = (*programs)[i];
        if (!v.is_string() || !is_valid_id(v.get<std::string>()))
          r.fail("program_ids[" + std::to_string(i) + "]", "expected a valid id");
        else
          t.program_ids.push_back(v.get<std::string>());
      }
    }
  }
  if (!issues.empty()) return issues;
  return t;
}

// ---------------------------------------------------------------------------
// Cross-reference validation.

// Lookups into whatever holds the already-validated documents.
struct Catalog {
  std::function<std::optional<PatientProfile>(const std::string&)> patient;
  std::function<std::optional<DoctorProfile>(const std::string&)> doctor;
  std::function<std::optional<GameDefinition>(const std::string&)> game;
  std::function<std::optional<TreatmentProgram>(const std::string&)> program;
};

inline void check_program_references(const TreatmentProgram& program, const Catalog& catalog,
                                     const std::string& prefix, ValidationIssues& issues) {
  for (std::size_t i = 0; i < program.session_specs.size(); ++i) {
    const auto& spec = program.session_specs[i];
    const std::string path = prefix + "session_specs[" + std::to_string(i) + "]";
    const auto game = catalog.game ? catalog.game(spec.game_id) : std::nullopt;
    if (!game) {
      issues.push_back({path + ".game_id", "unresolved game '" + spec.game_id + "'"});
      continue;
    }
    const LevelDefinition* level = game->level(spec.level_number);
    if (!level) {
      issues.push_back({path + ".level_number", "unresolved level " + std::to_string(spec.level_number) +
                                                    " in game '" + spec.game_id + "'"});
      continue;
    }
    if (program.duration_cap * 60.0 < level->max_time)
      issues.push_back({prefix + "duration_cap", "shorter than max_time of level " +
                                                     std::to_string(spec.level_number) + " in game '" +
                                                     spec.game_id + "'"});
  }
}

inline ValidationIssues validate_program_references(const TreatmentProgram& program, const Catalog& catalog) {
  ValidationIssues issues;
  check_program_references(program, catalog, "", issues);
  return issues;
}

inline Validated<Treatment> validate_treatment(const json& raw, const Catalog& catalog) {
  auto shape = validate_treatment_shape(raw);
  if (!shape) return shape;
  const Treatment& t = shape.value();
  ValidationIssues issues;
  const auto patient = catalog.patient ? catalog.patient(t.patient_id) : std::nullopt;
  const auto doctor = catalog.doctor ? catalog.doctor(t.doctor_id) : std::nullopt;
  const auto game = catalog.game ? catalog.game(t.game_id) : std::nullopt;
  if (!patient) issues.push_back({"patient_id", "unresolved patient '" + t.patient_id + "'"});
  if (!doctor) issues.push_back({"doctor_id", "unresolved doctor '" + t.doctor_id + "'"});
  if (!game) issues.push_back({"game_id", "unresolved game '" + t.game_id + "'"});
  if (patient && game && patient->level > game->max_level())
    issues.push_back({"patient_id", "patient level " + std::to_string(patient->level) +
                                        " out of range for game with " + std::to_string(game->max_level()) +
                                        " levels"});
  for (std::size_t i = 0; i < t.program_ids.size(); ++i) {
    const auto program = catalog.program ? catalog.program(t.program_ids[i]) : std::nullopt;
    if (!program) {
      issues.push_back({"program_ids[" + std::to_string(i) + "]", "unresolved program '" + t.program_ids[i] + "'"});
      continue;
    }
    check_program_references(*program, catalog, "programs[" + std::to_string(i) + "].", issues);
  }
  if (!issues.empty()) return issues;
  return t;
}

// ---------------------------------------------------------------------------
// Serialization. Field names match the validators above.

inline json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline json to_json(const ObjectSpec& o) {
  return {{"object_id", o.object_id},
          {"shape", shape_name(o.shape)},
          {"base_size", o.base_size},
          {"placement_region", {{"min", to_json(o.placement_region.min)}, {"max", to_json(o.placement_region.max)}}}};
}

inline json to_json(const LevelDefinition& l) {
  json objects = json::array();
  for (const auto& o : l.objects) objects.push_back(to_json(o));
  json out = {{"level_number", l.level_number},
              {"objects", std::move(objects)},
              {"max_time", l.max_time},
              {"try_time", l.try_time},
              {"tries_per_session", l.tries_per_session},
              {"distractors_per_try", l.distractors_per_try},
              {"appearance_interval", l.appearance_interval}};
  if (l.effects) out["effects"] = *l.effects;
  return out;
}

inline json to_json(const GameDefinition& g) {
  json levels = json::array();
  for (const auto& l : g.levels) levels.push_back(to_json(l));
  return {{"game_id", g.game_id}, {"type", to_string(g.type)}, {"levels", std::move(levels)}};
}

inline json to_json(const PatientProfile& p) {
  json out = {{"id", p.id}, {"level", p.level}, {"preferences", p.preferences}};
  out["performance_index"] = p.performance_index ? json(*p.performance_index) : json(nullptr);
  return out;
}

inline json to_json(const DoctorProfile& d) {
  return {{"id", d.id}, {"experience", to_string(d.experience)}, {"involvement", to_string(d.involvement)}};
}

inline json to_json(const ProgressionPolicy& p) {
  return {{"advance_threshold", p.advance_threshold},
          {"regress_threshold", p.regress_threshold},
          {"min_sessions_at_level", p.min_sessions_at_level}};
}

inline json to_json(const TreatmentProgram& p) {
  json specs = json::array();
  for (const auto& s : p.session_specs) specs.push_back({{"game_id", s.game_id}, {"level_number", s.level_number}});
  return {{"program_id", p.program_id},
          {"session_specs", std::move(specs)},
          {"duration_cap", p.duration_cap},
          {"progression_policy", to_json(p.progression_policy)}};
}

inline json to_json(const Treatment& t) {
  return {{"treatment_id", t.treatment_id},
          {"patient_id", t.patient_id},
          {"doctor_id", t.doctor_id},
          {"game_id", t.game_id},
          {"program_ids", t.program_ids}};
}

// Parses text first; malformed JSON is reported as a validation issue.
template <class Validator>
auto validate_text(std::string_view text, Validator&& validator) -> decltype(validator(json{})) {
  json raw = json::parse(text, nullptr, false);
  if (raw.is_discarded()) return ValidationIssues{{"", "malformed JSON"}};
  return validator(raw);
}

// ---------------------------------------------------------------------------
// Session configuration: the per-session projection of a level.

struct SessionConfig {
  std::string session_id;
  std::string patient_id;
  std::string program_id;
  std::string game_id;
  int level_number = 1;
  int planned_tries = 1;
  double try_time = 0.0;
  double max_time = 0.0;
  std::vector<ObjectSpec> object_pool;
  int distractors_per_try = 0;
  double appearance_interval = kDefaultAppearanceInterval;
  std::uint64_t seed = 0;

  bool operator==(const SessionConfig&) const = default;
};

struct SessionIdentity {
  std::string session_id;
  std::string patient_id;
  std::string game_id;
  std::uint64_t seed = 0;
};

inline SessionConfig derive_session_config(const LevelDefinition& level, const TreatmentProgram& program,
                                           const SessionIdentity& identity) {
  SessionConfig c;
  c.session_id = identity.session_id;
  c.patient_id = identity.patient_id;
  c.program_id = program.program_id;
  c.game_id = identity.game_id;
  c.level_number = level.level_number;
  c.planned_tries = level.tries_per_session;
  c.try_time = level.try_time;
  c.max_time = level.max_time;
  c.object_pool = level.objects;
  c.distractors_per_try = level.distractors_per_try;
  c.appearance_interval = level.appearance_interval;
  c.seed = identity.seed;
  return c;
}

inline ValidationIssues check_session_config(const SessionConfig& c) {
  ValidationIssues issues;
  if (!is_valid_id(c.session_id)) issues.push_back({"session_id", "invalid id"});
  if (c.planned_tries < 1) issues.push_back({"planned_tries", "must be >= 1"});
  if (!(c.try_time > 0.0)) issues.push_back({"try_time", "must be > 0"});
  if (!(c.max_time > 0.0)) issues.push_back({"max_time", "must be > 0"});
  if (c.planned_tries >= 1 && c.try_time * c.planned_tries > c.max_time)
    issues.push_back({"try_time", "try_time * planned_tries exceeds max_time"});
  if (c.distractors_per_try < 0 || static_cast<std::size_t>(c.distractors_per_try) + 1 > c.object_pool.size())
    issues.push_back({"distractors_per_try", "distractors_per_try + 1 must not exceed the object pool"});
  if (c.appearance_interval < 0.0 || c.distractors_per_try * c.appearance_interval >= c.try_time)
    issues.push_back({"appearance_interval", "the last object must appear before the try deadline"});
  std::set<std::string> ids;
  for (const auto& o : c.object_pool)
    if (!ids.insert(o.object_id).second) issues.push_back({"object_pool", "duplicate object id " + o.object_id});
  return issues;
}

}  // namespace artherapist
