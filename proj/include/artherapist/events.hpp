#pragma once

// Session events and their two encodings: the on-disk line record and the
// JSON form used on the wire.
//
// Line record grammar (one event per line, UTF-8, '\n' terminated, fields
// separated by a single space, fixed order):
//
//   record     = "session_id=" id " seq=" uint " at=" num " kind=" kind body
//   body       = SessionStarted:    " config_digest=" 16*16HEXLOWER
//              | TryPresented:      " try_index=" uint " target=" id " placements=" placement *(";" placement)
//              | ResponseRecorded:  " try_index=" uint " object_id=" id " response_time=" num
//                                   " player_position=" (num "," num "," num / "-")
//              | TryTimedOut:       " try_index=" uint
//              | SessionAborted:    " after_try_index=" int
//              | SessionCompleted:  ""
//   placement  = id "@" num "," num "," num "/" num        ; position, appearance offset
//   num        = shortest round-trip decimal (std::to_chars)
//
// "-" as player_position marks a redacted position.

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include <json.hpp>

#include "artherapist/domain.hpp"
#include "artherapist/error.hpp"
#include "artherapist/rng.hpp"

namespace artherapist {

struct Placement {
  std::string object_id;
  Vec3 position;
  double appearance_offset = 0.0;

  bool operator==(const Placement&) const = default;
};

struct SessionStarted {
  std::string config_digest;
  bool operator==(const SessionStarted&) const = default;
};

struct TryPresented {
  int try_index = 0;
  std::string target_object_id;
  std::vector<Placement> placements;
  bool operator==(const TryPresented&) const = default;
};

struct ResponseRecorded {
  int try_index = 0;
  std::string object_id;
  double response_time = 0.0;
  std::optional<Vec3> player_position;  // nullopt when redacted
  bool operator==(const ResponseRecorded&) const = default;
};

struct TryTimedOut {
  int try_index = 0;
  bool operator==(const TryTimedOut&) const = default;
};

struct SessionAborted {
  int after_try_index = -1;  // last resolved try, -1 when none
  bool operator==(const SessionAborted&) const = default;
};

struct SessionCompleted {
  bool operator==(const SessionCompleted&) const = default;
};

using EventBody =
    std::variant<SessionStarted, TryPresented, ResponseRecorded, TryTimedOut, SessionAborted, SessionCompleted>;

struct SessionEvent {
  std::string session_id;
  std::int64_t seq = 0;
  double at = 0.0;  // seconds since session start
  EventBody body;

  bool is_terminal() const {
    return std::holds_alternative<SessionAborted>(body) || std::holds_alternative<SessionCompleted>(body);
  }

  bool operator==(const SessionEvent&) const = default;
};

inline std::string_view kind_name(const EventBody& body) {
  static constexpr std::string_view names[] = {"SessionStarted", "TryPresented",   "ResponseRecorded",
                                               "TryTimedOut",    "SessionAborted", "SessionCompleted"};
  return names[body.index()];
}

// ---------------------------------------------------------------------------
// Number formatting shared by both encodings.

inline std::string format_number(double v) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw Error(ErrorCode::invalid_argument, "unformattable number");
  return std::string(buf, end);
}

inline std::optional<double> parse_number(std::string_view s) {
  double v = 0.0;
  if (s.empty()) return std::nullopt;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

template <class Int>
std::optional<Int> parse_integer(std::string_view s) {
  Int v{};
  if (s.empty()) return std::nullopt;
  auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string config_digest(const SessionConfig& c) {
  json objects = json::array();
  for (const auto& o : c.object_pool) objects.push_back(to_json(o));
  const json canonical = {{"session_id", c.session_id},       {"patient_id", c.patient_id},
                          {"program_id", c.program_id},       {"game_id", c.game_id},
                          {"level_number", c.level_number},   {"planned_tries", c.planned_tries},
                          {"try_time", c.try_time},           {"max_time", c.max_time},
                          {"object_pool", std::move(objects)}, {"distractors_per_try", c.distractors_per_try},
                          {"appearance_interval", c.appearance_interval}, {"seed", c.seed}};
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical.dump())));
  return buf;
}

// ---------------------------------------------------------------------------
// Line record encoding.

inline std::string encode_vec3(const Vec3& v) {
  return format_number(v.x) + "," + format_number(v.y) + "," + format_number(v.z);
}

inline std::string encode_line(const SessionEvent& e) {
  std::string out = "session_id=" + e.session_id + " seq=" + std::to_string(e.seq) + " at=" + format_number(e.at) +
                    " kind=" + std::string(kind_name(e.body));
  std::visit(
      [&out](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, SessionStarted>) {
          out += " config_digest=" + b.config_digest;
        } else if constexpr (std::is_same_v<B, TryPresented>) {
          out += " try_index=" + std::to_string(b.try_index) + " target=" + b.target_object_id + " placements=";
          for (std::size_t i = 0; i < b.placements.size(); ++i) {
            const auto& p = b.placements[i];
            if (i) out += ';';
            out += p.object_id + "@" + encode_vec3(p.position) + "/" + format_number(p.appearance_offset);
          }
        } else if constexpr (std::is_same_v<B, ResponseRecorded>) {
          out += " try_index=" + std::to_string(b.try_index) + " object_id=" + b.object_id +
                 " response_time=" + format_number(b.response_time) +
                 " player_position=" + (b.player_position ? encode_vec3(*b.player_position) : std::string("-"));
        } else if constexpr (std::is_same_v<B, TryTimedOut>) {
          out += " try_index=" + std::to_string(b.try_index);
        } else if constexpr (std::is_same_v<B, SessionAborted>) {
          out += " after_try_index=" + std::to_string(b.after_try_index);
        }
      },
      e.body);
  return out;
}

namespace detail {

class LineFields {
 public:
  LineFields(std::string_view line, std::size_t line_number) : line_number_(line_number) {
    std::size_t pos = 0;
    while (pos <= line.size()) {
      const auto space = line.find(' ', pos);
      const auto token = line.substr(pos, space == std::string_view::npos ? std::string_view::npos : space - pos);
      const auto eq = token.find('=');
      if (eq == std::string_view::npos || eq == 0) fail("malformed field '" + std::string(token) + "'");
      fields_.emplace_back(token.substr(0, eq), token.substr(eq + 1));
      if (space == std::string_view::npos) break;
      pos = space + 1;
    }
  }

  std::string_view take(std::string_view key) {
    if (next_ >= fields_.size() || fields_[next_].first != key)
      fail("expected field '" + std::string(key) + "' at position " + std::to_string(next_));
    return fields_[next_++].second;
  }

  void finish() const {
    if (next_ != fields_.size()) fail("unexpected trailing field '" + std::string(fields_[next_].first) + "'");
  }

  double number(std::string_view key) {
    const auto raw = take(key);
    auto v = parse_number(raw);
    if (!v) fail("bad number in '" + std::string(key) + "'");
    return *v;
  }

  template <class Int>
  Int integer(std::string_view key) {
    const auto raw = take(key);
    auto v = parse_integer<Int>(raw);
    if (!v) fail("bad integer in '" + std::string(key) + "'");
    return *v;
  }

  int index(std::string_view key) {
    const int v = integer<int>(key);
    if (v < 0) fail("negative '" + std::string(key) + "'");
    return v;
  }

  std::string id(std::string_view key) {
    const auto raw = take(key);
    if (!is_valid_id(raw)) fail("bad identifier in '" + std::string(key) + "'");
    return std::string(raw);
  }

  Vec3 vec3(std::string_view raw) const {
    const auto c1 = raw.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : raw.find(',', c1 + 1);
    if (c2 == std::string_view::npos) fail("bad vector '" + std::string(raw) + "'");
    auto x = parse_number(raw.substr(0, c1));
    auto y = parse_number(raw.substr(c1 + 1, c2 - c1 - 1));
    auto z = parse_number(raw.substr(c2 + 1));
    if (!x || !y || !z) fail("bad vector '" + std::string(raw) + "'");
    return {*x, *y, *z};
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw Error(ErrorCode::corrupt_log, "line " + std::to_string(line_number_) + ": " + message);
  }

 private:
  std::vector<std::pair<std::string_view, std::string_view>> fields_;
  std::size_t next_ = 0;
  std::size_t line_number_;
};

}  // namespace detail

// line excludes the trailing newline; line_number is 1-based, for messages.
inline SessionEvent decode_line(std::string_view line, std::size_t line_number = 1) {
  detail::LineFields f(line, line_number);
  SessionEvent e;
  e.session_id = f.id("session_id");
  e.seq = f.integer<std::int64_t>("seq");
  if (e.seq < 0) f.fail("negative seq");
  e.at = f.number("at");
  const auto kind = f.take("kind");
  if (kind == "SessionStarted") {
    SessionStarted b;
    b.config_digest = std::string(f.take("config_digest"));
    e.body = std::move(b);
  } else if (kind == "TryPresented") {
    TryPresented b;
    b.try_index = f.index("try_index");
    b.target_object_id = f.id("target");
    std::string_view list = f.take("placements");
    while (!list.empty()) {
      const auto semi = list.find(';');
      const auto item = list.substr(0, semi);
      const auto at_sign = item.find('@');
      const auto slash = item.rfind('/');
      if (at_sign == std::string_view::npos || slash == std::string_view::npos || slash < at_sign)
        f.fail("bad placement '" + std::string(item) + "'");
      Placement p;
      p.object_id = std::string(item.substr(0, at_sign));
      if (!is_valid_id(p.object_id)) f.fail("bad placement object id");
      p.position = f.vec3(item.substr(at_sign + 1, slash - at_sign - 1));
      auto offset = parse_number(item.substr(slash + 1));
      if (!offset) f.fail("bad appearance offset");
      p.appearance_offset = *offset;
      b.placements.push_back(std::move(p));
      if (semi == std::string_view::npos) break;
      list.remove_prefix(semi + 1);
      if (list.empty()) f.fail("trailing ';' in placements");
    }
    if (b.placements.empty()) f.fail("empty placements");
    e.body = std::move(b);
  } else if (kind == "ResponseRecorded") {
    ResponseRecorded b;
    b.try_index = f.index("try_index");
    b.object_id = f.id("object_id");
    b.response_time = f.number("response_time");
    const auto pos = f.take("player_position");
    if (pos != "-") b.player_position = f.vec3(pos);
    e.body = std::move(b);
  } else if (kind == "TryTimedOut") {
    e.body = TryTimedOut{f.index("try_index")};
  } else if (kind == "SessionAborted") {
    e.body = SessionAborted{f.integer<int>("after_try_index")};
  } else if (kind == "SessionCompleted") {
    e.body = SessionCompleted{};
  } else {
    f.fail("unknown kind '" + std::string(kind) + "'");
  }
  f.finish();
  return e;
}

// ---------------------------------------------------------------------------
// JSON encoding, field names as in the line format.

inline json to_json(const SessionEvent& e) {
  json out = {{"session_id", e.session_id}, {"seq", e.seq}, {"at", e.at}, {"kind", kind_name(e.body)}};
  std::visit(
      [&out](const auto& b) {
        using B = std::decay_t<decltype(b)>;
        if constexpr (std::is_same_v<B, SessionStarted>) {
          out["config_digest"] = b.config_digest;
        } else if constexpr (std::is_same_v<B, TryPresented>) {
          out["try_index"] = b.try_index;
          out["target"] = b.target_object_id;
          json placements = json::array();
          for (const auto& p : b.placements)
            placements.push_back({{"object_id", p.object_id},
                                  {"position", to_json(p.position)},
                                  {"appearance_offset", p.appearance_offset}});
          out["placements"] = std::move(placements);
        } else if constexpr (std::is_same_v<B, ResponseRecorded>) {
          out["try_index"] = b.try_index;
          out["object_id"] = b.object_id;
          out["response_time"] = b.response_time;
          out["player_position"] = b.player_position ? to_json(*b.player_position) : json(nullptr);
        } else if constexpr (std::is_same_v<B, TryTimedOut>) {
          out["try_index"] = b.try_index;
        } else if constexpr (std::is_same_v<B, SessionAborted>) {
          out["after_try_index"] = b.after_try_index;
        }
      },
      e.body);
  return out;
}

// Throws Error(validation_failed) describing the first problem. A missing
// session_id is filled from default_session_id.
inline SessionEvent event_from_json(const json& j, const std::string& default_session_id) {
  ValidationIssues issues;
  detail::FieldReader r(j, "", issues);
  auto fail = [&]() { throw Error(ErrorCode::validation_failed, "malformed event: " + summarize(issues)); };
  if (!r.is_object()) fail();
  SessionEvent e;
  auto sid = r.string("session_id", false);
  e.session_id = sid ? *sid : default_session_id;
  if (!is_valid_id(e.session_id)) r.fail("session_id", "invalid id");
  const json* seq = r.find("seq", true);
  if (seq && (!seq->is_number_integer() || seq->get<std::int64_t>() < 0)) r.fail("seq", "expected a non-negative integer");
  auto at = r.number("at");
  auto kind = r.string("kind");
  if (!issues.empty()) fail();
  e.seq = seq->get<std::int64_t>();
  e.at = *at;
  auto index = [&](const char* key, int lowest = 0) {
    auto v = r.integer(key);
    if (v && (*v < lowest || *v > std::numeric_limits<int>::max())) r.fail(key, "out of range");
    return v ? static_cast<int>(*v) : 0;
  };
  if (*kind == "SessionStarted") {
    auto digest = r.string("config_digest");
    e.body = SessionStarted{digest.value_or("")};
  } else if (*kind == "TryPresented") {
    TryPresented b;
    b.try_index = index("try_index");
    b.target_object_id = r.id("target").value_or("");
    if (const json* placements = r.array("placements")) {
      if (placements->empty()) r.fail("placements", "must be non-empty");
      for (std::size_t i = 0; i < placements->size(); ++i) {
        detail::FieldReader pr((*placements)[i], "placements[" + std::to_string(i) + "]", issues);
        Placement p;
        p.object_id = pr.id("object_id").value_or("");
        if (const json* pos = pr.find("position", true))
          if (auto v = detail::read_vec3(*pos, pr.path("position"), issues)) p.position = *v;
        p.appearance_offset = pr.number("appearance_offset").value_or(0.0);
        b.placements.push_back(std::move(p));
      }
    }
    e.body = std::move(b);
  } else if (*kind == "ResponseRecorded") {
    ResponseRecorded b;
    b.try_index = index("try_index");
    b.object_id = r.id("object_id").value_or("");
    b.response_time = r.number("response_time").value_or(0.0);
    if (const json* pos = r.find("player_position", false); pos && !pos->is_null())
      b.player_position = detail::read_vec3(*pos, "player_position", issues);
    e.body = std::move(b);
  } else if (*kind == "TryTimedOut") {
    e.body = TryTimedOut{index("try_index")};
  } else if (*kind == "SessionAborted") {
    e.body = SessionAborted{index("after_try_index", -1)};
  } else if (*kind == "SessionCompleted") {
    e.body = SessionCompleted{};
  } else {
    r.fail("kind", "unknown event kind");
  }
  if (!issues.empty()) fail();
  return e;
}

}  // namespace artherapist
