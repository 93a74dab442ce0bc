#pragma once

// Run-time session machinery: a deterministic state machine for one game
// session, the replay that rebuilds a tally from its event log, and the
// post-session scoring and level progression.
//
// Phases:   idle -> presenting -> awaiting_response -> (next try | finished)
//
// Time is always supplied by the caller in seconds since session start. The
// engine never reads a clock.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "artherapist/domain.hpp"
#include "artherapist/error.hpp"
#include "artherapist/events.hpp"
#include "artherapist/metrics.hpp"
#include "artherapist/rng.hpp"

namespace artherapist {

enum class SessionPhase { idle, presenting, awaiting_response, finished };

struct LiveCounters {
  int C = 0;
  int OE = 0;
  int CE = 0;
  int K = 0;

  bool operator==(const LiveCounters&) const = default;
};

struct SessionState {
  SessionPhase phase = SessionPhase::idle;
  int current_try = 0;  // try being awaited; equals the number of resolved tries
  double clock = 0.0;
  double try_start = 0.0;
  LiveCounters counters;
  std::vector<double> crt_list;
  std::string current_target;
  std::vector<std::string> presented;  // object ids of the current try
  std::uint64_t rng_state = 0;
  std::optional<Vec3> current_location;
};

struct ResponseResult {
  TryOutcome outcome = TryOutcome::correct;
  std::vector<SessionEvent> events;  // ResponseRecorded, then TryPresented or SessionCompleted
};

class SessionEngine {
 public:
  // Validates the config, emits SessionStarted and presents try 0.
  static SessionEngine start(SessionConfig config) {
    const auto issues = check_session_config(config);
    if (!issues.empty()) throw Error(ErrorCode::invalid_argument, "invalid session config: " + summarize(issues));
    SessionEngine engine(std::move(config));
    engine.state_.phase = SessionPhase::presenting;
    engine.emit(0.0, SessionStarted{config_digest(engine.config_)});
    engine.present_next(0.0);
    return engine;
  }

  ResponseResult record_response(std::string_view object_id, double at, std::optional<Vec3> player_position) {
    require_awaiting("record_response");
    require_time(at);
    if (!(at > state_.try_start))
      throw Error(ErrorCode::invalid_argument, "response must come after the try was presented");
    if (at > try_deadline())
      throw Error(ErrorCode::engine_state, "response after the try deadline; deliver the timeout first");
    // Closed interval: a response exactly at the deadline counts, and
    // rounding in at - try_start must not push it past theta.
    const double response_time = std::min(at - state_.try_start, config_.try_time);
    if (std::find(state_.presented.begin(), state_.presented.end(), object_id) == state_.presented.end())
      throw Error(ErrorCode::invalid_argument, "object '" + std::string(object_id) + "' was not presented in try " +
                                                   std::to_string(state_.current_try));
    const bool correct = object_id == state_.current_target;
    const auto first = events_.size();
    emit(at, ResponseRecorded{state_.current_try, std::string(object_id), response_time, player_position});
    if (correct) {
      ++state_.counters.C;
      state_.crt_list.push_back(response_time);
    } else {
      ++state_.counters.CE;
    }
    state_.current_location = player_position;
    advance(at);
    return {correct ? TryOutcome::correct : TryOutcome::commission_error, tail(first)};
  }

  // The omission is logged at the try deadline; `at` is when the caller
  // noticed and must not precede it. try_index, when given, must name the
  // awaited try.
  std::vector<SessionEvent> deliver_timeout(double at, std::optional<int> try_index = std::nullopt) {
    require_awaiting("deliver_timeout");
    if (try_index && *try_index != state_.current_try)
      throw Error(ErrorCode::engine_state, "try " + std::to_string(*try_index) + " is already resolved");
    const double deadline = state_.try_start + config_.try_time;
    if (!std::isfinite(at) || at < deadline)
      throw Error(ErrorCode::invalid_argument, "timeout delivered before the try deadline");
    const auto first = events_.size();
    emit(deadline, TryTimedOut{state_.current_try});
    ++state_.counters.OE;
    advance(deadline);
    return tail(first);
  }

  // Every unresolved try (the awaited one and all never presented) becomes
  // uncompleted.
  SessionEvent abort(double at) {
    if (state_.phase == SessionPhase::finished) throw Error(ErrorCode::engine_state, "session already finished");
    require_time(at);
    if (state_.phase == SessionPhase::awaiting_response && at > state_.try_start + config_.try_time)
      throw Error(ErrorCode::engine_state, "abort after the try deadline; deliver the timeout first");
    state_.counters.K = config_.planned_tries - state_.current_try;
    emit(at, SessionAborted{state_.current_try - 1});
    state_.phase = SessionPhase::finished;
    state_.presented.clear();
    state_.current_target.clear();
    return events_.back();
  }

  const SessionConfig& config() const { return config_; }
  const SessionState& state() const { return state_; }
  const std::vector<SessionEvent>& events() const { return events_; }
  bool finished() const { return state_.phase == SessionPhase::finished; }

  double try_deadline() const { return state_.try_start + config_.try_time; }

  // Placements of the awaited try.
  const TryPresented& current_presentation() const {
    require_awaiting("current_presentation");
    return current_presentation_;
  }

  SessionTally live_tally() const {
    if (!finished()) throw Error(ErrorCode::engine_state, "session not finished");
    SessionTally t;
    t.T = config_.planned_tries;
    t.C = state_.counters.C;
    t.OE = state_.counters.OE;
    t.CE = state_.counters.CE;
    t.K = state_.counters.K;
    t.crt_list = state_.crt_list;
    t.theta = config_.try_time;
    t.GT = events_.back().at;
    return t;
  }

 private:
  explicit SessionEngine(SessionConfig config) : config_(std::move(config)), rng_(config_.seed) {
    state_.rng_state = rng_.state();
  }

  void require_awaiting(const char* what) const {
    if (state_.phase != SessionPhase::awaiting_response)
      throw Error(ErrorCode::engine_state, std::string(what) + ": no try is awaiting a response");
  }

  void require_time(double at) const {
    if (!std::isfinite(at) || at < state_.clock) throw Error(ErrorCode::invalid_argument, "time must not go backwards");
  }

  void emit(double at, EventBody body) {
    events_.push_back(SessionEvent{config_.session_id, static_cast<std::int64_t>(events_.size()), at, std::move(body)});
    state_.clock = at;
  }

  std::vector<SessionEvent> tail(std::size_t first) const {
    return {events_.begin() + static_cast<std::ptrdiff_t>(first), events_.end()};
  }

  void advance(double at) {
    ++state_.current_try;
    if (state_.current_try == config_.planned_tries) {
      state_.phase = SessionPhase::finished;
      state_.presented.clear();
      state_.current_target.clear();
      emit(at, SessionCompleted{});
    } else {
      state_.phase = SessionPhase::presenting;
      present_next(at);
    }
  }

  // Target uniform over the pool, distractors without replacement from the
  // rest, appearance order shuffled, positions uniform in each region.
  void present_next(double at) {
    SplitMix64 r = rng_.split();
    state_.rng_state = rng_.state();
    const auto& pool = config_.object_pool;
    std::vector<std::size_t> idx(pool.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    const std::size_t shown = static_cast<std::size_t>(config_.distractors_per_try) + 1;
    for (std::size_t i = 0; i < shown; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(r.below(pool.size() - i));
      std::swap(idx[i], idx[j]);
    }
    const std::size_t target = idx[0];
    for (std::size_t i = shown; i > 1; --i) std::swap(idx[i - 1], idx[static_cast<std::size_t>(r.below(i))]);

    TryPresented p;
    p.try_index = state_.current_try;
    p.target_object_id = pool[target].object_id;
    state_.presented.clear();
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& spec = pool[idx[i]];
      const auto& box = spec.placement_region;
      Vec3 pos{r.uniform(box.min.x, box.max.x), r.uniform(box.min.y, box.max.y), r.uniform(box.min.z, box.max.z)};
      p.placements.push_back({spec.object_id, pos, static_cast<double>(i) * config_.appearance_interval});
      state_.presented.push_back(spec.object_id);
    }
    state_.current_target = p.target_object_id;
    state_.try_start = at;
    current_presentation_ = p;
    emit(at, std::move(p));
    state_.phase = SessionPhase::awaiting_response;
  }

  SessionConfig config_;
  SplitMix64 rng_;
  SessionState state_;
  TryPresented current_presentation_;
  std::vector<SessionEvent> events_;
};

// ---------------------------------------------------------------------------
// Replay.

// Incremental log validator. Feeding a full sealed log and calling finish()
// is exactly replay().
class ReplayAccumulator {
 public:
  ReplayAccumulator(double theta, int planned_tries) : theta_(theta), planned_(planned_tries) {
    if (planned_tries < 1 || !(theta > 0.0)) throw Error(ErrorCode::invalid_argument, "invalid replay parameters");
  }

  void feed(const SessionEvent& e) {
    if (e.seq != next_seq_)
      fail(e, "sequence gap: expected seq " + std::to_string(next_seq_) + ", got " + std::to_string(e.seq));
    if (next_seq_ == 0) session_id_ = e.session_id;
    else if (e.session_id != session_id_) fail(e, "session id changed within the log");
    if (!std::isfinite(e.at) || e.at < last_at_) fail(e, "event time went backwards");
    if (finished_) fail(e, "event after the terminal event");
    if (next_seq_ == 0 && !std::holds_alternative<SessionStarted>(e.body)) fail(e, "log must begin with SessionStarted");

    std::visit([&](const auto& b) { apply(e, b); }, e.body);
    ++next_seq_;
    last_at_ = e.at;
  }

  bool finished() const { return finished_; }
  std::int64_t next_seq() const { return next_seq_; }

  SessionTally finish() const {
    if (!finished_) throw Error(ErrorCode::corrupt_log, "log has no terminal event");
    return tally_;
  }

 private:
  [[noreturn]] void fail(const SessionEvent& e, const std::string& message) const {
    throw Error(ErrorCode::corrupt_log, "event seq " + std::to_string(e.seq) + ": " + message);
  }

  void apply(const SessionEvent& e, const SessionStarted&) {
    if (e.seq != 0) fail(e, "SessionStarted must be the first event");
    tally_.T = planned_;
    tally_.theta = theta_;
  }

  void apply(const SessionEvent& e, const TryPresented& b) {
    if (awaiting_) fail(e, "try presented before the previous one was resolved");
    if (b.try_index != resolved_) fail(e, "try presented out of order");
    if (b.try_index >= planned_) fail(e, "more tries presented than planned");
    target_ = b.target_object_id;
    presented_.clear();
    for (const auto& p : b.placements) {
      if (std::find(presented_.begin(), presented_.end(), p.object_id) != presented_.end())
        fail(e, "object placed twice in one try");
      presented_.push_back(p.object_id);
    }
    if (std::find(presented_.begin(), presented_.end(), target_) == presented_.end())
      fail(e, "target is not among the placements");
    awaiting_ = true;
  }

  void require_resolvable(const SessionEvent& e, int try_index) {
    if (try_index < resolved_) fail(e, "try " + std::to_string(try_index) + " resolved twice");
    if (!awaiting_ || try_index != resolved_) fail(e, "resolution of a try that is not awaiting a response");
  }

  void apply(const SessionEvent& e, const ResponseRecorded& b) {
    require_resolvable(e, b.try_index);
    if (std::find(presented_.begin(), presented_.end(), b.object_id) == presented_.end())
      fail(e, "response to an object that was not presented");
    if (!(b.response_time > 0.0 && b.response_time <= theta_)) fail(e, "response time outside (0, theta]");
    if (b.object_id == target_) {
      ++tally_.C;
      tally_.crt_list.push_back(b.response_time);
    } else {
      ++tally_.CE;
    }
    resolve();
  }

  void apply(const SessionEvent& e, const TryTimedOut& b) {
    require_resolvable(e, b.try_index);
    ++tally_.OE;
    resolve();
  }

  void apply(const SessionEvent& e, const SessionAborted& b) {
    if (b.after_try_index != resolved_ - 1) fail(e, "abort does not follow the last resolved try");
    tally_.K = planned_ - resolved_;
    terminate(e);
  }

  void apply(const SessionEvent& e, const SessionCompleted&) {
    if (awaiting_ || resolved_ != planned_) fail(e, "session completed with unresolved tries");
    terminate(e);
  }

  void resolve() {
    ++resolved_;
    awaiting_ = false;
  }

  void terminate(const SessionEvent& e) {
    tally_.GT = e.at;
    finished_ = true;
  }

  double theta_;
  int planned_;
  std::int64_t next_seq_ = 0;
  std::string session_id_;
  double last_at_ = 0.0;
  bool finished_ = false;
  bool awaiting_ = false;
  int resolved_ = 0;
  std::string target_;
  std::vector<std::string> presented_;
  SessionTally tally_;
};

inline SessionTally replay(std::span<const SessionEvent> events, double theta, int planned_tries) {
  ReplayAccumulator acc(theta, planned_tries);
  for (const auto& e : events) acc.feed(e);
  return acc.finish();
}

// ---------------------------------------------------------------------------
// Level progression.

enum class TransitionDecision { advance, stay, regress };

inline const char* to_string(TransitionDecision d) {
  switch (d) {
    case TransitionDecision::advance: return "advance";
    case TransitionDecision::stay: return "stay";
    case TransitionDecision::regress: return "regress";
  }
  return "stay";
}

struct LevelTransition {
  TransitionDecision decision = TransitionDecision::stay;
  int from_level = 1;
  int to_level = 1;
  std::optional<double> pi;
  double threshold = 0.0;  // the threshold PI was compared against
  std::string reason;

  bool operator==(const LevelTransition&) const = default;
};

// sessions_at_level counts sessions played at current_level, including the
// one being scored.
inline LevelTransition decide_level_transition(const SessionMetrics& metrics, const ProgressionPolicy& policy,
                                               int sessions_at_level, int current_level, int max_level) {
  LevelTransition t;
  t.from_level = t.to_level = current_level;
  t.pi = metrics.PI;
  const bool high = metrics.PI && *metrics.PI >= policy.advance_threshold;
  const bool low = !metrics.PI || *metrics.PI < policy.regress_threshold;
  if (high) {
    t.threshold = policy.advance_threshold;
    if (sessions_at_level < policy.min_sessions_at_level) {
      t.reason = "minimum sessions at level not reached";
    } else if (current_level >= max_level) {
      t.reason = "already at the highest level";
    } else {
      t.decision = TransitionDecision::advance;
      t.to_level = current_level + 1;
      t.reason = "pi at or above advance threshold";
    }
  } else if (low) {
    t.threshold = policy.regress_threshold;
    if (current_level <= 1) {
      t.reason = "already at the lowest level";
    } else {
      t.decision = TransitionDecision::regress;
      t.to_level = current_level - 1;
      t.reason = metrics.PI ? "pi below regress threshold" : "pi absent";
    }
  } else {
    t.threshold = policy.advance_threshold;
    t.reason = "pi between thresholds";
  }
  return t;
}

// ---------------------------------------------------------------------------
// Post-session scoring.

struct ProgressionContext {
  ProgressionPolicy policy;
  int sessions_at_level = 1;
  int max_level = 1;
};

struct FinalizedSession {
  SessionTally tally;
  SessionMetrics metrics;
  LevelTransition transition;
  PatientProfile profile;  // updated copy
};

// The live tally must match a replay of the log exactly; a mismatch is an
// engine bug and nothing should be persisted.
inline FinalizedSession finalize_session(const SessionTally& live, std::span<const SessionEvent> events,
                                         const ProgressionContext& progression, PatientProfile profile) {
  if (events.empty() || !events.back().is_terminal())
    throw Error(ErrorCode::engine_state, "session has no terminal event");
  const SessionTally replayed = replay(events, live.theta, live.T);
  if (!(replayed == live)) throw Error(ErrorCode::divergence, "live counters diverge from the replayed event log");
  FinalizedSession out;
  out.tally = replayed;
  out.metrics = compute_session_metrics(replayed);
  out.transition = decide_level_transition(out.metrics, progression.policy, progression.sessions_at_level,
                                           profile.level, progression.max_level);
  if (out.metrics.PI) profile.performance_index = out.metrics.PI;
  profile.level = out.transition.to_level;
  out.profile = std::move(profile);
  return out;
}

inline FinalizedSession finalize_session(const SessionEngine& engine, const ProgressionContext& progression,
                                         PatientProfile profile) {
  return finalize_session(engine.live_tally(), engine.events(), progression, std::move(profile));
}

}  // namespace artherapist
