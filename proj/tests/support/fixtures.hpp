#pragma once

#include <unistd.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "artherapist/domain.hpp"
#include "artherapist/metrics.hpp"
#include "artherapist/presets.hpp"
#include "artherapist/rng.hpp"
#include "artherapist/session_engine.hpp"
#include "reference_scorer.hpp"

namespace fixtures {

using namespace artherapist;

// Fresh directory removed on scope exit.
class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("artherapist-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string str() const { return path_.string(); }

 private:
  std::filesystem::path path_;
};

// Golden session: T=10, theta=5, CRT=[1,2,1.5,2.5,3,2], OE=1, CE=1, K=2.
inline SessionTally golden_tally() {
  SessionTally t;
  t.T = 10;
  t.C = 6;
  t.OE = 1;
  t.CE = 1;
  t.K = 2;
  t.crt_list = {1.0, 2.0, 1.5, 2.5, 3.0, 2.0};
  t.theta = 5.0;
  t.GT = 30.0;
  return t;
}

// A random per-try outcome list, with its tally.
struct RandomSession {
  std::vector<reference::Try> tries;
  SessionTally tally;
};

inline RandomSession random_session(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> T_dist(1, 40);
  std::uniform_real_distribution<double> theta_dist(0.05, 20.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  RandomSession s;
  const int T = T_dist(gen);
  const double theta = theta_dist(gen);
  // Skew the outcome mix per session so C = 0, C = 1 and C + I = 0 all occur.
  double w[4];
  for (double& x : w) x = unit(gen) < 0.25 ? 0.0 : unit(gen);
  if (w[0] + w[1] + w[2] + w[3] == 0.0) w[3] = 1.0;
  std::discrete_distribution<int> outcome({w[0], w[1], w[2], w[3]});
  s.tally.T = T;
  s.tally.theta = theta;
  for (int i = 0; i < T; ++i) {
    reference::Try t;
    t.outcome = static_cast<reference::Outcome>(outcome(gen));
    switch (t.outcome) {
      case reference::Outcome::correct: {
        // Occasionally exactly theta, the closed end of the interval.
        t.response_time = unit(gen) < 0.05 ? theta : std::max(theta * unit(gen), 1e-9);
        ++s.tally.C;
        s.tally.crt_list.push_back(t.response_time);
        break;
      }
      case reference::Outcome::commission: ++s.tally.CE; break;
      case reference::Outcome::omission: ++s.tally.OE; break;
      case reference::Outcome::uncompleted: ++s.tally.K; break;
    }
    s.tries.push_back(t);
  }
  s.tally.GT = unit(gen) * theta * T;
  return s;
}

// Small pool with a tight appearance interval.
inline SessionConfig test_config(std::uint64_t seed = 1, int tries = 10, int objects = 4, int distractors = 2,
                                 double theta = 5.0) {
  SessionConfig c;
  c.session_id = "test-session";
  c.patient_id = "p1";
  c.program_id = "prog1";
  c.game_id = "g1";
  c.level_number = 1;
  c.planned_tries = tries;
  c.try_time = theta;
  c.max_time = theta * tries + 1.0;
  c.object_pool = preset_objects(objects);
  c.distractors_per_try = distractors;
  c.appearance_interval = std::min(0.5, theta / (distractors + 1) / 2);
  c.seed = seed;
  return c;
}

// Drives an engine with arbitrary legal actions, including exact-deadline
// responses, late timeout notices and aborts.
inline SessionEngine random_engine_session(std::uint64_t seed) {
  SplitMix64 r(seed);
  const int tries = 1 + static_cast<int>(r.below(25));
  const int objects = 1 + static_cast<int>(r.below(6));
  const int distractors = static_cast<int>(r.below(static_cast<std::uint64_t>(objects)));
  const double theta = r.uniform(0.2, 10.0);
  SessionEngine engine = SessionEngine::start(test_config(r.next_u64(), tries, objects, distractors, theta));
  const double abort_rate = r.uniform01() < 0.3 ? 0.05 : 0.0;
  while (!engine.finished()) {
    const double start = engine.state().try_start;
    const double deadline = engine.try_deadline();
    const double u = r.uniform01();
    if (r.uniform01() < abort_rate) {
      engine.abort(start + (deadline - start) * r.uniform01());
    } else if (u < 0.45) {
      engine.record_response(engine.state().current_target, std::max(start + theta * r.uniform01(),
                                                                       std::nextafter(start, deadline)),
                             Vec3{r.uniform01(), r.uniform01(), r.uniform01()});
    } else if (u < 0.5) {
      engine.record_response(engine.state().current_target, deadline, std::nullopt);
    } else if (u < 0.7) {
      const auto& presented = engine.state().presented;
      const std::string pick = presented[static_cast<std::size_t>(r.below(presented.size()))];
      engine.record_response(pick, std::max(start + theta * r.uniform01(), std::nextafter(start, deadline)),
                             std::nullopt);
    } else {
      engine.deliver_timeout(deadline + r.uniform01());
    }
  }
  return engine;
}

// Plays the golden session through a real engine: six correct answers with
// response times 1, 2, 1.5, 2.5, 3, 2, one omission, one commission, then
// an abort leaving two tries uncompleted. Needs T = 10, theta = 5 and at
// least two objects shown per try.
inline SessionEngine golden_engine(const SessionConfig& config) {
  SessionEngine e = SessionEngine::start(config);
  for (const double rt : {1.0, 2.0, 1.5, 2.5, 3.0, 2.0})
    e.record_response(e.state().current_target, e.state().try_start + rt, std::nullopt);
  e.deliver_timeout(e.try_deadline());
  for (const auto& id : e.state().presented)
    if (id != e.state().current_target) {
      e.record_response(id, e.state().try_start + 1.0, std::nullopt);
      break;
    }
  e.abort(e.state().try_start + 0.5);
  return e;
}

inline SessionConfig sim_level_config(const std::string& session_id, int level = 1, std::uint64_t seed = 1) {
  return derive_session_config(*simulation_game().level(level), simulation_program(),
                               {session_id, "p1", kSimGameId, seed});
}

}  // namespace fixtures
