#pragma once

// Synthetic patient behavior. Each try is decided in a fixed order:
//
//   1. quit             with probability dropout_hazard
//   2. impulsive answer with probability impulsivity: any presented object,
//                       t ~ lognormal(rt_log_mean - 0.5, rt_log_sd)
//   3. attentive answer with probability attention: the target,
//                       t ~ lognormal(rt_log_mean, rt_log_sd)
//   4. no response
//
// Response times are clamped to theta. This is a stimulus generator for the
// engine and the metrics, not a cognitive model.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <iterator>
#include <limits>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "artherapist/domain.hpp"
#include "artherapist/error.hpp"
#include "artherapist/events.hpp"
#include "artherapist/metrics.hpp"
#include "artherapist/rng.hpp"
#include "artherapist/session_engine.hpp"

namespace artherapist {

inline constexpr double kImpulsiveLogShift = 0.5;

struct BehaviorParams {
  double attention = 0.8;
  double impulsivity = 0.1;
  double rt_log_mean = 0.4;  // about 1.5 s
  double rt_log_sd = 0.35;
  double dropout_hazard = 0.0;
  std::uint64_t seed = 0;

  bool operator==(const BehaviorParams&) const = default;
};

inline ValidationIssues check_behavior(const BehaviorParams& p) {
  ValidationIssues issues;
  auto unit = [&](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) issues.push_back({name, "must lie in [0, 1]"});
  };
  unit(p.attention, "attention");
  unit(p.impulsivity, "impulsivity");
  if (!(p.dropout_hazard >= 0.0 && p.dropout_hazard < 1.0)) issues.push_back({"dropout_hazard", "must lie in [0, 1)"});
  if (!std::isfinite(p.rt_log_mean)) issues.push_back({"rt_log_mean", "must be finite"});
  if (!(p.rt_log_sd > 0.0) || !std::isfinite(p.rt_log_sd)) issues.push_back({"rt_log_sd", "must be > 0"});
  return issues;
}

inline json to_json(const BehaviorParams& p) {
  return {{"attention", p.attention},         {"impulsivity", p.impulsivity},
          {"rt_log_mean", p.rt_log_mean},     {"rt_log_sd", p.rt_log_sd},
          {"dropout_hazard", p.dropout_hazard}, {"seed", p.seed}};
}

// Missing fields take the defaults above.
inline Validated<BehaviorParams> behavior_from_json(const json& raw) {
  ValidationIssues issues;
  detail::FieldReader r(raw, "", issues);
  BehaviorParams p;
  if (r.is_object()) {
    if (auto v = r.number("attention", false)) p.attention = *v;
    if (auto v = r.number("impulsivity", false)) p.impulsivity = *v;
    if (auto v = r.number("rt_log_mean", false)) p.rt_log_mean = *v;
    if (auto v = r.number("rt_log_sd", false)) p.rt_log_sd = *v;
    if (auto v = r.number("dropout_hazard", false)) p.dropout_hazard = *v;
    if (const json* seed = r.find("seed", false)) {
      if (seed->is_number_unsigned()) p.seed = seed->get<std::uint64_t>();
      else if (seed->is_number_integer() && seed->get<std::int64_t>() >= 0) p.seed = seed->get<std::uint64_t>();
      else r.fail("seed", "expected a non-negative integer");
    }
  }
  for (auto& issue : check_behavior(p)) issues.push_back(std::move(issue));
  if (!issues.empty()) return issues;
  return p;
}

struct Respond {
  std::string object_id;
  double t = 0.0;  // seconds after the try started
  bool operator==(const Respond&) const = default;
};
struct NoResponse {
  bool operator==(const NoResponse&) const = default;
};
struct Quit {
  bool operator==(const Quit&) const = default;
};
using SimAction = std::variant<Respond, NoResponse, Quit>;

struct TryView {
  std::string target;
  std::vector<std::string> presented;
  double theta = 0.0;
};

inline SimAction simulate_try(const BehaviorParams& params, const TryView& view, SplitMix64& rng) {
  auto draw_time = [&](double log_mean) {
    const double t = rng.lognormal(log_mean, params.rt_log_sd);
    return std::clamp(t, std::numeric_limits<double>::min(), view.theta);
  };
  if (rng.bernoulli(params.dropout_hazard)) return Quit{};
  if (rng.bernoulli(params.impulsivity)) {
    const auto& pick = view.presented[static_cast<std::size_t>(rng.below(view.presented.size()))];
    return Respond{pick, draw_time(params.rt_log_mean - kImpulsiveLogShift)};
  }
  if (rng.bernoulli(params.attention)) return Respond{view.target, draw_time(params.rt_log_mean)};
  return NoResponse{};
}

namespace detail {
inline Box pool_bounds(const std::vector<ObjectSpec>& pool) {
  Box b = pool.front().placement_region;
  for (const auto& o : pool) {
    b.min = {std::min(b.min.x, o.placement_region.min.x), std::min(b.min.y, o.placement_region.min.y),
             std::min(b.min.z, o.placement_region.min.z)};
    b.max = {std::max(b.max.x, o.placement_region.max.x), std::max(b.max.y, o.placement_region.max.y),
             std::max(b.max.z, o.placement_region.max.z)};
  }
  return b;
}
}  // namespace detail

// Runs a whole session through the engine. The returned engine is finished.
// Deterministic in (params.seed, config.seed).
inline SessionEngine simulate_session(const BehaviorParams& params, const SessionConfig& config) {
  const auto issues = check_behavior(params);
  if (!issues.empty()) throw Error(ErrorCode::invalid_argument, "invalid behavior params: " + summarize(issues));
  SessionEngine engine = SessionEngine::start(config);
  SplitMix64 rng(params.seed);
  const Box area = detail::pool_bounds(config.object_pool);
  while (!engine.finished()) {
    SplitMix64 r = rng.split();
    const TryPresented& shown = engine.current_presentation();
    TryView view{shown.target_object_id, {}, config.try_time};
    for (const auto& p : shown.placements) view.presented.push_back(p.object_id);
    const double start = engine.state().try_start;
    const SimAction action = simulate_try(params, view, r);
    if (const auto* respond = std::get_if<Respond>(&action)) {
      const Vec3 where{r.uniform(area.min.x, area.max.x), r.uniform(area.min.y, area.max.y),
                       r.uniform(area.min.z, area.max.z)};
      // start + t can round past the deadline, or onto start for tiny t.
      const double at = std::max(std::min(start + respond->t, engine.try_deadline()),
                                 std::nextafter(start, std::numeric_limits<double>::infinity()));
      engine.record_response(respond->object_id, at, where);
    } else if (std::holds_alternative<NoResponse>(action)) {
      engine.deliver_timeout(engine.try_deadline());
    } else {
      engine.abort(start);
    }
  }
  return engine;
}

// ---------------------------------------------------------------------------
// Parameter sweeps.

struct FieldStats {
  int n = 0;  // sessions where the measure was present
  std::optional<double> mean;
  std::optional<double> sd;  // sample, needs n >= 2
};

inline constexpr const char* kMetricFields[] = {"M", "SD", "GF", "IAF", "IMF", "EF", "CRF", "PI", "GT"};
inline constexpr std::size_t kMetricFieldCount = std::size(kMetricFields);

inline std::optional<double> metric_field(const SessionMetrics& m, std::size_t i) {
  switch (i) {
    case 0: return m.M;
    case 1: return m.SD;
    case 2: return m.GF;
    case 3: return m.IAF;
    case 4: return m.IMF;
    case 5: return m.EF;
    case 6: return m.CRF;
    case 7: return m.PI;
    case 8: return m.GT;
  }
  return std::nullopt;
}

struct SweepRow {
  BehaviorParams params;
  int sessions = 0;
  std::array<FieldStats, kMetricFieldCount> fields{};
};

struct SweepTable {
  std::vector<SweepRow> rows;
};

inline FieldStats summarize_field(std::span<const double> values) {
  FieldStats s;
  s.n = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  for (const double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  s.mean = mean;
  if (values.size() >= 2) {
    double ss = 0.0;
    for (const double v : values) ss += (v - mean) * (v - mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

inline SweepRow summarize_sessions(const BehaviorParams& params, std::span<const SessionMetrics> sessions) {
  SweepRow row;
  row.params = params;
  row.sessions = static_cast<int>(sessions.size());
  for (std::size_t f = 0; f < kMetricFieldCount; ++f) {
    std::vector<double> values;
    for (const auto& m : sessions)
      if (auto v = metric_field(m, f)) values.push_back(*v);
    row.fields[f] = summarize_field(values);
  }
  return row;
}

// Session i of a cell uses seeds derived from (params.seed, i) and
// (config.seed, i), so cells are reproducible independently.
inline SweepTable sweep(std::span<const BehaviorParams> grid, int sessions_per_cell, const SessionConfig& config) {
  if (grid.empty()) throw Error(ErrorCode::invalid_argument, "empty parameter grid");
  if (sessions_per_cell < 1) throw Error(ErrorCode::invalid_argument, "sessions per cell must be >= 1");
  SweepTable table;
  for (std::size_t cell = 0; cell < grid.size(); ++cell) {
    std::vector<SessionMetrics> metrics;
    metrics.reserve(static_cast<std::size_t>(sessions_per_cell));
    for (int i = 0; i < sessions_per_cell; ++i) {
      BehaviorParams p = grid[cell];
      p.seed = derive_seed(grid[cell].seed, {static_cast<std::uint64_t>(i)});
      SessionConfig c = config;
      c.seed = derive_seed(config.seed, {static_cast<std::uint64_t>(i)});
      c.session_id = "sweep-" + std::to_string(cell) + "-" + std::to_string(i);
      const SessionEngine engine = simulate_session(p, c);
      metrics.push_back(compute_session_metrics(engine.live_tally()));
    }
    table.rows.push_back(summarize_sessions(grid[cell], metrics));
  }
  return table;
}

// CSV columns: cell, attention, impulsivity, rt_log_mean, rt_log_sd,
// dropout_hazard, seed, sessions, then <F>_mean, <F>_sd, <F>_n for F in
// M, SD, GF, IAF, IMF, EF, CRF, PI, GT. Absent statistics are empty cells.
inline std::string sweep_csv(const SweepTable& table) {
  std::ostringstream out;
  out << "cell,attention,impulsivity,rt_log_mean,rt_log_sd,dropout_hazard,seed,sessions";
  for (const char* f : kMetricFields) out << ',' << f << "_mean," << f << "_sd," << f << "_n";
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    const auto& p = row.params;
    out << i << ',' << format_number(p.attention) << ',' << format_number(p.impulsivity) << ','
        << format_number(p.rt_log_mean) << ',' << format_number(p.rt_log_sd) << ','
        << format_number(p.dropout_hazard) << ',' << p.seed << ',' << row.sessions;
    for (const auto& f : row.fields) out << ',' << opt(f.mean) << ',' << opt(f.sd) << ',' << f.n;
    out << '\n';
  }
  return out.str();
}

}  // namespace artherapist
