#pragma once

// Session performance measures. Everything here is a pure function of a
// SessionTally; absence of a measure is a value (std::nullopt), never zero.
//
//   M   = sum(CRT) / C                                  (C >= 1)
//   SD  = sqrt(sum((CRT - M)^2) / (C - 1))              (C >= 2)
//   GF  = (C + I) / T
//   IAF = OE / (C + I),  IMF = CE / (C + I)             (C + I >= 1)
//   EF  = IAF + IMF
//   CRF = sum(CRT) / (C * theta)                        (C >= 1)
//   PI  = ((1 - CRF) + (1 - EF)) / 2 * GF               (C >= 1)
//
// with I = OE + CE and C + OE + CE + K = T.

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "artherapist/error.hpp"

namespace artherapist {

enum class TryOutcome { correct, commission_error, omission_error, uncompleted };

inline const char* to_string(TryOutcome o) {
  switch (o) {
    case TryOutcome::correct: return "correct";
    case TryOutcome::commission_error: return "commission_error";
    case TryOutcome::omission_error: return "omission_error";
    case TryOutcome::uncompleted: return "uncompleted";
  }
  return "uncompleted";
}

struct TryRecord {
  int try_index = 0;
  TryOutcome outcome = TryOutcome::uncompleted;
  std::optional<double> response_time;  // iff correct or commission_error

  bool operator==(const TryRecord&) const = default;
};

struct SessionTally {
  int T = 0;   // planned tries
  int C = 0;   // correct
  int OE = 0;  // omission errors
  int CE = 0;  // commission errors
  int K = 0;   // uncompleted
  std::vector<double> crt_list;  // correct response times, in try order
  double theta = 0.0;            // per-try budget, seconds
  double GT = 0.0;               // actual elapsed session time, seconds

  int I() const { return OE + CE; }

  bool operator==(const SessionTally&) const = default;
};

struct SessionMetrics {
  std::optional<double> M;
  std::optional<double> SD;
  std::optional<double> GF;
  std::optional<double> IAF;
  std::optional<double> IMF;
  std::optional<double> EF;
  std::optional<double> CRF;
  std::optional<double> PI;
  double GT = 0.0;

  bool operator==(const SessionMetrics&) const = default;
};

// Throws Error(invalid_argument) naming the first broken tally invariant.
// max_time, when given, bounds GT.
inline void check_tally(const SessionTally& t, std::optional<double> max_time = std::nullopt) {
  auto fail = [](const std::string& m) { throw Error(ErrorCode::invalid_argument, "invalid tally: " + m); };
  if (t.T < 1) fail("T must be >= 1");
  if (t.C < 0 || t.OE < 0 || t.CE < 0 || t.K < 0) fail("negative count");
  if (t.C + t.OE + t.CE + t.K != t.T) fail("C + OE + CE + K != T");
  if (static_cast<int>(t.crt_list.size()) != t.C) fail("crt_list length != C");
  if (!(t.theta > 0.0) || !std::isfinite(t.theta)) fail("theta must be > 0");
  for (const double crt : t.crt_list)
    if (!(crt > 0.0 && crt <= t.theta)) fail("correct response time outside (0, theta]");
  if (!(t.GT >= 0.0) || !std::isfinite(t.GT)) fail("GT must be >= 0");
  if (max_time && t.GT > *max_time) fail("GT exceeds level max_time");
}

inline SessionTally tally(std::span<const TryRecord> tries, int planned_T, double theta, double GT) {
  if (planned_T < 1) throw Error(ErrorCode::invalid_argument, "planned tries must be >= 1");
  if (static_cast<int>(tries.size()) != planned_T)
    throw Error(ErrorCode::invalid_argument, "record count " + std::to_string(tries.size()) +
                                                 " does not match planned tries " + std::to_string(planned_T));
  std::vector<const TryRecord*> ordered(tries.size(), nullptr);
  for (const auto& r : tries) {
    if (r.try_index < 0 || r.try_index >= planned_T || ordered[static_cast<std::size_t>(r.try_index)])
      throw Error(ErrorCode::invalid_argument, "try indices must be a permutation of 0..T-1");
    ordered[static_cast<std::size_t>(r.try_index)] = &r;
  }
  SessionTally t;
  t.T = planned_T;
  t.theta = theta;
  t.GT = GT;
  for (const TryRecord* r : ordered) {
    const bool responded = r->outcome == TryOutcome::correct || r->outcome == TryOutcome::commission_error;
    if (responded != r->response_time.has_value())
      throw Error(ErrorCode::invalid_argument, "response_time present iff the try was answered (try " +
                                                   std::to_string(r->try_index) + ")");
    if (r->response_time && !(*r->response_time > 0.0 && *r->response_time <= theta))
      throw Error(ErrorCode::invalid_argument,
                  "response time outside (0, theta] at try " + std::to_string(r->try_index));
    switch (r->outcome) {
      case TryOutcome::correct:
        ++t.C;
        t.crt_list.push_back(*r->response_time);
        break;
      case TryOutcome::commission_error: ++t.CE; break;
      case TryOutcome::omission_error: ++t.OE; break;
      case TryOutcome::uncompleted: ++t.K; break;
    }
  }
  check_tally(t);
  return t;
}

namespace detail {
inline double crt_sum(const SessionTally& t) {
  double sum = 0.0;
  for (const double crt : t.crt_list) sum += crt;
  return sum;
}
}  // namespace detail

inline std::optional<double> mean_crt(const SessionTally& t) {
  if (t.C == 0) return std::nullopt;
  return detail::crt_sum(t) / static_cast<double>(t.C);
}

// Sample standard deviation (divisor C - 1), two-pass.
inline std::optional<double> sd_crt(const SessionTally& t) {
  if (t.C < 2) return std::nullopt;
  const double m = *mean_crt(t);
  double ss = 0.0;
  for (const double crt : t.crt_list) ss += (crt - m) * (crt - m);
  return std::sqrt(ss / static_cast<double>(t.C - 1));
}

inline std::optional<double> engagement_factor(const SessionTally& t) {
  if (t.T < 1) return std::nullopt;
  return static_cast<double>(t.C + t.I()) / static_cast<double>(t.T);
}

inline std::optional<double> inattention_factor(const SessionTally& t) {
  const int answered = t.C + t.I();
  if (answered == 0) return std::nullopt;
  return static_cast<double>(t.OE) / static_cast<double>(answered);
}

inline std::optional<double> impulsivity_factor(const SessionTally& t) {
  const int answered = t.C + t.I();
  if (answered == 0) return std::nullopt;
  return static_cast<double>(t.CE) / static_cast<double>(answered);
}

// Always IAF + IMF so the identity holds bit for bit.
inline std::optional<double> error_factor(const SessionTally& t) {
  const auto iaf = inattention_factor(t);
  const auto imf = impulsivity_factor(t);
  if (!iaf || !imf) return std::nullopt;
  return *iaf + *imf;
}

inline std::optional<double> correct_response_factor(const SessionTally& t) {
  if (t.C == 0) return std::nullopt;
  // Every CRT is <= theta, so the ratio is <= 1; summation rounding can
  // overshoot by an ulp when all responses sit at theta.
  return std::min(detail::crt_sum(t) / (static_cast<double>(t.C) * t.theta), 1.0);
}

inline double performance_index(double crf, double ef, double gf) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!in_unit(crf) || !in_unit(ef) || !in_unit(gf))
    throw Error(ErrorCode::invalid_argument, "performance index inputs must lie in [0, 1]");
  return (((1.0 - crf) + (1.0 - ef)) / 2.0) * gf;
}

inline double performance_index(const SessionMetrics& partial) {
  if (!partial.CRF || !partial.EF || !partial.GF)
    throw Error(ErrorCode::invalid_argument, "performance index needs CRF, EF and GF");
  return performance_index(*partial.CRF, *partial.EF, *partial.GF);
}

inline SessionMetrics compute_session_metrics(const SessionTally& t) {
  check_tally(t);
  SessionMetrics m;
  m.M = mean_crt(t);
  m.SD = sd_crt(t);
  m.GF = engagement_factor(t);
  m.IAF = inattention_factor(t);
  m.IMF = impulsivity_factor(t);
  m.EF = error_factor(t);
  m.CRF = correct_response_factor(t);
  if (m.CRF && m.EF && m.GF) m.PI = performance_index(m);
  m.GT = t.GT;
  return m;
}

}  // namespace artherapist
