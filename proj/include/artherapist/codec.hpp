#pragma once

// JSON and CSV forms of tallies, metrics and level transitions. Absent
// measures are always written as null (JSON) or an empty cell (CSV).

#include <optional>
#include <sstream>
#include <string>

#include <json.hpp>

#include "artherapist/events.hpp"
#include "artherapist/metrics.hpp"
#include "artherapist/session_engine.hpp"

namespace artherapist {

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json to_json(const SessionTally& t) {
  return {{"T", t.T},   {"C", t.C},         {"I", t.I()},         {"K", t.K}, {"OE", t.OE},
          {"CE", t.CE}, {"crt_list", t.crt_list}, {"theta", t.theta}, {"GT", t.GT}};
}

inline json to_json(const SessionMetrics& m) {
  return {{"M", optional_number(m.M)},     {"SD", optional_number(m.SD)},   {"GF", optional_number(m.GF)},
          {"IAF", optional_number(m.IAF)}, {"IMF", optional_number(m.IMF)}, {"EF", optional_number(m.EF)},
          {"CRF", optional_number(m.CRF)}, {"PI", optional_number(m.PI)},   {"GT", m.GT}};
}

inline std::optional<double> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

inline SessionMetrics metrics_from_json(const json& j) {
  SessionMetrics m;
  m.M = optional_from_json(j, "M");
  m.SD = optional_from_json(j, "SD");
  m.GF = optional_from_json(j, "GF");
  m.IAF = optional_from_json(j, "IAF");
  m.IMF = optional_from_json(j, "IMF");
  m.EF = optional_from_json(j, "EF");
  m.CRF = optional_from_json(j, "CRF");
  m.PI = optional_from_json(j, "PI");
  m.GT = j.at("GT").get<double>();
  return m;
}

inline json to_json(const LevelTransition& t) {
  return {{"decision", to_string(t.decision)}, {"from_level", t.from_level}, {"to_level", t.to_level},
          {"pi", optional_number(t.pi)},       {"threshold", t.threshold},   {"reason", t.reason}};
}

inline LevelTransition transition_from_json(const json& j) {
  LevelTransition t;
  const auto decision = j.at("decision").get<std::string>();
  t.decision = decision == "advance"   ? TransitionDecision::advance
               : decision == "regress" ? TransitionDecision::regress
                                       : TransitionDecision::stay;
  t.from_level = j.at("from_level").get<int>();
  t.to_level = j.at("to_level").get<int>();
  t.pi = optional_from_json(j, "pi");
  t.threshold = j.at("threshold").get<double>();
  t.reason = j.at("reason").get<std::string>();
  return t;
}

// Column order of the metrics CSV, stable across versions.
inline constexpr const char* kMetricsCsvHeader = "session_id,T,C,I,K,OE,CE,M,SD,GF,IAF,IMF,EF,CRF,PI,GT";

inline std::string metrics_csv_row(const std::string& session_id, const SessionTally& t, const SessionMetrics& m) {
  auto cell = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::ostringstream out;
  out << session_id << ',' << t.T << ',' << t.C << ',' << t.I() << ',' << t.K << ',' << t.OE << ',' << t.CE << ','
      << cell(m.M) << ',' << cell(m.SD) << ',' << cell(m.GF) << ',' << cell(m.IAF) << ',' << cell(m.IMF) << ','
      << cell(m.EF) << ',' << cell(m.CRF) << ',' << cell(m.PI) << ',' << format_number(m.GT);
  return out.str();
}

}  // namespace artherapist
