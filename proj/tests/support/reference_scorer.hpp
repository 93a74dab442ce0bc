#pragma once

// Deliberately naive scorer used as a test oracle. It works from a raw list
// of per-try outcomes, counts everything itself, accumulates in long double
// and shares no code with the library.

#include <cmath>
#include <optional>
#include <vector>

namespace reference {

enum class Outcome { correct, commission, omission, uncompleted };

struct Try {
  Outcome outcome = Outcome::uncompleted;
  double response_time = 0.0;  // used only for correct
};

struct Scores {
  int T = 0, C = 0, OE = 0, CE = 0, K = 0;
  std::optional<double> M, SD, GF, IAF, IMF, EF, CRF, PI;
};

inline Scores score(const std::vector<Try>& tries, double theta) {
  Scores s;
  s.T = static_cast<int>(tries.size());
  long double sum = 0.0L;
  std::vector<long double> crts;
  for (const Try& t : tries) {
    switch (t.outcome) {
      case Outcome::correct:
        s.C += 1;
        sum += t.response_time;
        crts.push_back(t.response_time);
        break;
      case Outcome::commission: s.CE += 1; break;
      case Outcome::omission: s.OE += 1; break;
      case Outcome::uncompleted: s.K += 1; break;
    }
  }
  const int I = s.OE + s.CE;
  s.GF = static_cast<double>(static_cast<long double>(s.C + I) / s.T);
  if (s.C + I > 0) {
    s.IAF = static_cast<double>(static_cast<long double>(s.OE) / (s.C + I));
    s.IMF = static_cast<double>(static_cast<long double>(s.CE) / (s.C + I));
    s.EF = static_cast<double>(static_cast<long double>(I) / (s.C + I));
  }
  if (s.C > 0) {
    const long double mean = sum / s.C;
    s.M = static_cast<double>(mean);
    s.CRF = static_cast<double>(sum / (static_cast<long double>(s.C) * theta));
    const long double pi = ((1.0L - *s.CRF) + (1.0L - *s.EF)) / 2.0L * *s.GF;
    s.PI = static_cast<double>(pi);
    if (s.C > 1) {
      long double ss = 0.0L;
      for (const long double x : crts) ss += (x - mean) * (x - mean);
      s.SD = static_cast<double>(std::sqrt(ss / (s.C - 1)));
    }
  }
  return s;
}

}  // namespace reference
