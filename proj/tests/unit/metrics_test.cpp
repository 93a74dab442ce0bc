#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "artherapist/metrics.hpp"
#include "fixtures.hpp"

using namespace artherapist;

namespace {

SessionTally make(int T, int C, int OE, int CE, int K, std::vector<double> crt, double theta = 5.0) {
  SessionTally t;
  t.T = T;
  t.C = C;
  t.OE = OE;
  t.CE = CE;
  t.K = K;
  t.crt_list = std::move(crt);
  t.theta = theta;
  return t;
}

}  // namespace

TEST(Metrics, GoldenSessionByHand) {
  const auto m = compute_session_metrics(fixtures::golden_tally());
  // sum CRT = 12, C = 6, I = 2, T = 10; deviations -1,0,-.5,.5,1,0 give ss = 2.5.
  EXPECT_NEAR(*m.M, 2.0, 1e-12);
  EXPECT_NEAR(*m.SD, std::sqrt(2.5 / 5.0), 1e-12);
  EXPECT_NEAR(*m.SD, 0.70711, 1e-5);
  EXPECT_NEAR(*m.GF, 0.8, 1e-12);
  EXPECT_NEAR(*m.IAF, 0.125, 1e-12);
  EXPECT_NEAR(*m.IMF, 0.125, 1e-12);
  EXPECT_NEAR(*m.EF, 0.25, 1e-12);
  EXPECT_NEAR(*m.CRF, 0.4, 1e-12);
  EXPECT_NEAR(*m.PI, 0.54, 1e-12);
  EXPECT_EQ(m.GT, 30.0);
}

TEST(Metrics, NoCorrectAnswersLeavesMeanCrfAndPiAbsent) {
  const auto m = compute_session_metrics(make(4, 0, 2, 1, 1, {}));
  EXPECT_FALSE(m.M);
  EXPECT_FALSE(m.SD);
  EXPECT_FALSE(m.CRF);
  EXPECT_FALSE(m.PI);
  EXPECT_DOUBLE_EQ(*m.GF, 0.75);
  EXPECT_DOUBLE_EQ(*m.IAF, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.IMF, 1.0 / 3.0);
  EXPECT_EQ(*m.EF, *m.IAF + *m.IMF);
}

TEST(Metrics, SingleCorrectAnswerHasNoSd) {
  const auto m = compute_session_metrics(make(3, 1, 0, 0, 2, {2.0}));
  EXPECT_DOUBLE_EQ(*m.M, 2.0);
  EXPECT_FALSE(m.SD);
  EXPECT_DOUBLE_EQ(*m.CRF, 0.4);
  EXPECT_DOUBLE_EQ(*m.EF, 0.0);
  EXPECT_DOUBLE_EQ(*m.GF, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(*m.PI, (0.6 + 1.0) / 2.0 / 3.0);
}

TEST(Metrics, AllUncompletedLeavesOnlyGf) {
  const auto m = compute_session_metrics(make(5, 0, 0, 0, 5, {}));
  EXPECT_EQ(*m.GF, 0.0);
  EXPECT_FALSE(m.M || m.SD || m.IAF || m.IMF || m.EF || m.CRF || m.PI);
}

TEST(Metrics, PerfectSessionAtTheDeadline) {
  const auto m = compute_session_metrics(make(3, 3, 0, 0, 0, {5.0, 5.0, 5.0}));
  EXPECT_EQ(*m.CRF, 1.0);
  EXPECT_EQ(*m.PI, 0.5);
  EXPECT_EQ(*m.SD, 0.0);
}

TEST(Metrics, CrfStaysInRangeWhenSummationRoundsUp) {
  // 0.1 added 3 times is 0.30000000000000004 and so is 3 * 0.1, but other
  // thetas overshoot; sweep a few hundred and require CRF <= 1.
  for (int i = 1; i < 500; ++i) {
    const double theta = 0.01 * i + 0.003;
    for (int C = 1; C <= 40; C += 3) {
      const auto m = compute_session_metrics(make(C, C, 0, 0, 0, std::vector<double>(C, theta), theta));
      ASSERT_LE(*m.CRF, 1.0) << "theta " << theta << " C " << C;
      ASSERT_GE(*m.PI, 0.0);
    }
  }
}

TEST(Metrics, PerformanceIndexRejectsOutOfRangeInputs) {
  EXPECT_THROW(performance_index(1.1, 0.0, 1.0), Error);
  EXPECT_THROW(performance_index(0.0, -0.1, 1.0), Error);
  EXPECT_THROW(performance_index(0.0, 0.0, std::nan("")), Error);
  EXPECT_DOUBLE_EQ(performance_index(0.4, 0.25, 0.8), 0.54);
  EXPECT_THROW(performance_index(SessionMetrics{}), Error);
}

TEST(Metrics, CheckTallyRejectsEachBrokenInvariant) {
  EXPECT_NO_THROW(check_tally(fixtures::golden_tally()));
  auto broken = [](auto mutate) {
    auto t = fixtures::golden_tally();
    mutate(t);
    return t;
  };
  EXPECT_THROW(check_tally(broken([](auto& t) { t.T = 0; t.C = t.OE = t.CE = t.K = 0; t.crt_list.clear(); })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.K = 3; })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.K = -1; t.T = 7; })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.crt_list.pop_back(); })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.crt_list[0] = 0.0; })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.crt_list[0] = 5.0000001; })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.theta = 0.0; })), Error);
  EXPECT_THROW(check_tally(broken([](auto& t) { t.GT = -1.0; })), Error);
  EXPECT_THROW(check_tally(fixtures::golden_tally(), 29.0), Error);
  EXPECT_NO_THROW(check_tally(fixtures::golden_tally(), 30.0));
  EXPECT_THROW(compute_session_metrics(broken([](auto& t) { t.K = 3; })), Error);
}

TEST(Metrics, TallyOrdersByTryIndexAndChecksRecords) {
  std::vector<TryRecord> recs = {
      {2, TryOutcome::correct, 3.0},
      {0, TryOutcome::correct, 1.0},
      {1, TryOutcome::commission_error, 0.5},
      {3, TryOutcome::omission_error, std::nullopt},
      {4, TryOutcome::uncompleted, std::nullopt},
  };
  const auto t = tally(recs, 5, 5.0, 12.0);
  EXPECT_EQ(t.C, 2);
  EXPECT_EQ(t.CE, 1);
  EXPECT_EQ(t.OE, 1);
  EXPECT_EQ(t.K, 1);
  EXPECT_EQ(t.crt_list, (std::vector<double>{1.0, 3.0}));

  auto bad = recs;
  bad[0].try_index = 0;  // duplicate index
  EXPECT_THROW(tally(bad, 5, 5.0, 0.0), Error);
  bad = recs;
  bad[3].response_time = 1.0;  // omission with a time
  EXPECT_THROW(tally(bad, 5, 5.0, 0.0), Error);
  bad = recs;
  bad[1].response_time.reset();
  EXPECT_THROW(tally(bad, 5, 5.0, 0.0), Error);
  bad = recs;
  bad[0].response_time = 6.0;
  EXPECT_THROW(tally(bad, 5, 5.0, 0.0), Error);
  EXPECT_THROW(tally(recs, 6, 5.0, 0.0), Error);
}

TEST(MetricsProperty, IdentitiesAndRangesOverFuzzedTallies) {
  std::mt19937_64 gen(20240501);
  for (int i = 0; i < 10000; ++i) {
    const auto s = fixtures::random_session(gen);
    const auto& t = s.tally;
    ASSERT_EQ(t.C + t.OE + t.CE + t.K, t.T);
    const auto m = compute_session_metrics(t);
    if (m.IAF) ASSERT_EQ(*m.EF, *m.IAF + *m.IMF);
    for (const auto& v : {m.GF, m.IAF, m.IMF, m.EF, m.CRF, m.PI})
      if (v) ASSERT_TRUE(*v >= 0.0 && *v <= 1.0);
    ASSERT_EQ(m.M.has_value(), t.C >= 1);
    ASSERT_EQ(m.CRF.has_value(), t.C >= 1);
    ASSERT_EQ(m.PI.has_value(), t.C >= 1);
    ASSERT_EQ(m.SD.has_value(), t.C >= 2);
    ASSERT_EQ(m.EF.has_value(), t.C + t.I() >= 1);
    ASSERT_TRUE(m.GF.has_value());
  }
}

TEST(MetricsProperty, PermutingCorrectTimesChangesNothingBeyondRounding) {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 2000; ++i) {
    auto s = fixtures::random_session(gen);
    const auto a = compute_session_metrics(s.tally);
    std::shuffle(s.tally.crt_list.begin(), s.tally.crt_list.end(), gen);
    const auto b = compute_session_metrics(s.tally);
    ASSERT_EQ(a.GF, b.GF);
    ASSERT_EQ(a.EF, b.EF);
    if (a.M) {
      ASSERT_NEAR(*a.M, *b.M, 1e-12 * s.tally.theta);
      ASSERT_NEAR(*a.CRF, *b.CRF, 1e-12);
      ASSERT_NEAR(*a.PI, *b.PI, 1e-12);
    }
    if (a.SD) ASSERT_NEAR(*a.SD, *b.SD, 1e-9 * s.tally.theta);
  }
}

TEST(MetricsProperty, SdMatchesTheTextbookSumOfSquaresForm) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const int C = 2 + static_cast<int>(unit(gen) * 30);
    const double theta = 0.5 + unit(gen) * 10;
    std::vector<double> crt;
    double sum = 0, sumsq = 0;
    for (int k = 0; k < C; ++k) {
      crt.push_back(std::max(theta * unit(gen), 1e-6));
      sum += crt.back();
      sumsq += crt.back() * crt.back();
    }
    const double mean = sum / C;
    const double naive = std::sqrt(std::max(0.0, (sumsq - C * mean * mean) / (C - 1)));
    const auto m = compute_session_metrics(make(C, C, 0, 0, 0, crt, theta));
    ASSERT_NEAR(*m.SD, naive, 1e-9 * theta * 10);
  }
}

TEST(MetricsProperty, PiMonotoneInEachInput) {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double eps = 0.01;
  for (int i = 0; i < 1000; ++i) {
    const double crf = unit(gen) * (1 - eps), ef = unit(gen) * (1 - eps), gf = eps + unit(gen) * (1 - eps);
    const double base = performance_index(crf, ef, gf);
    EXPECT_LT(performance_index(crf + eps, ef, gf), base);
    EXPECT_LT(performance_index(crf, ef + eps, gf), base);
    if ((2 - crf - ef) / 2 > 0) EXPECT_LT(performance_index(crf, ef, gf - eps), base);
  }
}
