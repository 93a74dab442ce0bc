#include <gtest/gtest.h>

#include <cmath>

#include "artherapist/events.hpp"
#include "fixtures.hpp"

using namespace artherapist;

namespace {

SessionEvent ev(std::int64_t seq, double at, EventBody body) { return {"s-1", seq, at, std::move(body)}; }

void expect_corrupt(std::string_view line, const std::string& fragment) {
  try {
    decode_line(line, 7);
    ADD_FAILURE() << "accepted: " << line;
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::corrupt_log);
    EXPECT_NE(std::string(e.what()).find("line 7"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
  }
}

}  // namespace

TEST(EventCodec, KnownLineLayout) {
  const auto e = ev(3, 1.5, ResponseRecorded{0, "obj2", 1.25, Vec3{0.5, -1, 2}});
  EXPECT_EQ(encode_line(e),
            "session_id=s-1 seq=3 at=1.5 kind=ResponseRecorded try_index=0 object_id=obj2 response_time=1.25 "
            "player_position=0.5,-1,2");
  const auto redacted = ev(3, 1.5, ResponseRecorded{0, "obj2", 1.25, std::nullopt});
  EXPECT_EQ(encode_line(redacted).substr(encode_line(redacted).size() - 17), "player_position=-");
  EXPECT_EQ(encode_line(ev(0, 0, SessionCompleted{})), "session_id=s-1 seq=0 at=0 kind=SessionCompleted");
  EXPECT_EQ(encode_line(ev(1, 0, TryPresented{0, "a", {{"a", {1, 2, 3}, 0}, {"b", {1e-7, 2, 3}, 0.5}}})),
            "session_id=s-1 seq=1 at=0 kind=TryPresented try_index=0 target=a placements=a@1,2,3/0;b@1e-07,2,3/0.5");
}

TEST(EventCodec, RoundTripsEveryKind) {
  const std::vector<SessionEvent> events = {
      ev(0, 0, SessionStarted{"0123456789abcdef"}),
      ev(1, 0, TryPresented{0, "a", {{"a", {0.1, 0.2, 0.3}, 0}, {"b", {-1e300, 5e-324, 0}, 0.25}}}),
      ev(2, 0.1 + 0.2, ResponseRecorded{0, "b", 0.30000000000000004, Vec3{1.0 / 3, 2.0 / 3, -0.0}}),
      ev(3, 5.3, TryTimedOut{1}),
      ev(4, 6, SessionAborted{-1}),
      ev(5, 7, SessionCompleted{}),
  };
  for (const auto& e : events) {
    EXPECT_EQ(decode_line(encode_line(e)), e) << encode_line(e);
    EXPECT_EQ(event_from_json(to_json(e), "other"), e) << to_json(e).dump();
  }
}

TEST(EventCodecProperty, EngineLogsRoundTripBitExactly) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto engine = fixtures::random_engine_session(seed);
    for (const auto& e : engine.events()) {
      ASSERT_EQ(decode_line(encode_line(e)), e);
      ASSERT_EQ(event_from_json(json::parse(to_json(e).dump()), ""), e);
    }
  }
}

TEST(EventCodec, RejectsCorruptLines) {
  expect_corrupt("", "");
  expect_corrupt("session_id=s seq=0 at=0 kind=Bogus", "Bogus");
  expect_corrupt("session_id=s seq=0 at=0", "kind");
  expect_corrupt("session_id=s seq=x at=0 kind=SessionCompleted", "seq");
  expect_corrupt("session_id=s seq=0 at=nan kind=SessionCompleted", "at");
  expect_corrupt("session_id=s seq=0 at=0 kind=SessionCompleted extra=1", "extra");
  expect_corrupt("seq=0 session_id=s at=0 kind=SessionCompleted", "session_id");
  expect_corrupt("session_id=s seq=0 at=0 kind=TryTimedOut", "try_index");
  expect_corrupt("session_id=s seq=0 at=0 kind=TryPresented try_index=0 target=a placements=a@1,2/0", "");
  expect_corrupt("session_id=s seq=0 at=0 kind=ResponseRecorded try_index=0 object_id=a response_time=1 "
                 "player_position=1,2",
                 "");
  expect_corrupt("session_id=bad/id seq=0 at=0 kind=SessionCompleted", "");
  expect_corrupt("session_id=s seq=0 at=0 kind=TryTimedOut try_index=-3", "");
  expect_corrupt("session_id=s seq=0 at=0 kind=ResponseRecorded try_index=0 object_id=a response_tim", "");
}

TEST(EventCodec, JsonErrorsAreValidationFailures) {
  auto bad = [](const json& j) {
    try {
      event_from_json(j, "s");
      return false;
    } catch (const Error& e) {
      return e.code() == ErrorCode::validation_failed;
    }
  };
  EXPECT_TRUE(bad(json::array()));
  EXPECT_TRUE(bad({{"seq", 0}, {"at", 0}}));
  EXPECT_TRUE(bad({{"seq", 0}, {"at", 0}, {"kind", "Nope"}}));
  EXPECT_TRUE(bad({{"seq", -1}, {"at", 0}, {"kind", "SessionCompleted"}}));
  EXPECT_TRUE(bad({{"seq", 0}, {"at", "x"}, {"kind", "SessionCompleted"}}));
  EXPECT_TRUE(bad({{"seq", 0}, {"at", 0}, {"kind", "TryTimedOut"}}));
  EXPECT_FALSE(bad({{"seq", 0}, {"at", 0}, {"kind", "SessionCompleted"}}));
  // Missing session_id takes the default.
  EXPECT_EQ(event_from_json({{"seq", 0}, {"at", 0}, {"kind", "SessionCompleted"}}, "dflt").session_id, "dflt");
}

TEST(EventCodec, NumbersUseShortestRoundTripForm) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(2.0), "2");
  EXPECT_EQ(*parse_number("0.30000000000000004"), 0.1 + 0.2);
  EXPECT_FALSE(parse_number("1e999"));
  EXPECT_FALSE(parse_number("1.0x"));
  EXPECT_FALSE(parse_number("inf"));
}

TEST(EventCodec, ConfigDigestTracksEveryField) {
  const auto base = fixtures::test_config();
  const auto d = config_digest(base);
  EXPECT_EQ(d.size(), 16u);
  EXPECT_EQ(d, config_digest(fixtures::test_config()));
  auto c = base;
  c.seed = 2;
  EXPECT_NE(config_digest(c), d);
  c = base;
  c.try_time = 5.0000001;
  EXPECT_NE(config_digest(c), d);
  c = base;
  c.object_pool[0].base_size = 0.2;
  EXPECT_NE(config_digest(c), d);
}
