#include <gtest/gtest.h>

#include <random>

#include "senti/rate_limit.hpp"

namespace senti::corpus {
namespace {

using namespace std::chrono_literals;

Timestamp t0() { return *parse_rfc3339("2021-07-03T00:00:00Z"); }

TEST(RateLimit, NineHundredThenDenied) {
  RateLimitState s(t0());
  for (int i = 0; i < 900; ++i) ASSERT_TRUE(acquire_permit(s, t0()).granted) << i;
  auto d = acquire_permit(s, t0());
  EXPECT_FALSE(d.granted);
  ASSERT_TRUE(d.retry_at);
  EXPECT_EQ(*d.retry_at, t0() + 15min);
  EXPECT_EQ(s.requests_in_window(), 900u);
}

TEST(RateLimit, WindowSlidesAtExactBoundary) {
  RateLimitState s(t0(), 1000ms, 2);
  EXPECT_TRUE(acquire_permit(s, t0()).granted);
  EXPECT_TRUE(acquire_permit(s, t0() + 500ms).granted);
  EXPECT_FALSE(acquire_permit(s, t0() + 999ms).granted);
  EXPECT_TRUE(acquire_permit(s, t0() + 1000ms).granted);
  auto d = acquire_permit(s, t0() + 1000ms);
  EXPECT_FALSE(d.granted);
  EXPECT_EQ(*d.retry_at, t0() + 1500ms);
}

TEST(RateLimit, ZeroBudgetNeverGrants) {
  RateLimitState s(t0(), 1000ms, 0);
  auto d = acquire_permit(s, t0() + 1h);
  EXPECT_FALSE(d.granted);
  EXPECT_FALSE(d.retry_at);
}

TEST(RateLimit, BackwardsClockIsAnError) {
  RateLimitState s(t0());
  acquire_permit(s, t0() + 10s);
  EXPECT_THROW(acquire_permit(s, t0() + 9s), ClockError);
  EXPECT_THROW(RateLimitState(t0(), 0ms), ValidationError);
}

// No span of window_length may hold more than max grants, and a request is
// only refused when the window is genuinely full.
TEST(RateLimit, RandomScheduleNeverExceedsBudget) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto window = std::chrono::milliseconds(100 + rng() % 900);
    const std::size_t max = 1 + rng() % 8;
    RateLimitState s(t0(), window, max);
    std::vector<Timestamp> grants;
    Timestamp now = t0();
    for (int step = 0; step < 400; ++step) {
      now += std::chrono::milliseconds(rng() % 60);
      std::size_t live = 0;
      for (auto g : grants) live += (now - g < window);
      const auto d = acquire_permit(s, now);
      EXPECT_EQ(d.granted, live < max);
      if (d.granted) {
        grants.push_back(now);
      } else {
        EXPECT_GT(*d.retry_at, now);
      }
    }
    for (std::size_t i = 0; i + max < grants.size(); ++i) {
      EXPECT_GE(grants[i + max] - grants[i], window);
    }
  }
}

TEST(Fetcher, WaitsOutTheWindow) {
  std::vector<TweetRecord> source(25);
  for (std::size_t i = 0; i < source.size(); ++i) source[i].id = std::to_string(i);
  RateLimitState s(t0(), 15min, 2);
  SimulatedClock clock(t0());
  SimulatedFetcher f(source, 5, s, clock);
  auto all = f.fetch_all();
  EXPECT_EQ(all, source);
  EXPECT_EQ(f.stats().requests, 5u);
  EXPECT_EQ(f.stats().denials, 2u);
  EXPECT_EQ(f.stats().simulated_elapsed, 30min);
}

TEST(Fetcher, ZeroBudgetThrows) {
  std::vector<TweetRecord> source(1);
  RateLimitState s(t0(), 15min, 0);
  SimulatedClock clock(t0());
  SimulatedFetcher f(source, 5, s, clock);
  EXPECT_THROW(f.next_page(), Error);
}

}  // namespace
}  // namespace senti::corpus
