#pragma once

#include <chrono>
#include <cstddef>
#include <deque>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "senti/common.hpp"

namespace senti::corpus {

/// Raised when the clock handed to the limiter runs backwards.
class ClockError : public Error {
 public:
  using Error::Error;
};

struct PermitDecision {
  bool granted = false;
  /// On denial, the instant the window next has room. Empty when it never
  /// will (max_requests == 0).
  std::optional<Timestamp> retry_at;
};

/// Request budget over a trailing window (15 minutes / 900 requests by
/// default). Every grant is logged, so no span of window_length ever holds
/// more than max_requests grants; a grant at t stops counting once
/// now - t >= window_length. Not thread-safe: one owner decides permits.
class RateLimitState {
 public:
  using Duration = std::chrono::milliseconds;

  explicit RateLimitState(Timestamp start, Duration window_length = std::chrono::minutes(15),
                          std::size_t max_requests = 900);

  /// Oldest grant still counted, or the last observed instant when none is.
  Timestamp window_start() const { return grants_.empty() ? last_seen_ : grants_.front(); }
  std::size_t requests_in_window() const { return grants_.size(); }
  Duration window_length() const { return window_length_; }
  std::size_t max_requests() const { return max_requests_; }

 private:
  friend PermitDecision acquire_permit(RateLimitState& state, Timestamp now);

  Duration window_length_;
  std::size_t max_requests_;
  Timestamp last_seen_;
  std::deque<Timestamp> grants_;
};

/// Throws ClockError if `now` precedes an instant the state has already seen.
PermitDecision acquire_permit(RateLimitState& state, Timestamp now);

/// Manually advanced clock for offline simulation.
class SimulatedClock {
 public:
  explicit SimulatedClock(Timestamp start) : now_(start) {}
  Timestamp now() const { return now_; }
  void advance_to(Timestamp t) {
    if (t > now_) now_ = t;
  }
  void advance_by(std::chrono::milliseconds d) { now_ += d; }

 private:
  Timestamp now_;
};

struct FetchStats {
  std::size_t requests = 0;
  std::size_t denials = 0;
  std::chrono::milliseconds simulated_elapsed{0};
};

/// Stand-in for the paginated search API: serves `source` in pages of
/// `page_size`, one permit per page, waiting on the simulated clock when the
/// budget is exhausted.
class SimulatedFetcher {
 public:
  SimulatedFetcher(std::span<const TweetRecord> source, std::size_t page_size, RateLimitState& limiter,
                   SimulatedClock& clock);

  /// Next page, or empty once the source is exhausted. Throws Error if the
  /// limiter can never grant (max_requests == 0).
  std::vector<TweetRecord> next_page();
  std::vector<TweetRecord> fetch_all();
  const FetchStats& stats() const { return stats_; }

 private:
  std::span<const TweetRecord> source_;
  std::size_t page_size_;
  std::size_t cursor_ = 0;
  RateLimitState& limiter_;
  SimulatedClock& clock_;
  Timestamp started_;
  FetchStats stats_;
};

}  // namespace senti::corpus
