#include "senti/rate_limit.hpp"

#include <fmt/format.h>

namespace senti::corpus {

RateLimitState::RateLimitState(Timestamp start, Duration window_length, std::size_t max_requests)
    : window_length_(window_length), max_requests_(max_requests), last_seen_(start) {
  if (window_length_ <= Duration::zero()) throw ValidationError("rate-limit window must be positive");
}

PermitDecision acquire_permit(RateLimitState& state, Timestamp now) {
  if (now < state.last_seen_) {
    throw ClockError(fmt::format("non-monotonic clock: {} precedes {}", format_rfc3339(now),
                                 format_rfc3339(state.last_seen_)));
  }
  state.last_seen_ = now;
  while (!state.grants_.empty() && now - state.grants_.front() >= state.window_length_) {
    state.grants_.pop_front();
  }
  if (state.max_requests_ == 0) return {false, std::nullopt};
  if (state.grants_.size() < state.max_requests_) {
    state.grants_.push_back(now);
    return {true, std::nullopt};
  }
  return {false, state.grants_.front() + state.window_length_};
}

SimulatedFetcher::SimulatedFetcher(std::span<const TweetRecord> source, std::size_t page_size,
                                   RateLimitState& limiter, SimulatedClock& clock)
    : source_(source), page_size_(page_size), limiter_(limiter), clock_(clock), started_(clock.now()) {
  if (page_size_ == 0) throw ValidationError("page size must be positive");
}

std::vector<TweetRecord> SimulatedFetcher::next_page() {
  if (cursor_ >= source_.size()) return {};
  while (true) {
    const PermitDecision d = acquire_permit(limiter_, clock_.now());
    if (d.granted) break;
    ++stats_.denials;
    if (!d.retry_at) throw Error("rate limiter grants no requests (max_requests = 0)");
    clock_.advance_to(*d.retry_at);
  }
  ++stats_.requests;
  const std::size_t end = std::min(source_.size(), cursor_ + page_size_);
  std::vector<TweetRecord> page(source_.begin() + static_cast<std::ptrdiff_t>(cursor_),
                                source_.begin() + static_cast<std::ptrdiff_t>(end));
  cursor_ = end;
  stats_.simulated_elapsed = clock_.now() - started_;
  return page;
}

std::vector<TweetRecord> SimulatedFetcher::fetch_all() {
  std::vector<TweetRecord> out;
  for (auto page = next_page(); !page.empty(); page = next_page()) {
    for (auto& r : page) out.push_back(std::move(r));
  }
  return out;
}

}  // namespace senti::corpus
