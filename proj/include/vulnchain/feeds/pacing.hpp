#pragma once

#include <chrono>
#include <deque>
#include <functional>
#include <thread>

namespace vulnchain {

// Sliding-window request pacer. The clock and sleeper are injectable so
// the pacing contract is testable without real waiting.
class RatePacer {
 public:
  using Clock = std::chrono::steady_clock;
  using NowFn = std::function<Clock::time_point()>;
  using SleepFn = std::function<void(Clock::duration)>;

  RatePacer(std::size_t max_requests, Clock::duration window,
            NowFn now = [] { return Clock::now(); },
            SleepFn sleep = [](Clock::duration d) {
              std::this_thread::sleep_for(d);
            })
      : max_requests_(max_requests),
        window_(window),
        now_(std::move(now)),
        sleep_(std::move(sleep)) {}

  // Blocks until issuing one more request stays within the budget, then
  // records the request.
  void acquire() {
    auto now = now_();
    prune(now);
    if (stamps_.size() >= max_requests_) {
      const auto wake = stamps_.front() + window_;
      if (wake > now) sleep_(wake - now);
      now = now_();
      prune(now);
    }
    stamps_.push_back(now);
  }

  std::size_t in_flight_window() const { return stamps_.size(); }

 private:
  void prune(Clock::time_point now) {
    while (!stamps_.empty() && stamps_.front() + window_ <= now)
      stamps_.pop_front();
  }

  std::size_t max_requests_;
  Clock::duration window_;
  NowFn now_;
  SleepFn sleep_;
  std::deque<Clock::time_point> stamps_;
};

}  // namespace vulnchain
