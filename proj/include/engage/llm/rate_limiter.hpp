#pragma once

#include <chrono>
#include <mutex>
#include <thread>

namespace engage::llm {

/// Spaces request starts at least 60/rpm seconds apart. rpm <= 0 disables it.
class RateLimiter {
 public:
  using Clock = std::chrono::steady_clock;

  explicit RateLimiter(double requests_per_minute = 0.0) : rpm_(requests_per_minute) {}

  void acquire() {
    if (rpm_ <= 0.0) return;
    const auto interval = std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(60.0 / rpm_));
    Clock::time_point slot;
    {
      std::lock_guard<std::mutex> lock(mu_);
      const auto now = Clock::now();
      slot = next_ > now ? next_ : now;
      next_ = slot + interval;
    }
    std::this_thread::sleep_until(slot);
  }

  double requests_per_minute() const { return rpm_; }

 private:
  double rpm_;
  std::mutex mu_;
  Clock::time_point next_{};
};

}  // namespace engage::llm
