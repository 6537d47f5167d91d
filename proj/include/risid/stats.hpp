#pragma once

#include <cstdint>

namespace risid {

inline constexpr double kZ95 = 1.959963984540054;

struct Interval {
  double low = 0.0;
  double high = 1.0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95);

struct MisidEstimate {
  std::uint64_t errors = 0;     // includes ambiguous verdicts
  std::uint64_t ambiguous = 0;
  std::uint64_t trials = 0;
  double rate = 0.0;
  double ci95_low = 0.0;
  double ci95_high = 1.0;
};

MisidEstimate make_estimate(std::uint64_t errors, std::uint64_t ambiguous, std::uint64_t trials);

// True when b's interval lies entirely below a's.
inline bool separated_below(const MisidEstimate& b, const MisidEstimate& a) { return b.ci95_high < a.ci95_low; }

}  // namespace risid
