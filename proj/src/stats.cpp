#include "risid/stats.hpp"

#include <algorithm>
#include <cmath>

#include "risid/errors.hpp"

namespace risid {

Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z) {
  if (trials == 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  Interval iv{std::max(0.0, center - half), std::min(1.0, center + half)};
  if (successes == 0) iv.low = 0.0;
  if (successes == trials) iv.high = 1.0;
  iv.low = std::min(iv.low, p);
  iv.high = std::max(iv.high, p);
  return iv;
}

MisidEstimate make_estimate(std::uint64_t errors, std::uint64_t ambiguous, std::uint64_t trials) {
  if (errors > trials || ambiguous > errors) throw InvariantError("inconsistent misidentification counts");
  MisidEstimate e;
  e.errors = errors;
  e.ambiguous = ambiguous;
  e.trials = trials;
  e.rate = trials ? static_cast<double>(errors) / static_cast<double>(trials) : 0.0;
  const Interval iv = wilson_interval(errors, trials);
  e.ci95_low = iv.low;
  e.ci95_high = iv.high;
  return e;
}

}  // namespace risid
