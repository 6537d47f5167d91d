#include "risid/geometry.hpp"

#include <cmath>
#include <string>

#include "risid/errors.hpp"

namespace risid {

double distance(const Position& a, const Position& b) { return std::hypot(a.x - b.x, a.y - b.y); }

double path_loss_amplitude(double d, double exponent) {
  if (!(d > 0.0)) {
    throw ValidationError("degenerate geometry: distance " + std::to_string(d) +
                          " must be positive (colocated nodes)");
  }
  return std::pow(d, -exponent / 2.0);
}

}  // namespace risid
