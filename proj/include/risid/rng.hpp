#pragma once

#include <array>
#include <complex>
#include <cstdint>

namespace risid {

// Philox4x32-10 block function. Exposed for known-answer tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

// Counter-based random stream. The (seed, point, trial) triple addresses a
// disjoint region of the Philox counter space, so every trial of every sweep
// point can be regenerated independently of evaluation order or worker count.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint32_t point, std::uint64_t trial);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  // Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  // Circularly-symmetric complex Gaussian with unit variance.
  std::complex<double> complex_normal();
  // Uniform phase on [0, 2*pi).
  double phase();

 private:
  void refill();

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> counter_;
  std::array<std::uint32_t, 4> block_{};
  int used_ = 4;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace risid
