#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace risid {

// x^degree + sum_{k in taps} x^k + 1, with 0 < k < degree.
struct Polynomial {
  int degree = 0;
  std::vector<int> taps;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;
};

struct BinarySequence {
  std::vector<std::uint8_t> bits;
  int degree = 0;

  std::size_t length() const { return bits.size(); }
};

// Primitive polynomials shipped with the library, one or two per degree.
std::span<const Polynomial> primitive_polynomials();

// One period of the m-sequence generated by `poly` from a nonzero m-bit seed
// (bit i of the seed is the i-th output). The polynomial must be in the
// built-in table.
BinarySequence lfsr_msequence(const Polynomial& poly, std::uint32_t seed);

// Bit 0 -> +1, bit 1 -> -1.
std::vector<double> to_bipolar(std::span<const std::uint8_t> bits);

bool gold_degree_supported(int m);
// Three-valued cross-correlation magnitude parameter 2^floor((m+2)/2) + 1.
int gold_t(int m);

struct GoldFamily {
  int degree = 0;
  Polynomial first;
  Polynomial second;
  // Bipolar codes. Index 0 and 1 are the two base m-sequences; index 2 + k is
  // first XOR (second cyclically shifted by k).
  std::vector<std::vector<double>> codes;

  std::size_t size() const { return codes.size(); }
  std::size_t code_length() const { return codes.empty() ? 0 : codes.front().size(); }
};

// Throws ValidationError for degrees without a shipped preferred pair
// (including every multiple of 4).
GoldFamily gold_family(int m);

// Periodic correlation sum_i a[i] * b[(i + shift) mod L] for every shift.
std::vector<long> periodic_correlation(std::span<const double> a, std::span<const double> b);

// Inner product of the first L received samples with the code (a real
// reference, so conjugation is a no-op). Throws ValidationError when the
// received block is shorter than the code.
std::complex<double> correlate(std::span<const std::complex<double>> received,
                               std::span<const double> code);

struct CorrelationHistogram {
  std::map<long, std::uint64_t> autocorrelation;   // all codes, all shifts
  std::map<long, std::uint64_t> crosscorrelation;  // distinct pairs, all shifts
};

CorrelationHistogram correlation_histogram(const GoldFamily& family);

// True when every autocorrelation sidelobe and cross-correlation value lies in
// {-1, -t, t-2} and every in-phase autocorrelation equals the code length.
bool histogram_is_three_valued(const CorrelationHistogram& h, int m);

}  // namespace risid
