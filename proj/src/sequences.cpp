#include "risid/sequences.hpp"

#include <algorithm>
#include <string>

#include "risid/errors.hpp"
#include "risid/kernels.hpp"

namespace risid {

namespace {

// Preferred pairs for every Gold degree, plus a primitive polynomial for m=8
// (m-sequences only; no preferred pair exists when 4 divides m).
const std::vector<Polynomial>& polynomial_table() {
  static const std::vector<Polynomial> t = {
      {3, {1}},    {3, {2}},         {5, {2}},    {5, {2, 3, 4}}, {6, {1}},    {6, {1, 2, 5}},
      {7, {3}},    {7, {1, 2, 3}},   {8, {4, 5, 6}},              {9, {4}},    {9, {3, 4, 6}},
      {10, {3}},   {10, {2, 3, 8}},
  };
  return t;
}

struct PreferredPair {
  int degree;
  Polynomial first;
  Polynomial second;
};

const std::vector<PreferredPair>& preferred_pairs() {
  static const std::vector<PreferredPair> t = {
      {3, {3, {1}}, {3, {2}}},          {5, {5, {2}}, {5, {2, 3, 4}}},
      {6, {6, {1}}, {6, {1, 2, 5}}},    {7, {7, {3}}, {7, {1, 2, 3}}},
      {9, {9, {4}}, {9, {3, 4, 6}}},    {10, {10, {3}}, {10, {2, 3, 8}}},
  };
  return t;
}

Polynomial normalized(Polynomial p) {
  std::sort(p.taps.begin(), p.taps.end());
  return p;
}

}  // namespace

std::span<const Polynomial> primitive_polynomials() { return polynomial_table(); }

BinarySequence lfsr_msequence(const Polynomial& poly, std::uint32_t seed) {
  const Polynomial p = normalized(poly);
  const auto& table = polynomial_table();
  if (std::find(table.begin(), table.end(), p) == table.end())
    throw ValidationError("polynomial of degree " + std::to_string(poly.degree) +
                          " is not in the primitive-polynomial table");
  const int m = p.degree;
  if (seed == 0 || (seed >> m) != 0)
    throw ValidationError("LFSR seed must be a nonzero " + std::to_string(m) + "-bit value");

  const std::size_t period = (std::size_t{1} << m) - 1;
  std::vector<std::uint8_t> a(period + m);
  for (int i = 0; i < m; ++i) a[i] = (seed >> i) & 1u;
  // a[n + m] = a[n] ^ sum_k a[n + k]
  for (std::size_t n = 0; n + m < a.size(); ++n) {
    std::uint8_t v = a[n];
    for (int k : p.taps) v ^= a[n + k];
    a[n + m] = v;
  }
  a.resize(period);
  return {std::move(a), m};
}

std::vector<double> to_bipolar(std::span<const std::uint8_t> bits) {
  std::vector<double> out(bits.size());
  std::transform(bits.begin(), bits.end(), out.begin(), [](std::uint8_t b) { return b ? -1.0 : 1.0; });
  return out;
}

bool gold_degree_supported(int m) {
  const auto& pairs = preferred_pairs();
  return std::any_of(pairs.begin(), pairs.end(), [m](const PreferredPair& p) { return p.degree == m; });
}

int gold_t(int m) { return (1 << ((m + 2) / 2)) + 1; }

GoldFamily gold_family(int m) {
  const auto& pairs = preferred_pairs();
  const auto it = std::find_if(pairs.begin(), pairs.end(), [m](const PreferredPair& p) { return p.degree == m; });
  if (it == pairs.end()) {
    throw ValidationError("no Gold family for degree " + std::to_string(m) +
                          (m % 4 == 0 ? " (no preferred pair exists when 4 divides m)" : ""));
  }
  const BinarySequence a = lfsr_msequence(it->first, 1);
  const BinarySequence b = lfsr_msequence(it->second, 1);
  const std::size_t L = a.length();

  GoldFamily family{m, it->first, it->second, {}};
  family.codes.reserve(L + 2);
  family.codes.push_back(to_bipolar(a.bits));
  family.codes.push_back(to_bipolar(b.bits));
  std::vector<std::uint8_t> mixed(L);
  for (std::size_t shift = 0; shift < L; ++shift) {
    for (std::size_t i = 0; i < L; ++i) mixed[i] = a.bits[i] ^ b.bits[(i + shift) % L];
    family.codes.push_back(to_bipolar(mixed));
  }
  return family;
}

std::vector<long> periodic_correlation(std::span<const double> a, std::span<const double> b) {
  const std::size_t L = a.size();
  if (b.size() != L) throw ValidationError("periodic correlation needs equal lengths");
  std::vector<long> out(L);
  for (std::size_t shift = 0; shift < L; ++shift) {
    double acc = 0.0;
    for (std::size_t i = 0; i < L; ++i) acc += a[i] * b[(i + shift) % L];
    out[shift] = static_cast<long>(acc);
  }
  return out;
}

std::complex<double> correlate(std::span<const std::complex<double>> received,
                               std::span<const double> code) {
  if (received.size() < code.size())
    throw ValidationError("received block of " + std::to_string(received.size()) +
                          " samples is shorter than the code length " + std::to_string(code.size()));
  return kernels::real_weighted_sum(received.first(code.size()), code);
}

CorrelationHistogram correlation_histogram(const GoldFamily& family) {
  CorrelationHistogram h;
  for (std::size_t i = 0; i < family.size(); ++i) {
    for (long v : periodic_correlation(family.codes[i], family.codes[i])) ++h.autocorrelation[v];
    for (std::size_t j = i + 1; j < family.size(); ++j)
      for (long v : periodic_correlation(family.codes[i], family.codes[j])) ++h.crosscorrelation[v];
  }
  return h;
}

bool histogram_is_three_valued(const CorrelationHistogram& h, int m) {
  const long L = (1L << m) - 1;
  const long t = gold_t(m);
  const auto allowed = [&](long v) { return v == -1 || v == -t || v == t - 2; };
  for (const auto& [v, n] : h.crosscorrelation)
    if (!allowed(v)) return false;
  for (const auto& [v, n] : h.autocorrelation)
    if (v != L && !allowed(v)) return false;
  // The in-phase peak appears exactly once per code.
  const auto peak = h.autocorrelation.find(L);
  return peak != h.autocorrelation.end() && peak->second == (std::uint64_t{1} << m) + 1;
}

}  // namespace risid
