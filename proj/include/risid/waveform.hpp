#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace risid {

class Stream;

using cdouble = std::complex<double>;

struct MultiCarrierFraming {
  int num_subcarriers = 64;
  int num_symbols = 1;
  int cp_len = 16;

  int symbol_length() const { return num_subcarriers + cp_len; }
  friend bool operator==(const MultiCarrierFraming&, const MultiCarrierFraming&) = default;
};

// Complex baseband samples. Without framing the samples are chip-rate
// single-carrier samples; with framing they are M symbols of S + cp samples.
struct BasebandSignal {
  std::vector<cdouble> samples;
  std::optional<MultiCarrierFraming> framing;

  bool is_multi_carrier() const { return framing.has_value(); }
  // Throws ValidationError if a multi-carrier framing does not match the
  // sample count.
  void check_framing() const;
};

// Frequency-domain grid, symbol-major: element (k, m) at m * S + k.
struct Grid {
  int num_subcarriers = 0;
  int num_symbols = 0;
  std::vector<cdouble> cells;

  Grid() = default;
  Grid(int S, int M) : num_subcarriers(S), num_symbols(M), cells(static_cast<std::size_t>(S) * M) {}

  cdouble& at(int k, int m) { return cells[static_cast<std::size_t>(m) * num_subcarriers + k]; }
  const cdouble& at(int k, int m) const { return cells[static_cast<std::size_t>(m) * num_subcarriers + k]; }
  std::span<cdouble> symbol(int m) {
    return std::span<cdouble>(cells).subspan(static_cast<std::size_t>(m) * num_subcarriers, num_subcarriers);
  }
  std::span<const cdouble> symbol(int m) const {
    return std::span<const cdouble>(cells).subspan(static_cast<std::size_t>(m) * num_subcarriers,
                                                   num_subcarriers);
  }
};

// Gray mapping: bits (b0, b1) -> ((1 - 2 b0) + j (1 - 2 b1)) / sqrt(2).
std::vector<cdouble> qpsk_map(std::span<const std::uint8_t> bits);
std::vector<std::uint8_t> qpsk_demap(std::span<const cdouble> symbols);
std::vector<cdouble> random_qpsk(std::size_t count, Stream& stream);

// In-place unnormalized radix-2 DFT (forward uses e^{-j...}). Size must be a
// power of two. Returns the arithmetic-operation count (10 real flops per
// butterfly).
std::uint64_t fft_in_place(std::span<cdouble> data, bool inverse);

// Unitary inverse DFT per symbol followed by cyclic-prefix insertion.
BasebandSignal ofdm_modulate(const Grid& grid, int cp_len);

// Prefix removal and unitary forward DFT per symbol. `ops`, when given,
// accumulates the arithmetic-operation count.
Grid ofdm_demodulate(const BasebandSignal& signal, std::uint64_t* ops = nullptr);

}  // namespace risid
