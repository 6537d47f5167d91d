#include "risid/waveform.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "risid/errors.hpp"
#include "risid/rng.hpp"

namespace risid {

namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

bool is_power_of_two(std::size_t v) { return v > 0 && (v & (v - 1)) == 0; }

}  // namespace

void BasebandSignal::check_framing() const {
  if (!framing) return;
  const auto& f = *framing;
  if (f.num_subcarriers <= 0 || f.num_symbols <= 0 || f.cp_len < 0 || f.cp_len >= f.num_subcarriers)
    throw ValidationError("invalid multi-carrier framing");
  const std::size_t expected = static_cast<std::size_t>(f.num_symbols) * f.symbol_length();
  if (samples.size() != expected)
    throw ValidationError("multi-carrier framing expects " + std::to_string(expected) +
                          " samples, got " + std::to_string(samples.size()));
}

std::vector<cdouble> qpsk_map(std::span<const std::uint8_t> bits) {
  if (bits.size() % 2 != 0) throw ValidationError("QPSK mapping needs an even number of bits");
  std::vector<cdouble> out(bits.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double re = bits[2 * i] ? -kInvSqrt2 : kInvSqrt2;
    const double im = bits[2 * i + 1] ? -kInvSqrt2 : kInvSqrt2;
    out[i] = {re, im};
  }
  return out;
}

std::vector<std::uint8_t> qpsk_demap(std::span<const cdouble> symbols) {
  std::vector<std::uint8_t> out(symbols.size() * 2);
  for (std::size_t i = 0; i < symbols.size(); ++i) {
    out[2 * i] = symbols[i].real() < 0.0;
    out[2 * i + 1] = symbols[i].imag() < 0.0;
  }
  return out;
}

std::vector<cdouble> random_qpsk(std::size_t count, Stream& stream) {
  std::vector<cdouble> out(count);
  std::uint32_t bits = 0;
  for (std::size_t i = 0; i < count; ++i) {
    if (i % 16 == 0) bits = stream.next_u32();
    const double re = (bits & 1u) ? -kInvSqrt2 : kInvSqrt2;
    const double im = (bits & 2u) ? -kInvSqrt2 : kInvSqrt2;
    bits >>= 2;
    out[i] = {re, im};
  }
  return out;
}

std::uint64_t fft_in_place(std::span<cdouble> data, bool inverse) {
  const std::size_t n = data.size();
  if (!is_power_of_two(n)) throw ValidationError("FFT size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  std::uint64_t ops = 0;
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t half = len / 2;
    for (std::size_t k = 0; k < half; ++k) {
      const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(len);
      const cdouble w(std::cos(angle), std::sin(angle));
      for (std::size_t start = 0; start < n; start += len) {
        const cdouble u = data[start + k];
        const cdouble v = data[start + k + half] * w;
        data[start + k] = u + v;
        data[start + k + half] = u - v;
      }
    }
    ops += 10 * (n / 2);
  }
  return ops;
}

BasebandSignal ofdm_modulate(const Grid& grid, int cp_len) {
  const int S = grid.num_subcarriers;
  if (cp_len < 0 || cp_len >= S) throw ValidationError("cyclic prefix length must satisfy 0 <= cp_len < S");
  if (grid.cells.size() != static_cast<std::size_t>(S) * grid.num_symbols)
    throw ValidationError("grid dimensions inconsistent with its cell count");
  BasebandSignal out;
  out.framing = MultiCarrierFraming{S, grid.num_symbols, cp_len};
  out.samples.resize(static_cast<std::size_t>(grid.num_symbols) * (S + cp_len));
  const double scale = 1.0 / std::sqrt(static_cast<double>(S));
  std::vector<cdouble> body(S);
  for (int m = 0; m < grid.num_symbols; ++m) {
    const auto sym = grid.symbol(m);
    std::copy(sym.begin(), sym.end(), body.begin());
    fft_in_place(body, true);
    cdouble* dst = out.samples.data() + static_cast<std::size_t>(m) * (S + cp_len);
    for (int i = 0; i < cp_len; ++i) dst[i] = body[S - cp_len + i] * scale;
    for (int i = 0; i < S; ++i) dst[cp_len + i] = body[i] * scale;
  }
  return out;
}

Grid ofdm_demodulate(const BasebandSignal& signal, std::uint64_t* ops) {
  if (!signal.framing) throw ValidationError("OFDM demodulation needs a multi-carrier signal");
  signal.check_framing();
  const auto& f = *signal.framing;
  const int S = f.num_subcarriers;
  Grid grid(S, f.num_symbols);
  const double scale = 1.0 / std::sqrt(static_cast<double>(S));
  std::uint64_t count = 0;
  for (int m = 0; m < f.num_symbols; ++m) {
    auto sym = grid.symbol(m);
    const cdouble* src = signal.samples.data() + static_cast<std::size_t>(m) * f.symbol_length() + f.cp_len;
    std::copy(src, src + S, sym.begin());
    count += fft_in_place(sym, false);
    for (auto& v : sym) v *= scale;
    count += 2 * static_cast<std::uint64_t>(S);
  }
  if (ops) *ops += count;
  return grid;
}

}  // namespace risid
