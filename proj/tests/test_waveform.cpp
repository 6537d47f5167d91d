#include <doctest.h>

#include <cmath>
#include <numbers>

#include "risid/channel.hpp"
#include "risid/errors.hpp"
#include "risid/rng.hpp"
#include "risid/waveform.hpp"

using namespace risid;

namespace {

Grid random_grid(int S, int M, Stream& s) {
  Grid g(S, M);
  for (auto& c : g.cells) c = s.complex_normal();
  return g;
}

double energy(std::span<const cdouble> x) {
  double e = 0.0;
  for (const auto& v : x) e += std::norm(v);
  return e;
}

// Unitary DFT by definition, O(S^2).
std::vector<cdouble> naive_dft(std::span<const cdouble> x, bool inverse) {
  const std::size_t S = x.size();
  std::vector<cdouble> out(S);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < S; ++k) {
    for (std::size_t n = 0; n < S; ++n)
      out[k] += x[n] * std::polar(1.0, sign * 2.0 * std::numbers::pi * double(k * n % S) / double(S));
    out[k] /= std::sqrt(double(S));
  }
  return out;
}

}  // namespace

TEST_CASE("QPSK mapping") {
  const std::vector<std::uint8_t> zero{0, 0};
  CHECK(std::abs(qpsk_map(zero)[0] - cdouble(1, 1) / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(qpsk_map(std::vector<std::uint8_t>{1}), ValidationError);

  Stream s(1, 0, 0);
  std::vector<std::uint8_t> bits(2000);
  for (auto& b : bits) b = s.next_u32() & 1;
  const auto sym = qpsk_map(bits);
  for (const auto& v : sym) CHECK(std::norm(v) == doctest::Approx(1.0));
  CHECK(qpsk_demap(sym) == bits);

  for (const auto& v : random_qpsk(500, s)) {
    CHECK(std::norm(v) == doctest::Approx(1.0));
    CHECK(std::abs(std::abs(v.real()) - std::sqrt(0.5)) < 1e-15);
  }
}

TEST_CASE("FFT agrees with the direct DFT") {
  Stream s(2, 0, 0);
  for (int S : {1, 2, 8, 64, 256}) {
    std::vector<cdouble> x(S);
    for (auto& v : x) v = s.complex_normal();
    for (bool inverse : {false, true}) {
      std::vector<cdouble> y = x;
      fft_in_place(y, inverse);
      const auto ref = naive_dft(x, inverse);
      for (int k = 0; k < S; ++k) CHECK(std::abs(y[k] / std::sqrt(double(S)) - ref[k]) < 1e-10);
    }
  }
  std::vector<cdouble> bad(12);
  CHECK_THROWS_AS(fft_in_place(bad, false), ValidationError);
}

TEST_CASE("OFDM modulation") {
  const int S = 64, cp = 16;
  Stream s(3, 0, 0);

  SUBCASE("single subcarrier is a complex exponential with a cyclic prefix") {
    Grid g(S, 1);
    g.at(5, 0) = 1.0;
    const auto sig = ofdm_modulate(g, cp);
    REQUIRE(sig.samples.size() == std::size_t(S + cp));
    for (int n = 0; n < S; ++n) {
      const cdouble expect = std::polar(1.0 / std::sqrt(double(S)), 2.0 * std::numbers::pi * 5 * n / S);
      CHECK(std::abs(sig.samples[cp + n] - expect) < 1e-12);
    }
    for (int n = 0; n < cp; ++n) CHECK(sig.samples[n] == sig.samples[S + n]);
  }
  SUBCASE("Parseval") {
    const Grid g = random_grid(S, 6, s);
    const auto sig = ofdm_modulate(g, cp);
    double time_energy = 0.0;
    for (int m = 0; m < 6; ++m)
      time_energy += energy(std::span<const cdouble>(sig.samples).subspan(m * (S + cp) + cp, S));
    CHECK(std::abs(time_energy - energy(g.cells)) <= 1e-9 * energy(g.cells));
  }
  SUBCASE("round trip") {
    const Grid g = random_grid(S, 4, s);
    const Grid back = ofdm_demodulate(ofdm_modulate(g, cp));
    for (std::size_t i = 0; i < g.cells.size(); ++i) CHECK(std::abs(back.cells[i] - g.cells[i]) < 1e-12);
  }
  SUBCASE("zero in, zero out") {
    const Grid back = ofdm_demodulate(ofdm_modulate(Grid(S, 2), cp));
    CHECK(energy(back.cells) == 0.0);
  }
  SUBCASE("subcarriers stay orthogonal") {
    for (int k : {0, 1, 31, 63}) {
      Grid g(S, 1);
      g.at(k, 0) = cdouble(0.7, -0.2);
      const Grid back = ofdm_demodulate(ofdm_modulate(g, cp));
      for (int j = 0; j < S; ++j)
        if (j != k) CHECK(std::abs(back.at(j, 0)) < 1e-9);
    }
  }
  SUBCASE("a channel inside the prefix acts per subcarrier") {
    const int M = 3;
    const Grid g = random_grid(S, M, s);
    TapResponse h;
    h.tap_spacing = 5;
    h.taps = {cdouble(0.8, 0.1), cdouble(-0.3, 0.4), cdouble(0.05, -0.2)};
    BasebandSignal tx = ofdm_modulate(g, cp);
    BasebandSignal rx = tx;
    rx.samples = propagate(h, tx.samples);
    const Grid y = ofdm_demodulate(rx);
    // Symbol 0 sees zeros before its prefix, which the prefix still absorbs.
    for (int m = 0; m < M; ++m)
      for (int k = 0; k < S; ++k)
        CHECK(std::abs(y.at(k, m) - h.frequency_response(k, S) * g.at(k, m)) < 1e-9);
  }
  SUBCASE("framing is checked") {
    BasebandSignal sig = ofdm_modulate(Grid(S, 2), cp);
    sig.samples.pop_back();
    CHECK_THROWS_AS(ofdm_demodulate(sig), ValidationError);
  }
}

TEST_CASE("FFT operation count") {
  std::vector<cdouble> x(64);
  CHECK(fft_in_place(x, false) == 10u * 32u * 6u);
  std::uint64_t ops = 0;
  ofdm_demodulate(ofdm_modulate(Grid(64, 3), 16), &ops);
  // Butterflies plus the unitary scaling of every cell.
  CHECK(ops == 3u * (10u * 32u * 6u + 2u * 64u));
}
