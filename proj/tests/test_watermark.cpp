#include <doctest.h>

#include <cmath>

#include "risid/channel.hpp"
#include "risid/errors.hpp"
#include "risid/harness.hpp"
#include "risid/rng.hpp"
#include "risid/watermark.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace risid;

namespace {

Scenario with_watermark(Scenario s, int m, int symbols = 1) {
  WatermarkParams p;
  p.m = m;
  p.num_payload_symbols = symbols;
  s.schemes.watermark = p;
  return s;
}

MisidEstimate misid(Scenario s, std::uint64_t seed, std::uint64_t trials) {
  return run_point(Experiment(std::move(s), SchemeKind::Watermark), trials, seed, 0, 1);
}

}  // namespace

TEST_CASE("brute-force detector agrees on toy-size trials") {
  const auto codes = test::toy_gold_codes();
  const GoldFamily family = gold_family(3);
  REQUIRE(family.size() == codes.size());
  for (std::size_t k = 0; k < codes.size(); ++k)
    for (int i = 0; i < 7; ++i) REQUIRE(family.codes[k][i] == codes[k][i]);

  int agree = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    Stream st(41, 0, trial);
    const int symbols = 1 + static_cast<int>(st.next_u32() % 2);
    Scenario s = with_watermark(test::three_ris_scenario(4 + static_cast<int>(st.next_u32() % 60)), 3, symbols);
    for (auto& r : s.ris_list) r.signature = static_cast<int>(st.next_u32() % 3) * 3 + r.ris_id - 1;
    const WatermarkBank bank = WatermarkBank::from_scenario(s);
    const auto ch = draw_channel(s, st);
    const auto payload = random_qpsk(symbols, st);
    double ref = 0.0;
    BasebandSignal y = watermark_encode(s, bank, ch, payload, watermark_frame(s), st, &ref);
    y = add_awgn(std::move(y), -10.0 + 30.0 * st.uniform(), 1e-5, st);

    const auto r = watermark_detect(y, bank);
    std::vector<std::pair<int, int>> candidates(bank.code_map().begin(), bank.code_map().end());
    const test::Verdict0 o = test::brute_force_detect(y.samples, codes, candidates, symbols);
    REQUIRE((r.verdict == Verdict::Ambiguous) == o.ambiguous);
    if (!o.ambiguous) REQUIRE(r.ris_id == o.ris_id);
    ++agree;
  }
  CHECK(agree == 1000);
}

TEST_CASE("single-RIS chips are h * s * c") {
  Scenario s = with_watermark(test::single_ris_scenario(8), 5);
  const WatermarkBank bank = WatermarkBank::from_scenario(s);
  Stream st(42, 0, 0);
  const auto ch = draw_channel(s, st);
  const cdouble sym(std::sqrt(0.5), -std::sqrt(0.5));
  const std::vector<cdouble> payload{sym};
  const BasebandSignal y = watermark_encode(s, bank, ch, payload, watermark_frame(s), st);
  REQUIRE(y.samples.size() == 31);
  const cdouble h = effective_response(ch, 2, serving_phase_config(ch, 2, PhaseReference::tap(0))).scalar();
  const auto code = bank.code(2);
  for (int i = 0; i < 31; ++i) CHECK(std::abs(y.samples[i] - h * sym * code[i]) < 1e-15);

  const auto r = watermark_detect(y, bank);
  CHECK(r.ris_id == 2);
  CHECK(r.scores[0] == doctest::Approx(31.0 * std::abs(h)).epsilon(1e-12));

  const std::vector<cdouble> zero{0.0};
  const BasebandSignal silent = watermark_encode(s, bank, ch, zero, watermark_frame(s), st);
  for (const auto& v : silent.samples) CHECK(v == cdouble(0.0, 0.0));
}

TEST_CASE("three-RIS signal decomposes into per-code components") {
  const Scenario s = with_watermark(test::three_ris_scenario(64), 5);
  const WatermarkBank bank = WatermarkBank::from_scenario(s);
  const int t = gold_t(5);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Stream st(43, 0, trial);
    const auto ch = draw_channel(s, st);
    const auto payload = random_qpsk(1, st);
    const BasebandSignal y = watermark_encode(s, bank, ch, payload, watermark_frame(s), st);

    // Recover the per-path gains by least squares over the three codes.
    double G[3][3];
    cdouble b[3];
    for (int j = 0; j < 3; ++j) {
      const auto cj = bank.code(j + 1);
      b[j] = 0.0;
      for (int i = 0; i < 31; ++i) b[j] += y.samples[i] * cj[i];
      for (int k = 0; k < 3; ++k) {
        const auto ck = bank.code(k + 1);
        G[j][k] = 0.0;
        for (int i = 0; i < 31; ++i) G[j][k] += cj[i] * ck[i];
      }
    }
    for (int c = 0; c < 3; ++c)
      for (int r = c + 1; r < 3; ++r) {
        const double f = G[r][c] / G[c][c];
        for (int k = 0; k < 3; ++k) G[r][k] -= f * G[c][k];
        b[r] -= f * b[c];
      }
    cdouble h[3];
    for (int r = 2; r >= 0; --r) {
      h[r] = b[r];
      for (int k = r + 1; k < 3; ++k) h[r] -= G[r][k] * h[k];
      h[r] /= G[r][r];
    }
    double residual = 0.0, energy = 0.0;
    for (int i = 0; i < 31; ++i) {
      cdouble model = 0.0;
      for (int k = 0; k < 3; ++k) model += h[k] * bank.code(k + 1)[i];
      residual += std::norm(y.samples[i] - model);
      energy += std::norm(y.samples[i]);
    }
    CHECK(residual <= 1e-20 * energy);

    for (int k = 0; k < 3; ++k) {
      std::vector<cdouble> rx(y.samples);
      const cdouble corr = correlate(rx, bank.code(k + 1));
      double leak = 0.0;
      for (int j = 0; j < 3; ++j)
        if (j != k) leak += std::abs(h[j]) * t;
      CHECK(std::abs(corr - 31.0 * h[k]) <= leak * (1 + 1e-9));
    }
  }
}

TEST_CASE("noiseless oracles") {
  CHECK(misid(with_watermark(test::single_ris_scenario(16), 5), 1, 1000).errors == 0);

  Scenario blocked = with_watermark(test::three_ris_scenario(16), 5);
  for (auto& r : blocked.ris_list)
    if (r.ris_id == 2) r.blocked = true;
  CHECK(misid(blocked, 1, 1000).rate >= 0.99);
}

TEST_CASE("orthogonal toy codes: verdict is the strongest path") {
  GoldFamily walsh;
  walsh.degree = 0;
  const int H[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, 1, -1, -1}, {1, -1, -1, 1}};
  for (const auto& row : H) walsh.codes.emplace_back(std::begin(row), std::end(row));
  WatermarkBank bank(walsh);
  for (int k = 0; k < 4; ++k) bank.assign(k + 1, k);
  Stream st(44, 0, 0);
  for (int trial = 0; trial < 500; ++trial) {
    cdouble h[4];
    int strongest = 0;
    for (int k = 0; k < 4; ++k) {
      h[k] = st.complex_normal();
      if (std::abs(h[k]) > std::abs(h[strongest])) strongest = k;
    }
    const cdouble s = random_qpsk(1, st)[0];
    BasebandSignal y;
    y.samples.assign(4, 0.0);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i) y.samples[i] += h[k] * s * double(H[k][i]);
    const auto r = watermark_detect(y, bank);
    CHECK(r.ris_id == strongest + 1);
  }
}

TEST_CASE("argmax invariance") {
  const Scenario s = with_watermark(test::three_ris_scenario(16), 5, 2);
  const WatermarkBank bank = WatermarkBank::from_scenario(s);
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    Stream st(45, 0, trial);
    const auto ch = draw_channel(s, st);
    const auto payload = random_qpsk(2, st);
    BasebandSignal y = watermark_encode(s, bank, ch, payload, watermark_frame(s), st);
    y = add_awgn(std::move(y), 0.0, 1e-5, st);
    const auto a = watermark_detect(y, bank);
    for (auto& v : y.samples) v *= 1e3;
    const auto b = watermark_detect(y, bank);
    CHECK(a.ris_id == b.ris_id);
  }

  Scenario lone = with_watermark(test::three_ris_scenario(16), 5);
  for (auto& r : lone.ris_list) r.blocked = r.ris_id != 2;
  const WatermarkBank lone_bank = WatermarkBank::from_scenario(lone);
  Stream st(46, 0, 0);
  const auto ch = draw_channel(lone, st);
  BasebandSignal y = watermark_encode(lone, lone_bank, ch, random_qpsk(1, st), watermark_frame(lone), st);
  for (double scale : {1e-6, 0.5, 40.0}) {
    BasebandSignal z = y;
    for (auto& v : z.samples) v *= scale;
    CHECK(watermark_detect(z, lone_bank).ris_id == 2);
  }
}

TEST_CASE("multi-carrier chips and known-payload detection") {
  Scenario s = with_watermark(test::multi_carrier(test::three_ris_scenario(32), 1), 6, 3);
  s.channel.snr_db = kNoiseless;
  const WatermarkBank bank = WatermarkBank::from_scenario(s);
  const WatermarkFrame frame = watermark_frame(s);
  CHECK(frame.airtime(63) == 3u * 80u);
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    Stream st(47, 0, trial);
    const auto ch = draw_channel(s, st);
    const auto payload = random_qpsk(3, st);
    const BasebandSignal y = watermark_encode(s, bank, ch, payload, frame, st);
    REQUIRE(y.framing);
    WatermarkDetectOptions opts;
    opts.num_payload_symbols = 3;
    CHECK(watermark_detect(y, bank, opts).ris_id == 2);
    opts.payload_known = true;
    opts.payload = payload;
    CHECK(watermark_detect(y, bank, opts).ris_id == 2);
  }
  CHECK(misid(s, 2, 500).errors == 0);
}

TEST_CASE("bank registration and framing errors") {
  WatermarkBank bank(gold_family(5));
  bank.assign(1, 0);
  CHECK_THROWS_AS(bank.assign(2, 0), ValidationError);
  CHECK_THROWS_AS(bank.assign(3, 33), ValidationError);
  CHECK_THROWS_AS(bank.code(4), ValidationError);
  BasebandSignal y;
  y.samples.assign(30, 0.0);
  CHECK_THROWS_AS(watermark_detect(y, bank), ValidationError);
}

TEST_CASE("longer codes, more elements and more SNR never hurt") {
  Scenario s = with_watermark(test::three_ris_scenario(16), 5);
  s.channel.snr_reference = SnrReference::Transmit;
  s.channel.snr_db = 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    CAPTURE(seed);
    const auto base = misid(s, seed, 2000);
    CHECK_FALSE(separated_below(base, misid(apply_parameter(s, SchemeKind::Watermark, "m", 7), seed, 2000)));
    CHECK_FALSE(separated_below(base, misid(apply_parameter(s, SchemeKind::Watermark, "N", 64), seed, 2000)));
    CHECK_FALSE(separated_below(base, misid(apply_parameter(s, SchemeKind::Watermark, "snr_db", 10), seed, 2000)));
  }
  Scenario n64 = apply_parameter(s, SchemeKind::Watermark, "N", 64);
  const auto m5 = misid(n64, 9, 20000);
  const auto m7 = misid(apply_parameter(n64, SchemeKind::Watermark, "m", 7), 9, 20000);
  CHECK(separated_below(m7, m5));
}
