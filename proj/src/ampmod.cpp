#include "risid/ampmod.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "risid/errors.hpp"
#include "risid/kernels.hpp"
#include "risid/rng.hpp"

namespace risid {

AmpModCodebook::AmpModCodebook(int length, int d_min, int slot_length)
    : length_(length), d_min_(d_min), slot_length_(slot_length) {
  if (length < 1) throw ValidationError("[scheme.ampmod].L: must be >= 1");
  if (d_min < 1) throw ValidationError("[scheme.ampmod].d_min: must be >= 1");
  if (slot_length < 1) throw ValidationError("[scheme.ampmod].slot_length: must be >= 1");
}

AmpModCodebook AmpModCodebook::from_scenario(const Scenario& scenario) {
  const AmpModParams p = scenario.schemes.ampmod.value_or(AmpModParams{});
  AmpModCodebook book(p.L, p.d_min, p.slot_length);
  const int needed = static_cast<int>(std::ceil(std::log2(static_cast<double>(scenario.ris_list.size()))));
  if (p.L < needed)
    throw ValidationError("[scheme.ampmod].L: " + std::to_string(p.L) + " slots cannot distinguish " +
                          std::to_string(scenario.ris_list.size()) + " RISs");
  for (const auto& d : scenario.ris_list) book.add(d.ris_id, parity_codeword(d.signature, p.L, p.d_min));
  return book;
}

void AmpModCodebook::add(int ris_id, Codeword word) {
  if (static_cast<int>(word.size()) != length_)
    throw ValidationError("ampmod codeword for RIS " + std::to_string(ris_id) + " has length " +
                          std::to_string(word.size()) + ", expected " + std::to_string(length_));
  if (codewords_.contains(ris_id))
    throw ValidationError("ampmod codeword for RIS " + std::to_string(ris_id) + " registered twice");
  for (const auto& [id, other] : codewords_) {
    const int d = hamming_distance(word, other);
    if (d < d_min_)
      throw ValidationError("[scheme.ampmod].d_min: codewords of RIS " + std::to_string(id) + " and " +
                            std::to_string(ris_id) + " are at distance " + std::to_string(d) + " < " +
                            std::to_string(d_min_));
  }
  codewords_.emplace(ris_id, std::move(word));
}

const Codeword& AmpModCodebook::codeword(int ris_id) const {
  const auto it = codewords_.find(ris_id);
  if (it == codewords_.end()) throw ValidationError("RIS " + std::to_string(ris_id) + " has no ampmod codeword");
  return it->second;
}

int AmpModCodebook::minimum_distance() const {
  int best = length_ + 1;
  for (auto a = codewords_.begin(); a != codewords_.end(); ++a)
    for (auto b = std::next(a); b != codewords_.end(); ++b) best = std::min(best, hamming_distance(a->second, b->second));
  return best;
}

int hamming_distance(const Codeword& a, const Codeword& b) {
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
  return d;
}

Codeword parity_codeword(int value, int length, int d_min) {
  const int reps = std::max(1, (d_min + 1) / 2);
  if (length % reps != 0 || length / reps < 2)
    throw ValidationError("[scheme.ampmod].L: length " + std::to_string(length) +
                          " cannot hold a parity codeword repeated " + std::to_string(reps) + " times");
  const int bits = length / reps - 1;
  if (value < 0 || (bits < 31 && value >= (1 << bits)))
    throw ValidationError("signature " + std::to_string(value) + " does not fit in " + std::to_string(bits) +
                          " ampmod ID bits");
  Codeword base(bits + 1);
  std::uint8_t parity = 0;
  for (int i = 0; i < bits; ++i) {
    base[i] = (value >> (bits - 1 - i)) & 1;
    parity ^= base[i];
  }
  base[bits] = parity;
  Codeword word;
  for (int r = 0; r < reps; ++r) word.insert(word.end(), base.begin(), base.end());
  return word;
}

BasebandSignal ampmod_encode(int ris_id, const AmpModCodebook& codebook, const ChannelRealization& realization,
                             const Scenario& scenario, Stream& stream, double* reference_power) {
  const Codeword& word = codebook.codeword(ris_id);
  const AmpModParams params = scenario.schemes.ampmod.value_or(AmpModParams{});
  const std::size_t slot = codebook.slot_length();
  const std::size_t total = codebook.frame_samples();
  const double amp = std::sqrt(equal_power_share(scenario));

  // Configurations: keyed RIS on/off, the rest random.
  const RisCascade& keyed = realization.cascade(ris_id);
  const PhaseConfig on_cfg = serving_phase_config(realization, ris_id, PhaseReference::tap(0));
  PhaseConfig off_cfg = on_cfg;
  const auto n_off = static_cast<std::size_t>(std::lround(params.rho * keyed.num_elements));
  std::fill(off_cfg.on.begin(), off_cfg.on.begin() + static_cast<std::ptrdiff_t>(n_off), 0);
  PhaseConfigs others;
  for (const auto& c : realization.ris)
    if (c.ris_id != ris_id) others.emplace(c.ris_id, random_phase_config(realization, c.ris_id, stream));

  // BS payload: constant-envelope QPSK, or OFDM symbols of random QPSK.
  BasebandSignal out;
  std::vector<cdouble> x;
  if (scenario.channel.waveform == Waveform::MultiCarrier) {
    const int S = scenario.channel.num_subcarriers;
    const int sym_len = S + scenario.channel.cp_len;
    if (slot % sym_len != 0)
      throw ConfigurationError("[scheme.ampmod].slot_length: must be a multiple of the OFDM symbol length " +
                               std::to_string(sym_len) + " in a multi-carrier scenario");
    Grid grid(S, static_cast<int>(total / sym_len));
    grid.cells = random_qpsk(grid.cells.size(), stream);
    BasebandSignal ofdm = ofdm_modulate(grid, scenario.channel.cp_len);
    x = std::move(ofdm.samples);
    out.framing = ofdm.framing;
  } else {
    x = random_qpsk(total, stream);
  }
  for (auto& v : x) v *= amp;

  out.samples.assign(total, 0.0);
  for (const auto& [id, cfg] : others) {
    const TapResponse h = effective_response(realization, id, cfg);
    accumulate_propagated(h, x, out.samples, 0, total);
  }
  if (!realization.direct.empty()) accumulate_propagated(direct_response(realization), x, out.samples, 0, total);

  const TapResponse h_on = effective_response(realization, ris_id, on_cfg);
  const TapResponse h_off = effective_response(realization, ris_id, off_cfg);
  for (int s = 0; s < codebook.frame_slots(); ++s) {
    const bool on = s == 0 || (s >= 2 && word[s - 2] != 0);
    accumulate_propagated(on ? h_on : h_off, x, out.samples, s * slot, (s + 1) * slot);
  }
  if (reference_power) *reference_power = trial_reference_power(scenario, h_on, amp * amp);
  return out;
}

IdentificationResult ampmod_detect(const BasebandSignal& received, const AmpModCodebook& codebook) {
  const std::size_t slot = codebook.slot_length();
  if (received.samples.size() < codebook.frame_samples())
    throw ValidationError("ampmod frame needs " + std::to_string(codebook.frame_samples()) + " samples, got " +
                          std::to_string(received.samples.size()));
  IdentificationResult r;
  const std::span<const cdouble> samples(received.samples);
  std::vector<double> power(codebook.frame_slots());
  for (int s = 0; s < codebook.frame_slots(); ++s)
    power[s] = kernels::power_sum(samples.subspan(s * slot, slot)) / static_cast<double>(slot);
  r.ops += 4 * codebook.frame_samples() + power.size();

  const double threshold = 0.5 * (power[0] + power[1]);
  Codeword word(codebook.length());
  for (int l = 0; l < codebook.length(); ++l) word[l] = power[l + 2] > threshold;
  r.ops += 2 + codebook.length();

  int best = std::numeric_limits<int>::max();
  int ties = 0;
  for (const auto& [id, cw] : codebook.codewords()) {
    const int d = hamming_distance(word, cw);
    r.scores.push_back(static_cast<double>(d));
    if (d < best) {
      best = d;
      ties = 1;
      r.ris_id = id;
    } else if (d == best) {
      ++ties;
    }
  }
  r.ops += codebook.codewords().size() * static_cast<std::uint64_t>(codebook.length());
  r.distance = best;
  if (ties > 1) {
    r.verdict = Verdict::Ambiguous;
  } else if (best > (codebook.d_min() - 1) / 2) {
    r.verdict = Verdict::None;
  } else {
    r.verdict = Verdict::Identified;
  }
  return r;
}

}  // namespace risid
