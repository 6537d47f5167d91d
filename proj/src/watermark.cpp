#include "risid/watermark.hpp"

#include <cmath>
#include <string>

#include "risid/errors.hpp"
#include "risid/rng.hpp"

namespace risid {

WatermarkBank::WatermarkBank(GoldFamily family) : family_(std::move(family)) {}

WatermarkBank WatermarkBank::from_scenario(const Scenario& scenario) {
  const WatermarkParams p = scenario.schemes.watermark.value_or(WatermarkParams{});
  WatermarkBank bank(gold_family(p.m));
  for (const auto& d : scenario.ris_list) bank.assign(d.ris_id, d.signature);
  return bank;
}

void WatermarkBank::assign(int ris_id, int code_index) {
  if (code_index < 0 || static_cast<std::size_t>(code_index) >= family_.size())
    throw ValidationError("watermark code index " + std::to_string(code_index) + " of RIS " +
                          std::to_string(ris_id) + " out of range (family of " + std::to_string(family_.size()) +
                          ")");
  for (const auto& [id, c] : code_map_)
    if (c == code_index)
      throw ValidationError("watermark code " + std::to_string(code_index) + " assigned to both RIS " +
                            std::to_string(id) + " and RIS " + std::to_string(ris_id));
  if (!code_map_.emplace(ris_id, code_index).second)
    throw ValidationError("RIS " + std::to_string(ris_id) + " assigned a watermark code twice");
}

int WatermarkBank::code_index(int ris_id) const {
  const auto it = code_map_.find(ris_id);
  if (it == code_map_.end()) throw ValidationError("RIS " + std::to_string(ris_id) + " has no watermark code");
  return it->second;
}

std::span<const double> WatermarkBank::code(int ris_id) const { return family_.codes[code_index(ris_id)]; }

MultiCarrierFraming WatermarkFrame::framing_for(int chips_per_symbol) const {
  MultiCarrierFraming f = *multi_carrier;
  const std::size_t chips = num_chips(chips_per_symbol);
  f.num_symbols = static_cast<int>((chips + f.num_subcarriers - 1) / f.num_subcarriers);
  return f;
}

std::size_t WatermarkFrame::airtime(int chips_per_symbol) const {
  if (!multi_carrier) return num_chips(chips_per_symbol);
  const MultiCarrierFraming f = framing_for(chips_per_symbol);
  return static_cast<std::size_t>(f.num_symbols) * f.symbol_length();
}

WatermarkFrame watermark_frame(const Scenario& scenario) {
  const WatermarkParams p = scenario.schemes.watermark.value_or(WatermarkParams{});
  WatermarkFrame frame;
  frame.num_payload_symbols = p.num_payload_symbols;
  if (scenario.channel.waveform == Waveform::MultiCarrier)
    frame.multi_carrier = MultiCarrierFraming{scenario.channel.num_subcarriers, 1, scenario.channel.cp_len};
  return frame;
}

namespace {

// Chip stream of one RIS: sqrt(share) * s_p * c_k[i], as time samples or
// OFDM-modulated.
std::vector<cdouble> spread(std::span<const cdouble> payload, std::span<const double> code, double amp,
                            const WatermarkFrame& frame, std::optional<MultiCarrierFraming>& framing) {
  const std::size_t L = code.size();
  std::vector<cdouble> chips(frame.num_chips(static_cast<int>(L)));
  for (std::size_t p = 0; p < static_cast<std::size_t>(frame.num_payload_symbols); ++p)
    for (std::size_t i = 0; i < L; ++i) chips[p * L + i] = amp * payload[p] * code[i];
  if (!frame.multi_carrier) return chips;
  const MultiCarrierFraming f = frame.framing_for(static_cast<int>(L));
  Grid grid(f.num_subcarriers, f.num_symbols);
  std::copy(chips.begin(), chips.end(), grid.cells.begin());
  BasebandSignal s = ofdm_modulate(grid, f.cp_len);
  framing = s.framing;
  return std::move(s.samples);
}

}  // namespace

BasebandSignal watermark_encode(const Scenario& scenario, const WatermarkBank& bank,
                                const ChannelRealization& realization, std::span<const cdouble> payload,
                                const WatermarkFrame& frame, Stream& stream, double* reference_power) {
  if (payload.size() != static_cast<std::size_t>(frame.num_payload_symbols))
    throw ValidationError("watermark payload has " + std::to_string(payload.size()) + " symbols, frame expects " +
                          std::to_string(frame.num_payload_symbols));
  for (const auto& d : scenario.ris_list) bank.code_index(d.ris_id);
  const WatermarkParams params = scenario.schemes.watermark.value_or(WatermarkParams{});
  const double share = params.power_split == PowerSplit::Equal ? equal_power_share(scenario) : 1.0;
  const double amp = std::sqrt(share);

  PhaseConfigs configs;
  for (const auto& d : scenario.ris_list) {
    configs.emplace(d.ris_id, d.ris_id == scenario.serving_ris_id
                                  ? serving_phase_config(realization, d.ris_id, PhaseReference::tap(0))
                                  : random_phase_config(realization, d.ris_id, stream));
  }
  const std::map<int, TapResponse> channel = effective_channel(realization, configs, scenario);

  BasebandSignal out;
  std::vector<cdouble> sum_of_streams;
  for (const auto& d : scenario.ris_list) {
    const std::vector<cdouble> x = spread(payload, bank.code(d.ris_id), amp, frame, out.framing);
    if (out.samples.empty()) out.samples.assign(x.size(), 0.0);
    accumulate_propagated(channel.at(d.ris_id), x, out.samples, 0, x.size());
    if (!realization.direct.empty()) {
      if (sum_of_streams.empty()) sum_of_streams.assign(x.size(), 0.0);
      for (std::size_t i = 0; i < x.size(); ++i) sum_of_streams[i] += x[i];
    }
  }
  if (!realization.direct.empty())
    accumulate_propagated(direct_response(realization), sum_of_streams, out.samples, 0, out.samples.size());
  if (reference_power)
    *reference_power = trial_reference_power(scenario, channel.at(scenario.serving_ris_id), share);
  return out;
}

IdentificationResult watermark_detect(const BasebandSignal& received, const WatermarkBank& bank,
                                      const WatermarkDetectOptions& options) {
  const std::size_t L = static_cast<std::size_t>(bank.chips_per_symbol());
  IdentificationResult r;

  std::vector<cdouble> chips;
  std::size_t symbols = 0;
  if (received.framing) {
    const Grid grid = ofdm_demodulate(received, &r.ops);
    chips = grid.cells;
    symbols = options.num_payload_symbols > 0 ? static_cast<std::size_t>(options.num_payload_symbols)
                                              : chips.size() / L;
    if (symbols * L > chips.size())
      throw ValidationError("multi-carrier watermark frame holds fewer than " + std::to_string(symbols) +
                            " payload symbols");
  } else {
    chips = received.samples;
    if (chips.empty() || chips.size() % L != 0)
      throw ValidationError("received length " + std::to_string(chips.size()) +
                            " is not a whole number of code periods (L = " + std::to_string(L) + ")");
    symbols = chips.size() / L;
    if (options.num_payload_symbols > 0 && static_cast<std::size_t>(options.num_payload_symbols) != symbols)
      throw ValidationError("received length does not match num_payload_symbols");
  }
  if (options.payload_known && options.payload.size() < symbols)
    throw ValidationError("known-payload detection needs every payload symbol");

  const std::span<const cdouble> view(chips);
  double best = -1.0;
  int ties = 0;
  for (const auto& [id, index] : bank.code_map()) {
    const std::span<const double> code = bank.family().codes[index];
    double z = 0.0;
    cdouble coherent = 0.0;
    for (std::size_t p = 0; p < symbols; ++p) {
      const cdouble c = correlate(view.subspan(p * L, L), code);
      if (options.payload_known)
        coherent += std::conj(options.payload[p]) * c;
      else
        z += std::abs(c);
    }
    if (options.payload_known) z = std::abs(coherent);
    r.scores.push_back(z);
    if (z > best) {
      best = z;
      r.ris_id = id;
      ties = 1;
    } else if (z == best) {
      ++ties;
    }
  }
  // 4 flops per chip per candidate, plus ~8 per magnitude/combine.
  r.ops += bank.code_map().size() * symbols * (4 * L + 8);
  r.verdict = ties == 1 ? Verdict::Identified : Verdict::Ambiguous;
  return r;
}

}  // namespace risid
