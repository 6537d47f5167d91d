#pragma once

#include <map>
#include <span>
#include <vector>

#include "risid/channel.hpp"
#include "risid/identification.hpp"
#include "risid/scenario.hpp"
#include "risid/sequences.hpp"
#include "risid/waveform.hpp"

namespace risid {

class Stream;

// Gold codes assigned to RISs. The BS spreads every payload symbol of the
// stream aimed at RIS k with code c_k.
class WatermarkBank {
 public:
  explicit WatermarkBank(GoldFamily family);

  // Code index of each RIS is its signature.
  static WatermarkBank from_scenario(const Scenario& scenario);

  // Throws ValidationError for invalid or already-used code indices.
  void assign(int ris_id, int code_index);

  std::span<const double> code(int ris_id) const;
  int code_index(int ris_id) const;
  const std::map<int, int>& code_map() const { return code_map_; }
  const GoldFamily& family() const { return family_; }
  int chips_per_symbol() const { return static_cast<int>(family_.code_length()); }

 private:
  GoldFamily family_;
  std::map<int, int> code_map_;
};

// Chips of every payload symbol, laid out per waveform.
struct WatermarkFrame {
  int num_payload_symbols = 1;
  // Multi-carrier: chips fill subcarriers of consecutive OFDM symbols,
  // subcarrier-major, zero-padded to whole symbols.
  std::optional<MultiCarrierFraming> multi_carrier;

  std::size_t num_chips(int chips_per_symbol) const {
    return static_cast<std::size_t>(num_payload_symbols) * chips_per_symbol;
  }
  // Framing sized for the given code length (multi-carrier only).
  MultiCarrierFraming framing_for(int chips_per_symbol) const;
  std::size_t airtime(int chips_per_symbol) const;
};

WatermarkFrame watermark_frame(const Scenario& scenario);

// UE signal before noise: sum_k h_k * x_k with x_k = sqrt(share) * s_p * c_k
// per chip. The serving RIS is co-phased on tap 0, the others use random
// phases.
BasebandSignal watermark_encode(const Scenario& scenario, const WatermarkBank& bank,
                                const ChannelRealization& realization, std::span<const cdouble> payload,
                                const WatermarkFrame& frame, Stream& stream, double* reference_power = nullptr);

struct WatermarkDetectOptions {
  bool payload_known = false;
  std::span<const cdouble> payload;  // required when payload_known
  // 0: infer from the single-carrier length.
  int num_payload_symbols = 0;
};

// Per candidate k: z_k = sum_p |<chunk_p, c_k>| (or |sum_p conj(s_p) <chunk_p,
// c_k>| with a known payload); verdict is the RIS with the largest z_k.
IdentificationResult watermark_detect(const BasebandSignal& received, const WatermarkBank& bank,
                                      const WatermarkDetectOptions& options = {});

}  // namespace risid
