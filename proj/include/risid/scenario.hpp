#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "risid/geometry.hpp"

namespace risid {

enum class SnrReference {
  Serving,   // SNR relative to the mean received power of the serving-RIS component
  Transmit,  // SNR relative to total BS transmit power (unit), so array gain shows up
};

enum class Waveform { SingleCarrier, MultiCarrier };

enum class SchemeKind { AmpMod, Spectral, Watermark };

enum class SpectralMode { Dominant, EngagedSet };

enum class PowerSplit {
  Equal,  // total transmit power divided equally across the per-RIS streams
  Full,   // every per-RIS stream at full power
};

inline constexpr double kNoiseless = std::numeric_limits<double>::infinity();

struct ChannelParams {
  double path_loss_exponent = 2.0;
  double snr_db = kNoiseless;
  SnrReference snr_reference = SnrReference::Serving;
  int num_delay_taps = 1;
  // Exponential power-delay profile decay constant in tap intervals; infinity
  // gives equal tap weights.
  double tap_decay = 1.0;
  int tap_spacing = 1;  // samples between consecutive taps
  Waveform waveform = Waveform::SingleCarrier;
  int num_subcarriers = 64;
  int cp_len = 16;
  bool direct_path = false;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

struct AmpModParams {
  int L = 3;             // codeword length in slots
  int slot_length = 64;  // samples per slot
  double rho = 1.0;      // fraction of elements switched off for a 0 bit
  int d_min = 2;

  friend bool operator==(const AmpModParams&, const AmpModParams&) = default;
};

struct SpectralParams {
  std::optional<int> S;  // defaults to channel.num_subcarriers
  int group_size = 8;
  int M = 8;  // OFDM symbols observed per identification
  SpectralMode mode = SpectralMode::Dominant;
  double threshold_factor = 2.0;
  std::optional<int> num_delay_taps;
  // Extension: per-symbol phase schedule that suppresses out-of-group
  // subcarriers.
  bool null_out_of_group = false;

  friend bool operator==(const SpectralParams&, const SpectralParams&) = default;
};

struct WatermarkParams {
  int m = 5;  // Gold degree; code length 2^m - 1
  int num_payload_symbols = 1;
  PowerSplit power_split = PowerSplit::Equal;
  bool payload_known = false;

  friend bool operator==(const WatermarkParams&, const WatermarkParams&) = default;
};

struct SchemeParams {
  std::optional<AmpModParams> ampmod;
  std::optional<SpectralParams> spectral;
  std::optional<WatermarkParams> watermark;

  friend bool operator==(const SchemeParams&, const SchemeParams&) = default;
};

struct Scenario {
  Position bs_position;
  Position ue_position;
  std::vector<RisDescriptor> ris_list;
  int serving_ris_id = 0;
  ChannelParams channel;
  SchemeParams schemes;

  const RisDescriptor& ris(int ris_id) const;
  std::size_t index_of(int ris_id) const;
  std::size_t serving_index() const { return index_of(serving_ris_id); }
  // Throws ValidationError naming the offending field.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

Scenario load_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

std::string_view scheme_name(SchemeKind kind);
SchemeKind parse_scheme(std::string_view name);

// Number of taps the spectral scheme sees (its override or the channel's).
int spectral_taps(const Scenario& scenario);
int spectral_subcarriers(const Scenario& scenario);

}  // namespace risid
