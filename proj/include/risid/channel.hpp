#pragma once

#include <complex>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "risid/kernels.hpp"
#include "risid/scenario.hpp"
#include "risid/waveform.hpp"

namespace risid {

class Stream;

// One RIS's random cascade. Gains are stored unweighted (unit-variance
// circular Gaussian) in tap-major structure-of-arrays layout [t * N + n];
// tap t of the composite element cascade is sqrt(w_t) * g[t][n] * f[t][n].
struct RisCascade {
  int ris_id = 0;
  int num_elements = 0;
  int num_taps = 0;
  double amplitude = 0.0;  // path-loss amplitude of BS->RIS times RIS->UE
  bool blocked = false;
  std::vector<double> g_re, g_im;  // BS -> element
  std::vector<double> f_re, f_im;  // element -> UE

  kernels::SplitView bs_gains(int tap) const;
  kernels::SplitView ue_gains(int tap) const;
};

struct ChannelRealization {
  std::vector<double> tap_weights;  // power-delay profile, sums to 1
  int tap_spacing = 1;
  std::vector<RisCascade> ris;  // scenario order
  std::vector<cdouble> direct;  // BS->UE taps, empty when the direct path is off

  const RisCascade& cascade(int ris_id) const;
  int num_taps() const { return static_cast<int>(tap_weights.size()); }
};

// Normalized exponential profile w_t ~ exp(-t / decay); infinite decay gives
// equal weights.
std::vector<double> exponential_pdp(int num_taps, double decay);

ChannelRealization draw_channel(const Scenario& scenario, Stream& stream);
// Same, with the tap count overridden (used by the spectral scheme).
ChannelRealization draw_channel(const Scenario& scenario, Stream& stream, int num_taps);

struct PhaseConfig {
  std::vector<double> phi;       // [0, 2*pi) per element
  std::vector<std::uint8_t> on;  // element active mask

  static PhaseConfig all_on(std::size_t num_elements);
  void check_size(std::size_t num_elements) const;
};

using PhaseConfigs = std::map<int, PhaseConfig>;

// What the serving RIS aligns its element phases to.
struct PhaseReference {
  enum class Kind { Tap, Subcarrier };
  Kind kind = Kind::Tap;
  int index = 0;
  int num_subcarriers = 0;

  static PhaseReference tap(int t) { return {Kind::Tap, t, 0}; }
  static PhaseReference subcarrier(int k, int S) { return {Kind::Subcarrier, k, S}; }
};

// Per-element cascade response at the reference (tap gain or subcarrier
// frequency response), without path loss.
std::vector<cdouble> element_responses(const ChannelRealization& realization, int ris_id,
                                       PhaseReference reference);

// Co-phasing: phi[n] = -arg(cascade_n at reference), all elements on.
PhaseConfig serving_phase_config(const ChannelRealization& realization, int ris_id,
                                 PhaseReference reference);
PhaseConfig random_phase_config(const ChannelRealization& realization, int ris_id, Stream& stream);

// Tapped composite response of one path at the UE.
struct TapResponse {
  std::vector<cdouble> taps;
  int tap_spacing = 1;

  cdouble frequency_response(int k, int S) const;
  std::vector<cdouble> frequency_response(int S) const;
  // Single-tap (flat) gain; equals the frequency response at every subcarrier.
  cdouble scalar() const;
  double power() const;  // sum_t |h_t|^2

  TapResponse& operator+=(const TapResponse& other);
};

// h[t] = amplitude * sqrt(w_t) * sum_n mask[n] g[t][n] e^{j phi[n]} f[t][n].
TapResponse effective_response(const ChannelRealization& realization, int ris_id,
                               const PhaseConfig& config);

// Per-RIS responses for every RIS in the scenario. Throws ValidationError if a
// configuration is missing or sized wrongly.
std::map<int, TapResponse> effective_channel(const ChannelRealization& realization,
                                             const PhaseConfigs& configs, const Scenario& scenario);

TapResponse direct_response(const ChannelRealization& realization);

// y[i] += sum_t h[t] x[i - t * spacing] for i in [begin, end), with x zero
// before its first sample.
void accumulate_propagated(const TapResponse& h, std::span<const cdouble> x, std::span<cdouble> y,
                           std::size_t begin, std::size_t end);
std::vector<cdouble> propagate(const TapResponse& h, std::span<const cdouble> x);

// Noise variance reference_power / 10^(snr_db / 10); zero when noiseless.
double noise_variance(double snr_db, double reference_power);

// snr_db = +inf leaves the signal unchanged.
BasebandSignal add_awgn(BasebandSignal signal, double snr_db, double reference_power, Stream& stream);

// Per-stream transmit power share (equal split across the scenario's RISs).
double equal_power_share(const Scenario& scenario);

// Noise reference for a trial: the mean received power of the serving-RIS
// component (Serving mode) or the unit total transmit power (Transmit mode).
double trial_reference_power(const Scenario& scenario, const TapResponse& serving, double share);

}  // namespace risid
