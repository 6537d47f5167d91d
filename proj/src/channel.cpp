#include "risid/channel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "risid/errors.hpp"
#include "risid/rng.hpp"

namespace risid {

namespace {

double wrap_phase(double phi) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  phi = std::fmod(phi, two_pi);
  if (phi < 0.0) phi += two_pi;
  if (phi >= two_pi) phi = 0.0;
  return phi;
}

void draw_gains(std::vector<double>& re, std::vector<double>& im, std::size_t count, Stream& stream) {
  re.resize(count);
  im.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const cdouble z = stream.complex_normal();
    re[i] = z.real();
    im[i] = z.imag();
  }
}

}  // namespace

kernels::SplitView RisCascade::bs_gains(int tap) const {
  const std::size_t off = static_cast<std::size_t>(tap) * num_elements;
  return {std::span<const double>(g_re).subspan(off, num_elements),
          std::span<const double>(g_im).subspan(off, num_elements)};
}

kernels::SplitView RisCascade::ue_gains(int tap) const {
  const std::size_t off = static_cast<std::size_t>(tap) * num_elements;
  return {std::span<const double>(f_re).subspan(off, num_elements),
          std::span<const double>(f_im).subspan(off, num_elements)};
}

const RisCascade& ChannelRealization::cascade(int ris_id) const {
  for (const auto& c : ris)
    if (c.ris_id == ris_id) return c;
  throw ValidationError("unknown ris_id " + std::to_string(ris_id));
}

std::vector<double> exponential_pdp(int num_taps, double decay) {
  if (num_taps < 1) throw ValidationError("num_delay_taps must be >= 1");
  std::vector<double> w(num_taps);
  double total = 0.0;
  for (int t = 0; t < num_taps; ++t) {
    w[t] = std::isinf(decay) ? 1.0 : std::exp(-static_cast<double>(t) / decay);
    total += w[t];
  }
  for (auto& v : w) v /= total;
  return w;
}

ChannelRealization draw_channel(const Scenario& scenario, Stream& stream) {
  return draw_channel(scenario, stream, scenario.channel.num_delay_taps);
}

ChannelRealization draw_channel(const Scenario& scenario, Stream& stream, int num_taps) {
  const auto& c = scenario.channel;
  ChannelRealization r;
  r.tap_weights = exponential_pdp(num_taps, c.tap_decay);
  r.tap_spacing = c.tap_spacing;
  r.ris.reserve(scenario.ris_list.size());
  for (const auto& d : scenario.ris_list) {
    RisCascade cas;
    cas.ris_id = d.ris_id;
    cas.num_elements = d.num_elements;
    cas.num_taps = num_taps;
    cas.blocked = d.blocked;
    cas.amplitude = path_loss_amplitude(distance(scenario.bs_position, d.position), c.path_loss_exponent) *
                    path_loss_amplitude(distance(d.position, scenario.ue_position), c.path_loss_exponent);
    const std::size_t count = static_cast<std::size_t>(num_taps) * d.num_elements;
    draw_gains(cas.g_re, cas.g_im, count, stream);
    draw_gains(cas.f_re, cas.f_im, count, stream);
    r.ris.push_back(std::move(cas));
  }
  if (c.direct_path) {
    const double amp = path_loss_amplitude(distance(scenario.bs_position, scenario.ue_position),
                                           c.path_loss_exponent);
    r.direct.resize(num_taps);
    for (int t = 0; t < num_taps; ++t) r.direct[t] = amp * std::sqrt(r.tap_weights[t]) * stream.complex_normal();
  }
  return r;
}

PhaseConfig PhaseConfig::all_on(std::size_t n) { return {std::vector<double>(n, 0.0), std::vector<std::uint8_t>(n, 1)}; }

void PhaseConfig::check_size(std::size_t n) const {
  if (phi.size() != n || on.size() != n)
    throw ValidationError("phase configuration has " + std::to_string(phi.size()) + " entries for " +
                          std::to_string(n) + " elements");
}

std::vector<cdouble> element_responses(const ChannelRealization& realization, int ris_id,
                                       PhaseReference reference) {
  const RisCascade& cas = realization.cascade(ris_id);
  const std::size_t N = cas.num_elements;
  std::vector<cdouble> out(N);
  std::vector<double> re(N), im(N);
  const auto accumulate_tap = [&](int t, cdouble rot) {
    kernels::complex_multiply(cas.bs_gains(t), cas.ue_gains(t), re, im);
    const cdouble scale = std::sqrt(realization.tap_weights[t]) * rot;
    for (std::size_t n = 0; n < N; ++n) out[n] += cdouble(re[n], im[n]) * scale;
  };
  if (reference.kind == PhaseReference::Kind::Tap) {
    if (reference.index < 0 || reference.index >= cas.num_taps)
      throw ValidationError("reference tap " + std::to_string(reference.index) + " out of range");
    accumulate_tap(reference.index, 1.0);
  } else {
    const int S = reference.num_subcarriers;
    if (S <= 0 || reference.index < 0 || reference.index >= S)
      throw ValidationError("reference subcarrier " + std::to_string(reference.index) + " out of range");
    for (int t = 0; t < cas.num_taps; ++t) {
      const double angle = -2.0 * std::numbers::pi * reference.index *
                           static_cast<double>(t * realization.tap_spacing) / S;
      accumulate_tap(t, std::polar(1.0, angle));
    }
  }
  return out;
}

PhaseConfig serving_phase_config(const ChannelRealization& realization, int ris_id,
                                 PhaseReference reference) {
  const auto resp = element_responses(realization, ris_id, reference);
  PhaseConfig cfg = PhaseConfig::all_on(resp.size());
  for (std::size_t n = 0; n < resp.size(); ++n) cfg.phi[n] = wrap_phase(-std::arg(resp[n]));
  return cfg;
}

PhaseConfig random_phase_config(const ChannelRealization& realization, int ris_id, Stream& stream) {
  const RisCascade& cas = realization.cascade(ris_id);
  PhaseConfig cfg = PhaseConfig::all_on(cas.num_elements);
  for (auto& p : cfg.phi) p = stream.phase();
  return cfg;
}

cdouble TapResponse::frequency_response(int k, int S) const {
  cdouble h = 0.0;
  for (std::size_t t = 0; t < taps.size(); ++t) {
    const double angle = -2.0 * std::numbers::pi * k * static_cast<double>(t * tap_spacing) / S;
    h += taps[t] * std::polar(1.0, angle);
  }
  return h;
}

std::vector<cdouble> TapResponse::frequency_response(int S) const {
  std::vector<cdouble> out(S);
  for (int k = 0; k < S; ++k) out[k] = frequency_response(k, S);
  return out;
}

cdouble TapResponse::scalar() const {
  if (taps.size() != 1) throw ValidationError("scalar channel requested from a multi-tap response");
  return taps.front();
}

double TapResponse::power() const {
  double p = 0.0;
  for (const auto& h : taps) p += std::norm(h);
  return p;
}

TapResponse& TapResponse::operator+=(const TapResponse& other) {
  if (taps.empty()) {
    *this = other;
    return *this;
  }
  if (other.taps.size() != taps.size() || other.tap_spacing != tap_spacing)
    throw ValidationError("cannot add responses with different tap structure");
  for (std::size_t t = 0; t < taps.size(); ++t) taps[t] += other.taps[t];
  return *this;
}

TapResponse effective_response(const ChannelRealization& realization, int ris_id,
                               const PhaseConfig& config) {
  const RisCascade& cas = realization.cascade(ris_id);
  config.check_size(cas.num_elements);
  TapResponse out;
  out.tap_spacing = realization.tap_spacing;
  out.taps.assign(cas.num_taps, 0.0);
  if (cas.blocked) return out;

  const std::size_t N = cas.num_elements;
  std::vector<double> w_re(N), w_im(N);
  for (std::size_t n = 0; n < N; ++n) {
    if (config.on[n]) {
      w_re[n] = std::cos(config.phi[n]);
      w_im[n] = std::sin(config.phi[n]);
    }
  }
  const kernels::SplitView w{w_re, w_im};
  for (int t = 0; t < cas.num_taps; ++t) {
    const cdouble sum = kernels::triple_product_sum(cas.bs_gains(t), w, cas.ue_gains(t));
    out.taps[t] = cas.amplitude * std::sqrt(realization.tap_weights[t]) * sum;
  }
  return out;
}

std::map<int, TapResponse> effective_channel(const ChannelRealization& realization,
                                             const PhaseConfigs& configs, const Scenario& scenario) {
  std::map<int, TapResponse> out;
  for (const auto& d : scenario.ris_list) {
    const auto it = configs.find(d.ris_id);
    if (it == configs.end())
      throw ValidationError("missing phase configuration for RIS " + std::to_string(d.ris_id));
    out.emplace(d.ris_id, effective_response(realization, d.ris_id, it->second));
  }
  return out;
}

TapResponse direct_response(const ChannelRealization& realization) {
  TapResponse out;
  out.tap_spacing = realization.tap_spacing;
  out.taps = realization.direct;
  return out;
}

void accumulate_propagated(const TapResponse& h, std::span<const cdouble> x, std::span<cdouble> y,
                           std::size_t begin, std::size_t end) {
  for (std::size_t t = 0; t < h.taps.size(); ++t) {
    const cdouble g = h.taps[t];
    if (g == 0.0) continue;
    const std::size_t delay = t * static_cast<std::size_t>(h.tap_spacing);
    for (std::size_t i = std::max(begin, delay); i < end; ++i) y[i] += g * x[i - delay];
  }
}

std::vector<cdouble> propagate(const TapResponse& h, std::span<const cdouble> x) {
  std::vector<cdouble> y(x.size());
  accumulate_propagated(h, x, y, 0, x.size());
  return y;
}

double noise_variance(double snr_db, double reference_power) {
  if (!(reference_power > 0.0))
    throw ValidationError("noise reference power must be positive (got " + std::to_string(reference_power) + ")");
  if (std::isinf(snr_db) && snr_db > 0) return 0.0;
  return reference_power / std::pow(10.0, snr_db / 10.0);
}

BasebandSignal add_awgn(BasebandSignal signal, double snr_db, double reference_power, Stream& stream) {
  const double var = noise_variance(snr_db, reference_power);
  if (var == 0.0) return signal;
  const double sigma = std::sqrt(var);
  for (auto& s : signal.samples) s += sigma * stream.complex_normal();
  return signal;
}

double equal_power_share(const Scenario& scenario) {
  return 1.0 / static_cast<double>(scenario.ris_list.size());
}

double trial_reference_power(const Scenario& scenario, const TapResponse& serving, double share) {
  if (scenario.channel.snr_reference == SnrReference::Transmit) return 1.0;
  const double p = share * serving.power();
  if (!(p > 0.0) && !std::isinf(scenario.channel.snr_db))
    throw ValidationError(
        "[channel].snr_reference: serving-RIS received power is zero; use snr_reference = \"transmit\"");
  return p;
}

}  // namespace risid
