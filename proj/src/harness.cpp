#include "risid/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <thread>

#include "risid/ampmod.hpp"
#include "risid/channel.hpp"
#include "risid/config.hpp"
#include "risid/errors.hpp"
#include "risid/rng.hpp"
#include "risid/spectral.hpp"
#include "risid/watermark.hpp"

namespace risid {

namespace {

bool noiseless(const Scenario& s) { return std::isinf(s.channel.snr_db) && s.channel.snr_db > 0; }

BasebandSignal with_noise(BasebandSignal signal, const Scenario& s, double reference, Stream& stream) {
  if (noiseless(s)) return signal;
  return add_awgn(std::move(signal), s.channel.snr_db, reference, stream);
}

}  // namespace

struct Experiment::Impl {
  std::optional<AmpModCodebook> codebook;
  std::optional<GroupAssignment> groups;
  std::optional<WatermarkBank> bank;
  SpectralFrame spectral_frame;
  std::vector<int> engaged;
  WatermarkFrame watermark_frame;
};

Experiment::Experiment(Scenario scenario, SchemeKind scheme)
    : scenario_(std::move(scenario)), scheme_(scheme), impl_(std::make_unique<Impl>()) {
  scenario_.validate();
  const auto& c = scenario_.channel;
  switch (scheme_) {
    case SchemeKind::AmpMod: {
      impl_->codebook = AmpModCodebook::from_scenario(scenario_);
      const int sym = c.num_subcarriers + c.cp_len;
      if (c.waveform == Waveform::MultiCarrier && impl_->codebook->slot_length() % sym != 0)
        throw ConfigurationError("[scheme.ampmod].slot_length: must be a multiple of the OFDM symbol length " +
                                 std::to_string(sym) + " in a multi-carrier scenario");
      break;
    }
    case SchemeKind::Spectral: {
      if (c.waveform != Waveform::MultiCarrier)
        throw ConfigurationError(
            "spectral fingerprinting requires a multi-carrier waveform ([channel].waveform = \"multi_carrier\")");
      impl_->groups = GroupAssignment::from_scenario(scenario_);
      const SpectralParams p = scenario_.schemes.spectral.value_or(SpectralParams{});
      impl_->spectral_frame = SpectralFrame{p.M, c.cp_len, p.null_out_of_group};
      for (const auto& d : scenario_.ris_list) impl_->engaged.push_back(d.ris_id);
      break;
    }
    case SchemeKind::Watermark:
      impl_->bank = WatermarkBank::from_scenario(scenario_);
      impl_->watermark_frame = watermark_frame(scenario_);
      break;
  }
}

Experiment::~Experiment() = default;
Experiment::Experiment(Experiment&&) noexcept = default;
Experiment& Experiment::operator=(Experiment&&) noexcept = default;

std::size_t Experiment::airtime() const {
  switch (scheme_) {
    case SchemeKind::AmpMod:
      return impl_->codebook->frame_samples();
    case SchemeKind::Spectral:
      return static_cast<std::size_t>(impl_->spectral_frame.num_symbols) *
             (spectral_subcarriers(scenario_) + impl_->spectral_frame.cp_len);
    case SchemeKind::Watermark:
      return impl_->watermark_frame.airtime(impl_->bank->chips_per_symbol());
  }
  throw InvariantError("unknown scheme");
}

IdentificationResult Experiment::trial(Stream& stream) const {
  const Scenario& s = scenario_;
  double reference = 0.0;
  switch (scheme_) {
    case SchemeKind::AmpMod: {
      const ChannelRealization ch = draw_channel(s, stream);
      BasebandSignal y = ampmod_encode(s.serving_ris_id, *impl_->codebook, ch, s, stream, &reference);
      return ampmod_detect(with_noise(std::move(y), s, reference, stream), *impl_->codebook);
    }
    case SchemeKind::Spectral: {
      const ChannelRealization ch = draw_channel(s, stream, spectral_taps(s));
      BasebandSignal y =
          spectral_encode(s, *impl_->groups, ch, impl_->spectral_frame, impl_->engaged, stream, &reference);
      const SpectralParams p = s.schemes.spectral.value_or(SpectralParams{});
      return spectral_detect(with_noise(std::move(y), s, reference, stream), *impl_->groups, p.mode,
                             p.threshold_factor);
    }
    case SchemeKind::Watermark: {
      const ChannelRealization ch = draw_channel(s, stream);
      const WatermarkParams p = s.schemes.watermark.value_or(WatermarkParams{});
      const std::vector<cdouble> payload = random_qpsk(impl_->watermark_frame.num_payload_symbols, stream);
      BasebandSignal y = watermark_encode(s, *impl_->bank, ch, payload, impl_->watermark_frame, stream, &reference);
      WatermarkDetectOptions opts;
      opts.payload_known = p.payload_known;
      opts.payload = payload;
      opts.num_payload_symbols = impl_->watermark_frame.num_payload_symbols;
      return watermark_detect(with_noise(std::move(y), s, reference, stream), *impl_->bank, opts);
    }
  }
  throw InvariantError("unknown scheme");
}

PointTally run_trials(const Experiment& experiment, std::uint64_t trials, std::uint64_t seed,
                      std::uint32_t point, int jobs) {
  const int workers = static_cast<int>(std::clamp<std::uint64_t>(static_cast<std::uint64_t>(std::max(jobs, 1)), 1,
                                                                 std::max<std::uint64_t>(trials, 1)));
  std::vector<PointTally> tallies(workers);
  std::vector<std::exception_ptr> errors(workers);
  const int serving = experiment.scenario().serving_ris_id;
  const auto work = [&](int w) {
    try {
      const std::uint64_t lo = trials * w / workers;
      const std::uint64_t hi = trials * (w + 1) / workers;
      PointTally& t = tallies[w];
      for (std::uint64_t i = lo; i < hi; ++i) {
        Stream stream(seed, point, i);
        const IdentificationResult r = experiment.trial(stream);
        if (r.verdict == Verdict::Ambiguous)
          ++t.ambiguous;
        else if (r.correct_for(serving))
          ++t.correct;
        else
          ++t.wrong;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  PointTally total;
  for (const auto& t : tallies) {
    total.correct += t.correct;
    total.wrong += t.wrong;
    total.ambiguous += t.ambiguous;
  }
  if (total.correct + total.wrong + total.ambiguous != trials)
    throw InvariantError("trial outcomes do not add up to the trial count");
  return total;
}

MisidEstimate run_point(const Experiment& experiment, std::uint64_t trials, std::uint64_t seed,
                        std::uint32_t point, int jobs) {
  if (trials < 1) throw ValidationError("trials must be >= 1");
  const PointTally t = run_trials(experiment, trials, seed, point, jobs);
  return make_estimate(t.wrong + t.ambiguous, t.ambiguous, trials);
}

std::size_t SweepSpec::num_points() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.values.size();
  return n;
}

std::vector<std::string_view> sweep_parameter_names() {
  return {"N", "m", "num_payload_symbols", "snr_db", "path_loss_exponent", "num_delay_taps", "tap_decay",
          "L", "slot_length", "rho", "d_min", "M", "group_size", "threshold_factor"};
}

bool parameter_is_integer(std::string_view name) {
  return name == "N" || name == "m" || name == "num_payload_symbols" || name == "num_delay_taps" || name == "L" ||
         name == "slot_length" || name == "d_min" || name == "M" || name == "group_size";
}

void SweepSpec::validate() const {
  if (axes.empty()) throw ValidationError("[axes]: at least one sweep axis is required");
  if (trials < 100) throw ValidationError("trials: must be >= 100 for confidence-interval validity");
  const auto names = sweep_parameter_names();
  for (const auto& a : axes) {
    if (std::find(names.begin(), names.end(), a.name) == names.end())
      throw ValidationError("[axes]." + a.name + ": unknown sweep parameter");
    if (a.values.empty()) throw ValidationError("[axes]." + a.name + ": must list at least one value");
    for (double v : a.values)
      if (parameter_is_integer(a.name) && v != std::floor(v))
        throw ValidationError("[axes]." + a.name + ": values must be integers");
  }
}

SweepSpec load_sweep_spec(std::string_view text) {
  const config::Document doc = config::parse(text);
  SweepSpec spec;
  {
    config::TableReader r(doc.root());
    spec.scheme = parse_scheme(r.get_string("scheme"));
    const std::int64_t trials = r.get_int("trials", static_cast<std::int64_t>(spec.trials));
    if (trials < 0) throw ValidationError("trials: must be positive");
    spec.trials = static_cast<std::uint64_t>(trials);
    r.finish();
  }
  for (const auto& t : doc.tables) {
    if (t.name.empty()) continue;
    if (t.name != "axes" || t.is_array_element) throw ValidationError("[" + t.name + "]: unknown section");
    for (const auto& [key, value] : t.entries) {
      const std::string field = "[axes]." + key;
      SweepAxis axis{key, {}};
      if (value.kind == config::Value::Kind::Array) {
        for (const auto& item : value.items) axis.values.push_back(config::as_double(item, field));
      } else {
        axis.values.push_back(config::as_double(value, field));
      }
      spec.axes.push_back(std::move(axis));
    }
  }
  spec.validate();
  return spec;
}

SweepSpec load_sweep_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open sweep spec '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_sweep_spec(ss.str());
}

Scenario apply_parameter(Scenario s, SchemeKind scheme, std::string_view name, double value) {
  if (parameter_is_integer(name) && value != std::floor(value))
    throw ValidationError(std::string(name) + ": expected an integer value");
  const int iv = static_cast<int>(value);
  const auto ampmod = [&]() -> AmpModParams& {
    if (!s.schemes.ampmod) s.schemes.ampmod = AmpModParams{};
    return *s.schemes.ampmod;
  };
  const auto spectral = [&]() -> SpectralParams& {
    if (!s.schemes.spectral) s.schemes.spectral = SpectralParams{};
    return *s.schemes.spectral;
  };
  const auto watermark = [&]() -> WatermarkParams& {
    if (!s.schemes.watermark) s.schemes.watermark = WatermarkParams{};
    return *s.schemes.watermark;
  };
  if (name == "N") {
    for (auto& r : s.ris_list) r.num_elements = iv;
  } else if (name == "m") {
    watermark().m = iv;
  } else if (name == "num_payload_symbols") {
    watermark().num_payload_symbols = iv;
  } else if (name == "snr_db") {
    s.channel.snr_db = value;
  } else if (name == "path_loss_exponent") {
    s.channel.path_loss_exponent = value;
  } else if (name == "num_delay_taps") {
    s.channel.num_delay_taps = iv;
    if (scheme == SchemeKind::Spectral && s.schemes.spectral) s.schemes.spectral->num_delay_taps = iv;
  } else if (name == "tap_decay") {
    s.channel.tap_decay = value;
  } else if (name == "L") {
    ampmod().L = iv;
  } else if (name == "slot_length") {
    ampmod().slot_length = iv;
  } else if (name == "rho") {
    ampmod().rho = value;
  } else if (name == "d_min") {
    ampmod().d_min = iv;
  } else if (name == "M") {
    spectral().M = iv;
  } else if (name == "group_size") {
    spectral().group_size = iv;
  } else if (name == "threshold_factor") {
    spectral().threshold_factor = value;
  } else {
    throw ValidationError("unknown sweep parameter '" + std::string(name) + "'");
  }
  s.validate();
  return s;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const Scenario& scenario, int jobs) {
  spec.validate();
  const std::size_t points = spec.num_points();
  std::vector<SweepRow> rows;
  rows.reserve(points);
  for (std::size_t p = 0; p < points; ++p) {
    SweepRow row;
    row.values.resize(spec.axes.size());
    std::size_t rem = p;
    for (std::size_t a = spec.axes.size(); a-- > 0;) {
      const auto& axis = spec.axes[a];
      row.values[a] = axis.values[rem % axis.values.size()];
      rem /= axis.values.size();
    }
    Scenario s = scenario;
    for (std::size_t a = 0; a < spec.axes.size(); ++a)
      s = apply_parameter(std::move(s), spec.scheme, spec.axes[a].name, row.values[a]);
    const Experiment experiment(std::move(s), spec.scheme);
    row.estimate = run_point(experiment, spec.trials, spec.seed, static_cast<std::uint32_t>(p), jobs);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string axis_value(std::string_view name, double v) {
  if (parameter_is_integer(name)) return std::to_string(static_cast<long long>(v));
  return csv_number(v);
}

void estimate_columns(std::ostringstream& o, const MisidEstimate& e) {
  o << e.trials << ',' << e.errors << ',' << e.ambiguous << ',' << csv_number(e.rate) << ','
    << csv_number(e.ci95_low) << ',' << csv_number(e.ci95_high);
}

}  // namespace

std::string sweep_csv(const SweepSpec& spec, const std::vector<SweepRow>& rows) {
  std::ostringstream o;
  o << "scheme";
  for (const auto& a : spec.axes) o << ',' << a.name;
  o << ",trials,errors,ambiguous,rate,ci_low,ci_high,seed\n";
  for (const auto& row : rows) {
    o << scheme_name(spec.scheme);
    for (std::size_t a = 0; a < spec.axes.size(); ++a) o << ',' << axis_value(spec.axes[a].name, row.values[a]);
    o << ',';
    estimate_columns(o, row.estimate);
    o << ',' << spec.seed << '\n';
  }
  return o.str();
}

Scenario matched_airtime_scenario(const Scenario& scenario, SchemeKind scheme, std::size_t budget) {
  Scenario s = scenario;
  const auto& c = s.channel;
  if (c.waveform != Waveform::MultiCarrier)
    throw ConfigurationError(
        "compare needs a multi-carrier scenario: spectral fingerprinting requires a multi-carrier waveform");
  const std::size_t sym = static_cast<std::size_t>(c.num_subcarriers + c.cp_len);
  const auto too_small = [&](std::string_view what) {
    return ValidationError("overhead budget of " + std::to_string(budget) + " samples is too small for " +
                           std::string(what));
  };
  switch (scheme) {
    case SchemeKind::AmpMod: {
      AmpModParams p = s.schemes.ampmod.value_or(AmpModParams{});
      const std::size_t per_slot = budget / (sym * static_cast<std::size_t>(p.L + 2));
      if (per_slot == 0) throw too_small("one OFDM symbol per ampmod slot");
      p.slot_length = static_cast<int>(per_slot * sym);
      s.schemes.ampmod = p;
      break;
    }
    case SchemeKind::Spectral: {
      SpectralParams p = s.schemes.spectral.value_or(SpectralParams{});
      const std::size_t symbols = budget / (static_cast<std::size_t>(spectral_subcarriers(s)) + c.cp_len);
      if (symbols == 0) throw too_small("one spectral OFDM symbol");
      p.M = static_cast<int>(symbols);
      s.schemes.spectral = p;
      break;
    }
    case SchemeKind::Watermark: {
      WatermarkParams p = s.schemes.watermark.value_or(WatermarkParams{});
      const std::size_t L = (std::size_t{1} << p.m) - 1;
      const std::size_t capacity = budget / sym * static_cast<std::size_t>(c.num_subcarriers);
      if (capacity < L) throw too_small("one watermark code period");
      p.num_payload_symbols = static_cast<int>(capacity / L);
      s.schemes.watermark = p;
      break;
    }
  }
  return s;
}

std::vector<CompareRow> compare_schemes(const Scenario& scenario, std::size_t budget, std::uint64_t trials,
                                        std::uint64_t seed, int jobs) {
  std::vector<CompareRow> rows;
  const SchemeKind order[] = {SchemeKind::AmpMod, SchemeKind::Spectral, SchemeKind::Watermark};
  std::vector<Experiment> experiments;
  for (SchemeKind k : order) experiments.emplace_back(matched_airtime_scenario(scenario, k, budget), k);
  for (std::size_t i = 0; i < experiments.size(); ++i) {
    const Experiment& e = experiments[i];
    CompareRow row;
    row.scheme = e.scheme();
    row.airtime = e.airtime();
    Stream probe(seed, static_cast<std::uint32_t>(i), trials);
    row.detector_ops = e.trial(probe).ops;
    row.estimate = run_point(e, trials, seed, static_cast<std::uint32_t>(i), jobs);
    rows.push_back(row);
  }
  return rows;
}

std::string compare_csv(const std::vector<CompareRow>& rows, std::uint64_t seed) {
  std::ostringstream o;
  o << "scheme,airtime,detector_ops,trials,errors,ambiguous,rate,ci_low,ci_high,seed\n";
  for (const auto& r : rows) {
    o << scheme_name(r.scheme) << ',' << r.airtime << ',' << r.detector_ops << ',';
    estimate_columns(o, r.estimate);
    o << ',' << seed << '\n';
  }
  return o.str();
}

std::string compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream o;
  o << std::left << std::setw(10) << "scheme" << std::right << std::setw(9) << "airtime" << std::setw(14)
    << "detector_ops" << std::setw(10) << "trials" << std::setw(9) << "errors" << std::setw(12) << "rate"
    << std::setw(12) << "ci_low" << std::setw(12) << "ci_high" << '\n';
  for (const auto& r : rows) {
    o << std::left << std::setw(10) << scheme_name(r.scheme) << std::right << std::setw(9) << r.airtime
      << std::setw(14) << r.detector_ops << std::setw(10) << r.estimate.trials << std::setw(9) << r.estimate.errors
      << std::setw(12) << std::setprecision(5) << std::fixed << r.estimate.rate << std::setw(12)
      << r.estimate.ci95_low << std::setw(12) << r.estimate.ci95_high << '\n';
    o.unsetf(std::ios::fixed);
  }
  return o.str();
}

}  // namespace risid
