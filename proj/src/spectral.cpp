#include "risid/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "risid/errors.hpp"
#include "risid/rng.hpp"

namespace risid {

GroupAssignment::GroupAssignment(int num_subcarriers, int group_size)
    : num_subcarriers_(num_subcarriers), group_size_(group_size) {
  if (group_size < 1 || num_subcarriers < 1 || num_subcarriers % group_size != 0)
    throw ValidationError("[scheme.spectral].group_size: must divide S");
}

GroupAssignment GroupAssignment::from_scenario(const Scenario& scenario) {
  const SpectralParams p = scenario.schemes.spectral.value_or(SpectralParams{});
  GroupAssignment a(spectral_subcarriers(scenario), p.group_size);
  for (const auto& d : scenario.ris_list) a.assign(d.ris_id, d.signature);
  return a;
}

void GroupAssignment::assign(int ris_id, int group) {
  if (group < 0 || group >= num_groups())
    throw ValidationError("spectral group " + std::to_string(group) + " of RIS " + std::to_string(ris_id) +
                          " out of range (" + std::to_string(num_groups()) + " groups)");
  for (const auto& [id, g] : groups_)
    if (g == group)
      throw ValidationError("spectral group " + std::to_string(group) + " assigned to both RIS " +
                            std::to_string(id) + " and RIS " + std::to_string(ris_id));
  if (!groups_.emplace(ris_id, group).second)
    throw ValidationError("RIS " + std::to_string(ris_id) + " assigned a spectral group twice");
}

int GroupAssignment::group_of(int ris_id) const {
  const auto it = groups_.find(ris_id);
  if (it == groups_.end()) throw ValidationError("RIS " + std::to_string(ris_id) + " has no spectral group");
  return it->second;
}

PhaseConfig spectral_phase_config(const ChannelRealization& realization, const GroupAssignment& assignment,
                                  int ris_id, bool null_out_of_group, Stream& stream) {
  const int S = assignment.num_subcarriers();
  const int own = assignment.group_of(ris_id);
  PhaseConfig cfg =
      serving_phase_config(realization, ris_id, PhaseReference::subcarrier(assignment.center_subcarrier(own), S));
  if (!null_out_of_group) return cfg;

  // One greedy pass in random element order over 8 candidate phase offsets,
  // maximizing own-center power minus the power at every other group center.
  const int G = assignment.num_groups();
  std::vector<std::vector<cdouble>> resp(G);
  for (int g = 0; g < G; ++g)
    resp[g] = element_responses(realization, ris_id, PhaseReference::subcarrier(assignment.center_subcarrier(g), S));
  const std::size_t N = cfg.phi.size();
  std::vector<cdouble> total(G, 0.0);
  for (int g = 0; g < G; ++g)
    for (std::size_t n = 0; n < N; ++n) total[g] += resp[g][n] * std::polar(1.0, cfg.phi[n]);
  const auto objective = [&](const std::vector<cdouble>& t) {
    double v = 0.0;
    for (int g = 0; g < G; ++g) v += (g == own ? 1.0 : -1.0) * std::norm(t[g]);
    return v;
  };
  std::vector<std::size_t> order(N);
  for (std::size_t n = 0; n < N; ++n) order[n] = n;
  for (std::size_t i = N; i > 1; --i) std::swap(order[i - 1], order[stream.next_u32() % i]);
  std::vector<cdouble> trial(G);
  for (std::size_t n : order) {
    double best_value = -std::numeric_limits<double>::infinity();
    double best_phi = cfg.phi[n];
    for (int q = 0; q < 8; ++q) {
      const double phi = std::fmod(cfg.phi[n] + q * std::numbers::pi / 4.0, 2.0 * std::numbers::pi);
      for (int g = 0; g < G; ++g)
        trial[g] = total[g] + resp[g][n] * (std::polar(1.0, phi) - std::polar(1.0, cfg.phi[n]));
      const double v = objective(trial);
      if (v > best_value) {
        best_value = v;
        best_phi = phi;
      }
    }
    for (int g = 0; g < G; ++g) total[g] += resp[g][n] * (std::polar(1.0, best_phi) - std::polar(1.0, cfg.phi[n]));
    cfg.phi[n] = best_phi;
  }
  return cfg;
}

BasebandSignal spectral_encode(const Scenario& scenario, const GroupAssignment& assignment,
                               const ChannelRealization& realization, const SpectralFrame& frame,
                               std::span<const int> engaged, Stream& stream, double* reference_power) {
  if (frame.num_symbols < 1) throw ValidationError("[scheme.spectral].M: must be >= 1");
  for (int id : engaged) assignment.group_of(id);
  const int S = assignment.num_subcarriers();
  const int M = frame.num_symbols;
  const std::size_t sym_len = static_cast<std::size_t>(S + frame.cp_len);
  const double amp = std::sqrt(equal_power_share(scenario));

  Grid grid(S, M);
  grid.cells = random_qpsk(grid.cells.size(), stream);
  BasebandSignal x = ofdm_modulate(grid, frame.cp_len);
  for (auto& v : x.samples) v *= amp;

  BasebandSignal out;
  out.framing = x.framing;
  out.samples.assign(x.samples.size(), 0.0);
  if (!realization.direct.empty())
    accumulate_propagated(direct_response(realization), x.samples, out.samples, 0, out.samples.size());

  const int serving = scenario.serving_ris_id;
  double serving_power = 0.0;
  for (int id : engaged) {
    if (!frame.null_out_of_group) {
      const TapResponse h = effective_response(
          realization, id, spectral_phase_config(realization, assignment, id, false, stream));
      accumulate_propagated(h, x.samples, out.samples, 0, out.samples.size());
      if (id == serving) serving_power = h.power();
      continue;
    }
    for (int m = 0; m < M; ++m) {
      const TapResponse h =
          effective_response(realization, id, spectral_phase_config(realization, assignment, id, true, stream));
      accumulate_propagated(h, x.samples, out.samples, m * sym_len, (m + 1) * sym_len);
      if (id == serving) serving_power += h.power() / M;
    }
  }
  if (reference_power) {
    TapResponse mean_serving;
    mean_serving.taps = {std::sqrt(serving_power)};
    *reference_power = trial_reference_power(scenario, mean_serving, amp * amp);
  }
  return out;
}

std::vector<double> group_powers(const Grid& grid, const GroupAssignment& assignment) {
  const int S = assignment.num_subcarriers();
  std::vector<double> per_sc(S, 0.0);
  for (int m = 0; m < grid.num_symbols; ++m)
    for (int k = 0; k < S; ++k) per_sc[k] += std::norm(grid.at(k, m));
  std::vector<double> out(assignment.num_groups(), 0.0);
  const double norm = 1.0 / (static_cast<double>(grid.num_symbols) * assignment.group_size());
  for (int g = 0; g < assignment.num_groups(); ++g) {
    double acc = 0.0;
    for (int i = 0; i < assignment.group_size(); ++i) acc += per_sc[assignment.first_subcarrier(g) + i];
    out[g] = acc * norm;
  }
  return out;
}

IdentificationResult spectral_detect(const BasebandSignal& received, const GroupAssignment& assignment,
                                     SpectralMode mode, double threshold_factor) {
  if (!received.framing || received.framing->num_subcarriers != assignment.num_subcarriers())
    throw ValidationError("spectral detection needs a multi-carrier signal with " +
                          std::to_string(assignment.num_subcarriers()) + " subcarriers");
  IdentificationResult r;
  const Grid grid = ofdm_demodulate(received, &r.ops);
  const std::vector<double> power = group_powers(grid, assignment);
  const auto S = static_cast<std::uint64_t>(assignment.num_subcarriers());
  r.ops += 4 * S * grid.num_symbols + S + power.size();

  for (const auto& [id, g] : assignment.groups()) r.scores.push_back(power[g]);

  if (mode == SpectralMode::Dominant) {
    double best = -1.0;
    int ties = 0;
    for (const auto& [id, g] : assignment.groups()) {
      if (power[g] > best) {
        best = power[g];
        r.ris_id = id;
        ties = 1;
      } else if (power[g] == best) {
        ++ties;
      }
    }
    r.ops += assignment.groups().size();
    r.verdict = ties == 1 ? Verdict::Identified : (ties > 1 ? Verdict::Ambiguous : Verdict::None);
    return r;
  }

  r.set_valued = true;
  std::vector<double> sorted = power;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t G = sorted.size();
  const double median = G % 2 ? sorted[G / 2] : 0.5 * (sorted[G / 2 - 1] + sorted[G / 2]);
  r.ops += G * 4;
  const double threshold = threshold_factor * median;
  double best = -1.0;
  for (const auto& [id, g] : assignment.groups()) {
    if (power[g] > threshold) {
      r.engaged.push_back(id);
      if (power[g] > best) {
        best = power[g];
        r.ris_id = id;
      }
    }
  }
  r.verdict = r.engaged.empty() ? Verdict::None : Verdict::Identified;
  return r;
}

}  // namespace risid
