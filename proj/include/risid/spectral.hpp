#pragma once

#include <map>
#include <span>
#include <vector>

#include "risid/channel.hpp"
#include "risid/identification.hpp"
#include "risid/scenario.hpp"
#include "risid/waveform.hpp"

namespace risid {

class Stream;

// Static network-wide table of contiguous subcarrier groups, one per RIS.
class GroupAssignment {
 public:
  GroupAssignment(int num_subcarriers, int group_size);

  // Group index of each RIS is its signature.
  static GroupAssignment from_scenario(const Scenario& scenario);

  // Throws ValidationError for out-of-range or already-taken groups.
  void assign(int ris_id, int group);

  int num_subcarriers() const { return num_subcarriers_; }
  int group_size() const { return group_size_; }
  int num_groups() const { return num_subcarriers_ / group_size_; }
  int group_of(int ris_id) const;
  int first_subcarrier(int group) const { return group * group_size_; }
  int center_subcarrier(int group) const { return group * group_size_ + group_size_ / 2; }
  const std::map<int, int>& groups() const { return groups_; }

 private:
  int num_subcarriers_;
  int group_size_;
  std::map<int, int> groups_;
};

// Everything the encoder needs besides the channel.
struct SpectralFrame {
  int num_symbols = 8;
  int cp_len = 16;
  bool null_out_of_group = false;
};

// Per-engaged-RIS phase configuration for OFDM symbol `m`. Without
// null_out_of_group every symbol uses co-phasing at the group center.
PhaseConfig spectral_phase_config(const ChannelRealization& realization, const GroupAssignment& assignment,
                                  int ris_id, bool null_out_of_group, Stream& stream);

// UE signal before noise: M OFDM symbols of unit-power random QPSK on all
// subcarriers, reflected by every engaged RIS co-phased to its group center.
// RISs outside `engaged` reflect nothing.
BasebandSignal spectral_encode(const Scenario& scenario, const GroupAssignment& assignment,
                               const ChannelRealization& realization, const SpectralFrame& frame,
                               std::span<const int> engaged, Stream& stream, double* reference_power = nullptr);

// Mean received power per group, averaged over symbols and group subcarriers.
std::vector<double> group_powers(const Grid& grid, const GroupAssignment& assignment);

IdentificationResult spectral_detect(const BasebandSignal& received, const GroupAssignment& assignment,
                                     SpectralMode mode, double threshold_factor);

}  // namespace risid
