#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "risid/channel.hpp"
#include "risid/identification.hpp"
#include "risid/scenario.hpp"
#include "risid/waveform.hpp"

namespace risid {

class Stream;

using Codeword = std::vector<std::uint8_t>;

// On/off keying codebook. Each frame is [all-on pilot][all-off pilot][L
// codeword slots], every slot `slot_length` samples long.
class AmpModCodebook {
 public:
  AmpModCodebook(int length, int d_min, int slot_length);

  // Builds the parity-extended codeword of each RIS's signature.
  static AmpModCodebook from_scenario(const Scenario& scenario);

  // Throws ValidationError if the word has the wrong length, duplicates an
  // existing codeword, or sits closer than d_min to one.
  void add(int ris_id, Codeword word);

  const Codeword& codeword(int ris_id) const;
  const std::map<int, Codeword>& codewords() const { return codewords_; }
  int length() const { return length_; }
  int d_min() const { return d_min_; }
  int slot_length() const { return slot_length_; }
  int frame_slots() const { return 2 + length_; }
  std::size_t frame_samples() const { return static_cast<std::size_t>(frame_slots()) * slot_length_; }
  // Smallest pairwise distance among registered codewords (length + 1 when
  // fewer than two are registered).
  int minimum_distance() const;

 private:
  int length_;
  int d_min_;
  int slot_length_;
  std::map<int, Codeword> codewords_;
};

int hamming_distance(const Codeword& a, const Codeword& b);

// `value` in (length / reps - 1) bits MSB first plus an even-parity bit,
// repeated reps = ceil(d_min / 2) times; minimum distance 2 * reps.
Codeword parity_codeword(int value, int length, int d_min);

// UE signal before noise. The keyed RIS co-phases (tap 0) in 1-slots and
// switches off round(rho * N) elements in 0-slots; the other RISs keep random
// phases for the whole frame. In a multi-carrier scenario the BS payload is
// OFDM and slot_length must be a whole number of OFDM symbols.
BasebandSignal ampmod_encode(int ris_id, const AmpModCodebook& codebook,
                             const ChannelRealization& realization, const Scenario& scenario,
                             Stream& stream, double* reference_power = nullptr);

IdentificationResult ampmod_detect(const BasebandSignal& received, const AmpModCodebook& codebook);

}  // namespace risid
