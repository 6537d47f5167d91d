#pragma once

#include <cstdint>
#include <vector>

namespace risid {

enum class Verdict {
  Identified,
  Ambiguous,  // tie between candidates
  None,       // no candidate close enough
};

struct IdentificationResult {
  Verdict verdict = Verdict::None;
  int ris_id = 0;
  // Set-valued verdict (spectral engaged_set mode); otherwise empty.
  std::vector<int> engaged;
  bool set_valued = false;
  // Per-candidate detection statistic, in candidate order.
  std::vector<double> scores;
  // Hamming distance of the decoded word (ampmod only).
  int distance = 0;
  // Detector arithmetic-operation tally.
  std::uint64_t ops = 0;

  bool correct_for(int serving_ris_id) const;
};

}  // namespace risid
