#include "risid/identification.hpp"

#include <algorithm>

namespace risid {

bool IdentificationResult::correct_for(int serving_ris_id) const {
  if (verdict != Verdict::Identified) return false;
  if (set_valued) return std::find(engaged.begin(), engaged.end(), serving_ris_id) != engaged.end();
  return ris_id == serving_ris_id;
}

}  // namespace risid
