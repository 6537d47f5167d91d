#pragma once

#include <string>

#include "risid/scenario.hpp"

namespace risid::test {

inline Scenario three_ris_scenario(int num_elements = 64) {
  Scenario s;
  s.bs_position = {0.0, 0.0};
  s.ue_position = {8.0, 17.0};
  s.ris_list = {{1, {15.0, 0.0}, num_elements, 1, false},
                {2, {0.0, 20.0}, num_elements, 2, false},
                {3, {20.0, 17.0}, num_elements, 3, false}};
  s.serving_ris_id = 2;
  return s;
}

inline Scenario single_ris_scenario(int num_elements = 16) {
  Scenario s;
  s.bs_position = {0.0, 0.0};
  s.ue_position = {8.0, 17.0};
  s.ris_list = {{2, {0.0, 20.0}, num_elements, 2, false}};
  s.serving_ris_id = 2;
  return s;
}

inline Scenario multi_carrier(Scenario s, int taps = 4) {
  s.channel.waveform = Waveform::MultiCarrier;
  s.channel.num_delay_taps = taps;
  return s;
}

inline const char* three_ris_document = R"(
[bs]
x = 0.0
y = 0.0

[ue]
x = 8.0
y = 17.0
serving_ris_id = 2

[[ris]]
id = 1
x = 15.0
y = 0.0
num_elements = 64

[[ris]]
id = 2
x = 0.0
y = 20.0
num_elements = 64

[[ris]]
id = 3
x = 20.0
y = 17.0
num_elements = 64
)";

}  // namespace risid::test
