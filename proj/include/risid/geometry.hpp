#pragma once

namespace risid {

// Planar coordinates in meters.
struct Position {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

double distance(const Position& a, const Position& b);

// Amplitude factor d^(-exponent/2) of a power-law path loss d^(-exponent).
// Throws ValidationError for d <= 0 (colocated nodes).
double path_loss_amplitude(double d, double exponent);

struct RisDescriptor {
  int ris_id = 0;
  Position position;
  int num_elements = 1;
  // Scheme-specific registry index: ampmod codeword value, spectral group
  // index or watermark code index.
  int signature = 0;
  // Blocked RIS: its cascade contributes nothing at the UE.
  bool blocked = false;

  friend bool operator==(const RisDescriptor&, const RisDescriptor&) = default;
};

}  // namespace risid
