#pragma once

// Data-parallel inner loops used by the channel and detector code.
//
// Every kernel exists as a scalar reference and as an AVX2 variant. Both use
// the same four-lane reduction order and no fused multiply-add, so the two
// produce bit-identical results; the variant is picked once at runtime from
// CPU support, and can be forced with set_isa() or RISID_ISA=scalar|avx2.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

namespace risid::kernels {

enum class Isa { Scalar, Avx2 };

// Structure-of-arrays complex vector view.
struct SplitView {
  std::span<const double> re;
  std::span<const double> im;
  std::size_t size() const { return re.size(); }
};

struct KernelTable {
  // sum_i a_i * w_i * b_i over complex SoA vectors of equal length.
  std::complex<double> (*triple_product_sum)(SplitView a, SplitView w, SplitView b);
  // out_i = a_i * b_i.
  void (*complex_multiply)(SplitView a, SplitView b, std::span<double> out_re,
                           std::span<double> out_im);
  // sum_i x_i * c_i with real weights c.
  std::complex<double> (*real_weighted_sum)(std::span<const std::complex<double>> x,
                                            std::span<const double> c);
  // sum_i |x_i|^2.
  double (*power_sum)(std::span<const std::complex<double>> x);
};

const KernelTable& table(Isa isa);
const KernelTable& active();
Isa active_isa();
void set_isa(Isa isa);
bool isa_supported(Isa isa);
std::vector<Isa> supported_isas();
std::string_view isa_name(Isa isa);

inline std::complex<double> triple_product_sum(SplitView a, SplitView w, SplitView b) {
  return active().triple_product_sum(a, w, b);
}
inline void complex_multiply(SplitView a, SplitView b, std::span<double> out_re,
                             std::span<double> out_im) {
  active().complex_multiply(a, b, out_re, out_im);
}
inline std::complex<double> real_weighted_sum(std::span<const std::complex<double>> x,
                                              std::span<const double> c) {
  return active().real_weighted_sum(x, c);
}
inline double power_sum(std::span<const std::complex<double>> x) {
  return active().power_sum(x);
}

}  // namespace risid::kernels
