#include <cassert>

#include "kernels_impl.hpp"

namespace risid::kernels::detail {

namespace {

// Lane k accumulates indices k, k+4, k+8, ...; this mirrors one 256-bit
// register of doubles. Tails are added sequentially after the lane reduction.

std::complex<double> triple_product_sum(SplitView a, SplitView w, SplitView b) {
  const std::size_t n = a.size();
  assert(w.size() == n && b.size() == n);
  double acc_re[4] = {0, 0, 0, 0};
  double acc_im[4] = {0, 0, 0, 0};
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    for (std::size_t k = 0; k < 4; ++k) {
      const std::size_t j = i + k;
      const double t_re = a.re[j] * w.re[j] - a.im[j] * w.im[j];
      const double t_im = a.re[j] * w.im[j] + a.im[j] * w.re[j];
      acc_re[k] += t_re * b.re[j] - t_im * b.im[j];
      acc_im[k] += t_re * b.im[j] + t_im * b.re[j];
    }
  }
  double re = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
  double im = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
  for (std::size_t j = body; j < n; ++j) {
    const double t_re = a.re[j] * w.re[j] - a.im[j] * w.im[j];
    const double t_im = a.re[j] * w.im[j] + a.im[j] * w.re[j];
    re += t_re * b.re[j] - t_im * b.im[j];
    im += t_re * b.im[j] + t_im * b.re[j];
  }
  return {re, im};
}

void complex_multiply(SplitView a, SplitView b, std::span<double> out_re,
                      std::span<double> out_im) {
  const std::size_t n = a.size();
  assert(b.size() == n && out_re.size() == n && out_im.size() == n);
  for (std::size_t j = 0; j < n; ++j) {
    const double re = a.re[j] * b.re[j] - a.im[j] * b.im[j];
    const double im = a.re[j] * b.im[j] + a.im[j] * b.re[j];
    out_re[j] = re;
    out_im[j] = im;
  }
}

// Interleaved layout: lanes hold (re0, im0, re1, im1) of element pairs.
std::complex<double> real_weighted_sum(std::span<const std::complex<double>> x,
                                       std::span<const double> c) {
  const std::size_t n = x.size();
  assert(c.size() >= n);
  double acc[4] = {0, 0, 0, 0};
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    acc[0] += x[i].real() * c[i];
    acc[1] += x[i].imag() * c[i];
    acc[2] += x[i + 1].real() * c[i + 1];
    acc[3] += x[i + 1].imag() * c[i + 1];
  }
  double re = acc[0] + acc[2];
  double im = acc[1] + acc[3];
  if (body < n) {
    re += x[body].real() * c[body];
    im += x[body].imag() * c[body];
  }
  return {re, im};
}

double power_sum(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  double acc[4] = {0, 0, 0, 0};
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    acc[0] += x[i].real() * x[i].real();
    acc[1] += x[i].imag() * x[i].imag();
    acc[2] += x[i + 1].real() * x[i + 1].real();
    acc[3] += x[i + 1].imag() * x[i + 1].imag();
  }
  double total = (acc[0] + acc[1]) + (acc[2] + acc[3]);
  if (body < n) {
    total += x[body].real() * x[body].real();
    total += x[body].imag() * x[body].imag();
  }
  return total;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable t{triple_product_sum, complex_multiply, real_weighted_sum, power_sum};
  return t;
}

}  // namespace risid::kernels::detail
