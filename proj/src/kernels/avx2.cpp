#include "kernels_impl.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define RISID_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

namespace risid::kernels::detail {

#ifdef RISID_HAVE_AVX2_KERNELS

namespace {

#define RISID_AVX2 __attribute__((target("avx2")))

RISID_AVX2 inline double lane_sum(__m256d v) {
  alignas(32) double l[4];
  _mm256_store_pd(l, v);
  return (l[0] + l[1]) + (l[2] + l[3]);
}

RISID_AVX2 std::complex<double> triple_product_sum(SplitView a, SplitView w, SplitView b) {
  const std::size_t n = a.size();
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d ar = _mm256_loadu_pd(&a.re[i]);
    const __m256d ai = _mm256_loadu_pd(&a.im[i]);
    const __m256d wr = _mm256_loadu_pd(&w.re[i]);
    const __m256d wi = _mm256_loadu_pd(&w.im[i]);
    const __m256d br = _mm256_loadu_pd(&b.re[i]);
    const __m256d bi = _mm256_loadu_pd(&b.im[i]);
    const __m256d t_re = _mm256_sub_pd(_mm256_mul_pd(ar, wr), _mm256_mul_pd(ai, wi));
    const __m256d t_im = _mm256_add_pd(_mm256_mul_pd(ar, wi), _mm256_mul_pd(ai, wr));
    acc_re = _mm256_add_pd(acc_re, _mm256_sub_pd(_mm256_mul_pd(t_re, br), _mm256_mul_pd(t_im, bi)));
    acc_im = _mm256_add_pd(acc_im, _mm256_add_pd(_mm256_mul_pd(t_re, bi), _mm256_mul_pd(t_im, br)));
  }
  double re = lane_sum(acc_re);
  double im = lane_sum(acc_im);
  for (std::size_t j = body; j < n; ++j) {
    const double t_re = a.re[j] * w.re[j] - a.im[j] * w.im[j];
    const double t_im = a.re[j] * w.im[j] + a.im[j] * w.re[j];
    re += t_re * b.re[j] - t_im * b.im[j];
    im += t_re * b.im[j] + t_im * b.re[j];
  }
  return {re, im};
}

RISID_AVX2 void complex_multiply(SplitView a, SplitView b, std::span<double> out_re,
                                 std::span<double> out_im) {
  const std::size_t n = a.size();
  const std::size_t body = n - n % 4;
  for (std::size_t i = 0; i < body; i += 4) {
    const __m256d ar = _mm256_loadu_pd(&a.re[i]);
    const __m256d ai = _mm256_loadu_pd(&a.im[i]);
    const __m256d br = _mm256_loadu_pd(&b.re[i]);
    const __m256d bi = _mm256_loadu_pd(&b.im[i]);
    _mm256_storeu_pd(&out_re[i], _mm256_sub_pd(_mm256_mul_pd(ar, br), _mm256_mul_pd(ai, bi)));
    _mm256_storeu_pd(&out_im[i], _mm256_add_pd(_mm256_mul_pd(ar, bi), _mm256_mul_pd(ai, br)));
  }
  for (std::size_t j = body; j < n; ++j) {
    const double re = a.re[j] * b.re[j] - a.im[j] * b.im[j];
    const double im = a.re[j] * b.im[j] + a.im[j] * b.re[j];
    out_re[j] = re;
    out_im[j] = im;
  }
}

RISID_AVX2 std::complex<double> real_weighted_sum(std::span<const std::complex<double>> x,
                                                  std::span<const double> c) {
  const std::size_t n = x.size();
  const double* xp = reinterpret_cast<const double*>(x.data());
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    const __m256d v = _mm256_loadu_pd(xp + 2 * i);
    const __m256d w = _mm256_set_pd(c[i + 1], c[i + 1], c[i], c[i]);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, w));
  }
  alignas(32) double l[4];
  _mm256_store_pd(l, acc);
  double re = l[0] + l[2];
  double im = l[1] + l[3];
  if (body < n) {
    re += x[body].real() * c[body];
    im += x[body].imag() * c[body];
  }
  return {re, im};
}

RISID_AVX2 double power_sum(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  const double* xp = reinterpret_cast<const double*>(x.data());
  __m256d acc = _mm256_setzero_pd();
  const std::size_t body = n - n % 2;
  for (std::size_t i = 0; i < body; i += 2) {
    const __m256d v = _mm256_loadu_pd(xp + 2 * i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(v, v));
  }
  double total = lane_sum(acc);
  if (body < n) {
    total += x[body].real() * x[body].real();
    total += x[body].imag() * x[body].imag();
  }
  return total;
}

#undef RISID_AVX2

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable t{triple_product_sum, complex_multiply, real_weighted_sum, power_sum};
  return &t;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace risid::kernels::detail
