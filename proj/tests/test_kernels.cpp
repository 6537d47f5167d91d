#include <doctest.h>

#include <complex>
#include <cstring>
#include <vector>

#include "risid/kernels.hpp"
#include "risid/rng.hpp"

namespace k = risid::kernels;

namespace {

struct Soa {
  std::vector<double> re, im;
  explicit Soa(std::size_t n, risid::Stream& s) : re(n), im(n) {
    for (std::size_t i = 0; i < n; ++i) {
      re[i] = s.normal();
      im[i] = s.normal();
    }
  }
  k::SplitView view() const { return {re, im}; }
};

std::vector<std::complex<double>> random_complex(std::size_t n, risid::Stream& s) {
  std::vector<std::complex<double>> v(n);
  for (auto& z : v) z = s.complex_normal();
  return v;
}

bool same_bits(std::complex<double> a, std::complex<double> b) {
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("scalar kernels match naive loops") {
  risid::Stream s(1, 0, 0);
  const auto& t = k::table(k::Isa::Scalar);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 64u, 257u}) {
    Soa a(n, s), w(n, s), b(n, s);
    std::complex<double> expect = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      expect += std::complex<double>(a.re[i], a.im[i]) * std::complex<double>(w.re[i], w.im[i]) *
                std::complex<double>(b.re[i], b.im[i]);
    const auto got = t.triple_product_sum(a.view(), w.view(), b.view());
    CHECK(std::abs(got - expect) <= 1e-12 * (1.0 + std::abs(expect)) * (n + 1));

    const auto x = random_complex(n, s);
    std::vector<double> c(n);
    for (auto& v : c) v = s.normal();
    std::complex<double> ws = 0.0;
    double ps = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      ws += x[i] * c[i];
      ps += std::norm(x[i]);
    }
    CHECK(std::abs(t.real_weighted_sum(x, c) - ws) <= 1e-12 * (n + 1));
    CHECK(t.power_sum(x) == doctest::Approx(ps).epsilon(1e-12));

    std::vector<double> ore(n), oim(n);
    t.complex_multiply(a.view(), b.view(), ore, oim);
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = std::complex<double>(a.re[i], a.im[i]) * std::complex<double>(b.re[i], b.im[i]);
      CHECK(ore[i] == doctest::Approx(p.real()));
      CHECK(oim[i] == doctest::Approx(p.imag()));
    }
  }
}

TEST_CASE("AVX2 kernels are bit-identical to the scalar reference") {
  if (!k::isa_supported(k::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this CPU; skipping");
    return;
  }
  const auto& sc = k::table(k::Isa::Scalar);
  const auto& vx = k::table(k::Isa::Avx2);
  risid::Stream s(2, 0, 0);
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = s.next_u32() % 300;
    Soa a(n, s), w(n, s), b(n, s);
    REQUIRE(same_bits(sc.triple_product_sum(a.view(), w.view(), b.view()),
                      vx.triple_product_sum(a.view(), w.view(), b.view())));

    const auto x = random_complex(n, s);
    std::vector<double> c(n);
    for (auto& v : c) v = s.normal();
    REQUIRE(same_bits(sc.real_weighted_sum(x, c), vx.real_weighted_sum(x, c)));
    const double p1 = sc.power_sum(x), p2 = vx.power_sum(x);
    REQUIRE(std::memcmp(&p1, &p2, sizeof p1) == 0);

    std::vector<double> r1(n), i1(n), r2(n), i2(n);
    sc.complex_multiply(a.view(), b.view(), r1, i1);
    vx.complex_multiply(a.view(), b.view(), r2, i2);
    REQUIRE(r1 == r2);
    REQUIRE(i1 == i2);
  }
}

TEST_CASE("runtime selection") {
  const auto before = k::active_isa();
  k::set_isa(k::Isa::Scalar);
  CHECK(k::active_isa() == k::Isa::Scalar);
  CHECK(&k::active() == &k::table(k::Isa::Scalar));
  CHECK(k::isa_name(k::Isa::Scalar) == "scalar");
  CHECK(k::isa_name(k::Isa::Avx2) == "avx2");
  CHECK(!k::supported_isas().empty());
  k::set_isa(before);
}
