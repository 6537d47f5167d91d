#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace risid::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() {
  if (const char* env = std::getenv("RISID_ISA")) {
    const std::string v(env);
    if (v == "scalar") return Isa::Scalar;
    if (v == "avx2" && isa_supported(Isa::Avx2)) return Isa::Avx2;
  }
  return isa_supported(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

std::atomic<const KernelTable*>& current_table() {
  static std::atomic<const KernelTable*> t{&table(current().load())};
  return t;
}

}  // namespace

bool isa_supported(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return detail::avx2_table() != nullptr && cpu_has_avx2();
  }
  return false;
}

std::vector<Isa> supported_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (isa_supported(Isa::Avx2)) out.push_back(Isa::Avx2);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("kernel ISA not supported on this CPU");
  return isa == Isa::Avx2 ? *detail::avx2_table() : detail::scalar_table();
}

const KernelTable& active() { return *current_table().load(std::memory_order_relaxed); }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
  if (!isa_supported(isa)) throw std::invalid_argument("kernel ISA not supported on this CPU");
  current().store(isa, std::memory_order_relaxed);
  current_table().store(&table(isa), std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

}  // namespace risid::kernels
