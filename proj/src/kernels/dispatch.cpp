#include <atomic>
#include <stdexcept>
#include <string>

#include "sparqs/kernels.hpp"

namespace sparqs::kernels {
namespace {

const KernelTable* detect() {
  if (cpu_has_avx2()) {
    if (const KernelTable* t = avx2::table()) return t;
  }
  return &scalar::table();
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{detect()};
  return current;
}

}  // namespace

std::string_view name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() { return *slot().load(std::memory_order_relaxed); }

void force(Isa isa) {
  const KernelTable* t = nullptr;
  if (isa == Isa::scalar) {
    t = &scalar::table();
  } else if (cpu_has_avx2()) {
    t = avx2::table();
  }
  if (t == nullptr)
    throw std::runtime_error("kernel ISA '" + std::string(name(isa)) +
                             "' not available on this build/CPU");
  slot().store(t, std::memory_order_relaxed);
}

void reset() { slot().store(detect(), std::memory_order_relaxed); }

}  // namespace sparqs::kernels
