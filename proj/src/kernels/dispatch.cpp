// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <atomic>
#include <stdexcept>

#include "asym/kernels.hpp"

namespace asym::kernels {
namespace {

Isa detect() { return avx2_available() ? Isa::avx2 : Isa::scalar; }

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detect()};
  return isa;
}

}  // namespace

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& active() {
  return current().load(std::memory_order_relaxed) == Isa::avx2 ? avx2_table() : scalar_table();
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void select(Isa isa) {
  if (isa == Isa::avx2 && !avx2_available())
    throw std::runtime_error("AVX2 kernels requested on a CPU without AVX2/FMA");
  current().store(isa, std::memory_order_relaxed);
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

}  // namespace asym::kernels
