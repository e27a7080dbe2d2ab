// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

// Float64 inner loops of the sequence algebra. Every kernel has a portable
// reference implementation and an AVX2/FMA variant; the variant is picked
// once per process from the CPU feature bits.
namespace asym::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  // y[i] += a * x[i]
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // sum x[i] * y[i]
  double (*dot)(const double* x, const double* y, std::size_t n);
  // sum |x[i] - y[i]|
  double (*abs_diff_sum)(const double* x, const double* y, std::size_t n);
  // sum sqrt(x[i] * y[i]); inputs must be nonnegative
  double (*sqrt_prod_sum)(const double* x, const double* y, std::size_t n);
  // min x[i]; n > 0
  double (*min_value)(const double* x, std::size_t n);
};

const KernelTable& scalar_table();
const KernelTable& avx2_table();

// True when the running CPU supports AVX2 and FMA.
bool avx2_available();

// Table in use by the library. Defaults to the best supported ISA.
const KernelTable& active();
Isa active_isa();

// Forces a table; requesting avx2 on a CPU without it throws.
void select(Isa isa);

const char* isa_name(Isa isa);

}  // namespace asym::kernels
