// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "asym/kernels.hpp"

namespace asym::kernels {
namespace {

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

double abs_diff_sum_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::fabs(x[i] - y[i]);
  return s;
}

double sqrt_prod_sum_scalar(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += std::sqrt(x[i] * y[i]);
  return s;
}

double min_value_scalar(const double* x, std::size_t n) {
  return *std::min_element(x, x + n);
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{axpy_scalar, dot_scalar, abs_diff_sum_scalar,
                                 sqrt_prod_sum_scalar, min_value_scalar};
  return table;
}

}  // namespace asym::kernels
