// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>
#include <vector>

#include "asym/state.hpp"

namespace asym {

// Density matrix with a diagonal integer Hamiltonian on its basis.
struct DensityMatrix {
  Eigen::MatrixXcd rho;
  std::vector<Index> energies;

  Index dim() const { return static_cast<Index>(rho.rows()); }

  // Hermitian within 1e-12, trace within mass_tol of 1, eigenvalues >= -1e-12.
  static DensityMatrix make(Eigen::MatrixXcd rho, std::vector<Index> energies, const Tolerance& tol = {});
  // |psi><psi| on levels [0, dim); dim <= 0 uses psi.n_trunc().
  static DensityMatrix from_pure(const PureState& psi, Index dim = 0);
  // Mixture sum_n p(n) |n><n| on levels [0, p.hi()].
  static DensityMatrix diagonal(const F64Seq& p);

  // max |[rho, H]_{ij}|
  double commutator_norm() const;
};

// Eigenvalues of a Hermitian matrix, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m);

// (1/2) ||a - b||_1 for Hermitian a, b of equal shape.
double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b);

// Trace distance between rho and |psi><psi|, padding the smaller space with
// zero rows/columns on the ladder.
double trace_distance(const DensityMatrix& rho, const PureState& psi);

// Pads or checks a vector of ladder amplitudes to length dim.
Eigen::VectorXcd ladder_vector(const PureState& psi, Index dim);

}  // namespace asym
