// Copyright 2026 The asymcalc Authors
// SPDX-License-Identifier: Apache-2.0
#include "asym/density.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace asym {

DensityMatrix DensityMatrix::make(Eigen::MatrixXcd rho, std::vector<Index> energies, const Tolerance& tol) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw std::invalid_argument("density matrix: not square");
  if (static_cast<Index>(energies.size()) != rho.rows())
    throw std::invalid_argument("density matrix: energy list does not match dimension");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw std::invalid_argument("density matrix: not Hermitian");
  if (std::fabs(rho.trace().real() - 1.0) > tol.mass_tol) throw std::invalid_argument("density matrix: trace is not 1");
  if (hermitian_eigenvalues(rho).minCoeff() < -1e-12) throw std::invalid_argument("density matrix: not positive semidefinite");
  DensityMatrix d;
  d.rho = std::move(rho);
  d.energies = std::move(energies);
  return d;
}

Eigen::VectorXcd ladder_vector(const PureState& psi, Index dim) {
  if (dim <= 0) dim = psi.n_trunc();
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim);
  for (Index n = 0; n < psi.n_trunc(); ++n) {
    const auto a = psi.amplitude(n);
    if (n >= dim) {
      if (std::abs(a) != 0.0) throw std::invalid_argument("ladder_vector: state does not fit the dimension");
      continue;
    }
    v(n) = a;
  }
  return v;
}

DensityMatrix DensityMatrix::from_pure(const PureState& psi, Index dim) {
  const Eigen::VectorXcd v = ladder_vector(psi, dim);
  DensityMatrix d;
  d.rho = v * v.adjoint();
  d.energies.resize(static_cast<std::size_t>(v.size()));
  for (Index n = 0; n < v.size(); ++n) d.energies[static_cast<std::size_t>(n)] = n;
  return d;
}

DensityMatrix DensityMatrix::diagonal(const F64Seq& p) {
  if (p.empty() || p.lo() < 0) throw std::invalid_argument("diagonal density: invalid profile");
  const Index dim = p.hi() + 1;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(dim, dim);
  std::vector<Index> e(static_cast<std::size_t>(dim));
  for (Index n = 0; n < dim; ++n) {
    rho(n, n) = p(n);
    e[static_cast<std::size_t>(n)] = n;
  }
  return make(std::move(rho), std::move(e));
}

double DensityMatrix::commutator_norm() const {
  double m = 0.0;
  for (Index i = 0; i < dim(); ++i)
    for (Index j = 0; j < dim(); ++j) {
      const double gap = static_cast<double>(energies[static_cast<std::size_t>(j)] - energies[static_cast<std::size_t>(i)]);
      m = std::max(m, std::abs(rho(i, j)) * std::fabs(gap));
    }
  return m;
}

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  return es.eigenvalues();
}

double trace_distance(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("trace_distance: shape mismatch");
  const Eigen::MatrixXcd d = a - b;
  const Eigen::MatrixXcd h = 0.5 * (d + d.adjoint());
  return 0.5 * hermitian_eigenvalues(h).cwiseAbs().sum();
}

double trace_distance(const DensityMatrix& rho, const PureState& psi) {
  const Index dim = std::max(rho.dim(), psi.n_trunc());
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  a.topLeftCorner(rho.dim(), rho.dim()) = rho.rho;
  const Eigen::VectorXcd v = ladder_vector(psi, dim);
  return trace_distance(a, v * v.adjoint());
}

}  // namespace asym
