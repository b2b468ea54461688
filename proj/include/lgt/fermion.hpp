#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <vector>

#include "lgt/wilson.hpp"

namespace lgt {

using SparseCMat = Eigen::SparseMatrix<Complex>;

struct FermionParams {
  double mass = 0.1;
  double hopping = 1.0;  // t of the nearest-neighbor kinetic term
  bool temporal_antiperiodic = true;

  void validate() const;
};

// Single-component "scalar quark" hopping Hamiltonian on a fixed gauge
// background: diagonal mass, entries -t U^{ab} on forward hops plus the
// conjugate backward entries. Hermitian. Dimension = sites x colors,
// row index = color + N * site.
SparseCMat hopping_operator(const GaugeConfiguration& config,
                            const FermionParams& params);

// Euclidean gamma matrices for 2 or 4 dimensions, {gamma^mu, gamma^nu} =
// 2 delta^{mu nu}; index ndim-1 is the time direction.
std::vector<Eigen::MatrixXcd> gamma_matrices(int ndim);
Eigen::MatrixXcd gamma5(int ndim);
int spinor_dim(int ndim);

// Naive lattice Dirac operator
//   D = sum_mu gamma^mu (U_mu(x) delta_{x+mu,y} - U_mu(y)^dag
//       delta_{x-mu,y})/2 - m
// with antiperiodic temporal phase if configured. Row index =
// spin + ns * (color + N * site).
SparseCMat dirac_operator(const GaugeConfiguration& config,
                          const FermionParams& params);

struct LogDet {
  double log_magnitude;
  double phase;  // in (-pi, pi]

  Complex value() const {
    return std::exp(Complex(log_magnitude, phase));
  }
};

// Dense LU determinant; throws above the dense budget (~4096 rows).
LogDet determinant(const SparseCMat& op);

// Solve op * x = e_source to relative residual <= 1e-10 (Krylov with a
// direct-solver fallback).
Eigen::VectorXcd propagator(const SparseCMat& op, Eigen::Index source);

}  // namespace lgt
