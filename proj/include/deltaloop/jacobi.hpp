#pragma once

#include <Eigen/Dense>

namespace deltaloop::linalg {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // unitary, column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalisation of a real symmetric matrix. Exact zero
/// off-diagonal entries are never rotated, so decoupled blocks stay
/// bit-exactly decoupled. Only the lower triangle's symmetry partner is
/// assumed; the input must be symmetric.
SymmetricEigen jacobi_symmetric(const Eigen::MatrixXd& a);

/// Complex Jacobi for Hermitian matrices: each pivot is first made real by a
/// phase rotation of column q, then annihilated by a real plane rotation.
HermitianEigen jacobi_hermitian(const Eigen::MatrixXcd& a);

}  // namespace deltaloop::linalg
