#pragma once

#include "mixnl/assembly.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace mixnl {

enum class EigenMethod {
  /// Eliminate the exterior DOFs (they carry no L2(Omega) mass) and solve
  /// S x = lambda M_II x with the Schur complement S of the operator matrix.
  schur,
  /// Solve (alpha K + B) e = lambda (M + eps M_collar) e on all DOFs.
  regularized,
};

/// Smallest eigenpairs of the (alpha, mu)-Neumann problem, ascending.
/// Vectors are full DOF vectors (exterior values slaved to the interior ones),
/// M_Omega-orthonormal.
struct EigenDecomposition {
  Eigen::VectorXd lambdas_tilde;
  Eigen::MatrixXd vectors;
  /// mass * vectors, cached for projections.
  Eigen::MatrixXd mass_vectors;
  /// Half-open index ranges [first, last) of eigenvalues that agree to the
  /// cluster tolerance; singletons are included.
  std::vector<std::pair<int, int>> clusters;

  int size() const { return static_cast<int>(lambdas_tilde.size()); }
  /// Shifted sequence lambda_k = lambda_tilde_k + 1.
  Eigen::VectorXd lambdas() const { return lambdas_tilde.array() + 1.0; }
  double lambda(int k) const { return lambdas_tilde[k] + 1.0; }
  Eigen::VectorXd vector(int k) const { return vectors.col(k); }
};

struct EigenOptions {
  EigenMethod method = EigenMethod::schur;
  /// Relative size of the collar mass added to the pencil by `regularized`.
  double regularization = 1e-10;
  double cluster_tolerance = 1e-9;
};

/// Throws SolverError if the pencil is not definite.
EigenDecomposition solve_eigen(const OperatorMatrices& mats, int k, const EigenOptions& opts = {});

/// H_i = span{e_1..e_i} and its complement within the computed eigenbasis,
/// with projections orthogonal in L2(Omega).
class Splitting {
public:
  int index() const { return index_; }
  /// Columns e_1..e_i.
  const Eigen::MatrixXd& basis() const { return basis_; }
  /// Columns e_{i+1}..e_k.
  const Eigen::MatrixXd& complement_basis() const { return complement_; }

  /// Eigen-coefficients c_k = e_k^T M u, k < i.
  Eigen::VectorXd coefficients(const Eigen::VectorXd& u) const;
  Eigen::VectorXd project(const Eigen::VectorXd& u) const;
  Eigen::VectorXd project_complement(const Eigen::VectorXd& u) const;

  friend Splitting split(const EigenDecomposition& decomp, int i);

private:
  int index_ = 0;
  Eigen::MatrixXd basis_;
  Eigen::MatrixXd basis_mass_;
  Eigen::MatrixXd complement_;
  Eigen::MatrixXd complement_mass_;
};

/// Requires 1 <= i < decomp.size() and that lambda_i < lambda_{i+1} is not
/// inside a cluster; throws DomainError otherwise.
Splitting split(const EigenDecomposition& decomp, int i);

/// Largest i (1-based) with lambda_i <= lambda among the computed pairs,
/// 0 if lambda < lambda_1.
int splitting_index(const EigenDecomposition& decomp, double lambda);

} // namespace mixnl
