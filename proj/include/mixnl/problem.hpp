#pragma once

#include "mixnl/assembly.hpp"
#include "mixnl/measure.hpp"
#include "mixnl/mesh.hpp"
#include "mixnl/nonlinearity.hpp"

#include <Eigen/Dense>

#include <memory>
#include <vector>

namespace mixnl {

/// Discrete energy of L u + u = lambda u + f(x, u) with (alpha, mu)-Neumann
/// conditions:
///   I(u) = 1/2 ||u||^2_{alpha,mu} - lambda/2 int_Omega u^2 - int_Omega F(x, u).
/// Nonlinear integrals use 4-point Gauss per interior cell on the P1 interpolant.
class Problem {
public:
  Problem(Mesh1D mesh, SpectralMeasure measure, double alpha, double lambda,
          std::shared_ptr<const SourceTerm> nl, const QuadratureOptions& quad = {});
  /// Reuses matrices assembled on `mesh` for `measure`.
  Problem(Mesh1D mesh, SpectralMeasure measure, OperatorMatrices mats, double lambda,
          std::shared_ptr<const SourceTerm> nl);

  const Mesh1D& mesh() const { return mesh_; }
  const SpectralMeasure& measure() const { return measure_; }
  const OperatorMatrices& matrices() const { return mats_; }
  const SourceTerm& source() const { return *nl_; }
  std::shared_ptr<const SourceTerm> source_ptr() const { return nl_; }
  const OrderBookkeeping& bookkeeping() const { return bookkeeping_; }
  double alpha() const { return mats_.alpha; }
  double lambda() const { return lambda_; }
  int size() const { return mats_.size(); }

  /// DOFs that carry energy: all nodes if mu is nonzero, Omega-nodes otherwise.
  const std::vector<int>& active() const { return active_; }
  Eigen::VectorXd restrict(const Eigen::VectorXd& u) const;
  Eigen::VectorXd prolong(const Eigen::VectorXd& v) const;

  /// Constant function c on every active DOF.
  Eigen::VectorXd constant(double c) const;

  double energy(const Eigen::VectorXd& u) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& u) const;
  /// Hessian on the active DOFs.
  Eigen::MatrixXd hessian(const Eigen::VectorXd& u) const;

  /// max_j |<I'(u), phi_j>| / ||phi_j||_{alpha,mu} over active basis functions.
  double residual(const Eigen::VectorXd& u) const;
  double residual_of_gradient(const Eigen::VectorXd& g) const;
  /// Riesz representative of a gradient in ||.||_{alpha,mu} (full DOF vector).
  Eigen::VectorXd riesz(const Eigen::VectorXd& g) const;

  double anorm(const Eigen::VectorXd& u) const;
  double l2norm(const Eigen::VectorXd& u) const;
  /// (u, v)_{alpha,mu}.
  double inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const;
  /// (M + alpha K + B) v.
  Eigen::VectorXd apply_gram(const Eigen::VectorXd& v) const { return gram_ * v; }

  /// int_Omega F(x, u_h).
  double nonlinear_energy(const Eigen::VectorXd& u) const;
  /// Consistent P1 load of f(x, u_h).
  Eigen::VectorXd nonlinear_load(const Eigen::VectorXd& u) const;
  /// Jacobian of nonlinear_load (full DOFs).
  Eigen::MatrixXd nonlinear_jacobian(const Eigen::VectorXd& u) const;

private:
  void init();

  Mesh1D mesh_;
  SpectralMeasure measure_;
  OperatorMatrices mats_;
  double lambda_ = 0.0;
  std::shared_ptr<const SourceTerm> nl_;
  OrderBookkeeping bookkeeping_;

  std::vector<int> active_;
  Eigen::MatrixXd quadratic_; ///< A + (1 - lambda) M
  Eigen::MatrixXd gram_;      ///< M + A
  Eigen::LLT<Eigen::MatrixXd> gram_active_;
  Eigen::VectorXd basis_norm_; ///< sqrt(diag(gram)) on active DOFs
  std::vector<double> gauss_t_;
  std::vector<double> gauss_w_;
};

} // namespace mixnl
