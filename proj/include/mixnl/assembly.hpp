#pragma once

#include "mixnl/gauss.hpp"
#include "mixnl/measure.hpp"
#include "mixnl/mesh.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace mixnl {

/// Controls the cell-pair quadrature of the nonlocal form. Cells that touch
/// (same cell, shared node) are integrated in closed form; separated cells use
/// tensor Gauss rules on sub-cells no longer than 2 * gap / subdivisions.
struct QuadratureOptions {
  int near_singular_subdivisions = 6;
  int far_field_order = 4;
  double tolerance = 1e-8;

  void validate() const;
};

/// Mass, classical stiffness and nonlocal (Gagliardo) matrices over all mesh
/// nodes, plus the bookkeeping the solvers need.
///
/// Quadratic forms:
///   u^T mass u      = int_Omega u^2
///   u^T stiffness u = int_Omega |u'|^2
///   u^T gagliardo u = 1/2 int [u]_s^2 dmu(s)
/// so that ||u||_{alpha,mu}^2 = u^T (mass + alpha stiffness + gagliardo) u.
struct OperatorMatrices {
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  Eigen::MatrixXd gagliardo;
  /// P1 mass over the collar cells; only used to regularize the eigen pencil.
  Eigen::MatrixXd collar_mass;
  double alpha = 0.0;

  std::vector<int> interior_dofs;
  std::vector<int> exterior_dofs;
  /// Exterior DOFs carry no energy when the measure is empty; they are then
  /// excluded from every solve.
  bool nonlocal = false;

  int size() const { return static_cast<int>(mass.rows()); }

  /// alpha K + B_mu.
  Eigen::MatrixXd operator_matrix() const { return alpha * stiffness + gagliardo; }
  /// M_Omega + alpha K + B_mu, the Gram matrix of ||.||_{alpha,mu}.
  Eigen::MatrixXd norm_matrix() const { return mass + alpha * stiffness + gagliardo; }

  std::vector<int> active_dofs() const;
};

Eigen::MatrixXd assemble_mass(const Mesh1D& mesh);
Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh);
Eigen::MatrixXd assemble_collar_mass(const Mesh1D& mesh);

/// B_mu = sum_k c_k (c_{1,s_k} / 2) G(s_k), where G(s) is the P1 Galerkin
/// matrix of the double integral of (u(x)-u(y))(v(x)-v(y)) / |x-y|^{1+2s}
/// over [-R,R]^2 minus the exterior-exterior block. OpenMP over cell rows;
/// the scatter runs in row order so the result does not depend on threads.
Eigen::MatrixXd assemble_gagliardo(const Mesh1D& mesh, const SpectralMeasure& measure,
                                   const QuadratureOptions& quad = {});

/// Single-threaded reference of assemble_gagliardo.
Eigen::MatrixXd assemble_gagliardo_serial(const Mesh1D& mesh, const SpectralMeasure& measure,
                                          const QuadratureOptions& quad = {});

OperatorMatrices assemble_operators(const Mesh1D& mesh, const SpectralMeasure& measure,
                                    double alpha, const QuadratureOptions& quad = {});

/// ||u||_{alpha,mu}.
double anorm(const Eigen::VectorXd& u, const OperatorMatrices& mats);

namespace detail {

/// Contribution of one unordered cell pair to B_mu, already weighted by
/// c_k c_{1,s_k} / 2 and by the (x,y) <-> (y,x) symmetry of the domain.
struct PairBlock {
  int dofs[4] = {0, 0, 0, 0};
  int n = 0;
  double a[16] = {};
  double error_estimate = 0.0; ///< relative, separated near-field pairs only
};

class PairIntegrator {
public:
  PairIntegrator(const Mesh1D& mesh, const SpectralMeasure& measure, const QuadratureOptions& quad);

  /// Requires cell_a <= cell_b; throws AssemblyError when the near-field
  /// error estimate exceeds the tolerance.
  PairBlock block(int cell_a, int cell_b) const;

  /// True when both cells lie outside Omega (pair not in Q).
  bool skipped(int cell_a, int cell_b) const;

private:
  PairBlock same_cell(int c) const;
  PairBlock touching(int c) const;
  PairBlock separated(int cell_a, int cell_b) const;
  void separated_gauss(int cell_a, int cell_b, const QuadratureRule& rule, int subdivisions,
                       double* out) const;

  const Mesh1D& mesh_;
  std::vector<double> orders_;
  std::vector<double> scales_;
  QuadratureOptions quad_;
  QuadratureRule rule_;
  QuadratureRule check_rule_;
};

/// int_1^W w^{beta-1} dw evaluated without cancellation for beta near 0.
double power_integral(double beta, double log_w);

} // namespace detail

} // namespace mixnl
