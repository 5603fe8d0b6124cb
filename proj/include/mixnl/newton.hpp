#pragma once

#include "mixnl/problem.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace mixnl {

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 50;
  /// Smallest damping factor tried by the backtracking line search.
  double min_damping = 1.0 / 1024.0;
  /// Reciprocal condition estimate below which the Hessian counts as singular.
  double rcond_floor = 1e-14;
  /// Iterates with anorm above this are declared divergent.
  double divergence_norm = 1e8;
};

struct IterationRecord {
  int iteration = 0;
  double residual = 0.0;
  double energy = 0.0;
  double step = 0.0;    ///< anorm of the accepted update
  double damping = 1.0; ///< line-search factor
};

enum class NewtonStatus { converged, singular, diverged, stalled, max_iterations };

const char* to_string(NewtonStatus status);

struct NewtonResult {
  Eigen::VectorXd u;
  NewtonStatus status = NewtonStatus::max_iterations;
  int iterations = 0;
  double residual = 0.0;
  double rcond = 0.0; ///< last Hessian condition estimate
  std::vector<IterationRecord> trace;
  std::string message;

  bool converged() const { return status == NewtonStatus::converged; }
};

/// Deflation operator m(u) = prod_r (1 / ||u - r||^2_{alpha,mu} + sigma).
class Deflation {
public:
  explicit Deflation(double shift = 1.0) : shift_(shift) {}

  void add(Eigen::VectorXd root) { roots_.push_back(std::move(root)); }
  const std::vector<Eigen::VectorXd>& roots() const { return roots_; }
  double shift() const { return shift_; }

  double factor(const Problem& problem, const Eigen::VectorXd& u) const;
  /// grad log m(u) with respect to the DOF coordinates.
  Eigen::VectorXd log_gradient(const Problem& problem, const Eigen::VectorXd& u) const;
  /// Smallest anorm distance from u to a deflated root (+inf without roots).
  double distance(const Problem& problem, const Eigen::VectorXd& u) const;

private:
  double shift_;
  std::vector<Eigen::VectorXd> roots_;
};

/// Damped Newton on I'(u) = 0. Never throws for numerical failure; the
/// status and message describe what went wrong.
NewtonResult newton_iterate(const Problem& problem, const Eigen::VectorXd& u0,
                            const NewtonOptions& opts, const Deflation* deflation = nullptr);

/// Throws NonConvergenceError (with the failure report) unless converged.
NewtonResult newton_solve(const Problem& problem, const Eigen::VectorXd& u0,
                          const NewtonOptions& opts = {});

} // namespace mixnl
