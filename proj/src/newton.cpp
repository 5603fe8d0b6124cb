#include "mixnl/newton.hpp"

#include "mixnl/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mixnl {

const char* to_string(NewtonStatus status)
{
  switch (status) {
  case NewtonStatus::converged: return "converged";
  case NewtonStatus::singular: return "singular";
  case NewtonStatus::diverged: return "diverged";
  case NewtonStatus::stalled: return "stalled";
  case NewtonStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

double Deflation::factor(const Problem& problem, const Eigen::VectorXd& u) const
{
  double m = 1.0;
  for (const Eigen::VectorXd& r : roots_) {
    const double d = problem.anorm(u - r);
    m *= 1.0 / (d * d) + shift_;
  }
  return m;
}

Eigen::VectorXd Deflation::log_gradient(const Problem& problem, const Eigen::VectorXd& u) const
{
  Eigen::VectorXd g = Eigen::VectorXd::Zero(u.size());
  for (const Eigen::VectorXd& r : roots_) {
    const Eigen::VectorXd diff = u - r;
    const double d2 = problem.inner(diff, diff);
    // grad (1/d^2) = -2 G diff / d^4
    Eigen::VectorXd grad_inv = -2.0 / (d2 * d2) * problem.apply_gram(diff);
    g += grad_inv / (1.0 / d2 + shift_);
  }
  return g;
}

double Deflation::distance(const Problem& problem, const Eigen::VectorXd& u) const
{
  double best = std::numeric_limits<double>::infinity();
  for (const Eigen::VectorXd& r : roots_)
    best = std::min(best, problem.anorm(u - r));
  return best;
}

namespace {

// m(u)^2 times the dual norm of the gradient.
double merit(const Problem& problem, const Eigen::VectorXd& u, const Eigen::VectorXd& g,
             const Deflation* deflation)
{
  const double dual = g.dot(problem.riesz(g));
  const double m = deflation ? deflation->factor(problem, u) : 1.0;
  return m * m * dual;
}

} // namespace

NewtonResult newton_iterate(const Problem& problem, const Eigen::VectorXd& u0,
                            const NewtonOptions& opts, const Deflation* deflation)
{
  NewtonResult res;
  if (u0.size() != problem.size() || !u0.allFinite()) {
    res.u = u0;
    res.status = NewtonStatus::diverged;
    res.message = "initial guess has the wrong size or is not finite";
    return res;
  }
  Eigen::VectorXd u = problem.prolong(problem.restrict(u0));
  Eigen::VectorXd g = problem.gradient(u);
  res.residual = problem.residual_of_gradient(g);
  res.trace.push_back({0, res.residual, problem.energy(u), 0.0, 1.0});

  for (int it = 1; it <= opts.max_iter; ++it) {
    if (res.residual <= opts.tol) {
      res.status = NewtonStatus::converged;
      break;
    }
    const Eigen::MatrixXd h = problem.hessian(u);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(h);
    res.rcond = lu.rcond();
    if (!(res.rcond > opts.rcond_floor)) {
      std::ostringstream os;
      os << "Hessian is singular at iteration " << it << " (rcond estimate " << res.rcond << ")";
      res.status = NewtonStatus::singular;
      res.message = os.str();
      break;
    }
    Eigen::VectorXd step = problem.prolong(lu.solve(-problem.restrict(g)));
    if (deflation && !deflation->roots().empty()) {
      const double beta = deflation->log_gradient(problem, u).dot(step);
      if (std::abs(1.0 - beta) > 1e-8)
        step /= 1.0 - beta;
    }

    const double phi0 = merit(problem, u, g, deflation);
    double damping = 1.0;
    Eigen::VectorXd trial;
    Eigen::VectorXd g_trial;
    bool accepted = false;
    for (; damping >= opts.min_damping; damping *= 0.5) {
      trial = u + damping * step;
      g_trial = problem.gradient(trial);
      const double phi = merit(problem, trial, g_trial, deflation);
      if (std::isfinite(phi) && phi <= (1.0 - 1e-4 * damping) * phi0) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // Take the smallest step anyway; a stall is declared only if it makes no progress.
      damping = opts.min_damping;
      trial = u + damping * step;
      g_trial = problem.gradient(trial);
      if (!(merit(problem, trial, g_trial, deflation) < phi0)) {
        res.status = NewtonStatus::stalled;
        res.message = "line search made no progress at iteration " + std::to_string(it);
        break;
      }
    }
    const double step_norm = problem.anorm(trial - u);
    u = std::move(trial);
    g = std::move(g_trial);
    res.residual = problem.residual_of_gradient(g);
    res.iterations = it;
    res.trace.push_back({it, res.residual, problem.energy(u), step_norm, damping});

    if (!u.allFinite() || problem.anorm(u) > opts.divergence_norm) {
      res.status = NewtonStatus::diverged;
      res.message = "iterate left the bounded region at iteration " + std::to_string(it);
      break;
    }
  }
  if (res.status == NewtonStatus::max_iterations && res.residual <= opts.tol)
    res.status = NewtonStatus::converged;
  if (res.status == NewtonStatus::max_iterations)
    res.message = "no convergence in " + std::to_string(opts.max_iter) + " iterations";
  res.u = std::move(u);
  return res;
}

NewtonResult newton_solve(const Problem& problem, const Eigen::VectorXd& u0,
                          const NewtonOptions& opts)
{
  NewtonResult res = newton_iterate(problem, u0, opts);
  if (!res.converged()) {
    std::ostringstream os;
    os << "Newton " << to_string(res.status) << ": " << res.message << "; residual "
       << res.residual;
    throw NonConvergenceError(os.str());
  }
  return res;
}

} // namespace mixnl
