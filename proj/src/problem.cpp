#include "mixnl/problem.hpp"

#include "mixnl/error.hpp"
#include "mixnl/gauss.hpp"

#include <cmath>

namespace mixnl {

Problem::Problem(Mesh1D mesh, SpectralMeasure measure, double alpha, double lambda,
                 std::shared_ptr<const SourceTerm> nl, const QuadratureOptions& quad)
    : mesh_(std::move(mesh)), measure_(std::move(measure)), lambda_(lambda), nl_(std::move(nl))
{
  mats_ = assemble_operators(mesh_, measure_, alpha, quad);
  init();
}

Problem::Problem(Mesh1D mesh, SpectralMeasure measure, OperatorMatrices mats, double lambda,
                 std::shared_ptr<const SourceTerm> nl)
    : mesh_(std::move(mesh)), measure_(std::move(measure)), mats_(std::move(mats)),
      lambda_(lambda), nl_(std::move(nl))
{
  if (mats_.size() != mesh_.num_nodes())
    throw DomainError("Problem: matrices do not match the mesh");
  init();
}

void Problem::init()
{
  if (!nl_)
    throw DomainError("Problem: missing source term");
  if (!std::isfinite(lambda_))
    throw DomainError("Problem: lambda must be finite");
  bookkeeping_ = s_sharp(measure_, mats_.alpha);
  active_ = mats_.active_dofs();

  const Eigen::MatrixXd a = mats_.operator_matrix();
  quadratic_ = a + (1.0 - lambda_) * mats_.mass;
  gram_ = a + mats_.mass;

  const int na = static_cast<int>(active_.size());
  Eigen::MatrixXd ga(na, na);
  basis_norm_.resize(na);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j)
      ga(i, j) = gram_(active_[i], active_[j]);
    basis_norm_[i] = std::sqrt(ga(i, i));
  }
  gram_active_.compute(ga);
  if (gram_active_.info() != Eigen::Success)
    throw SolverError("Problem: norm matrix is not positive definite on the active DOFs");

  const QuadratureRule rule = gauss_legendre(4, 0.0, 1.0);
  gauss_t_ = rule.nodes;
  gauss_w_ = rule.weights;
}

Eigen::VectorXd Problem::restrict(const Eigen::VectorXd& u) const
{
  Eigen::VectorXd v(active_.size());
  for (std::size_t i = 0; i < active_.size(); ++i)
    v[i] = u[active_[i]];
  return v;
}

Eigen::VectorXd Problem::prolong(const Eigen::VectorXd& v) const
{
  Eigen::VectorXd u = Eigen::VectorXd::Zero(size());
  for (std::size_t i = 0; i < active_.size(); ++i)
    u[active_[i]] = v[i];
  return u;
}

Eigen::VectorXd Problem::constant(double c) const
{
  return prolong(Eigen::VectorXd::Constant(active_.size(), c));
}

double Problem::nonlinear_energy(const Eigen::VectorXd& u) const
{
  double sum = 0.0;
  for (int c = mesh_.first_interior(); c < mesh_.last_interior(); ++c) {
    const double x0 = mesh_.node(c);
    const double h = mesh_.cell_length(c);
    for (std::size_t q = 0; q < gauss_t_.size(); ++q) {
      const double t = gauss_t_[q];
      const double uh = (1.0 - t) * u[c] + t * u[c + 1];
      sum += gauss_w_[q] * h * nl_->primitive(x0 + t * h, uh);
    }
  }
  return sum;
}

Eigen::VectorXd Problem::nonlinear_load(const Eigen::VectorXd& u) const
{
  Eigen::VectorXd b = Eigen::VectorXd::Zero(size());
  for (int c = mesh_.first_interior(); c < mesh_.last_interior(); ++c) {
    const double x0 = mesh_.node(c);
    const double h = mesh_.cell_length(c);
    for (std::size_t q = 0; q < gauss_t_.size(); ++q) {
      const double t = gauss_t_[q];
      const double uh = (1.0 - t) * u[c] + t * u[c + 1];
      const double fw = gauss_w_[q] * h * nl_->f(x0 + t * h, uh);
      b[c] += (1.0 - t) * fw;
      b[c + 1] += t * fw;
    }
  }
  return b;
}

Eigen::MatrixXd Problem::nonlinear_jacobian(const Eigen::VectorXd& u) const
{
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(size(), size());
  for (int c = mesh_.first_interior(); c < mesh_.last_interior(); ++c) {
    const double x0 = mesh_.node(c);
    const double h = mesh_.cell_length(c);
    for (std::size_t q = 0; q < gauss_t_.size(); ++q) {
      const double t = gauss_t_[q];
      const double uh = (1.0 - t) * u[c] + t * u[c + 1];
      const double dw = gauss_w_[q] * h * nl_->derivative(x0 + t * h, uh);
      const double phi[2] = {1.0 - t, t};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          d(c + i, c + j) += phi[i] * phi[j] * dw;
    }
  }
  return d;
}

double Problem::energy(const Eigen::VectorXd& u) const
{
  return 0.5 * u.dot(quadratic_ * u) - nonlinear_energy(u);
}

Eigen::VectorXd Problem::gradient(const Eigen::VectorXd& u) const
{
  Eigen::VectorXd g = quadratic_ * u - nonlinear_load(u);
  if (!mats_.nonlocal)
    for (int i : mats_.exterior_dofs)
      g[i] = 0.0;
  return g;
}

Eigen::MatrixXd Problem::hessian(const Eigen::VectorXd& u) const
{
  const Eigen::MatrixXd full = quadratic_ - nonlinear_jacobian(u);
  const int na = static_cast<int>(active_.size());
  Eigen::MatrixXd h(na, na);
  for (int i = 0; i < na; ++i)
    for (int j = 0; j < na; ++j)
      h(i, j) = full(active_[i], active_[j]);
  return h;
}

double Problem::residual_of_gradient(const Eigen::VectorXd& g) const
{
  double r = 0.0;
  for (std::size_t i = 0; i < active_.size(); ++i)
    r = std::max(r, std::abs(g[active_[i]]) / basis_norm_[i]);
  return r;
}

double Problem::residual(const Eigen::VectorXd& u) const
{
  return residual_of_gradient(gradient(u));
}

Eigen::VectorXd Problem::riesz(const Eigen::VectorXd& g) const
{
  return prolong(gram_active_.solve(restrict(g)));
}

double Problem::inner(const Eigen::VectorXd& u, const Eigen::VectorXd& v) const
{
  return u.dot(gram_ * v);
}

double Problem::anorm(const Eigen::VectorXd& u) const
{
  return std::sqrt(std::max(inner(u, u), 0.0));
}

double Problem::l2norm(const Eigen::VectorXd& u) const
{
  return std::sqrt(std::max(u.dot(mats_.mass * u), 0.0));
}

} // namespace mixnl
