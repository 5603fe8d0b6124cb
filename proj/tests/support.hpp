#pragma once

#include "mixnl/nonlinearity.hpp"
#include "mixnl/problem.hpp"

#include <Eigen/Dense>

#include <memory>
#include <random>

namespace testing {

inline std::shared_ptr<const mixnl::SourceTerm> cubic()
{
  return std::make_shared<mixnl::PowerNonlinearity>(1.0, 4.0);
}

inline mixnl::Problem problem(const mixnl::SpectralMeasure& mu, double alpha, double lambda,
                              int n_in = 32, int n_ext = 8, double R = 8.0,
                              std::shared_ptr<const mixnl::SourceTerm> nl = cubic())
{
  return mixnl::Problem(mixnl::build_mesh({-1.0, 1.0}, R, n_in, n_ext), mu, alpha, lambda, std::move(nl));
}

inline Eigen::VectorXd random_vector(int n, std::mt19937_64& rng, double scale = 1.0)
{
  std::normal_distribution<double> normal(0.0, scale);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i)
    v[i] = normal(rng);
  return v;
}

/// f(t) = t: linear growth, fails the superlinear hypotheses.
class LinearSource final : public mixnl::SourceTerm {
public:
  double f(double, double t) const override { return t; }
  double primitive(double, double t) const override { return 0.5 * t * t; }
  double derivative(double, double) const override { return 1.0; }
  mixnl::GrowthConstants claims() const override { return {1.0, 1.0, 4.0, 4.0, 0.0, 4.0, 0.25, 0.0}; }
  std::string name() const override { return "linear"; }
};

/// f = 0.
class ZeroSource final : public mixnl::SourceTerm {
public:
  double f(double, double) const override { return 0.0; }
  double primitive(double, double) const override { return 0.0; }
  double derivative(double, double) const override { return 0.0; }
  mixnl::GrowthConstants claims() const override { return {0.0, 0.0, 4.0, 4.0, 0.0, 4.0, 0.0, 0.0}; }
  std::string name() const override { return "zero"; }
};

} // namespace testing
