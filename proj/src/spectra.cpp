#include "mixnl/spectra.hpp"

#include "mixnl/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixnl {

namespace {

Eigen::MatrixXd select(const Eigen::MatrixXd& a, const std::vector<int>& rows,
                       const std::vector<int>& cols)
{
  Eigen::MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      out(i, j) = a(rows[i], cols[j]);
  return out;
}

struct RawPairs {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors; // full DOFs
};

RawPairs solve_generalized(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(a, b);
  if (es.info() != Eigen::Success)
    throw SolverError("generalized eigensolver failed: pencil not definite");
  return {es.eigenvalues(), es.eigenvectors()};
}

RawPairs schur_pairs(const OperatorMatrices& mats)
{
  const Eigen::MatrixXd a = mats.operator_matrix();
  const std::vector<int>& in = mats.interior_dofs;
  const Eigen::MatrixXd m_ii = select(mats.mass, in, in);
  const Eigen::MatrixXd a_ii = select(a, in, in);
  const int n = mats.size();

  if (!mats.nonlocal || mats.exterior_dofs.empty()) {
    RawPairs r = solve_generalized(a_ii, m_ii);
    Eigen::MatrixXd full = Eigen::MatrixXd::Zero(n, r.vectors.cols());
    for (std::size_t i = 0; i < in.size(); ++i)
      full.row(in[i]) = r.vectors.row(i);
    return {r.values, full};
  }

  const std::vector<int>& ex = mats.exterior_dofs;
  const Eigen::MatrixXd a_ee = select(a, ex, ex);
  const Eigen::MatrixXd a_ei = select(a, ex, in);
  Eigen::LLT<Eigen::MatrixXd> llt(a_ee);
  if (llt.info() != Eigen::Success)
    throw SolverError("exterior block of the operator is not positive definite");
  const Eigen::MatrixXd slave = -llt.solve(a_ei); // x_E = slave * x_I
  Eigen::MatrixXd s = a_ii + a_ei.transpose() * slave;
  s = 0.5 * (s + s.transpose());

  RawPairs r = solve_generalized(s, m_ii);
  const Eigen::MatrixXd ext = slave * r.vectors;
  Eigen::MatrixXd full(n, r.vectors.cols());
  for (std::size_t i = 0; i < in.size(); ++i)
    full.row(in[i]) = r.vectors.row(i);
  for (std::size_t i = 0; i < ex.size(); ++i)
    full.row(ex[i]) = ext.row(i);
  return {r.values, full};
}

RawPairs regularized_pairs(const OperatorMatrices& mats, double eps)
{
  if (!(eps > 0.0))
    throw DomainError("regularization must be positive");
  const std::vector<int> act = mats.active_dofs();
  const Eigen::MatrixXd a = select(mats.operator_matrix(), act, act);
  const Eigen::MatrixXd b = select(mats.mass + eps * mats.collar_mass, act, act);
  RawPairs r = solve_generalized(a, b);
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(mats.size(), r.vectors.cols());
  for (std::size_t i = 0; i < act.size(); ++i)
    full.row(act[i]) = r.vectors.row(i);
  return {r.values, full};
}

void fix_sign(Eigen::Ref<Eigen::VectorXd> v, const Eigen::VectorXd& mass_ones)
{
  const double mean = mass_ones.dot(v);
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  bool flip = false;
  if (std::abs(mean) > 1e-12 * scale) {
    flip = mean < 0.0;
  } else {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      if (std::abs(v[i]) > 1e-14 * scale) {
        flip = v[i] < 0.0;
        break;
      }
    }
  }
  if (flip)
    v = -v;
}

} // namespace

EigenDecomposition solve_eigen(const OperatorMatrices& mats, int k, const EigenOptions& opts)
{
  if (k < 1)
    throw DomainError("solve_eigen: k must be positive");
  const int available = static_cast<int>(mats.interior_dofs.size());
  if (k > available)
    throw DomainError("solve_eigen: k = " + std::to_string(k) + " exceeds the " +
                      std::to_string(available) + " interior DOFs");

  RawPairs raw = opts.method == EigenMethod::schur ? schur_pairs(mats)
                                                   : regularized_pairs(mats, opts.regularization);

  EigenDecomposition d;
  d.lambdas_tilde = raw.values.head(k);
  d.vectors = raw.vectors.leftCols(k);

  const Eigen::VectorXd mass_ones = mats.mass * Eigen::VectorXd::Ones(mats.size());
  for (int j = 0; j < k; ++j) {
    auto v = d.vectors.col(j);
    const double nrm2 = v.dot(mats.mass * v);
    if (!(nrm2 > 0.0))
      throw SolverError("eigenvector with zero mass on the domain");
    v /= std::sqrt(nrm2);
    fix_sign(v, mass_ones);
  }
  d.mass_vectors = mats.mass * d.vectors;

  int first = 0;
  for (int j = 1; j <= k; ++j) {
    const bool breaks =
        j == k || std::abs(d.lambda(j) - d.lambda(j - 1)) >
                      opts.cluster_tolerance * std::max(std::abs(d.lambda(j)), 1.0);
    if (breaks) {
      d.clusters.emplace_back(first, j);
      first = j;
    }
  }
  return d;
}

Splitting split(const EigenDecomposition& decomp, int i)
{
  if (i < 1 || i >= decomp.size())
    throw DomainError("split: index " + std::to_string(i) + " outside [1, " +
                      std::to_string(decomp.size() - 1) + "]");
  for (const auto& [first, last] : decomp.clusters)
    if (first < i && i < last)
      throw DomainError("split: index " + std::to_string(i) + " cuts through an eigenvalue cluster");
  Splitting s;
  s.index_ = i;
  const int rest = decomp.size() - i;
  s.basis_ = decomp.vectors.leftCols(i);
  s.basis_mass_ = decomp.mass_vectors.leftCols(i);
  s.complement_ = decomp.vectors.rightCols(rest);
  s.complement_mass_ = decomp.mass_vectors.rightCols(rest);
  return s;
}

Eigen::VectorXd Splitting::coefficients(const Eigen::VectorXd& u) const
{
  return basis_mass_.transpose() * u;
}

Eigen::VectorXd Splitting::project(const Eigen::VectorXd& u) const
{
  return basis_ * (basis_mass_.transpose() * u);
}

Eigen::VectorXd Splitting::project_complement(const Eigen::VectorXd& u) const
{
  return complement_ * (complement_mass_.transpose() * u);
}

int splitting_index(const EigenDecomposition& decomp, double lambda)
{
  // lambda_1 = 1 exactly; the discrete value differs only by round-off.
  if (lambda < 1.0)
    return 0;
  int i = 1;
  while (i < decomp.size() && decomp.lambda(i) <= lambda)
    ++i;
  return i;
}

} // namespace mixnl
