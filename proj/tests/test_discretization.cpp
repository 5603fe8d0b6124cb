#include "mixnl/assembly.hpp"
#include "mixnl/error.hpp"
#include "mixnl/mesh.hpp"
#include "mixnl/nonlocal_boundary.hpp"
#include "mixnl/parallel.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mixnl;

namespace {

double max_rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& ref)
{
  double worst = 0.0;
  for (int i = 0; i < ref.rows(); ++i)
    for (int j = 0; j < ref.cols(); ++j)
      worst = std::max(worst, std::abs(a(i, j) - ref(i, j)) / std::abs(ref(i, j)));
  return worst;
}

double asymmetry(const Eigen::MatrixXd& a)
{
  return (a - a.transpose()).cwiseAbs().maxCoeff() / a.cwiseAbs().maxCoeff();
}

} // namespace

TEST_CASE("mesh construction")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 5.0, 4, 2);
  CHECK(m.num_interior() == 5);
  CHECK(m.num_nodes() - m.num_interior() == 4);
  CHECK(m.node(0) == -5.0);
  CHECK(m.node(m.num_nodes() - 1) == 5.0);
  CHECK(m.node(m.first_interior()) == -1.0);
  CHECK(m.node(m.last_interior()) == 1.0);
  for (int i = 1; i < m.num_nodes(); ++i)
    CHECK(m.node(i) > m.node(i - 1));

  const Mesh1D unit = build_mesh({0.0, 1.0}, 2.0, 2, 1);
  CHECK(unit.nodes() == std::vector<double>{-2.0, 0.0, 0.5, 1.0, 2.0});

  CHECK_THROWS_AS(build_mesh({-1.0, 1.0}, 1.0, 4, 2), DomainError);
  CHECK_THROWS_AS(build_mesh({-1.0, 1.0}, 4.0, 1, 2), DomainError);
  CHECK_THROWS_AS(build_mesh({-1.0, 1.0}, 4.0, 4, 0), DomainError);

  // collar grows geometrically from the interior spacing
  const Mesh1D g = build_mesh({-1.0, 1.0}, 8.0, 16, 8);
  const double h = 2.0 / 16;
  CHECK(g.cell_length(g.first_interior() - 1) == doctest::Approx(h));
  CHECK(g.left_grading() > 1.0);
  for (int c = 1; c < g.first_interior(); ++c)
    CHECK(g.cell_length(c - 1) / g.cell_length(c) == doctest::Approx(g.left_grading()).epsilon(1e-9));
}

TEST_CASE("mass and stiffness")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 4.0, 8, 3);
  const double h = 0.25;
  const Eigen::MatrixXd M = assemble_mass(m);
  const Eigen::MatrixXd K = assemble_stiffness(m);
  const int i = m.first_interior() + 3;
  CHECK(M(i, i) == doctest::Approx(2.0 * h / 3.0).epsilon(1e-14));
  CHECK(M(i, i + 1) == doctest::Approx(h / 6.0).epsilon(1e-14));
  CHECK(K(i, i) == doctest::Approx(2.0 / h).epsilon(1e-14));
  CHECK(K(i, i - 1) == doctest::Approx(-1.0 / h).epsilon(1e-14));

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.num_nodes());
  CHECK(std::abs(one.dot(M * one) - 2.0) <= 1e-14);
  CHECK((K * one).cwiseAbs().maxCoeff() <= 1e-12);

  Eigen::VectorXd ext = Eigen::VectorXd::Zero(m.num_nodes());
  ext[1] = 1.0;
  CHECK(ext.dot(M * ext) == 0.0);
  CHECK(M.row(0).cwiseAbs().sum() == 0.0);
  CHECK(K.row(0).cwiseAbs().sum() == 0.0);

  // a boundary node of Omega sees one cell: [[1,-1],[-1,1]]/h
  const int l = m.first_interior();
  CHECK(K(l, l) == doctest::Approx(1.0 / h));
  CHECK(K(l, l + 1) == doctest::Approx(-1.0 / h));

  CHECK(asymmetry(M) <= 1e-13);
  CHECK(asymmetry(K) <= 1e-13);
}

TEST_CASE("Gagliardo matrix against brute-force quadrature, mu = delta_0.5")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 8, 4);
  const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.5, 1.0}});
  const Eigen::MatrixXd B = assemble_gagliardo(m, mu);
  const Eigen::MatrixXd ref = oracle::brute_gagliardo(m, 0.5, 1.0);
  CHECK(max_rel_diff(B, ref) <= 1e-6);
}

TEST_CASE("Gagliardo matrix against brute-force quadrature, other orders")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 4.0, 6, 3);
  for (double s : {0.25, 0.75}) {
    CAPTURE(s);
    const Eigen::MatrixXd B = assemble_gagliardo(m, SpectralMeasure::from_atoms({{s, 2.0}}));
    const Eigen::MatrixXd ref = oracle::brute_gagliardo(m, s, 2.0);
    CHECK(max_rel_diff(B, ref) <= 1e-6);
  }
}

TEST_CASE("Gagliardo matrix structure")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 32, 8);
  const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.2, 1.0}, {0.5, 0.5}, {0.9, 2.0}});
  const Eigen::MatrixXd B = assemble_gagliardo(m, mu);

  CHECK(assemble_gagliardo(m, SpectralMeasure{}).isZero(0.0));
  CHECK(asymmetry(B) <= 1e-13);

  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.num_nodes());
  CHECK(std::abs(one.dot(B * one)) <= 1e-10);
  CHECK((B * one).cwiseAbs().maxCoeff() <= QuadratureOptions{}.tolerance * B.cwiseAbs().maxCoeff());

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(B);
  CHECK(es.eigenvalues().minCoeff() >= -1e-10 * es.eigenvalues().maxCoeff());

  // linear in the weights
  const Eigen::MatrixXd B3 = assemble_gagliardo(m, mu.scaled(3.0));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Eigen::VectorXd u(m.num_nodes());
  for (int i = 0; i < u.size(); ++i)
    u[i] = normal(rng);
  CHECK(u.dot(B3 * u) == doctest::Approx(3.0 * u.dot(B * u)).epsilon(1e-13));
}

TEST_CASE("parallel assembly matches the serial reference")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 48, 12);
  const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.3, 1.0}, {0.8, 1.0}});
  const Eigen::MatrixXd serial = assemble_gagliardo_serial(m, mu);
  for (int threads : {1, 2, 4}) {
    set_thread_count(threads);
    CHECK(assemble_gagliardo(m, mu) == serial);
  }
  set_thread_count(0);
}

TEST_CASE("quadratic form converges under refinement")
{
  const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.5, 1.0}});
  double prev_value = 0.0;
  double prev_diff = 0.0;
  for (int k = 0; k < 4; ++k) {
    const int n_in = 16 << k;
    const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, n_in, n_in / 4);
    Eigen::VectorXd u(m.num_nodes());
    for (int i = 0; i < u.size(); ++i)
      u[i] = std::exp(-m.node(i) * m.node(i));
    const double value = u.dot(assemble_gagliardo(m, mu) * u);
    if (k >= 1) {
      const double diff = std::abs(value - prev_value);
      if (k >= 2)
        CHECK(diff < prev_diff);
      prev_diff = diff;
    }
    prev_value = value;
  }
}

TEST_CASE("quadrature tolerance out of reach raises AssemblyError")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 16, 4);
  QuadratureOptions q;
  q.tolerance = 1e-16;
  CHECK_THROWS_AS(assemble_gagliardo(m, SpectralMeasure::from_atoms({{0.5, 1.0}}), q), AssemblyError);
  q.tolerance = 0.0;
  CHECK_THROWS_AS(q.validate(), DomainError);
}

TEST_CASE("anorm")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 16, 4);
  const OperatorMatrices mats = assemble_operators(m, SpectralMeasure::from_atoms({{0.5, 1.0}}), 1.0);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.num_nodes());
  CHECK(anorm(Eigen::VectorXd::Zero(m.num_nodes()), mats) == 0.0);
  CHECK(std::abs(anorm(one, mats) - std::sqrt(2.0)) <= 1e-10);
  Eigen::VectorXd u(m.num_nodes());
  for (int i = 0; i < u.size(); ++i)
    u[i] = std::sin(m.node(i));
  CHECK(anorm(2.0 * u, mats) == doctest::Approx(2.0 * anorm(u, mats)).epsilon(1e-13));
}

TEST_CASE("kernel moments are exact for P1 data")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 16, 4);
  boost::math::quadrature::tanh_sinh<double> rule;
  for (double s : {0.1, 0.5, 0.9}) {
    for (double x : {-1.01, -3.0, 1.5, 20.0}) {
      const KernelMoments km = kernel_moments(m, x, s);
      const double total = rule.integrate([&](double y) { return std::pow(std::abs(x - y), -1.0 - 2.0 * s); },
                                          -1.0, 1.0, 1e-14);
      CHECK(km.total == doctest::Approx(total).epsilon(1e-11));
      CHECK(km.weights.sum() == doctest::Approx(km.total).epsilon(1e-13));
    }
  }
}

TEST_CASE("Neumann residual and extension")
{
  const Mesh1D m = build_mesh({-1.0, 1.0}, 8.0, 32, 8);
  const SpectralMeasure mu = SpectralMeasure::from_atoms({{0.5, 1.0}});
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(m.num_nodes());
  for (double x : {-1.5, -2.0, 3.0, 12.0})
    CHECK(std::abs(neumann_residual(m, mu, one, x, 1.0)) <= 1e-14);
  CHECK(std::abs(neumann_residual(m, mu, one, -2.0)) <= 1e-14);
  CHECK_THROWS_AS(neumann_residual(m, mu, one, 0.5), DomainError);
  CHECK_THROWS_AS(neumann_residual(m, mu, one, -1.0), DomainError);
  CHECK_THROWS_AS(neumann_residual(m, mu, one, 12.0), DomainError);

  const int n = m.num_interior();
  Eigen::VectorXd id(n);
  for (int j = 0; j < n; ++j)
    id[j] = m.node(m.first_interior() + j);
  const std::vector<double> pts = {-4.0, -2.0, -1.5, 1.5, 2.0, 4.0};
  const std::vector<double> ext = extension(m, mu, id, pts);
  const std::vector<double> ext1 = extension(m, mu, Eigen::VectorXd::Ones(n), pts);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    CHECK(std::abs(ext1[k] - 1.0) <= 1e-14);
    CHECK(ext[k] == doctest::Approx(oracle::identity_extension(pts[k], 0.5)).epsilon(1e-8));
    if (pts[k] < 0)
      CHECK(ext[k] <= 0.0);
    Eigen::VectorXd full = Eigen::VectorXd::Zero(m.num_nodes());
    full.segment(m.first_interior(), n) = id;
    CHECK(std::abs(neumann_residual(m, mu, full, pts[k], ext[k])) <= 1e-8);
  }

  // linear in the interior data
  Eigen::VectorXd sq = id.cwiseProduct(id);
  const std::vector<double> a = extension(m, mu, sq, pts);
  const std::vector<double> b = extension(m, mu, 2.0 * sq + 3.0 * id, pts);
  for (std::size_t k = 0; k < pts.size(); ++k)
    CHECK(b[k] == doctest::Approx(2.0 * a[k] + 3.0 * ext[k]).epsilon(1e-13));

  CHECK_THROWS_AS(extension(m, SpectralMeasure{}, id, pts), DegenerateError);
}
