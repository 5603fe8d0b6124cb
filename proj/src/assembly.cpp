#include "mixnl/assembly.hpp"

#include "mixnl/error.hpp"
#include "mixnl/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mixnl {

void QuadratureOptions::validate() const
{
  if (near_singular_subdivisions < 1)
    throw DomainError("quadrature: subdivisions must be >= 1");
  if (far_field_order < 2)
    throw DomainError("quadrature: Gauss order must be >= 2");
  if (!(tolerance > 0.0 && tolerance <= 1e-2))
    throw DomainError("quadrature: tolerance must lie in (0, 1e-2]");
}

std::vector<int> OperatorMatrices::active_dofs() const
{
  if (nonlocal) {
    std::vector<int> all(size());
    for (int i = 0; i < size(); ++i)
      all[i] = i;
    return all;
  }
  return interior_dofs;
}

namespace {

Eigen::MatrixXd p1_mass(const Mesh1D& mesh, bool interior)
{
  const int n = mesh.num_nodes();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    if (mesh.is_interior_cell(c) != interior)
      continue;
    const double h = mesh.cell_length(c);
    m(c, c) += h / 3.0;
    m(c + 1, c + 1) += h / 3.0;
    m(c, c + 1) += h / 6.0;
    m(c + 1, c) += h / 6.0;
  }
  return m;
}

} // namespace

Eigen::MatrixXd assemble_mass(const Mesh1D& mesh) { return p1_mass(mesh, true); }

Eigen::MatrixXd assemble_collar_mass(const Mesh1D& mesh) { return p1_mass(mesh, false); }

Eigen::MatrixXd assemble_stiffness(const Mesh1D& mesh)
{
  const int n = mesh.num_nodes();
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int c = mesh.first_interior(); c < mesh.last_interior(); ++c) {
    const double inv_h = 1.0 / mesh.cell_length(c);
    k(c, c) += inv_h;
    k(c + 1, c + 1) += inv_h;
    k(c, c + 1) -= inv_h;
    k(c + 1, c) -= inv_h;
  }
  return k;
}

namespace detail {

double power_integral(double beta, double log_w)
{
  const double x = beta * log_w;
  if (std::abs(x) < 1e-8)
    return log_w * (1.0 + 0.5 * x + x * x / 6.0);
  return std::expm1(x) / beta;
}

namespace {

// int_0^r (c0 + c1 t + c2 t^2) (1 + t)^{-1-2s} dt, in closed form via w = 1 + t.
double poly_kernel_integral(double c0, double c1, double c2, double r, double s)
{
  const double b0 = c0 - c1 + c2;
  const double b1 = c1 - 2.0 * c2;
  const double b2 = c2;
  const double log_w = std::log1p(r);
  return b0 * power_integral(-2.0 * s, log_w) + b1 * power_integral(1.0 - 2.0 * s, log_w) +
         b2 * power_integral(2.0 - 2.0 * s, log_w);
}

} // namespace

PairIntegrator::PairIntegrator(const Mesh1D& mesh, const SpectralMeasure& measure,
                               const QuadratureOptions& quad)
    : mesh_(mesh), quad_(quad)
{
  quad_.validate();
  for (const Atom& a : measure.atoms()) {
    orders_.push_back(a.order);
    scales_.push_back(a.weight * cns_constant(1, a.order) / 2.0);
  }
  rule_ = gauss_legendre(quad_.far_field_order, 0.0, 1.0);
  check_rule_ = gauss_legendre(quad_.far_field_order + 2, 0.0, 1.0);
}

bool PairIntegrator::skipped(int cell_a, int cell_b) const
{
  return !mesh_.is_interior_cell(cell_a) && !mesh_.is_interior_cell(cell_b);
}

PairBlock PairIntegrator::block(int cell_a, int cell_b) const
{
  if (cell_a == cell_b)
    return same_cell(cell_a);
  if (cell_b == cell_a + 1)
    return touching(cell_a);
  return separated(cell_a, cell_b);
}

// (u(x)-u(y)) = u' (x-y) on one cell; int_{[0,h]^2} |x-y|^{1-2s} = 2 h^{3-2s} / ((2-2s)(3-2s)).
PairBlock PairIntegrator::same_cell(int c) const
{
  PairBlock b;
  b.n = 2;
  b.dofs[0] = c;
  b.dofs[1] = c + 1;
  const double h = mesh_.cell_length(c);
  double v = 0.0;
  for (std::size_t k = 0; k < orders_.size(); ++k) {
    const double s = orders_[k];
    v += scales_[k] * 2.0 * std::pow(h, 1.0 - 2.0 * s) / ((2.0 - 2.0 * s) * (3.0 - 2.0 * s));
  }
  b.a[0] = v;
  b.a[1] = -v;
  b.a[2] = -v;
  b.a[3] = v;
  return b;
}

// Cells [a,b], [b,c]. With x = b - xi, y = b + eta the difference of a hat is
// -(xi p + eta q) (p, q its slopes on the two cells), so the integrand is
// homogeneous of degree 1 - 2s. Splitting the rectangle along its diagonal and
// integrating the radial variable exactly leaves a 1D integral of a quadratic
// times (1 + t)^{-1-2s}, also done in closed form.
PairBlock PairIntegrator::touching(int c) const
{
  PairBlock b;
  b.n = 3;
  b.dofs[0] = c;
  b.dofs[1] = c + 1;
  b.dofs[2] = c + 2;
  const double h1 = mesh_.cell_length(c);
  const double h2 = mesh_.cell_length(c + 1);
  const double p[3] = {-1.0 / h1, 1.0 / h1, 0.0};
  const double q[3] = {0.0, -1.0 / h2, 1.0 / h2};

  for (std::size_t k = 0; k < orders_.size(); ++k) {
    const double s = orders_[k];
    const double radial1 = std::pow(h1, 3.0 - 2.0 * s) / (3.0 - 2.0 * s);
    const double radial2 = std::pow(h2, 3.0 - 2.0 * s) / (3.0 - 2.0 * s);
    const double w = 2.0 * scales_[k];
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        // eta = t xi on the lower triangle, xi = t eta on the upper one
        const double lower = poly_kernel_integral(p[i] * p[j], p[i] * q[j] + q[i] * p[j],
                                                  q[i] * q[j], h2 / h1, s);
        const double upper = poly_kernel_integral(q[i] * q[j], p[i] * q[j] + q[i] * p[j],
                                                  p[i] * p[j], h1 / h2, s);
        const double v = w * (radial1 * lower + radial2 * upper);
        b.a[i * 3 + j] += v;
        if (i != j)
          b.a[j * 3 + i] += v;
      }
    }
  }
  return b;
}

void PairIntegrator::separated_gauss(int cell_a, int cell_b, const QuadratureRule& rule,
                                     int subdivisions, double* out) const
{
  const double xa = mesh_.node(cell_a);
  const double xb = mesh_.node(cell_a + 1);
  const double ya = mesh_.node(cell_b);
  const double yb = mesh_.node(cell_b + 1);
  const double h1 = xb - xa;
  const double h2 = yb - ya;
  const double gap = ya - xb;
  const double piece = 2.0 * gap / subdivisions;
  const int m1 = std::clamp(static_cast<int>(std::ceil(h1 / piece)), 1, 512);
  const int m2 = std::clamp(static_cast<int>(std::ceil(h2 / piece)), 1, 512);
  const double d1 = h1 / m1;
  const double d2 = h2 / m2;
  const int nq = static_cast<int>(rule.nodes.size());
  const std::size_t na = orders_.size();

  double acc[10] = {};
  for (int i1 = 0; i1 < m1; ++i1) {
    for (int q1 = 0; q1 < nq; ++q1) {
      const double x = xa + (i1 + rule.nodes[q1]) * d1;
      const double wx = rule.weights[q1] * d1;
      const double phi0 = (xb - x) / h1;
      const double phi1 = (x - xa) / h1;
      for (int i2 = 0; i2 < m2; ++i2) {
        for (int q2 = 0; q2 < nq; ++q2) {
          const double y = ya + (i2 + rule.nodes[q2]) * d2;
          const double log_z = std::log(y - x);
          double kernel = 0.0;
          for (std::size_t k = 0; k < na; ++k)
            kernel += scales_[k] * std::exp(-(1.0 + 2.0 * orders_[k]) * log_z);
          const double w = 2.0 * wx * rule.weights[q2] * d2 * kernel;
          const double d[4] = {phi0, phi1, -(yb - y) / h2, -(y - ya) / h2};
          int idx = 0;
          for (int i = 0; i < 4; ++i)
            for (int j = i; j < 4; ++j)
              acc[idx++] += w * d[i] * d[j];
        }
      }
    }
  }
  int idx = 0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      out[i * 4 + j] = acc[idx];
      out[j * 4 + i] = acc[idx];
      ++idx;
    }
  }
}

PairBlock PairIntegrator::separated(int cell_a, int cell_b) const
{
  PairBlock b;
  b.n = 4;
  b.dofs[0] = cell_a;
  b.dofs[1] = cell_a + 1;
  b.dofs[2] = cell_b;
  b.dofs[3] = cell_b + 1;
  const int base = quad_.near_singular_subdivisions;
  separated_gauss(cell_a, cell_b, rule_, base, b.a);

  const double gap = mesh_.node(cell_b) - mesh_.node(cell_a + 1);
  const double size = std::max(mesh_.cell_length(cell_a), mesh_.cell_length(cell_b));
  if (gap >= 2.0 * size)
    return b;

  // Near field: compare against a higher-order rule, refining the split until
  // the two agree.
  double check[16];
  for (int sub = base;; sub *= 2) {
    if (sub != base)
      separated_gauss(cell_a, cell_b, rule_, sub, b.a);
    separated_gauss(cell_a, cell_b, check_rule_, sub, check);
    double diff = 0.0;
    double scale = 0.0;
    for (int i = 0; i < 16; ++i) {
      diff = std::max(diff, std::abs(check[i] - b.a[i]));
      scale = std::max(scale, std::abs(check[i]));
    }
    b.error_estimate = scale > 0.0 ? diff / scale : 0.0;
    if (b.error_estimate <= quad_.tolerance)
      break;
    if (sub >= 16 * base)
      throw AssemblyError("nonlocal quadrature did not reach tolerance on cells " +
                              std::to_string(cell_a) + ", " + std::to_string(cell_b),
                          cell_a, cell_b, b.error_estimate);
  }
  std::copy(check, check + 16, b.a);
  return b;
}

} // namespace detail

namespace {

void scatter(Eigen::MatrixXd& g, const detail::PairBlock& b)
{
  for (int i = 0; i < b.n; ++i)
    for (int j = 0; j < b.n; ++j)
      g(b.dofs[i], b.dofs[j]) += b.a[i * b.n + j];
}

} // namespace

Eigen::MatrixXd assemble_gagliardo_serial(const Mesh1D& mesh, const SpectralMeasure& measure,
                                          const QuadratureOptions& quad)
{
  const int n = mesh.num_nodes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  if (measure.empty())
    return g;
  const detail::PairIntegrator integrator(mesh, measure, quad);
  for (int a = 0; a < mesh.num_cells(); ++a)
    for (int b = a; b < mesh.num_cells(); ++b)
      if (!integrator.skipped(a, b))
        scatter(g, integrator.block(a, b));
  return g;
}

Eigen::MatrixXd assemble_gagliardo(const Mesh1D& mesh, const SpectralMeasure& measure,
                                   const QuadratureOptions& quad)
{
  const int n = mesh.num_nodes();
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  if (measure.empty())
    return g;
  const detail::PairIntegrator integrator(mesh, measure, quad);
  const int cells = mesh.num_cells();

  std::vector<std::vector<detail::PairBlock>> rows(cells);
  std::vector<std::string> failures(cells);
  std::vector<detail::PairBlock> failed(cells);

#pragma omp parallel for schedule(dynamic, 4) num_threads(thread_count())
  for (int a = 0; a < cells; ++a) {
    try {
      std::vector<detail::PairBlock>& row = rows[a];
      row.reserve(cells - a);
      for (int b = a; b < cells; ++b)
        if (!integrator.skipped(a, b))
          row.push_back(integrator.block(a, b));
    } catch (const AssemblyError& e) {
      failures[a] = e.what();
      failed[a].dofs[0] = e.cell_a;
      failed[a].dofs[1] = e.cell_b;
      failed[a].error_estimate = e.estimate;
    }
  }

  for (int a = 0; a < cells; ++a)
    if (!failures[a].empty())
      throw AssemblyError(failures[a], failed[a].dofs[0], failed[a].dofs[1],
                          failed[a].error_estimate);

  for (const auto& row : rows)
    for (const detail::PairBlock& b : row)
      scatter(g, b);
  return g;
}

OperatorMatrices assemble_operators(const Mesh1D& mesh, const SpectralMeasure& measure,
                                    double alpha, const QuadratureOptions& quad)
{
  if (!(alpha >= 0.0))
    throw DomainError("alpha must be nonnegative");
  if (alpha == 0.0 && measure.empty())
    throw DegenerateError("alpha = 0 with an empty measure gives the zero operator");
  OperatorMatrices m;
  m.mass = assemble_mass(mesh);
  m.stiffness = assemble_stiffness(mesh);
  m.collar_mass = assemble_collar_mass(mesh);
  m.gagliardo = assemble_gagliardo(mesh, measure, quad);
  m.alpha = alpha;
  m.nonlocal = !measure.empty();
  for (int i = 0; i < mesh.num_nodes(); ++i)
    (mesh.is_interior_node(i) ? m.interior_dofs : m.exterior_dofs).push_back(i);
  return m;
}

double anorm(const Eigen::VectorXd& u, const OperatorMatrices& mats)
{
  const double q = u.dot(mats.mass * u) + mats.alpha * u.dot(mats.stiffness * u) +
                   u.dot(mats.gagliardo * u);
  return std::sqrt(std::max(q, 0.0));
}

} // namespace mixnl
