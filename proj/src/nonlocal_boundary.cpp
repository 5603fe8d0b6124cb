#include "mixnl/nonlocal_boundary.hpp"

#include "mixnl/assembly.hpp"
#include "mixnl/error.hpp"

#include <cmath>
#include <string>

namespace mixnl {

namespace {

void require_exterior(const Mesh1D& mesh, double x)
{
  const Interval omega = mesh.omega();
  if (x >= omega.left && x <= omega.right)
    throw DomainError("point " + std::to_string(x) + " is not outside the closed domain");
}

// int_{z1}^{z2} z^{beta-1} dz for 0 < z1 < z2.
double power_moment(double beta, double z1, double z2)
{
  return std::pow(z1, beta) * detail::power_integral(beta, std::log(z2 / z1));
}

} // namespace

KernelMoments kernel_moments(const Mesh1D& mesh, double x, double s)
{
  require_exterior(mesh, x);
  KernelMoments m;
  m.weights = Eigen::VectorXd::Zero(mesh.num_interior());
  const int first = mesh.first_interior();
  for (int c = first; c < mesh.last_interior(); ++c) {
    const double a = mesh.node(c);
    const double b = mesh.node(c + 1);
    const double h = b - a;
    // z = |y - x| runs over [z1, z2]; `near` is the hat that peaks at the end
    // of the cell closest to x.
    const bool left_of_cell = x < a;
    const double z1 = left_of_cell ? a - x : x - b;
    const double z2 = left_of_cell ? b - x : x - a;
    const double j0 = power_moment(-2.0 * s, z1, z2);     // int z^{-1-2s}
    const double j1 = power_moment(1.0 - 2.0 * s, z1, z2); // int z^{-2s}
    const double near = (z2 * j0 - j1) / h;
    const double far = (j1 - z1 * j0) / h;
    const int ia = c - first;
    m.weights[ia] += left_of_cell ? near : far;
    m.weights[ia + 1] += left_of_cell ? far : near;
    m.total += j0;
  }
  return m;
}

double neumann_residual(const Mesh1D& mesh, const SpectralMeasure& measure,
                        const Eigen::VectorXd& u, double x, std::optional<double> value_at_x)
{
  require_exterior(mesh, x);
  if (u.size() != mesh.num_nodes())
    throw DomainError("neumann_residual: DOF vector has the wrong size");
  double ux = 0.0;
  if (value_at_x) {
    ux = *value_at_x;
  } else {
    if (std::abs(x) > mesh.collar_radius())
      throw DomainError("neumann_residual: value at x outside the collar must be supplied");
    ux = mesh.interpolate(u, x);
  }
  const Eigen::VectorXd inner = mesh.interior_values(u);
  double r = 0.0;
  for (const Atom& atom : measure.atoms()) {
    const KernelMoments km = kernel_moments(mesh, x, atom.order);
    r += atom.weight * cns_constant(1, atom.order) * (ux * km.total - km.weights.dot(inner));
  }
  return r;
}

std::vector<double> extension(const Mesh1D& mesh, const SpectralMeasure& measure,
                              const Eigen::VectorXd& u_interior, std::span<const double> points)
{
  if (measure.empty())
    throw DegenerateError("extension is undefined for an empty measure");
  if (u_interior.size() != mesh.num_interior())
    throw DomainError("extension: interior vector has the wrong size");
  std::vector<double> values;
  values.reserve(points.size());
  for (double x : points) {
    double num = 0.0;
    double den = 0.0;
    for (const Atom& atom : measure.atoms()) {
      const KernelMoments km = kernel_moments(mesh, x, atom.order);
      const double w = atom.weight * cns_constant(1, atom.order);
      num += w * km.weights.dot(u_interior);
      den += w * km.total;
    }
    values.push_back(num / den);
  }
  return values;
}

} // namespace mixnl
