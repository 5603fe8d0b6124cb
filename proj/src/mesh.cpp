#include "mixnl/mesh.hpp"

#include "mixnl/error.hpp"

#include <algorithm>
#include <cmath>

namespace mixnl {

namespace {

// Growth factor q >= 1 with h0 (1 + q + ... + q^{n-1}) = length.
double collar_ratio(double h0, int n, double length)
{
  if (n * h0 >= length)
    return 1.0;
  auto covered = [&](double q) { return h0 * (std::pow(q, n) - 1.0) / (q - 1.0); };
  double lo = 1.0 + 1e-12;
  double hi = 2.0;
  while (covered(hi) < length)
    hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (covered(mid) < length ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Cell widths from the boundary outwards.
std::vector<double> collar_widths(double h0, int n, double length, double& ratio)
{
  ratio = collar_ratio(h0, n, length);
  std::vector<double> widths(n);
  if (ratio == 1.0) {
    std::fill(widths.begin(), widths.end(), length / n);
    return widths;
  }
  double w = h0;
  for (int k = 0; k < n; ++k, w *= ratio)
    widths[k] = w;
  return widths;
}

} // namespace

Mesh1D build_mesh(Interval omega, double collar_radius, int n_in, int n_ext)
{
  if (!(omega.right > omega.left))
    throw DomainError("build_mesh: empty domain");
  if (!(collar_radius > std::max(std::abs(omega.left), std::abs(omega.right))))
    throw DomainError("build_mesh: collar radius must exceed the domain");
  if (n_in < 2)
    throw DomainError("build_mesh: n_in must be >= 2");
  if (n_ext < 1)
    throw DomainError("build_mesh: n_ext must be >= 1");

  Mesh1D mesh;
  mesh.omega_ = omega;
  mesh.collar_radius_ = collar_radius;
  mesh.n_in_ = n_in;
  mesh.n_ext_ = n_ext;

  const double h = omega.length() / n_in;
  const std::vector<double> left =
      collar_widths(h, n_ext, omega.left + collar_radius, mesh.left_grading_);
  const std::vector<double> right =
      collar_widths(h, n_ext, collar_radius - omega.right, mesh.right_grading_);

  std::vector<double>& x = mesh.nodes_;
  x.resize(n_in + 2 * n_ext + 1);

  // left collar, built inward from x_l and pinned at -R
  x[n_ext] = omega.left;
  for (int k = 0; k < n_ext; ++k)
    x[n_ext - 1 - k] = x[n_ext - k] - left[k];
  x[0] = -collar_radius;

  for (int i = 1; i < n_in; ++i)
    x[n_ext + i] = omega.left + i * h;
  x[n_ext + n_in] = omega.right;

  for (int k = 0; k < n_ext; ++k)
    x[n_ext + n_in + 1 + k] = x[n_ext + n_in + k] + right[k];
  x.back() = collar_radius;

  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1]))
      throw DomainError("build_mesh: nodes are not strictly increasing");
  return mesh;
}

double Mesh1D::interpolate(const Eigen::VectorXd& u, double x) const
{
  if (x < nodes_.front() || x > nodes_.back())
    throw DomainError("interpolate: point outside the meshed line");
  auto it = std::upper_bound(nodes_.begin(), nodes_.end(), x);
  int c = static_cast<int>(it - nodes_.begin()) - 1;
  c = std::clamp(c, 0, num_cells() - 1);
  const double t = (x - nodes_[c]) / cell_length(c);
  return (1.0 - t) * u[c] + t * u[c + 1];
}

} // namespace mixnl
