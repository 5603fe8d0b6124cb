#pragma once

// Independent reference computations used by the unit and acceptance tests.
// None of these call into the library's quadrature or closed forms.

#include "mixnl/mesh.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <vector>

namespace oracle {

/// c_{N,s} in 50-digit arithmetic.
inline double cns(int dim, double s)
{
  using mp = boost::multiprecision::cpp_bin_float_50;
  const mp sm(s);
  const mp pi = boost::multiprecision::default_ops::get_constant_pi<mp::backend_type>();
  const mp n_half = mp(dim) / 2;
  const mp v = sm * pow(mp(4), sm) * tgamma(n_half + sm) / (pow(pi, n_half) * tgamma(1 - sm));
  return static_cast<double>(v);
}

/// Value of hat function `i` at x, given that x lies in cell `c`.
inline double hat(const mixnl::Mesh1D& mesh, int i, int c, double x)
{
  const double a = mesh.node(c);
  const double b = mesh.node(c + 1);
  if (i == c)
    return (b - x) / (b - a);
  if (i == c + 1)
    return (x - a) / (b - a);
  return 0.0;
}

inline double hat_slope(const mixnl::Mesh1D& mesh, int i, int c)
{
  const double h = mesh.cell_length(c);
  if (i == c)
    return -1.0 / h;
  if (i == c + 1)
    return 1.0 / h;
  return 0.0;
}

/// Dense Galerkin matrix of
///   weight * c_{1,s} / 2 * int int_Q (phi_i(x)-phi_i(y)) (phi_j(x)-phi_j(y)) / |x-y|^{1+2s}
/// by nested adaptive tanh-sinh over every cell pair with at least one cell
/// inside Omega. The integrand is symmetric in (x, y), so pairs with
/// x-cell < y-cell are counted twice. Near the singular set the integrand is
/// written in offsets from it so tanh-sinh abscissas keep full precision.
inline Eigen::MatrixXd brute_gagliardo(const mixnl::Mesh1D& mesh, double s, double weight,
                                       double tol = 1e-11)
{
  using Rule = boost::math::quadrature::tanh_sinh<double>;
  Rule outer_rule;
  Rule inner_rule;
  const int n = mesh.num_nodes();
  const double scale = weight * cns(1, s) / 2.0;
  const double ex = -1.0 - 2.0 * s;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);

  for (int cx = 0; cx < mesh.num_cells(); ++cx) {
    for (int cy = cx; cy < mesh.num_cells(); ++cy) {
      if (!mesh.is_interior_cell(cx) && !mesh.is_interior_cell(cy))
        continue;
      const double mult = cx == cy ? 1.0 : 2.0;
      std::vector<int> dofs = {cx, cx + 1};
      for (int d : {cy, cy + 1})
        if (d != cx && d != cx + 1)
          dofs.push_back(d);
      const int nd = static_cast<int>(dofs.size());
      const double h1 = mesh.cell_length(cx);
      const double h2 = mesh.cell_length(cy);

      for (int p = 0; p < nd; ++p) {
        for (int q = p; q < nd; ++q) {
          const int i = dofs[p];
          const int j = dofs[q];
          double value = 0.0;
          if (cx == cy) {
            // phi(x) - phi(y) = slope (x - y); offsets d = |x - y| on each side of x
            const double si = hat_slope(mesh, i, cx);
            const double sj = hat_slope(mesh, j, cx);
            auto f = [&](double d) { return d > 0.0 ? si * sj * std::pow(d, 1.0 - 2.0 * s) : 0.0; };
            auto inner = [&](double xi) {
              double v = 0.0;
              if (xi > 0.0)
                v += inner_rule.integrate(f, 0.0, xi, tol);
              if (xi < h1)
                v += inner_rule.integrate(f, 0.0, h1 - xi, tol);
              return v;
            };
            value = outer_rule.integrate(inner, 0.0, h1, tol);
          } else if (cy == cx + 1) {
            // x = z - a, y = z + b around the shared node z
            const int z = cx + 1;
            auto diff = [&](int k, double a, double b) {
              if (k == cx)
                return a / h1;
              if (k == z)
                return b / h2 - a / h1;
              return -b / h2;
            };
            auto inner = [&](double a) {
              auto f = [&](double b) {
                // each difference is O(a + b); divide first so nothing overflows
                const double r = a + b;
                return r > 0.0 ? (diff(i, a, b) / r) * (diff(j, a, b) / r) * std::pow(r, 1.0 - 2.0 * s) : 0.0;
              };
              return inner_rule.integrate(f, 0.0, h2, tol);
            };
            value = outer_rule.integrate(inner, 0.0, h1, tol);
          } else {
            auto inner = [&](double x) {
              auto f = [&](double y) {
                const double di = hat(mesh, i, cx, x) - hat(mesh, i, cy, y);
                const double dj = hat(mesh, j, cx, x) - hat(mesh, j, cy, y);
                return di * dj * std::pow(y - x, ex);
              };
              return inner_rule.integrate(f, mesh.node(cy), mesh.node(cy + 1), tol);
            };
            value = outer_rule.integrate(inner, mesh.node(cx), mesh.node(cx + 1), tol);
          }
          value *= mult * scale;
          g(i, j) += value;
          if (i != j)
            g(j, i) += value;
        }
      }
    }
  }
  return g;
}

/// int_{-1}^{1} y |x-y|^{-1-2s} dy / int_{-1}^{1} |x-y|^{-1-2s} dy for x outside [-1, 1].
inline double identity_extension(double x, double s)
{
  boost::math::quadrature::tanh_sinh<double> rule;
  auto k = [&](double y) { return std::pow(std::abs(x - y), -1.0 - 2.0 * s); };
  const double num = rule.integrate([&](double y) { return y * k(y); }, -1.0, 1.0, 1e-14);
  const double den = rule.integrate(k, -1.0, 1.0, 1e-14);
  return num / den;
}

} // namespace oracle
