#pragma once

#include "mixnl/measure.hpp"
#include "mixnl/mesh.hpp"

#include <span>
#include <string>
#include <vector>

namespace mixnl {

/// One checked claim: `value` compared against `threshold` by `relation`
/// ("<=", "<", ">=", "==" meaning |value - threshold| <= tolerance).
struct ClaimCheck {
  std::string claim;
  double value = 0.0;
  std::string relation;
  double threshold = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExampleReport {
  std::string name;
  std::vector<ClaimCheck> claims;

  bool passed() const;
};

/// Exterior sample points {-1.5, -2, -4, 1.5, 2, 4}.
std::vector<double> default_remark_points();

/// Extends u(y) = y on Omega = (-1, 1) by the Neumann extension and checks:
/// the extension is <= 0 left of Omega, the extended function has zero
/// mu-averaged normal derivative, and u^+ has a strictly negative one left of
/// Omega. Also runs the control case u = 1. The mesh must have Omega = (-1, 1)
/// and a node at 0.
ExampleReport run_remark_example(const SpectralMeasure& measure, const Mesh1D& mesh,
                                 std::span<const double> points, double tol = 1e-8);

/// u_n(x) = x^{1+1/n} (x-1)^2 -> u(x) = x (x-1)^2 on (0, 1).
double appendix_u(int n, double x);
double appendix_du(int n, double x);
double appendix_limit(double x);
double appendix_limit_derivative(double x);
/// 1/(1 + 2/n) - 2/(1 + 1/n) + 1 = int_0^1 |x^{1/n} - 1|^2.
double appendix_l2_bound(int n);

/// Checks the closed-form L2 bound, its decay, the quadrature of
/// ||u_n - u||^2 and ||u_n' - u'||^2 against it and to 0, and the boundary
/// derivatives u_n'(0) = 0, u'(0) = 1.
ExampleReport run_appendix_example(std::span<const int> n_list, double tol = 1e-8);

} // namespace mixnl
