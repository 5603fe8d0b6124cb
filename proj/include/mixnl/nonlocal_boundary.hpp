#pragma once

#include "mixnl/measure.hpp"
#include "mixnl/mesh.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace mixnl {

/// Kernel moments of the interior hat functions seen from an exterior point:
/// weights[j] = int_Omega phi_j(y) |x-y|^{-1-2s} dy for the interior nodes
/// (in interior order), total = sum of weights = int_Omega |x-y|^{-1-2s} dy.
/// Exact for P1 data.
struct KernelMoments {
  Eigen::VectorXd weights;
  double total = 0.0;
};

KernelMoments kernel_moments(const Mesh1D& mesh, double x, double s);

/// mu-averaged nonlocal normal derivative at an exterior point,
///   int c_{1,s} int_Omega (u(x) - u(y)) / |x-y|^{1+2s} dy dmu(s),
/// for the P1 function with nodal values `u` (all DOFs). The value u(x) is
/// interpolated when x lies in the collar, otherwise it must be supplied.
double neumann_residual(const Mesh1D& mesh, const SpectralMeasure& measure,
                        const Eigen::VectorXd& u, double x,
                        std::optional<double> value_at_x = std::nullopt);

/// Exterior values that make the mu-averaged normal derivative vanish:
/// the c_{1,s} dmu(s)-weighted kernel average of the interior data.
/// Linear in `u_interior` (interior DOFs only, size n_in + 1).
std::vector<double> extension(const Mesh1D& mesh, const SpectralMeasure& measure,
                              const Eigen::VectorXd& u_interior, std::span<const double> points);

} // namespace mixnl
