#pragma once

#include "mixnl/newton.hpp"
#include "mixnl/problem.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mixnl {

struct SphereSample {
  double rho = 0.0;
  double min_energy = 0.0; ///< minimum of I over the sampled directions
};

/// Sampled mountain-pass geometry: I >= beta > 0 on the rho-sphere (over the
/// sampled directions) and a far point e with ||e|| > rho and I(e) < 0.
struct MPGeometry {
  double rho = 0.0;
  double beta = 0.0;
  Eigen::VectorXd e;
  double e_norm = 0.0;
  double e_energy = 0.0;
  int directions = 0;
  std::uint64_t seed = 0;
  std::vector<SphereSample> spheres;
};

struct MPGeometryOptions {
  int directions = 64;
  std::vector<double> rho_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  std::uint64_t seed = 1;
  int max_doublings = 60;
};

/// Throws GeometryError when no rho on the grid has a positive sampled
/// minimum, DegeneratePathError when I(t u0) never turns negative, and
/// DomainError for lambda >= 1.
MPGeometry verify_mp_geometry(const Problem& problem, const MPGeometryOptions& opts = {});

struct SaddleTraceRecord {
  int iteration = 0;
  double path_max = 0.0;
  double residual = 0.0;
  double norm = 0.0;
  std::string phase; ///< "path" or "newton"
};

/// A discrete critical point with the evidence collected on the way.
struct Solution {
  Eigen::VectorXd u;
  double level = 0.0;
  double residual = 0.0;
  double norm = 0.0;
  int iterations = 0;
  std::vector<SaddleTraceRecord> trace;
};

struct MPOptions {
  double tol = 1e-8;
  int max_iter = 2000;
  int path_points = 40;
  double nontrivial_floor = 1e-3;
  /// Path-maximum residual below which Newton polishing is attempted.
  double polish_threshold = 1e-5;
  int reparametrize_every = 10;
  NewtonOptions newton;
};

struct MPResult {
  Solution solution;
  /// Highest energy along the last accepted path.
  double path_max = 0.0;
  std::vector<Eigen::VectorXd> path;
};

/// Deforms the straight path 0 -> e by steepest descent of its maximum point,
/// then polishes the maximum with Newton. Throws NonConvergenceError after
/// max_iter, DegeneratePathError if the maximum collapses onto 0.
MPResult solve_mountain_pass(const Problem& problem, const MPGeometry& geometry,
                             const MPOptions& opts = {});

} // namespace mixnl
