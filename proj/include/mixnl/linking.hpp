#pragma once

#include "mixnl/mountain_pass.hpp"
#include "mixnl/newton.hpp"
#include "mixnl/problem.hpp"
#include "mixnl/spectra.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace mixnl {

/// Sampled linking geometry around H_i + span{e_{i+1}}:
/// I >= beta > 0 on the rho-sphere of the complement, and I <= 0 on the three
/// faces of the boundary of {w + t e : w in H_i, ||w|| <= R, 0 <= t <= R}.
struct LinkingGeometry {
  int index = 0;
  double rho = 0.0;
  double beta = 0.0;
  double radius = 0.0; ///< R
  Eigen::VectorXd e;   ///< e_{i+1}, unit L2(Omega) norm
  double max_bottom = 0.0;
  double max_top = 0.0;
  double max_lateral = 0.0;
  int sphere_samples = 0;
  int face_samples = 0;
  std::uint64_t seed = 0;
  std::vector<SphereSample> spheres;
};

struct LinkingGeometryOptions {
  int samples = 64;
  std::vector<double> rho_grid = {0.01, 0.02, 0.05, 0.1, 0.2, 0.3, 0.5};
  int face_points = 24; ///< points per face direction
  double face_tolerance = 1e-12;
  int max_doublings = 30;
  std::uint64_t seed = 1;
};

/// Requires lambda in [lambda_i, lambda_{i+1}) and at least i + 1 pairs.
/// Throws GeometryError when the sphere or the faces cannot be certified.
LinkingGeometry verify_linking_geometry(const Problem& problem, const EigenDecomposition& decomp,
                                        int i, const LinkingGeometryOptions& opts = {});

struct SeedRecord {
  int seed = 0;
  std::string status;
  double residual = 0.0;
  double level = 0.0;
  double norm = 0.0;
  int iterations = 0;
};

struct LinkingOptions {
  double tol = 1e-8;
  double nontrivial_floor = 1e-3;
  /// Multiples of the ray maximizer along e_{i+1} used as seed amplitudes.
  std::vector<double> amplitudes = {0.5, 1.0, 1.5, 2.0};
  /// Random H_i perturbations per amplitude (relative size `perturbation`).
  int perturbations = 2;
  double perturbation = 0.05;
  /// Roots closer than this (in anorm) to a deflated one count as re-found.
  double deflation_radius = 1e-6;
  double deflation_shift = 1.0;
  std::uint64_t seed = 1;
  NewtonOptions newton{.tol = 1e-8, .max_iter = 100};
};

struct LinkingResult {
  Solution solution;
  std::vector<SeedRecord> seeds;
  /// All distinct nontrivial roots found, ascending by (level, seed).
  std::vector<Solution> roots;
};

/// Deflated Newton over seeds t e_{i+1} (+ small H_i perturbations), deflating
/// 0, the `known` roots and every root found. Returns the lowest-level root
/// with level >= beta - tol. Throws NonConvergenceError with the seed trace
/// when no seed yields an admissible root.
LinkingResult solve_linking(const Problem& problem, const EigenDecomposition& decomp, int i,
                            const LinkingGeometry& geometry, const LinkingOptions& opts = {},
                            const std::vector<Eigen::VectorXd>& known = {});

} // namespace mixnl
