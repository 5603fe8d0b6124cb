#pragma once

#include "mixnl/assembly.hpp"
#include "mixnl/measure.hpp"
#include "mixnl/mesh.hpp"
#include "mixnl/nonlinearity.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mixnl {

/// Density on (0, 1) reduced by Gauss-Legendre: "constant" (params = [c]) or
/// "power" (params = [c, k] for c s^k).
struct DensitySpec {
  std::string kind = "constant";
  std::vector<double> params = {1.0};
  int nodes = 8;
};

/// Atoms and a reduced density may be combined. A config that sets either key
/// replaces the default single atom at s = 0.5.
struct MeasureSpec {
  std::vector<Atom> atoms = {{0.5, 1.0}};
  std::optional<DensitySpec> density;

  SpectralMeasure build() const;
};

struct NonlinearitySpec {
  std::string kind = "power";
  double a = 1.0;
  double p = 4.0;

  std::shared_ptr<const SourceTerm> build() const;
};

struct SolverSpec {
  double tol = 1e-8;
  int max_iter = 2000;
  int path_points = 40;
  /// Random H_i perturbations per seed amplitude in the linking search.
  int seeds = 2;
  /// Probe directions / sphere samples for the geometry certificates.
  int directions = 64;
  /// Eigenpairs reported; the linking branch always uses all of them.
  int eig_count = 16;
  std::string eig_method = "schur";
};

struct RunConfig {
  double omega_left = -1.0;
  double omega_right = 1.0;
  double collar_R = 8.0;
  int n_in = 128;
  int n_ext = 32;
  double alpha = 0.0;
  double lambda = 0.0;
  MeasureSpec measure;
  NonlinearitySpec nonlinearity;
  QuadratureOptions quad;
  SolverSpec solver;
  std::uint64_t seed = 1;
  std::string output = "out";

  /// Throws ConfigError naming the first invalid key.
  void validate() const;
  Interval omega() const { return {omega_left, omega_right}; }
};

/// Parses TOML text. Unknown keys are rejected.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

/// Applies "key=value" overrides (value in TOML syntax, dotted keys allowed,
/// bare words taken as strings) on top of `base`.
RunConfig apply_overrides(const RunConfig& base, const std::vector<std::string>& overrides);

/// Canonical TOML form; parse_config(to_toml(c)) reproduces c.
std::string to_toml(const RunConfig& config);

/// Operator presets on Omega = (-1, 1), R = 8:
///   cor1: alpha (1), beta (1), s (0.5)        -alpha Lap + beta (-Lap)^s
///   cor2: n (2)                                sum_k (-Lap)^{s_k}, s_k = (2k-1)/(2n)
///   cor3: K (10)                               sum_k 2^-k (-Lap)^{1-2^-k}
///   cor4: omega (1), nodes (8)                 int_0^1 omega (-Lap)^s ds
/// Unknown names or parameters throw ConfigError.
RunConfig preset(std::string_view name, const std::map<std::string, double>& params = {});
std::vector<std::string> preset_names();

} // namespace mixnl
