#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace mixnl {

/// Weighted Dirac mass at a fractional order s in (0, 1).
struct Atom {
  double order;
  double weight;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Nonnegative finite measure on (0, 1) over fractional orders, stored as a
/// sorted list of atoms with pairwise distinct orders and positive weights.
/// Continuous densities are reduced to atoms by Gauss-Legendre quadrature.
class SpectralMeasure {
public:
  SpectralMeasure() = default;

  /// Duplicated orders are merged by summing weights; zero weights are dropped.
  static SpectralMeasure from_atoms(std::span<const Atom> atoms);
  static SpectralMeasure from_atoms(std::initializer_list<Atom> atoms)
  {
    return from_atoms(std::span<const Atom>(atoms.begin(), atoms.size()));
  }

  /// Atoms (s_q, w_q * density(s_q)) at the Gauss-Legendre nodes on (0, 1).
  static SpectralMeasure from_density(const std::function<double(double)>& density, int n_nodes);

  std::span<const Atom> atoms() const { return atoms_; }
  bool empty() const { return atoms_.empty(); }
  std::size_t size() const { return atoms_.size(); }
  double mass() const;

  /// The measure c * mu.
  SpectralMeasure scaled(double factor) const;

  friend bool operator==(const SpectralMeasure&, const SpectralMeasure&) = default;

private:
  std::vector<Atom> atoms_;
};

/// Effective top order s_sharp of L_{alpha,mu} and its critical exponent.
struct OrderBookkeeping {
  double s_sharp = 1.0;
  double critical_exponent = 0.0; ///< +inf when dim <= 2 s_sharp
  int dim = 1;
};

/// s_sharp = 1 when alpha != 0; otherwise the largest atom order with
/// positive weight.
OrderBookkeeping s_sharp(const SpectralMeasure& measure, double alpha, int dim = 1);

/// 2N / (N - 2s) if N > 2s, +inf otherwise.
double critical_exponent(int dim, double s);

/// Normalizing constant of the fractional Laplacian,
///   c_{N,s} = s 4^s Gamma(N/2 + s) / (pi^{N/2} Gamma(1 - s)).
double cns_constant(int dim, double s);

} // namespace mixnl
