#include "mixnl/measure.hpp"

#include "mixnl/error.hpp"
#include "mixnl/gauss.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace mixnl {

namespace {

void require_order(double s)
{
  if (!(s > 0.0 && s < 1.0))
    throw DomainError("fractional order " + std::to_string(s) + " outside (0,1)");
}

} // namespace

SpectralMeasure SpectralMeasure::from_atoms(std::span<const Atom> atoms)
{
  std::vector<Atom> sorted(atoms.begin(), atoms.end());
  for (const Atom& a : sorted) {
    require_order(a.order);
    if (!(a.weight >= 0.0) || !std::isfinite(a.weight))
      throw DomainError("atom weight must be finite and nonnegative");
  }
  // Full (order, weight) sort so merged sums do not depend on input order.
  std::sort(sorted.begin(), sorted.end(), [](const Atom& x, const Atom& y) {
    return x.order < y.order || (x.order == y.order && x.weight < y.weight);
  });

  SpectralMeasure m;
  for (const Atom& a : sorted) {
    if (!m.atoms_.empty() && m.atoms_.back().order == a.order)
      m.atoms_.back().weight += a.weight;
    else
      m.atoms_.push_back(a);
  }
  std::erase_if(m.atoms_, [](const Atom& a) { return a.weight == 0.0; });
  return m;
}

SpectralMeasure SpectralMeasure::from_density(const std::function<double(double)>& density, int n_nodes)
{
  if (n_nodes < 1)
    throw DomainError("from_density: n_nodes must be >= 1");
  const QuadratureRule rule = gauss_legendre(n_nodes, 0.0, 1.0);
  std::vector<Atom> atoms;
  atoms.reserve(n_nodes);
  for (int q = 0; q < n_nodes; ++q) {
    const double w = density(rule.nodes[q]);
    if (!(w >= 0.0) || !std::isfinite(w))
      throw DomainError("density is negative or not finite at s = " + std::to_string(rule.nodes[q]));
    atoms.push_back({rule.nodes[q], rule.weights[q] * w});
  }
  SpectralMeasure m = from_atoms(atoms);
  if (m.empty())
    throw DegenerateError("density vanishes at every quadrature node");
  return m;
}

double SpectralMeasure::mass() const
{
  double total = 0.0;
  for (const Atom& a : atoms_)
    total += a.weight;
  return total;
}

SpectralMeasure SpectralMeasure::scaled(double factor) const
{
  if (!(factor >= 0.0))
    throw DomainError("measure scale factor must be nonnegative");
  SpectralMeasure m = *this;
  for (Atom& a : m.atoms_)
    a.weight *= factor;
  std::erase_if(m.atoms_, [](const Atom& a) { return a.weight == 0.0; });
  return m;
}

double critical_exponent(int dim, double s)
{
  if (dim < 1)
    throw DomainError("spatial dimension must be positive");
  if (dim > 2.0 * s)
    return 2.0 * dim / (dim - 2.0 * s);
  return std::numeric_limits<double>::infinity();
}

OrderBookkeeping s_sharp(const SpectralMeasure& measure, double alpha, int dim)
{
  if (!(alpha >= 0.0))
    throw DomainError("alpha must be nonnegative");
  OrderBookkeeping b;
  b.dim = dim;
  if (alpha != 0.0) {
    b.s_sharp = 1.0;
  } else {
    if (measure.empty())
      throw DegenerateError("alpha = 0 with an empty measure gives the zero operator");
    b.s_sharp = measure.atoms().back().order; // atoms are sorted, weights > 0
  }
  b.critical_exponent = critical_exponent(dim, b.s_sharp);
  return b;
}

double cns_constant(int dim, double s)
{
  require_order(s);
  if (dim < 1)
    throw DomainError("spatial dimension must be positive");
  const double half_n = 0.5 * dim;
  // s / Gamma(1 - s) stays finite as s -> 1 since 1/Gamma has a zero there.
  const double log_value = std::log(s) + s * std::log(4.0) + std::lgamma(half_n + s) -
                           half_n * std::log(std::numbers::pi) - std::lgamma(1.0 - s);
  return std::exp(log_value);
}

} // namespace mixnl
