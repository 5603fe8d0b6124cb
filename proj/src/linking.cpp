#include "mixnl/linking.hpp"

#include "mixnl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace mixnl {

namespace {

Eigen::VectorXd unit(const Problem& problem, Eigen::VectorXd v)
{
  const double n = problem.anorm(v);
  if (!(n > 0.0))
    throw DegenerateError("zero direction");
  return v / n;
}

// Unit directions in span(columns of `basis`): pure first column, decaying
// random weights, fully random weights.
std::vector<Eigen::VectorXd> span_directions(const Problem& problem, const Eigen::MatrixXd& basis,
                                             int count, std::mt19937_64& rng)
{
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> dirs;
  dirs.push_back(unit(problem, basis.col(0)));
  if (basis.cols() == 1) {
    dirs.push_back(-dirs.front());
    return dirs;
  }
  for (int k = 1; k < count; ++k) {
    Eigen::VectorXd c(basis.cols());
    for (Eigen::Index j = 0; j < c.size(); ++j)
      c[j] = normal(rng) / (k % 2 == 1 ? static_cast<double>(j + 1) : 1.0);
    dirs.push_back(unit(problem, basis * c));
  }
  return dirs;
}

void check_interval(const EigenDecomposition& decomp, double lambda, int i)
{
  if (i < 1 || i >= decomp.size())
    throw DomainError("linking index " + std::to_string(i) + " needs " + std::to_string(i + 1) +
                      " eigenpairs");
  if (splitting_index(decomp, lambda) != i) {
    std::ostringstream os;
    os << "lambda = " << lambda << " is not in [lambda_" << i << ", lambda_" << i + 1 << ")";
    throw DomainError(os.str());
  }
}

// Maximizer of t -> I(t e) over t > 0 (1 if the ray never rises).
double ray_maximizer(const Problem& problem, const Eigen::VectorXd& e)
{
  double best_t = 1.0;
  double best = 0.0;
  for (double t = 1e-3; t <= 1e3; t *= 1.2) {
    const double v = problem.energy(t * e);
    if (v > best) {
      best = v;
      best_t = t;
    }
  }
  if (!(best > 0.0))
    return 1.0;
  double a = best_t / 1.2;
  double b = best_t * 1.2;
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 80; ++it) {
    const double c = b - g * (b - a);
    const double d = a + g * (b - a);
    if (problem.energy(c * e) > problem.energy(d * e))
      b = d;
    else
      a = c;
  }
  return 0.5 * (a + b);
}

} // namespace

LinkingGeometry verify_linking_geometry(const Problem& problem, const EigenDecomposition& decomp,
                                        int i, const LinkingGeometryOptions& opts)
{
  check_interval(decomp, problem.lambda(), i);
  const Splitting sp = split(decomp, i);
  if (opts.samples < 1 || opts.face_points < 2 || opts.rho_grid.empty())
    throw DomainError("linking geometry: invalid sampling options");

  LinkingGeometry geo;
  geo.index = i;
  geo.seed = opts.seed;
  geo.e = decomp.vector(i);
  std::mt19937_64 rng(opts.seed);

  const std::vector<Eigen::VectorXd> sphere =
      span_directions(problem, sp.complement_basis(), opts.samples, rng);
  geo.sphere_samples = static_cast<int>(sphere.size());
  geo.beta = -std::numeric_limits<double>::infinity();
  for (double rho : opts.rho_grid) {
    double lowest = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXd& d : sphere)
      lowest = std::min(lowest, problem.energy(rho * d));
    geo.spheres.push_back({rho, lowest});
    if (lowest > geo.beta) {
      geo.beta = lowest;
      geo.rho = rho;
    }
  }
  if (!(geo.beta > 0.0))
    throw GeometryError("no sphere radius in the complement has a positive sampled energy minimum");

  const std::vector<Eigen::VectorXd> hdirs =
      span_directions(problem, sp.basis(), opts.samples, rng);
  const int m = opts.face_points;
  double radius = std::max(2.0 * geo.rho, 1.0);
  for (int k = 0; k <= opts.max_doublings; ++k, radius *= 2.0) {
    double bottom = -std::numeric_limits<double>::infinity();
    double top = bottom;
    double lateral = bottom;
    int count = 0;
    for (const Eigen::VectorXd& d : hdirs) {
      for (int a = 0; a < m; ++a) {
        const double s = radius * a / (m - 1);
        bottom = std::max(bottom, problem.energy(s * d));
        top = std::max(top, problem.energy(s * d + radius * geo.e));
        lateral = std::max(lateral, problem.energy(radius * d + s * geo.e));
        count += 3;
      }
    }
    geo.max_bottom = bottom;
    geo.max_top = top;
    geo.max_lateral = lateral;
    geo.face_samples = count;
    geo.radius = radius;
    if (bottom > opts.face_tolerance) {
      std::ostringstream os;
      os << "energy on H_" << i << " reaches " << bottom << " > 0";
      throw GeometryError(os.str());
    }
    if (std::max(top, lateral) <= opts.face_tolerance && radius > geo.rho)
      return geo;
  }
  throw GeometryError("energy on the cylinder boundary stays positive up to the radius cap");
}

LinkingResult solve_linking(const Problem& problem, const EigenDecomposition& decomp, int i,
                            const LinkingGeometry& geometry, const LinkingOptions& opts,
                            const std::vector<Eigen::VectorXd>& known)
{
  check_interval(decomp, problem.lambda(), i);
  const Splitting sp = split(decomp, i);
  const Eigen::VectorXd e = decomp.vector(i);
  const double t_star = ray_maximizer(problem, e);

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Eigen::VectorXd> seeds;
  for (double amp : opts.amplitudes) {
    const Eigen::VectorXd base = amp * t_star * e;
    seeds.push_back(base);
    const double scale = opts.perturbation * problem.anorm(base);
    for (int k = 0; k < opts.perturbations; ++k) {
      Eigen::VectorXd c(sp.basis().cols());
      for (Eigen::Index j = 0; j < c.size(); ++j)
        c[j] = normal(rng);
      Eigen::VectorXd w = sp.basis() * c;
      w *= scale / problem.anorm(w);
      seeds.push_back(base + w);
    }
  }

  Deflation deflation(opts.deflation_shift);
  deflation.add(Eigen::VectorXd::Zero(problem.size()));
  for (const Eigen::VectorXd& r : known)
    deflation.add(r);

  LinkingResult out;
  std::vector<int> root_seed;
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    NewtonResult nr = newton_iterate(problem, seeds[s], opts.newton, &deflation);
    SeedRecord rec;
    rec.seed = static_cast<int>(s);
    rec.residual = nr.residual;
    rec.iterations = nr.iterations;
    rec.norm = problem.anorm(nr.u);
    rec.level = problem.energy(nr.u);
    if (!nr.converged() || !(nr.residual <= opts.tol)) {
      rec.status = std::string(to_string(nr.status)) + (nr.message.empty() ? "" : ": " + nr.message);
    } else if (rec.norm < opts.nontrivial_floor) {
      rec.status = "collapsed to 0";
    } else if (deflation.distance(problem, nr.u) < opts.deflation_radius) {
      rec.status = "re-found a deflated root";
    } else {
      rec.status = "root";
      Solution sol;
      sol.u = nr.u;
      sol.level = rec.level;
      sol.residual = nr.residual;
      sol.norm = rec.norm;
      sol.iterations = nr.iterations;
      for (const IterationRecord& r : nr.trace)
        sol.trace.push_back({r.iteration, r.energy, r.residual, 0.0, "newton"});
      deflation.add(nr.u);
      out.roots.push_back(std::move(sol));
      root_seed.push_back(static_cast<int>(s));
    }
    out.seeds.push_back(std::move(rec));
  }

  std::vector<std::size_t> order(out.roots.size());
  for (std::size_t k = 0; k < order.size(); ++k)
    order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.roots[a].level != out.roots[b].level)
      return out.roots[a].level < out.roots[b].level;
    return root_seed[a] < root_seed[b];
  });
  std::vector<Solution> sorted;
  for (std::size_t k : order)
    sorted.push_back(out.roots[k]);
  out.roots = std::move(sorted);

  for (const Solution& r : out.roots) {
    if (r.level >= geometry.beta - opts.tol) {
      out.solution = r;
      return out;
    }
  }
  std::ostringstream os;
  os << "linking search found no admissible root from " << seeds.size() << " seeds:";
  for (const SeedRecord& r : out.seeds)
    os << " [seed " << r.seed << ": " << r.status << ", residual " << r.residual << "]";
  throw NonConvergenceError(os.str());
}

} // namespace mixnl
