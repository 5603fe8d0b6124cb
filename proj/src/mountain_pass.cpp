#include "mixnl/mountain_pass.hpp"

#include "mixnl/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace mixnl {

namespace {

// Unit-norm probe directions: the constant, nodal noise, and smooth
// low-frequency cosines over the meshed line.
std::vector<Eigen::VectorXd> probe_directions(const Problem& problem, int count, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Mesh1D& mesh = problem.mesh();
  const double xl = mesh.omega().left;
  const double len = mesh.omega().length();

  std::vector<Eigen::VectorXd> dirs;
  dirs.push_back(problem.constant(1.0));
  for (int k = 1; k < count; ++k) {
    Eigen::VectorXd v(problem.size());
    if (k % 2 == 1) {
      for (int i = 0; i < v.size(); ++i)
        v[i] = normal(rng);
    } else {
      double coef[5];
      for (double& c : coef)
        c = normal(rng);
      for (int i = 0; i < v.size(); ++i) {
        const double y = (mesh.node(i) - xl) / len;
        double s = 0.0;
        for (int m = 0; m < 5; ++m)
          s += coef[m] * std::cos(m * std::numbers::pi * y);
        v[i] = s;
      }
    }
    dirs.push_back(problem.prolong(problem.restrict(v)));
  }
  for (Eigen::VectorXd& d : dirs)
    d /= problem.anorm(d);
  return dirs;
}

// Golden-section maximum of I on the polyline z_{k-1} -> z_k -> z_{k+1}.
Eigen::VectorXd refine_maximum(const Problem& problem, const std::vector<Eigen::VectorXd>& path,
                               std::size_t k, double& value)
{
  auto point = [&](double tau) -> Eigen::VectorXd {
    if (tau >= 0.0)
      return path[k] + tau * (path[k + 1] - path[k]);
    return path[k] - tau * (path[k - 1] - path[k]);
  };
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = -1.0;
  double b = 1.0;
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = problem.energy(point(c));
  double fd = problem.energy(point(d));
  for (int it = 0; it < 60 && b - a > 1e-12; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = problem.energy(point(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = problem.energy(point(d));
    }
  }
  const double tau = 0.5 * (a + b);
  Eigen::VectorXd best = point(tau);
  const double fbest = problem.energy(best);
  if (fbest > value) {
    value = fbest;
    return best;
  }
  return path[k];
}

// Equal anorm arc-length spacing, endpoints fixed.
void reparametrize(const Problem& problem, std::vector<Eigen::VectorXd>& path)
{
  const std::size_t n = path.size();
  std::vector<double> s(n, 0.0);
  for (std::size_t j = 1; j < n; ++j)
    s[j] = s[j - 1] + problem.anorm(path[j] - path[j - 1]);
  if (!(s.back() > 0.0))
    return;
  std::vector<Eigen::VectorXd> out(n);
  out.front() = path.front();
  out.back() = path.back();
  std::size_t seg = 0;
  for (std::size_t j = 1; j + 1 < n; ++j) {
    const double target = s.back() * static_cast<double>(j) / static_cast<double>(n - 1);
    while (seg + 1 < n - 1 && s[seg + 1] < target)
      ++seg;
    const double len = s[seg + 1] - s[seg];
    const double t = len > 0.0 ? (target - s[seg]) / len : 0.0;
    out[j] = (1.0 - t) * path[seg] + t * path[seg + 1];
  }
  path = std::move(out);
}

} // namespace

MPGeometry verify_mp_geometry(const Problem& problem, const MPGeometryOptions& opts)
{
  if (!(problem.lambda() < 1.0))
    throw DomainError("mountain-pass geometry requires lambda < 1");
  if (opts.directions < 1 || opts.rho_grid.empty())
    throw DomainError("mountain-pass geometry needs directions and a rho grid");

  MPGeometry geo;
  geo.directions = opts.directions;
  geo.seed = opts.seed;
  const std::vector<Eigen::VectorXd> dirs = probe_directions(problem, opts.directions, opts.seed);

  for (double rho : opts.rho_grid) {
    if (!(rho > 0.0))
      throw DomainError("rho grid values must be positive");
    double lowest = std::numeric_limits<double>::infinity();
    for (const Eigen::VectorXd& d : dirs)
      lowest = std::min(lowest, problem.energy(rho * d));
    geo.spheres.push_back({rho, lowest});
    if (lowest > geo.beta) {
      geo.beta = lowest;
      geo.rho = rho;
    }
  }
  if (!(geo.beta > 0.0))
    throw GeometryError("no sphere radius on the grid has a positive sampled energy minimum");

  const Eigen::VectorXd u0 = dirs.front();
  double t = 1.0;
  for (int k = 0; k <= opts.max_doublings; ++k, t *= 2.0) {
    const double energy = problem.energy(t * u0);
    if (energy < 0.0 && t > geo.rho) {
      geo.e = t * u0;
      geo.e_norm = t;
      geo.e_energy = energy;
      return geo;
    }
  }
  throw DegeneratePathError("I(t u0) stays nonnegative along the constant ray");
}

MPResult solve_mountain_pass(const Problem& problem, const MPGeometry& geometry,
                             const MPOptions& opts)
{
  if (!(problem.lambda() < 1.0))
    throw DomainError("mountain pass requires lambda < 1");
  if (opts.path_points < 3)
    throw DomainError("mountain pass needs at least 3 path points");
  if (geometry.e.size() != problem.size())
    throw DomainError("mountain pass: endpoint does not match the problem");

  const int p = opts.path_points;
  std::vector<Eigen::VectorXd> path(p + 1);
  for (int j = 0; j <= p; ++j)
    path[j] = (static_cast<double>(j) / p) * geometry.e;
  std::vector<double> values(p + 1);
  for (int j = 0; j <= p; ++j)
    values[j] = problem.energy(path[j]);

  MPResult out;
  Solution& sol = out.solution;
  double polish_at = std::max(opts.polish_threshold, opts.tol);
  double step = 1.0;

  auto finish = [&](Eigen::VectorXd u, std::size_t k, int it) {
    path[k] = u;
    values[k] = problem.energy(u);
    sol.u = std::move(u);
    sol.level = values[k];
    sol.residual = problem.residual(sol.u);
    sol.norm = problem.anorm(sol.u);
    sol.iterations = it;
    out.path_max = *std::max_element(values.begin(), values.end());
    out.path = path;
    return out;
  };

  for (int it = 1; it <= opts.max_iter; ++it) {
    const std::size_t k =
        std::max_element(values.begin() + 1, values.end() - 1) - values.begin();
    path[k] = refine_maximum(problem, path, k, values[k]);

    const Eigen::VectorXd g = problem.gradient(path[k]);
    const double res = problem.residual_of_gradient(g);
    const double norm = problem.anorm(path[k]);
    sol.trace.push_back({it, values[k], res, norm, "path"});

    if (norm < opts.nontrivial_floor)
      throw DegeneratePathError("path maximum collapsed onto the trivial critical point");

    if (res <= opts.tol && values[k] > 0.0)
      return finish(path[k], k, it);

    if (res <= polish_at) {
      NewtonOptions nopt = opts.newton;
      nopt.tol = opts.tol;
      NewtonResult nr = newton_iterate(problem, path[k], nopt);
      for (const IterationRecord& r : nr.trace)
        sol.trace.push_back({it, r.energy, r.residual, problem.anorm(path[k]), "newton"});
      if (nr.converged() && problem.anorm(nr.u) >= opts.nontrivial_floor &&
          problem.energy(nr.u) > 0.0)
        return finish(std::move(nr.u), k, it);
      polish_at = std::max(polish_at * 0.1, opts.tol);
    }

    // Armijo steepest descent in the (alpha, mu) metric.
    const Eigen::VectorXd d = problem.riesz(g);
    const double slope = g.dot(d);
    step = std::min(1.0, 2.0 * step);
    Eigen::VectorXd trial;
    double trial_value = values[k];
    for (; step > 1e-12; step *= 0.5) {
      trial = path[k] - step * d;
      trial_value = problem.energy(trial);
      if (trial_value <= values[k] - 1e-4 * step * slope)
        break;
    }
    if (!(step > 1e-12)) {
      std::ostringstream os;
      os << "mountain pass: descent step underflow at iteration " << it << ", residual " << res;
      throw NonConvergenceError(os.str());
    }
    path[k] = std::move(trial);
    values[k] = trial_value;

    if (opts.reparametrize_every > 0 && it % opts.reparametrize_every == 0) {
      reparametrize(problem, path);
      for (int j = 1; j < p; ++j)
        values[j] = problem.energy(path[j]);
    }
  }
  std::ostringstream os;
  os << "mountain pass: no convergence in " << opts.max_iter << " iterations";
  if (!sol.trace.empty())
    os << ", last residual " << sol.trace.back().residual;
  throw NonConvergenceError(os.str());
}

} // namespace mixnl
