#include "mixnl/counterexamples.hpp"

#include "mixnl/error.hpp"
#include "mixnl/nonlocal_boundary.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixnl {

namespace {

std::string at(const std::string& what, double x)
{
  std::ostringstream os;
  os << what << " at x = " << x;
  return os.str();
}

std::string at_n(const std::string& what, int n)
{
  return what + " for n = " + std::to_string(n);
}

ClaimCheck compare(std::string claim, double value, const std::string& relation, double threshold,
                   double tol)
{
  ClaimCheck c{std::move(claim), value, relation, threshold, tol, false};
  if (relation == "<=")
    c.pass = value <= threshold + tol;
  else if (relation == "<")
    c.pass = value < threshold;
  else if (relation == ">=")
    c.pass = value >= threshold - tol;
  else if (relation == ">")
    c.pass = value > threshold;
  else if (relation == "==")
    c.pass = std::abs(value - threshold) <= tol;
  else
    throw DomainError("unknown relation " + relation);
  return c;
}

template <class F>
double integrate01(F f)
{
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, 0.0, 1.0, 1e-13);
}

} // namespace

bool ExampleReport::passed() const
{
  return std::all_of(claims.begin(), claims.end(), [](const ClaimCheck& c) { return c.pass; });
}

std::vector<double> default_remark_points() { return {-1.5, -2.0, -4.0, 1.5, 2.0, 4.0}; }

ExampleReport run_remark_example(const SpectralMeasure& measure, const Mesh1D& mesh,
                                 std::span<const double> points, double tol)
{
  if (measure.empty())
    throw DegenerateError("remark example needs a nonzero measure");
  const Interval omega = mesh.omega();
  if (omega.left != -1.0 || omega.right != 1.0)
    throw DomainError("remark example runs on Omega = (-1, 1)");
  const auto& nodes = mesh.nodes();
  if (std::find(nodes.begin(), nodes.end(), 0.0) == nodes.end())
    throw DomainError("remark example needs a mesh node at 0");

  ExampleReport rep;
  rep.name = "remark";

  const int first = mesh.first_interior();
  const int n_int = mesh.num_interior();
  Eigen::VectorXd id(n_int);
  for (int j = 0; j < n_int; ++j)
    id[j] = mesh.node(first + j);

  // Full vectors: interior data with the extension on the collar nodes.
  std::vector<double> collar;
  for (int i = 0; i < mesh.num_nodes(); ++i)
    if (!mesh.is_interior_node(i))
      collar.push_back(mesh.node(i));
  auto extend_full = [&](const Eigen::VectorXd& inner) {
    const std::vector<double> ext = extension(mesh, measure, inner, collar);
    Eigen::VectorXd u(mesh.num_nodes());
    u.segment(first, n_int) = inner;
    std::size_t k = 0;
    for (int i = 0; i < mesh.num_nodes(); ++i)
      if (!mesh.is_interior_node(i))
        u[i] = ext[k++];
    return u;
  };
  const Eigen::VectorXd u = extend_full(id);
  const Eigen::VectorXd u_plus = u.cwiseMax(0.0);
  const Eigen::VectorXd one = Eigen::VectorXd::Ones(n_int);
  const Eigen::VectorXd u_one = extend_full(one);

  const std::vector<double> ext = extension(mesh, measure, id, points);
  const std::vector<double> ext_one = extension(mesh, measure, one, points);

  for (std::size_t k = 0; k < points.size(); ++k) {
    const double x = points[k];
    if (x < omega.left)
      rep.claims.push_back(compare(at("extension of the identity is <= 0", x), ext[k], "<=", 0.0, 0.0));
    else
      rep.claims.push_back(compare(at("extension of the identity is >= 0", x), ext[k], ">=", 0.0, 0.0));

    const double r = neumann_residual(mesh, measure, u, x, ext[k]);
    rep.claims.push_back(compare(at("normal derivative of the extended identity vanishes", x), r,
                                 "==", 0.0, tol));

    if (x < omega.left) {
      const double rp = neumann_residual(mesh, measure, u_plus, x, std::max(ext[k], 0.0));
      rep.claims.push_back(
          compare(at("normal derivative of the positive part is < 0", x), rp, "<", 0.0, 0.0));
    }

    rep.claims.push_back(compare(at("control: extension of 1 equals 1", x), ext_one[k], "==", 1.0, tol));
    const double r1 = neumann_residual(mesh, measure, u_one, x, ext_one[k]);
    rep.claims.push_back(compare(at("control: normal derivative of 1 vanishes", x), r1, "==", 0.0, tol));
  }
  return rep;
}

double appendix_u(int n, double x) { return std::pow(x, 1.0 + 1.0 / n) * (x - 1.0) * (x - 1.0); }

double appendix_du(int n, double x)
{
  const double a = 1.0 / n;
  return std::pow(x, a) * (x - 1.0) * ((3.0 + a) * x - 1.0 - a);
}

double appendix_limit(double x) { return x * (x - 1.0) * (x - 1.0); }

double appendix_limit_derivative(double x) { return (x - 1.0) * (3.0 * x - 1.0); }

double appendix_l2_bound(int n)
{
  if (n < 1)
    throw DomainError("appendix bound needs n >= 1");
  return 1.0 / (1.0 + 2.0 / n) - 2.0 / (1.0 + 1.0 / n) + 1.0;
}

ExampleReport run_appendix_example(std::span<const int> n_list, double tol)
{
  if (n_list.empty())
    throw DomainError("appendix example needs at least one n");
  std::vector<int> ns(n_list.begin(), n_list.end());
  for (int n : ns)
    if (n < 1)
      throw DomainError("appendix example needs positive n");
  std::sort(ns.begin(), ns.end());
  ns.erase(std::unique(ns.begin(), ns.end()), ns.end());

  ExampleReport rep;
  rep.name = "appendix";

  if (ns.front() == 1)
    rep.claims.push_back(compare("closed-form L2 bound equals 1/3 for n = 1", appendix_l2_bound(1),
                                 "==", 1.0 / 3.0, tol));

  double prev_bound = 0.0;
  double prev_h1 = 0.0;
  double first_h1 = 0.0;
  double last_l2 = 0.0;
  for (std::size_t k = 0; k < ns.size(); ++k) {
    const int n = ns[k];
    const double bound = appendix_l2_bound(n);
    const double l2 = integrate01([n](double x) {
      const double d = appendix_u(n, x) - appendix_limit(x);
      return d * d;
    });
    const double h1 = integrate01([n](double x) {
      const double d = appendix_du(n, x) - appendix_limit_derivative(x);
      return d * d;
    });

    rep.claims.push_back(compare(at_n("closed-form L2 bound is positive", n), bound, ">", 0.0, 0.0));
    rep.claims.push_back(compare(at_n("quadrature of ||u_n - u||^2 is below the bound", n), l2, "<=",
                                 bound, tol));
    rep.claims.push_back(compare(at_n("u_n'(0) = 0", n), appendix_du(n, 0.0), "==", 0.0, tol));

    // the closed-form derivative matches a central difference of u_n inside (0, 1)
    const double h = 1e-5;
    const double fd = (appendix_u(n, 0.5 + h) - appendix_u(n, 0.5 - h)) / (2.0 * h);
    rep.claims.push_back(compare(at_n("closed-form u_n' matches a central difference at 0.5", n), fd,
                                 "==", appendix_du(n, 0.5), tol));

    if (k > 0) {
      rep.claims.push_back(compare(at_n("closed-form L2 bound decreases", n), bound, "<", prev_bound, 0.0));
      rep.claims.push_back(compare(at_n("||u_n' - u'||^2 decreases", n), h1, "<", prev_h1, 0.0));
    } else {
      first_h1 = h1;
    }
    prev_bound = bound;
    prev_h1 = h1;
    last_l2 = l2;
  }
  if (ns.size() > 1 && ns.back() >= 1000) {
    rep.claims.push_back(compare(at_n("closed-form L2 bound is small", ns.back()), prev_bound, "<=",
                                 1e-5, 0.0));
    rep.claims.push_back(compare(at_n("||u_n - u||^2 is small", ns.back()), last_l2, "<=", 1e-5, 0.0));
    rep.claims.push_back(compare(at_n("||u_n' - u'||^2 has dropped by 1e-3", ns.back()), prev_h1, "<=",
                                 1e-3 * first_h1, 0.0));
  }

  rep.claims.push_back(compare("u'(0) = 1 for the limit", appendix_limit_derivative(0.0), "==", 1.0, tol));
  const double h = 1e-5;
  const double fd0 = (appendix_limit(h) - appendix_limit(-h)) / (2.0 * h);
  rep.claims.push_back(compare("central difference of the limit at 0 is 1", fd0, "==", 1.0, tol));
  return rep;
}

} // namespace mixnl
