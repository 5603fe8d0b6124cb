#include "mixnl/counterexamples.hpp"
#include "mixnl/error.hpp"
#include "mixnl/measure.hpp"

#include "oracles.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <doctest.h>

#include <cmath>
#include <string>

using namespace mixnl;

namespace {

// Extension of u(y) = y for a measure with several atoms: the kernel is the
// c_{1,s}-weighted sum of |x - y|^{-1-2s}.
double weighted_identity_extension(const std::vector<Atom>& atoms, double x)
{
  boost::math::quadrature::tanh_sinh<double> rule;
  double num = 0.0;
  double den = 0.0;
  for (const Atom& a : atoms) {
    auto k = [&](double y) { return std::pow(std::abs(x - y), -1.0 - 2.0 * a.order); };
    const double c = a.weight * oracle::cns(1, a.order);
    num += c * rule.integrate([&](double y) { return y * k(y); }, -1.0, 1.0, 1e-14);
    den += c * rule.integrate(k, -1.0, 1.0, 1e-14);
  }
  return num / den;
}

const ClaimCheck* find_claim(const ExampleReport& rep, const std::string& prefix)
{
  for (const ClaimCheck& c : rep.claims)
    if (c.claim.rfind(prefix, 0) == 0)
      return &c;
  return nullptr;
}

double value_at(const ExampleReport& rep, const std::string& what, const std::string& at)
{
  for (const ClaimCheck& c : rep.claims)
    if (c.claim.rfind(what, 0) == 0 && c.claim.size() >= at.size() &&
        c.claim.compare(c.claim.size() - at.size(), at.size(), at) == 0)
      return c.value;
  FAIL("missing claim " << what << at);
  return 0.0;
}

double quad(auto f)
{
  boost::math::quadrature::tanh_sinh<double> rule;
  return rule.integrate(f, 0.0, 1.0, 1e-13);
}

} // namespace

TEST_CASE("remark example for a single atom")
{
  const Mesh1D mesh = build_mesh({-1.0, 1.0}, 8.0, 32, 8);
  const std::vector<double> pts = default_remark_points();
  const ExampleReport rep = run_remark_example(SpectralMeasure::from_atoms({{0.5, 1.0}}), mesh, pts);
  CHECK(rep.passed());
  for (const ClaimCheck& c : rep.claims) {
    CAPTURE(c.claim);
    CHECK(c.pass);
  }
  for (double x : pts) {
    const std::string at = "x = " + std::string(x == -1.5 ? "-1.5" : x == 1.5 ? "1.5" : std::to_string(static_cast<int>(x)));
    const double ext = value_at(rep, "extension of the identity", at);
    CHECK(ext == doctest::Approx(oracle::identity_extension(x, 0.5)).epsilon(1e-8));
    // the extension of an odd function is odd
    CHECK(ext == doctest::Approx(-oracle::identity_extension(-x, 0.5)).epsilon(1e-8));
  }
  REQUIRE(find_claim(rep, "normal derivative of the positive part") != nullptr);
}

TEST_CASE("remark example for two atoms")
{
  const std::vector<Atom> atoms = {{0.3, 1.0}, {0.7, 1.0}};
  const Mesh1D mesh = build_mesh({-1.0, 1.0}, 8.0, 32, 8);
  const ExampleReport rep = run_remark_example(SpectralMeasure::from_atoms(atoms), mesh, default_remark_points());
  CHECK(rep.passed());
  for (double x : {-1.5, -4.0}) {
    const std::string at = x == -1.5 ? "x = -1.5" : "x = -4";
    CHECK(value_at(rep, "extension of the identity", at) ==
          doctest::Approx(weighted_identity_extension(atoms, x)).epsilon(1e-8));
    CHECK(value_at(rep, "normal derivative of the positive part", at) < 0.0);
  }
}

TEST_CASE("remark example preconditions")
{
  const std::vector<double> pts = default_remark_points();
  CHECK_THROWS_AS(run_remark_example(SpectralMeasure{}, build_mesh({-1.0, 1.0}, 8.0, 32, 8), pts), DegenerateError);
  CHECK_THROWS(run_remark_example(SpectralMeasure::from_atoms({{0.5, 1.0}}), build_mesh({0.0, 1.0}, 8.0, 32, 8), pts));
}

TEST_CASE("appendix closed forms")
{
  CHECK(appendix_l2_bound(1) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  for (int n : {1, 2, 5, 10, 100, 1000}) {
    CAPTURE(n);
    const double direct = quad([n](double x) { return std::pow(std::pow(x, 1.0 / n) - 1.0, 2); });
    CHECK(appendix_l2_bound(n) == doctest::Approx(direct).epsilon(1e-9));
    const double l2 = quad([n](double x) { return std::pow(appendix_u(n, x) - appendix_limit(x), 2); });
    CHECK(l2 <= appendix_l2_bound(n));
    for (double x : {0.1, 0.5, 0.9}) {
      const double h = 1e-6;
      const double fd = (appendix_u(n, x + h) - appendix_u(n, x - h)) / (2.0 * h);
      CHECK(std::abs(fd - appendix_du(n, x)) <= 1e-7);
    }
    CHECK(appendix_du(n, 0.0) == 0.0);
  }
  CHECK(appendix_l2_bound(100) == doctest::Approx(1.94137e-4).epsilon(1e-5));
  CHECK(appendix_limit_derivative(0.0) == 1.0);

  // n = 1 integrals in closed form
  const double l2 = quad([](double x) { return std::pow(appendix_u(1, x) - appendix_limit(x), 2); });
  const double h1 = quad([](double x) { return std::pow(appendix_du(1, x) - appendix_limit_derivative(x), 2); });
  CHECK(l2 == doctest::Approx(1.0 / 252.0).epsilon(1e-10));
  CHECK(h1 == doctest::Approx(3.0 / 35.0).epsilon(1e-10));
}

TEST_CASE("appendix report")
{
  const std::vector<int> ns = {1, 2, 5, 10, 100, 1000};
  const ExampleReport rep = run_appendix_example(ns);
  CHECK(rep.passed());
  for (const ClaimCheck& c : rep.claims) {
    CAPTURE(c.claim);
    CHECK(c.pass);
  }
  const double h1_1000 = value_at(rep, "||u_n' - u'||^2 decreases", "n = 1000");
  CHECK(h1_1000 == doctest::Approx(quad([](double x) {
                                     return std::pow(appendix_du(1000, x) - appendix_limit_derivative(x), 2);
                                   })).epsilon(1e-8));

  const std::vector<int> bad = {0};
  CHECK_THROWS_AS(run_appendix_example(bad), DomainError);
}
