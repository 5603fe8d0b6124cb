#include "mixnl/error.hpp"
#include "mixnl/measure.hpp"
#include "mixnl/nonlinearity.hpp"

#include "support.hpp"

#include <doctest.h>

#include <cmath>

using namespace mixnl;

namespace {

const OrderBookkeeping kLocal = s_sharp(SpectralMeasure{}, 1.0);

} // namespace

TEST_CASE("power nonlinearity values")
{
  const PowerNonlinearity nl(1.0, 4.0);
  CHECK(nl.f(0.0, 2.0) == 8.0);
  CHECK(nl.primitive(0.0, 2.0) == 4.0);
  CHECK(nl.f(0.0, 0.0) == 0.0);
  CHECK(nl.primitive(0.0, 0.0) == 0.0);
  CHECK(nl.derivative(0.0, 2.0) == doctest::Approx(12.0));

  const double h = 1e-5;
  const double fd = (nl.primitive(0.0, 0.7 + h) - nl.primitive(0.0, 0.7 - h)) / (2.0 * h);
  CHECK(std::abs(fd - nl.f(0.0, 0.7)) <= 1e-8 * std::abs(nl.f(0.0, 0.7)));

  for (int m = 1; m <= 40; ++m) {
    const double t = std::ldexp(1.0, -m);
    CHECK(nl.f(0.0, t) / t <= std::ldexp(1.0, -2 * m) * 1.0000001);
  }

  const PowerNonlinearity odd(2.5, 3.3);
  for (double t : {1e-3, 0.1, 0.7, 3.0, 10.0}) {
    CHECK(odd.primitive(0.0, -t) == odd.primitive(0.0, t));
    CHECK(odd.f(0.0, -t) == -odd.f(0.0, t));
    const double hh = 1e-6 * t;
    const double d = (odd.primitive(0.0, t + hh) - odd.primitive(0.0, t - hh)) / (2.0 * hh);
    CHECK(std::abs(d - odd.f(0.0, t)) <= 1e-8 * std::abs(odd.f(0.0, t)));
    const double dd = (odd.f(0.0, t + hh) - odd.f(0.0, t - hh)) / (2.0 * hh);
    CHECK(std::abs(dd - odd.derivative(0.0, t)) <= 1e-7 * std::abs(odd.derivative(0.0, t)));
  }

  CHECK_THROWS_AS(PowerNonlinearity(0.0, 4.0), DomainError);
  CHECK_THROWS_AS(PowerNonlinearity(1.0, 2.0), DomainError);
}

TEST_CASE("growth hypotheses hold for the cubic")
{
  const PowerNonlinearity nl(1.0, 4.0);
  const std::vector<double> grid = default_t_grid();
  const ARReport rep = check_ar(nl, kLocal, grid);
  CHECK(rep.all_hold());
  for (const HypothesisCheck& h : rep.ar)
    CHECK(h.holds);
  CHECK(rep.constants.theta == 4.0);
  CHECK(rep.constants.theta_tilde == 4.0);
  CHECK(rep.constants.r == 0.0);
  CHECK(rep.constants.a1 == 1.0);
  CHECK(rep.constants.a2 == 1.0);
  CHECK(rep.constants.a3 == 0.25);
  CHECK(rep.constants.a4 == 0.0);
  CHECK(rep.grid.t_max >= 10.0);

  // theta F - f t vanishes identically
  for (double t : grid)
    CHECK(std::abs(4.0 * nl.primitive(0.0, t) - nl.f(0.0, t) * t) <= 1e-15 * std::pow(t, 4));
}

TEST_CASE("subcritical exponent bookkeeping")
{
  const PowerNonlinearity p3(1.0, 3.0);
  CHECK(check_ar(p3, kLocal, default_t_grid()).ar[0].holds);

  // N = 3 with s_sharp = 1 gives 2* = 6: p = 7 is supercritical
  const PowerNonlinearity p7(1.0, 7.0);
  const OrderBookkeeping three = s_sharp(SpectralMeasure{}, 1.0, 3);
  const ARReport rep = check_ar(p7, three, default_t_grid());
  CHECK_FALSE(rep.ar[0].holds);
  CHECK_FALSE(rep.all_hold());
}

TEST_CASE("linear source fails the superlinear hypotheses")
{
  const testing::LinearSource lin;
  const std::vector<double> grid = default_t_grid();
  const ARReport rep = check_ar(lin, kLocal, grid);
  CHECK_FALSE(rep.ar[2].holds);
  CHECK(std::abs(rep.ar[2].witness_t) > 1.0);
  CHECK_FALSE(rep.ar[1].holds);
  CHECK_FALSE(rep.all_hold());

  for (double theta : {2.1, 2.5, 4.0}) {
    GrowthConstants c = lin.claims();
    c.theta = theta;
    CHECK_FALSE(check_ar(lin, kLocal, grid, c).ar[2].holds);
  }

  CHECK_FALSE(sv12_check(lin, 0.1, 4.0, grid).certified);
}

TEST_CASE("wrong constants are flagged with a witness")
{
  const PowerNonlinearity nl(1.0, 4.0);
  GrowthConstants c = nl.claims();
  c.a2 = 0.5;
  const ARReport rep = check_ar(nl, kLocal, default_t_grid(), c);
  CHECK_FALSE(rep.ar[0].holds);
  CHECK(rep.ar[0].worst_violation > 0.0);
  CHECK(std::abs(rep.ar[0].witness_t) == doctest::Approx(10.0));

  c = nl.claims();
  c.a3 = 0.3;
  CHECK_FALSE(check_ar(nl, kLocal, default_t_grid(), c).ar[3].holds);
}

TEST_CASE("grid requirements")
{
  const PowerNonlinearity nl(1.0, 4.0);
  const std::vector<double> small = {-1.0, 0.0, 1.0};
  CHECK_THROWS_AS(check_ar(nl, kLocal, small), DomainError);
  CHECK_THROWS_AS(default_t_grid(0.5), DomainError);
  const std::vector<double> g = default_t_grid();
  CHECK(std::is_sorted(g.begin(), g.end()));
  CHECK(g.front() == -10.0);
  CHECK(g.back() == 10.0);
}

TEST_CASE("small-large splitting bound")
{
  const PowerNonlinearity nl(1.0, 4.0);
  const std::vector<double> grid = default_t_grid();

  // envelope maximum on |t| <= 10, attained at the outer sample
  const SV12Result one = sv12_check(nl, 1.0, 4.0, grid);
  CHECK(one.certified);
  const double expected = std::max(0.25 - 1.0 / 100.0, 0.25 - 1.0 / (2.0 * 100.0));
  CHECK(one.delta == doctest::Approx(expected).epsilon(1e-12));
  CHECK(one.delta <= 0.25);

  double prev = std::numeric_limits<double>::infinity();
  for (double eps : {0.01, 0.1, 1.0, 10.0, 50.0, 100.0}) {
    const SV12Result r = sv12_check(nl, eps, 4.0, grid);
    CAPTURE(eps);
    CAPTURE(r.detail);
    CHECK(r.certified);
    CHECK(r.delta <= prev);
    prev = r.delta;
  }
  CHECK(sv12_check(nl, 50.0, 4.0, grid).delta == 0.0);

  const testing::ZeroSource zero;
  for (double eps : {0.1, 1.0, 10.0})
    CHECK(sv12_check(zero, eps, 4.0, grid).delta == 0.0);

  // |t|^5 outgrows p = 4
  const PowerNonlinearity fast(1.0, 6.0);
  CHECK_FALSE(sv12_check(fast, 1.0, 4.0, grid).certified);

  CHECK_THROWS_AS(sv12_check(nl, 0.0, 4.0, grid), DomainError);
}

TEST_CASE("Palais-Smale remainder constant")
{
  CHECK(ps_remainder_constant(0.0, 4.0, 0.245, 4.0, 2.0) == 0.0);
  CHECK(ps_remainder_constant(1.0, 4.0, 0.5, 4.0, 2.0) == doctest::Approx((2.0 + 2.0 + 4.0 + 2.0) * 2.0));
}
