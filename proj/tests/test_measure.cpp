#include "mixnl/error.hpp"
#include "mixnl/measure.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

using namespace mixnl;

TEST_CASE("from_atoms merges, sorts and validates")
{
  const SpectralMeasure one = SpectralMeasure::from_atoms({{0.5, 1.0}});
  CHECK(one.size() == 1);
  CHECK(one.mass() == 1.0);

  CHECK(SpectralMeasure::from_atoms(std::span<const Atom>{}).empty());

  const SpectralMeasure merged = SpectralMeasure::from_atoms({{0.3, 1.0}, {0.3, 2.0}});
  REQUIRE(merged.size() == 1);
  CHECK(merged.atoms()[0] == Atom{0.3, 3.0});

  const SpectralMeasure sorted = SpectralMeasure::from_atoms({{0.7, 2.0}, {0.2, 1.0}});
  CHECK(sorted.atoms()[0].order == 0.2);
  CHECK(sorted.atoms()[1].order == 0.7);

  CHECK_THROWS_AS(SpectralMeasure::from_atoms({{0.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(SpectralMeasure::from_atoms({{1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(SpectralMeasure::from_atoms({{0.5, -1.0}}), DomainError);
}

TEST_CASE("merging is order independent")
{
  const std::vector<Atom> p1 = {{0.25, 1.5}, {0.5, 0.125}, {0.9, 3.0}};
  const std::vector<Atom> p2 = {{0.5, 2.0}, {0.1, 0.75}, {0.25, 0.5}};
  std::vector<Atom> a = p1;
  a.insert(a.end(), p2.begin(), p2.end());
  std::vector<Atom> b = p2;
  b.insert(b.end(), p1.begin(), p1.end());
  CHECK(SpectralMeasure::from_atoms(a) == SpectralMeasure::from_atoms(b));
}

TEST_CASE("density reduction")
{
  const SpectralMeasure mid = SpectralMeasure::from_density([](double) { return 1.0; }, 1);
  REQUIRE(mid.size() == 1);
  CHECK(mid.atoms()[0].order == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(mid.atoms()[0].weight == doctest::Approx(1.0).epsilon(1e-15));

  const SpectralMeasure flat = SpectralMeasure::from_density([](double) { return 1.0; }, 8);
  CHECK(std::abs(flat.mass() - 1.0) <= 1e-14);

  const SpectralMeasure lin = SpectralMeasure::from_density([](double s) { return s; }, 8);
  CHECK(std::abs(lin.mass() - 0.5) <= 1e-12);

  // exact for polynomials of degree <= 2n - 1
  for (int n = 1; n <= 8; ++n) {
    const int deg = 2 * n - 1;
    const SpectralMeasure m = SpectralMeasure::from_density([deg](double s) { return std::pow(s, deg) + 1.0; }, n);
    CHECK(std::abs(m.mass() - (1.0 / (deg + 1) + 1.0)) <= 1e-12);
  }

  CHECK_THROWS_AS(SpectralMeasure::from_density([](double s) { return s - 0.5; }, 4), DomainError);
  CHECK_THROWS_AS(SpectralMeasure::from_density([](double) { return 0.0; }, 4), DegenerateError);
  CHECK_THROWS_AS(SpectralMeasure::from_density([](double) { return 1.0; }, 0), DomainError);
}

TEST_CASE("s_sharp bookkeeping")
{
  const SpectralMeasure half = SpectralMeasure::from_atoms({{0.5, 1.0}});
  const SpectralMeasure two = SpectralMeasure::from_atoms({{0.3, 1.0}, {0.7, 2.0}});
  CHECK(s_sharp(half, 1.0).s_sharp == 1.0);
  CHECK(s_sharp(SpectralMeasure{}, 1.0).s_sharp == 1.0);
  CHECK(s_sharp(half, 0.0).s_sharp == 0.5);
  CHECK(s_sharp(two, 0.0).s_sharp == 0.7);
  CHECK_THROWS_AS(s_sharp(SpectralMeasure{}, 0.0), DegenerateError);

  const double inf = std::numeric_limits<double>::infinity();
  CHECK(s_sharp(half, 0.0).critical_exponent == inf);
  CHECK(critical_exponent(3, 0.5) == doctest::Approx(3.0));
  CHECK(critical_exponent(2, 0.5) == doctest::Approx(4.0));

  double prev = 0.0;
  for (double s = 0.05; s < 1.0; s += 0.05) {
    const double c = critical_exponent(3, s);
    CHECK(c >= prev);
    prev = c;
  }
}

TEST_CASE("c_{N,s} against a 50-digit evaluation")
{
  CHECK(std::abs(cns_constant(1, 0.5) - 1.0 / std::numbers::pi) <= 1e-15);
  for (int dim : {1, 2, 3}) {
    for (double s : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99}) {
      const double ref = oracle::cns(dim, s);
      CHECK(cns_constant(dim, s) > 0.0);
      CHECK(std::abs(cns_constant(dim, s) - ref) <= 1e-12 * ref);
    }
  }
  CHECK_THROWS_AS(cns_constant(1, 0.0), DomainError);
  CHECK_THROWS_AS(cns_constant(1, 1.0), DomainError);
}

TEST_CASE("scaled measure")
{
  const SpectralMeasure m = SpectralMeasure::from_atoms({{0.3, 1.0}, {0.6, 2.0}});
  const SpectralMeasure m3 = m.scaled(3.0);
  CHECK(m3.mass() == doctest::Approx(9.0));
  CHECK(m3.atoms()[1].order == 0.6);
}
