#include "mixnl/nonlinearity.hpp"

#include "mixnl/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixnl {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kPositiveFloor = 1e-300;

std::vector<double> x_or_origin(std::span<const double> xs)
{
  if (xs.empty())
    return {0.0};
  return {xs.begin(), xs.end()};
}

// Records a violation amount (> 0 means the inequality fails).
void record(HypothesisCheck& h, double violation, double x, double t)
{
  if (violation > 0.0 && (h.holds || violation > h.worst_violation)) {
    h.holds = false;
    h.worst_violation = violation;
    h.witness_t = t;
    h.witness_x = x;
  }
}

std::string fmt(double v)
{
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

} // namespace

PowerNonlinearity::PowerNonlinearity(double a, double p) : a_(a), p_(p)
{
  if (!(a > 0.0) || !std::isfinite(a))
    throw DomainError("power nonlinearity: coefficient a must be positive");
  if (!(p > 2.0) || !std::isfinite(p))
    throw DomainError("power nonlinearity: exponent p must exceed 2");
}

double PowerNonlinearity::f(double, double t) const
{
  return a_ * std::pow(std::abs(t), p_ - 2.0) * t;
}

double PowerNonlinearity::primitive(double, double t) const
{
  return a_ / p_ * std::pow(std::abs(t), p_);
}

double PowerNonlinearity::derivative(double, double t) const
{
  return a_ * (p_ - 1.0) * std::pow(std::abs(t), p_ - 2.0);
}

GrowthConstants PowerNonlinearity::claims() const
{
  GrowthConstants c;
  c.a1 = a_;
  c.a2 = a_;
  c.p = p_;
  c.theta = p_;
  c.r = 0.0;
  c.theta_tilde = p_;
  c.a3 = a_ / p_;
  c.a4 = 0.0;
  return c;
}

bool ARReport::all_hold() const
{
  return std::all_of(ar.begin(), ar.end(), [](const HypothesisCheck& h) { return h.holds; });
}

std::vector<double> default_t_grid(double t_max, double t_min, int per_side)
{
  if (!(t_max > 1.0) || !(t_min > 0.0) || !(t_min < 1.0) || per_side < 4)
    throw DomainError("default_t_grid: need 0 < t_min < 1 < t_max and per_side >= 4");
  const int n_geo = per_side / 2;
  const int n_lin = per_side - n_geo;
  std::vector<double> pos;
  pos.reserve(per_side);
  const double ratio = std::pow(1.0 / t_min, 1.0 / (n_geo - 1));
  double t = t_min;
  for (int k = 0; k < n_geo - 1; ++k, t *= ratio)
    pos.push_back(t);
  for (int k = 0; k < n_lin; ++k)
    pos.push_back(1.0 + (t_max - 1.0) * k / (n_lin - 1));
  std::vector<double> grid;
  grid.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    grid.push_back(-*it);
  grid.push_back(0.0);
  grid.insert(grid.end(), pos.begin(), pos.end());
  return grid;
}

ARReport check_ar(const SourceTerm& nl, const OrderBookkeeping& bookkeeping,
                  std::span<const double> t_grid, const GrowthConstants& c,
                  std::span<const double> x_samples)
{
  if (t_grid.empty())
    throw DomainError("check_ar: empty grid");
  const auto [lo, hi] = std::minmax_element(t_grid.begin(), t_grid.end());
  if (*hi < 10.0 || *lo > -10.0)
    throw DomainError("check_ar: grid must cover [-10, 10]");

  ARReport rep;
  rep.constants = c;
  const std::vector<double> xs = x_or_origin(x_samples);
  rep.grid.samples = t_grid.size();
  rep.grid.t_max = std::max(std::abs(*lo), std::abs(*hi));
  rep.grid.t_min_positive = rep.grid.t_max;
  for (double t : t_grid)
    if (t != 0.0)
      rep.grid.t_min_positive = std::min(rep.grid.t_min_positive, std::abs(t));
  rep.grid.x_samples = xs;

  auto& [ar1, ar2, ar3, ar4, ar5] = rep.ar;

  if (!(c.p > 2.0) || !(c.p < bookkeeping.critical_exponent)) {
    ar1.holds = false;
    ar1.detail = "p = " + fmt(c.p) + " outside (2, " + fmt(bookkeeping.critical_exponent) + ")";
  }
  if (!(c.theta > 2.0)) {
    ar3.holds = false;
    ar3.detail = "theta = " + fmt(c.theta) + " is not > 2";
  }
  if (!(c.theta_tilde > 2.0)) {
    ar4.holds = false;
    ar4.detail = "theta_tilde = " + fmt(c.theta_tilde) + " is not > 2";
  }

  for (double x : xs) {
    for (double t : t_grid) {
      const double fv = nl.f(x, t);
      const double F = nl.primitive(x, t);
      const double at = std::abs(t);

      const double bound1 = c.a1 + c.a2 * std::pow(at, c.p - 1.0);
      record(ar1, std::abs(fv) - bound1 * (1.0 + kSlack), x, t);

      if (at > c.r) {
        // strict positivity, then theta F <= f t
        record(ar3, kPositiveFloor - F, x, t);
        const double ft = fv * t;
        record(ar3, c.theta * F - ft - kSlack * std::abs(ft), x, t);
      }

      const double lower4 = c.a3 * std::pow(at, c.theta_tilde) - c.a4;
      record(ar4, lower4 - F - kSlack * std::max(std::abs(F), std::abs(lower4)), x, t);

      record(ar5, -F, x, t);
    }

    // f(x,t)/t -> 0 along dyadic samples of both signs.
    double last = 0.0;
    for (int m = 1; m <= 60; ++m) {
      const double t = std::ldexp(1.0, -m);
      const double q = std::max(std::abs(nl.f(x, t) / t), std::abs(nl.f(x, -t) / -t));
      if (m > 30 && q > last * (1.0 + kSlack) + kPositiveFloor)
        record(ar2, q - last, x, t);
      last = q;
    }
    if (last > 1e-8)
      record(ar2, last, x, std::ldexp(1.0, -60));
  }

  if (ar2.detail.empty())
    ar2.detail = "dyadic samples t = 2^-m, m = 1..60";
  return rep;
}

ARReport check_ar(const SourceTerm& nl, const OrderBookkeeping& bookkeeping,
                  std::span<const double> t_grid, std::span<const double> x_samples)
{
  return check_ar(nl, bookkeeping, t_grid, nl.claims(), x_samples);
}

SV12Result sv12_check(const SourceTerm& nl, double eps, double p, std::span<const double> t_grid,
                      std::span<const double> x_samples)
{
  if (!(eps > 0.0))
    throw DomainError("sv12_check: eps must be positive");
  if (!(p > 2.0))
    throw DomainError("sv12_check: p must exceed 2");

  // Positive samples sorted by |t|; the required delta at each sample.
  std::vector<double> ts;
  for (double t : t_grid)
    if (t != 0.0)
      ts.push_back(std::abs(t));
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  if (ts.size() < 2)
    throw DomainError("sv12_check: grid needs at least two nonzero magnitudes");

  const std::vector<double> xs = x_or_origin(x_samples);
  auto required = [&](double at) {
    double need = 0.0;
    for (double x : xs) {
      for (double t : {at, -at}) {
        const double F = std::abs(nl.primitive(x, t));
        const double fv = std::abs(nl.f(x, t));
        need = std::max(need, std::max(F - eps * at * at, 0.0) / std::pow(at, p));
        need = std::max(need, std::max(fv - 2.0 * eps * at, 0.0) / (p * std::pow(at, p - 1.0)));
      }
    }
    return need;
  };

  SV12Result r;
  r.eps = eps;
  std::vector<double> need(ts.size());
  for (std::size_t k = 0; k < ts.size(); ++k) {
    need[k] = required(ts[k]);
    if (need[k] > r.delta) {
      r.delta = need[k];
      r.witness_t = ts[k];
    }
  }
  r.certified = true;

  if (need.front() > 0.0) {
    r.certified = false;
    r.witness_t = ts.front();
    r.detail = "excess at the innermost sample: f is not o(t) at 0";
    return r;
  }
  // delta(eps) is finite iff the envelope max(|F| / |t|^p, |f| / (p |t|^{p-1}))
  // stays bounded; estimate its log-slope between t_max / 2 and t_max.
  auto envelope = [&](double at) {
    double e = 0.0;
    for (double x : xs)
      for (double t : {at, -at})
        e = std::max({e, std::abs(nl.primitive(x, t)) / std::pow(at, p),
                      std::abs(nl.f(x, t)) / (p * std::pow(at, p - 1.0))});
    return e;
  };
  const double t_hi = ts.back();
  const auto mid = std::upper_bound(ts.begin(), ts.end(), 0.5 * t_hi);
  const double t_lo = mid == ts.begin() ? ts.front() : *(mid - 1);
  const double e_hi = envelope(t_hi);
  const double e_lo = envelope(t_lo);
  if (t_lo < t_hi && e_hi > 0.0 && e_lo > 0.0) {
    const double growth = std::log(e_hi / e_lo) / std::log(t_hi / t_lo);
    if (growth > 0.5) {
      r.certified = false;
      r.witness_t = t_hi;
      r.detail = "|f| grows like |t|^" + fmt(p - 1.0 + growth) + " at the outer end, faster than |t|^" +
                 fmt(p - 1.0);
      return r;
    }
  }
  r.detail = "grid-certified";
  return r;
}

double ps_remainder_constant(double r, double p, double delta, double theta, double omega_length)
{
  return (2.0 * r * r + p * delta * std::pow(r, p) + theta * r * r +
          theta * delta * std::pow(r, p)) *
         omega_length;
}

} // namespace mixnl
