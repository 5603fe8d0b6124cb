#pragma once

#include "mixnl/measure.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace mixnl {

/// Constants a source term claims for the superlinear growth hypotheses:
///   (1) |f(x,t)| <= a1 + a2 |t|^{p-1},  2 < p < critical exponent
///   (2) f(x,t) / t -> 0 as t -> 0
///   (3) 0 < theta F(x,t) <= f(x,t) t  for |t| > r,  theta > 2
///   (4) F(x,t) >= a3 |t|^{theta_tilde} - a4,  theta_tilde > 2
///   (5) F(x,t) >= 0
struct GrowthConstants {
  double a1 = 0.0;
  double a2 = 0.0;
  double p = 0.0;
  double theta = 0.0;
  double r = 0.0;
  double theta_tilde = 0.0;
  double a3 = 0.0;
  double a4 = 0.0;
};

/// Caratheodory source f(x, t) with primitive F(x, t) = int_0^t f(x, tau) dtau.
class SourceTerm {
public:
  virtual ~SourceTerm() = default;
  virtual double f(double x, double t) const = 0;
  virtual double primitive(double x, double t) const = 0;
  /// d f / d t.
  virtual double derivative(double x, double t) const = 0;
  virtual GrowthConstants claims() const = 0;
  virtual std::string name() const = 0;
};

/// f = a |t|^{p-2} t, F = (a/p) |t|^p.
class PowerNonlinearity final : public SourceTerm {
public:
  PowerNonlinearity(double a, double p);

  double a() const { return a_; }
  double p() const { return p_; }

  double f(double x, double t) const override;
  double primitive(double x, double t) const override;
  double derivative(double x, double t) const override;
  GrowthConstants claims() const override;
  std::string name() const override { return "power"; }

private:
  double a_;
  double p_;
};

struct HypothesisCheck {
  bool holds = true;
  /// Sample with the largest violation (or the last checked sample).
  double witness_t = 0.0;
  double witness_x = 0.0;
  double worst_violation = 0.0;
  std::string detail;
};

struct SV12Result {
  double eps = 0.0;
  double delta = 0.0;
  bool certified = false;
  double witness_t = 0.0;
  std::string detail;
};

struct GridSummary {
  std::size_t samples = 0;
  double t_max = 0.0;
  double t_min_positive = 0.0;
  std::vector<double> x_samples;
};

struct ARReport {
  GrowthConstants constants;
  std::array<HypothesisCheck, 5> ar;
  GridSummary grid;
  std::vector<SV12Result> sv12;

  bool all_hold() const;
};

/// Symmetric grid on [-t_max, t_max]: geometric refinement from t_min to 1,
/// uniform from 1 to t_max, and 0.
std::vector<double> default_t_grid(double t_max = 10.0, double t_min = 1e-6, int per_side = 400);

/// Pointwise check of the five hypotheses on the grid (t) x (x_samples) with
/// the given constants. AR1 also checks p against the critical exponent.
/// Grid must reach |t| >= 10. Inequalities carry a relative slack of 1e-12.
ARReport check_ar(const SourceTerm& nl, const OrderBookkeeping& bookkeeping,
                  std::span<const double> t_grid, const GrowthConstants& constants,
                  std::span<const double> x_samples = {});
/// Same, with the constants the source term claims.
ARReport check_ar(const SourceTerm& nl, const OrderBookkeeping& bookkeeping,
                  std::span<const double> t_grid, std::span<const double> x_samples = {});

/// Smallest grid-certified delta with
///   |F| <= eps t^2 + delta |t|^p  and  |f| <= 2 eps |t| + p delta |t|^{p-1}.
/// Reports failure when the required delta is driven by the innermost sample
/// (f is not o(t)) or when max(|F| / |t|^p, |f| / (p |t|^{p-1})) still grows
/// between t_max / 2 and t_max with log-slope above 1/2.
SV12Result sv12_check(const SourceTerm& nl, double eps, double p, std::span<const double> t_grid,
                      std::span<const double> x_samples = {});

/// (2 r^2 + p delta r^p + theta r^2 + theta delta r^p) |Omega|.
double ps_remainder_constant(double r, double p, double delta, double theta, double omega_length);

} // namespace mixnl
