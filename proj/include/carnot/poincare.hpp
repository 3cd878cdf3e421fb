#pragma once

// One-dimensional Poincaré inequalities on dense grids, the threshold n_0,
// and the group-level Poincaré-Ponce and fractional inequalities.

#include "carnot/field.hpp"
#include "carnot/gauge.hpp"
#include "carnot/integrate.hpp"
#include "carnot/mollify.hpp"
#include "carnot/weight.hpp"

#include <functional>
#include <vector>

namespace carnot {

/// f on I(t0, T) = [t0 - T/2, t0 + T/2], stored on a uniform grid. All 1-D
/// quantities are computed for the rescaled function u -> f(t0 + T u) on
/// [-1/2, 1/2] with trapezoid weights.
class OneDimSample {
 public:
  static OneDimSample from_function(const std::function<double(double)>& f, double t0 = 0.0, double T = 1.0,
                                    int points = 4097);
  OneDimSample(std::vector<double> values, double t0, double T);

  int points() const { return static_cast<int>(values_.size()); }
  double t0() const { return t0_; }
  double T() const { return T_; }
  /// Grid spacing in the rescaled variable.
  double step() const { return 1.0 / (points() - 1); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  double t0_;
  double T_;
};

/// Precomputed shift sums for one (sample, p).
class OneDimAnalysis {
 public:
  OneDimAnalysis(const OneDimSample& sample, double p);

  double p() const { return p_; }
  /// int |f - mean f|^p over [-1/2, 1/2].
  double oscillation() const { return oscillation_; }
  /// int_{-1/2}^{1/2 - tau} |f(t + tau) - f(t)|^p dt at tau = k * step.
  const std::vector<double>& shift_sums() const { return inner_; }
  /// g(tau_k) = shift_sums[k] / tau_k^p; g_0 is set to g_1.
  const std::vector<double>& g_values() const { return g_; }
  double step() const { return step_; }
  /// g at any tau in (0, 1), linear between grid nodes.
  double g(double tau) const;
  /// int int |f(t) - f(s)|^p / |t - s|^p phi(|t - s|) = 2 int_0^1 g phi, with
  /// phi given through its primitive.
  double weighted_double_integral(const std::function<double(double)>& primitive) const;
  /// int_0^1 g.
  double g_integral() const;

 private:
  double p_;
  double step_;
  double oscillation_ = 0.0;
  std::vector<double> inner_;
  std::vector<double> g_;
};

struct PoincareReport {
  double lhs = 0.0;
  double lhs_stderr = 0.0;
  double rhs = 0.0;          // the full right-hand side, prefactor included
  double rhs_stderr = 0.0;
  double prefactor = 0.0;    // constant in front of the double integral
  double double_integral = 0.0;
  double double_integral_stderr = 0.0;
  double implied_constant = 0.0;  // lhs / (rhs / prefactor); NaN if rhs = 0
  int n0 = 0;
  double mass = 0.0;  // threshold mass at the tested n
  bool holds = true;
  bool hard_failure = false;  // lhs > 3 stderr while rhs = 0
};

/// g(tau) for the sample; tau in (0, 1).
double g_function(const OneDimAnalysis& a, double tau);

/// The lemma on [-1/2, 1/2]: lhs <= (2 / int_0^1 phi) * double integral.
/// Requires a nonincreasing phi with positive mass on [0, 1].
PoincareReport one_dim_inequality(const OneDimAnalysis& a, const Weight& phi);

/// The same with phi(sigma t) and prefactor 2 sigma / int_0^sigma phi.
PoincareReport sigma_rescaled_inequality(const OneDimAnalysis& a, const Weight& phi, double sigma);

/// Smallest n0 >= 1 with int_0^T rho1_n > target for every n in [n0, n_max].
/// Throws NumericalError if no such n0 exists below n_max.
int threshold_n0(const MollifierFamily& family, double T, double target, int n_max = 4096);

/// The interval version on I(t0, T): lhs <= C T^p double integral with
/// rho1_n as weight; n0 from the mass condition with target 2 / C.
PoincareReport scaled_interval_inequality(const OneDimAnalysis& a, double T, const MollifierFamily& family, int n,
                                          double C);

struct GroupPoincareOptions {
  double mu = 8.0;
  double beta = 1.0;
  double linearize_below = 1e-7;
};

/// int_B |f - f_B|^p against R^p int int_{mu B x mu B} |f(y) - f(x)|^p
/// phi(||y^{-1} x||) / ||y^{-1} x||^{p+Q-1} / int_0^{beta R} phi.
PoincareReport ball_poincare(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                             const Weight& phi, double R, const Point& center, const GroupPoincareOptions& opt = {});

/// lhs <= C R^p int int_{mu B x mu B} |f(y) - f(x)|^p / ||.||^p rho_n(||.||),
/// with n0 from int_0^{beta R} rho1_n > C_pQ / C.
PoincareReport poincare_ponce(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                              const MollifierFamily& family, int n, double R, const Point& center, double C,
                              double C_pQ, const GroupPoincareOptions& opt = {});

/// lhs against (1 - s) p R^{sp} int int_{mu B x mu B} |f(y) - f(x)|^p / ||.||^{Q + sp};
/// requires 1 - 1/p <= s < 1. The double integral is the Gagliardo term.
PoincareReport fractional_poincare(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                                   double s, double R, const Point& center, const GroupPoincareOptions& opt = {});

/// int_{B(center, R)} |f - f_B|^p with standard error.
Estimate mean_oscillation(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p, double R,
                          const Point& center);

/// factor / (Q c_B) times int int_{W x W} |f(y) - f(x)|^p psi(||y^{-1} x||) / ||y^{-1} x||^{p+Q-1}
/// with W = B(center, radius). Sampling draws ||h|| from psi, so the result
/// needs no c_B; pass factor = Q c_B for the plain double integral.
Estimate window_pair_integral(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                              const Weight& psi, double factor, double radius, const Point& center,
                              double linearize_below, std::uint64_t stream);

}  // namespace carnot
