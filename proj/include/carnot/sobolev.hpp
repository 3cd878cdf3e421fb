#pragma once

// The constants kappa_n and kappa, the Sobolev energy, and the nonlocal
// functional I_n with its convergence experiment.

#include "carnot/field.hpp"
#include "carnot/gauge.hpp"
#include "carnot/integrate.hpp"
#include "carnot/mollify.hpp"

#include <optional>
#include <vector>

namespace carnot {

/// int |grad_X f|^p over the support box (or `window` when given). Tensor
/// Gauss-Legendre for N <= 4, Monte Carlo otherwise.
Estimate sobolev_energy(const IntegratorConfig& cfg, const ScalarField& f, double p,
                        const std::optional<Box>& window = std::nullopt, int panels = 24);

/// kappa_n(v) = int_{B(0,1)} |<v, x_hat>|^p / ||x||^p rho_n(||x||) dx, sampled
/// from rho_n. Refuses gauges that are not rotation invariant.
Estimate kappa_n(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg, double p,
                 const MollifierFamily& family, int n, const HorizontalVector& v);

/// kappa = (p + Q) / Q * mean of |x_1|^p over the uniform law on B(0, 1).
Estimate kappa(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg, double p);

/// Factorized route: kappa_n = kappa * int_0^1 rho1_n.
Estimate kappa_n_factorized(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                            double p, const MollifierFamily& family, int n);

struct BBMOptions {
  /// Region outside which f is constant; defaults to the support box.
  std::optional<Box> window;
  /// Below this ||h|| the difference quotient is replaced by its limit
  /// <grad_X f(x), h_hat / ||h||>.
  double linearize_below = 1e-7;
};

/// I_n = int int |f(y) - f(x)|^p / ||x^{-1} y||^p rho_n(x^{-1} y) dx dy.
Estimate bbm_functional(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                        const MollifierFamily& family, int n, const BBMOptions& options = {});

struct BBMResult {
  int n = 0;
  double eps = 0.0;
  Estimate I_n;
  Estimate kappa;
  Estimate energy;
  double ratio = 0.0;  // I_n / (kappa * energy); NaN when degenerate
  bool degenerate = false;
};

std::vector<BBMResult> convergence_experiment(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f,
                                              double p, const MollifierFamily& family, const std::vector<int>& n_list,
                                              const BBMOptions& options = {});

}  // namespace carnot
