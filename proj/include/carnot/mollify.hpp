#pragma once

// Radial mollifier families rho_n(x) = rho~_n(||x||) and their 1-D
// counterparts rho1_n(r) = Q c_B rho~_n(r) r^{Q-1}, a probability density on
// (0, inf). Scales follow eps_n = 1/n.

#include "carnot/rng.hpp"

#include <string>
#include <string_view>

namespace carnot {

enum class MollifierKind { box, power_tail, smooth_bump };

MollifierKind parse_mollifier_kind(std::string_view name);
std::string to_string(MollifierKind kind);

class MollifierFamily {
 public:
  /// `power` is kappa_0 of the power_tail family (exponent alpha_n = kappa_0 / n);
  /// ignored by the other kinds.
  MollifierFamily(MollifierKind kind, int Q, double c_B, double power = 1.0);

  MollifierKind kind() const { return kind_; }
  int Q() const { return q_; }
  double c_B() const { return c_b_; }
  double epsilon(int n) const;

  /// The family pushed forward by a dilation: rho1'(r) = lambda rho1(lambda r),
  /// i.e. rho'(x) = lambda^Q rho(delta_lambda x).
  MollifierFamily dilated(double lambda) const;

  /// 1-D density rho1_n(r).
  double one_dim(int n, double r) const;
  /// int_0^r rho1_n.
  double cumulative(int n, double r) const;
  /// Mass outside B(0, delta): 1 - cumulative(n, delta).
  double tail_mass(int n, double delta) const;
  /// Radial profile rho~_n(r).
  double profile(int n, double r) const;
  /// Draw ||h|| for h ~ rho_n.
  double sample_radius(int n, StreamRng& rng) const;
  /// Largest radius carrying mass (infinity never occurs for built-ins).
  double support_radius(int n) const;

  /// Whether every rho~_n is nonincreasing in r.
  bool nonincreasing() const;
  /// Whether every rho1_n is nonincreasing; recomputed, not inherited.
  bool one_dim_nonincreasing() const;

 private:
  double base_one_dim(double eps, double r) const;
  double base_cumulative(double eps, double r) const;
  double base_sample(double eps, StreamRng& rng) const;

  MollifierKind kind_;
  int q_;
  double c_b_;
  double power_;
  double dilation_ = 1.0;
  double bump_norm_ = 1.0;  // int_0^1 psi(s) s^{Q-1} ds
};

}  // namespace carnot
