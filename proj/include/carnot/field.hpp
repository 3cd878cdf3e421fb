#pragma once

// Scalar test functions on a fixed group, with analytic horizontal gradients
// where available.

#include "carnot/algebra.hpp"

#include <functional>
#include <memory>
#include <string>
#include <string_view>

namespace carnot {

enum class Smoothness { C1G, Lp_only };

class ScalarField {
 public:
  using Fn = std::function<double(const Point&)>;
  using GradFn = std::function<HorizontalVector(const Point&)>;

  /// `support` must contain every point where |f| >= 1e-12. `compact` marks
  /// fields whose support box is exact rather than a decay cutoff.
  ScalarField(std::string name, std::shared_ptr<const StratifiedAlgebra> alg, Fn f, GradFn grad, Box support,
              bool compact, Smoothness smoothness = Smoothness::C1G);

  double operator()(const Point& x) const { return f_(x); }
  const std::string& name() const { return name_; }
  const StratifiedAlgebra& algebra() const { return *alg_; }
  bool has_gradient() const { return static_cast<bool>(grad_); }
  /// Analytic horizontal gradient (X_1 f, ..., X_{m1} f)(x).
  HorizontalVector gradient(const Point& x) const;
  const Box& support() const { return support_; }
  bool compact() const { return compact_; }
  Smoothness smoothness() const { return smoothness_; }

  /// x -> f(delta_lambda x).
  ScalarField dilated(double lambda) const;
  /// x -> f(p * x).
  ScalarField translated(const Point& p) const;
  /// x -> c f(x).
  ScalarField scaled(double c) const;

 private:
  std::string name_;
  std::shared_ptr<const StratifiedAlgebra> alg_;
  Fn f_;
  GradFn grad_;
  Box support_;
  bool compact_;
  Smoothness smoothness_;
};

/// Horizontal gradient from Euclidean partial derivatives: frame^T grad f.
HorizontalVector horizontal_from_euclidean(const StratifiedAlgebra& alg, const Point& x, const Point& euclidean);

/// Fixtures: gaussian, windowed_gaussian, bump, x1_cutoff, linear_x1,
/// constant, coordinate(k) (1-based).
ScalarField builtin_field(std::string_view name, std::shared_ptr<const StratifiedAlgebra> alg);

/// Central differences along x * exp(+-t X_j).
HorizontalVector fd_horizontal_gradient(const ScalarField& f, const Point& x, double step = 1e-5);

/// omega_x(h) = |f(x h) - f(x) - <grad_X f(x), h_hat>|.
double pansu_remainder(const ScalarField& f, const Point& x, const Point& h);

}  // namespace carnot
