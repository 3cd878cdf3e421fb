#pragma once

// Nonnegative weights phi on (0, inf) used by the Poincaré inequalities,
// together with their primitives and samplers.

#include "carnot/mollify.hpp"
#include "carnot/rng.hpp"

#include <memory>
#include <string>

namespace carnot {

class Weight {
 public:
  /// phi = 1.
  static Weight constant();
  /// phi(t) = (1 - t)_+.
  static Weight linear();
  /// phi(t) = t^{-alpha}, 0 <= alpha < 1.
  static Weight power(double alpha);
  /// phi = indicator of [0, width].
  static Weight box(double width);
  /// phi = rho1_n of a mollifier family.
  static Weight mollifier(const MollifierFamily& family, int n);

  double operator()(double t) const;
  /// Phi(t) = int_0^t phi.
  double cumulative(double t) const;
  /// Draw t from phi restricted to (0, t_max], i.e. density phi / Phi(t_max).
  double sample(double t_max, StreamRng& rng) const;
  /// phi(t / s) / s; keeps the mass and stretches the scale by s.
  Weight rescaled(double s) const;
  bool nonincreasing() const;
  std::string label() const;

 private:
  enum class Kind { constant, linear, power, box, mollifier };
  Weight(Kind kind, double param) : kind_(kind), param_(param) {}

  Kind kind_;
  double param_ = 0.0;
  double scale_ = 1.0;  // phi_s(t) = phi(t / scale) / scale
  std::shared_ptr<const MollifierFamily> family_;
  int n_ = 1;
};

}  // namespace carnot
