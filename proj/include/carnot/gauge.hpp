#pragma once

// Homogeneous norms. The Korányi-type family is
//   ||x|| = (a_1 (sum_i s_i x_i^2)^{k!} + sum_{j>=2} a_j |x_(j)|^{2k!/j})^{1/(2k!)}
// with x_(j) the weight-j block and k the step.

#include "carnot/algebra.hpp"

#include <string>
#include <vector>

namespace carnot {

enum class GaugeKind { koranyi, cc };

struct Gauge {
  GaugeKind kind = GaugeKind::koranyi;
  /// a_1..a_k, all positive.
  std::vector<double> layer_weights;
  /// s_1..s_{m1}; the gauge is rotation invariant iff all are equal.
  std::vector<double> horizontal_scales;
  /// Quasi-triangle constant, filled in by estimate_quasi_triangle_alpha.
  double quasi_triangle_alpha = 1.0;

  /// Default Korányi gauge: a_1 = 1, a_j = 16 for j >= 2, s_i = 1.
  static Gauge koranyi(const StratifiedAlgebra& alg);
  static Gauge koranyi(const StratifiedAlgebra& alg, std::vector<double> layer_weights,
                       std::vector<double> horizontal_scales = {});
  static Gauge carnot_caratheodory();

  bool rotation_invariant() const;
  /// Short stable label, e.g. "koranyi[1,16]".
  std::string label() const;
  void validate(const StratifiedAlgebra& alg) const;
};

double gauge_norm(const Gauge& g, const StratifiedAlgebra& alg, const Point& x);

/// d(x, y) = ||y^{-1} x||.
double gauge_distance(const Gauge& g, const StratifiedAlgebra& alg, const Point& x, const Point& y);

/// Half-widths h_i with B(0, 1) inside prod [-h_i, h_i]; B(0, r) then sits in
/// the box with half-widths r^{w_i} h_i. Korányi gauges only.
Point unit_ball_half_widths(const Gauge& g, const StratifiedAlgebra& alg);

/// Largest gauge norm over a box (the Korányi gauge is increasing in each |x_i|).
double max_norm_on_box(const Gauge& g, const StratifiedAlgebra& alg, const Box& box);

/// Projection of a nonzero x onto the unit sphere along dilations.
Point normalize_to_sphere(const Gauge& g, const StratifiedAlgebra& alg, const Point& x);

}  // namespace carnot
