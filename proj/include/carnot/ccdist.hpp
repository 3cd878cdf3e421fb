#pragma once

// Horizontal paths, the ball-box construction, and the Carnot-Carathéodory
// distance computed by direct optimization over piecewise-constant controls.

#include "carnot/algebra.hpp"
#include "carnot/gauge.hpp"

#include <cstdint>
#include <vector>

namespace carnot {

struct PathSegment {
  int field = 0;  // horizontal field index, 0-based
  double duration = 0.0;
};

struct HorizontalPath {
  std::vector<PathSegment> segments;

  double length() const;
  double max_duration() const;
  /// exp(t_1 X_{i_1}) * ... * exp(t_M X_{i_M}).
  Point endpoint(const StratifiedAlgebra& alg) const;
};

/// A horizontal path from 0 to z: one segment per horizontal coordinate, then
/// commutator squares for layer 2 and nested squares for layer 3. Step-3
/// support is experimental. Throws NumericalError if the endpoint misses z by
/// more than 1e-9.
HorizontalPath ballbox_path(const StratifiedAlgebra& alg, const Point& z);

/// Segment count of ballbox_path: M = sum_l (3 * 2^{l-1} - 2) m_l.
int ballbox_segment_count(const StratifiedAlgebra& alg);

struct BallBoxDecomposition {
  std::vector<int> I;      // field index per segment, 0-based
  std::vector<int> J;      // parameter (coordinate) index per segment, 0-based
  std::vector<int> omega;  // 1 flips the sign of the segment
  double a = 0.0;
  double b = 0.0;

  int M() const { return static_cast<int>(I.size()); }
  /// E(t) = prod exp((-1)^{omega_n} t_{J_n} X_{I_n}).
  HorizontalPath path(const Point& t) const;
  Point map(const StratifiedAlgebra& alg, const Point& t) const;
};

/// Index structure matching ballbox_path with one parameter per coordinate.
/// a = 1/M certifies the outer inclusion E(Q(0, aR)) in B_X(0, R) because the
/// path length is at most M max|t|. b is empirical: it uses the largest
/// observed ratio of ballbox durations to the gauge norm and the equivalence
/// constant lambda.
BallBoxDecomposition ballbox_decomposition(const StratifiedAlgebra& alg, const Gauge& gauge, double lambda,
                                           int samples, std::uint64_t seed);

struct CCBudget {
  int intervals = 16;
  int iterations = 200;
  int starts = 8;
  std::uint64_t seed = 1;
};

struct CCResult {
  double upper = 0.0;       // length of the best feasible path found
  double lower_hint = 0.0;  // |x_hat - y_hat|
  bool converged = false;
  double residual = 0.0;    // endpoint error of the reported path
  std::vector<HorizontalVector> controls;
};

/// Upper bound on d_X(x, y). Deterministic for a given budget; never above
/// the ballbox path length and nonincreasing when the interval count doubles
/// or the iteration cap grows.
CCResult cc_distance(const StratifiedAlgebra& alg, const Point& x, const Point& y, const CCBudget& budget);

struct MetricEquivalence {
  double lambda = 1.0;
  double min_ratio = 1.0;  // min d_X / ||.|| over samples
  double max_ratio = 1.0;
  int samples = 0;
};

/// lambda = max over sampled unit-sphere points z of max(d_X(z), 1/d_X(z)).
/// `dilation` rescales the samples before measuring (homogeneity check).
MetricEquivalence estimate_equivalence_lambda(const Gauge& gauge, const StratifiedAlgebra& alg, int samples,
                                              std::uint64_t seed, const CCBudget& budget = {},
                                              double dilation = 1.0);

/// Max over sampled triples of d(x, y) / (d(x, z) + d(z, y)), at least 1.
double estimate_quasi_triangle_alpha(const Gauge& gauge, const StratifiedAlgebra& alg, int samples,
                                     std::uint64_t seed, double dilation = 1.0);

}  // namespace carnot
