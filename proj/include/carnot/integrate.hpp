#pragma once

// Haar integration in canonical coordinates, where Haar measure is Lebesgue
// measure. Balls are sampled by rejection from a box that scales with the
// dilations.

#include "carnot/algebra.hpp"
#include "carnot/gauge.hpp"
#include "carnot/montecarlo.hpp"

#include <cstdint>
#include <functional>
#include <string>

namespace carnot {

struct IntegratorConfig {
  enum class Method { monte_carlo, grid };

  Method method = Method::monte_carlo;
  std::uint64_t samples = 1'000'000;
  int grid_points = 64;  // per axis, grid method only
  std::uint64_t seed = 1;
  /// If positive, samples are doubled (up to max_samples) until the relative
  /// standard error drops below this target.
  double error_target = 0.0;
  std::uint64_t max_samples = 1ULL << 27;
  Execution execution = Execution::parallel;

  void validate() const;
};

using GroupFunction = std::function<double(const Point&)>;

/// Rejection sampler for B(center, radius) = center * B(0, radius).
class BallSampler {
 public:
  BallSampler(const StratifiedAlgebra& alg, const Gauge& gauge, Point center, double radius);

  /// One proposal: writes a point of the box around the ball to `x` and
  /// returns whether it lies in the ball.
  bool propose(StreamRng& rng, Point& x) const;
  /// Proposal with the offset u = center^{-1} x, for callers that need it.
  bool propose(StreamRng& rng, Point& x, Point& u) const;
  double box_volume() const { return box_volume_; }
  const Box& offset_box() const { return box_; }
  const Point& center() const { return center_; }
  double radius() const { return radius_; }

 private:
  const StratifiedAlgebra& alg_;
  const Gauge& gauge_;
  Point center_;
  double radius_;
  Box box_;
  double box_volume_;
};

/// Uniform draw from the box (helper shared by samplers).
Point uniform_in_box(const Box& box, StreamRng& rng);

/// Draw from the polar measure on the unit sphere {||x|| = 1}: the image of
/// the uniform law on B(0, 1) under x -> delta_{1/||x||} x. With r drawn from
/// a 1-D law, delta_r of the result is the matching radial law on G.
Point sample_sphere(const StratifiedAlgebra& alg, const Gauge& gauge, const Box& unit_box, StreamRng& rng);

/// Integral of f over B(center, radius). Monte Carlo returns an unbiased
/// estimate with standard error; the grid method uses the midpoint rule on
/// the bounding box (N <= 4) and reports std_error = 0. `stream` separates
/// independent estimates under one seed.
Estimate integrate_ball(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                        const GroupFunction& f, const Point& center, double radius,
                        std::uint64_t stream = stream_id("integrate-ball"));

/// c_B = |B(0, 1)|, cached per (group, gauge, samples, seed).
Estimate ball_volume_constant(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg);

/// One-dimensional quadrature on [a, b] (tanh-sinh, tolerant of integrable
/// endpoint singularities). Throws NumericalError on divergence.
double integrate_1d(const std::function<double(double)>& g, double a, double b, double tolerance = 1e-10);

/// Integral over the ball B(0, R) \ B(0, inner) of g(||x||), by the polar
/// formula Q c_B int_inner^R g(r) r^{Q-1} dr. The error comes from c_B.
Estimate folland_radial(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                        const std::function<double(double)>& g, double R, double inner = 0.0);

/// Tensor Gauss-Legendre quadrature of a smooth f over a box, `panels`
/// composite panels of 8 nodes per axis.
double integrate_box_gauss(const Box& box, const GroupFunction& f, int panels);

}  // namespace carnot
