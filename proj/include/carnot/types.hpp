#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace carnot {

/// Largest total dimension N supported by the fixed-capacity point type.
inline constexpr int kMaxDim = 8;

/// A point of G in canonical coordinates of the first kind, or a vector of
/// the Lie algebra (the exponential map is the identity on coordinates).
/// Fixed capacity keeps group operations allocation-free in sampling loops.
using Point = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;

/// Horizontal vectors live in R^{m1}.
using HorizontalVector = Point;

using Matrix = Eigen::MatrixXd;

/// Raised when a numerical procedure fails (non-convergence, NaN, zero
/// acceptance). Precondition violations use std::invalid_argument.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  double width() const { return hi - lo; }
  double magnitude() const;  // max |v| over the interval
  bool contains(double v) const { return lo <= v && v <= hi; }
};

Interval operator+(Interval a, Interval b);
Interval operator-(Interval a, Interval b);
Interval operator-(Interval a);
Interval operator*(Interval a, Interval b);
Interval operator*(double s, Interval a);
Interval hull(Interval a, Interval b);

/// Axis-aligned box in canonical coordinates.
struct Box {
  std::vector<Interval> sides;

  static Box centered(const Point& half_widths);
  static Box around(const Point& center, const Point& half_widths);

  int dim() const { return static_cast<int>(sides.size()); }
  double volume() const;
  bool contains(const Point& x) const;
  bool contains(const Box& other) const;
  Point lower() const;
  Point upper() const;
  /// Componentwise max |x_i| over the box.
  Point magnitudes() const;
  Box intersect(const Box& other) const;
};

}  // namespace carnot
