#pragma once

// Stratified nilpotent Lie algebras of step <= 3 and the group law they
// induce in exponential coordinates of the first kind.

#include "carnot/types.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace carnot {

/// One structure constant: [X_i, X_j] has component `c` along X_l.
struct BracketEntry {
  int i = 0;
  int j = 0;
  int l = 0;
  double c = 0.0;
};

/// A stratified Lie algebra g = W_1 + ... + W_k with a basis ordered by
/// increasing layer. Immutable after construction; construction validates
/// antisymmetry, grading, the Jacobi identity and that W_1 generates g.
class StratifiedAlgebra {
 public:
  static constexpr double kTolerance = 1e-12;

  /// `constants` is the dense tensor c[i][j][l], flattened row-major (N^3).
  StratifiedAlgebra(std::string name, std::vector<int> layer_dims, std::vector<double> constants);

  /// Builds the dense tensor from entries; an entry (i, j, l, c) also sets the
  /// antisymmetric partner (j, i, l, -c) unless that partner is listed too.
  static StratifiedAlgebra from_entries(std::string name, std::vector<int> layer_dims,
                                        const std::vector<BracketEntry>& entries);

  const std::string& name() const { return name_; }
  int step() const { return static_cast<int>(layer_dims_.size()); }
  int dim() const { return dim_; }
  int horizontal_dim() const { return layer_dims_.front(); }
  int homogeneous_dim() const { return homogeneous_dim_; }
  const std::vector<int>& layer_dims() const { return layer_dims_; }
  /// Weight (layer index, 1-based) of coordinate i.
  int weight(int i) const { return weights_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& weights() const { return weights_; }
  /// First coordinate index of layer j (1-based layer).
  int layer_offset(int j) const;

  double constant(int i, int j, int l) const;
  /// Nonzero constants with i < j.
  const std::vector<BracketEntry>& entries() const { return entries_; }

  Point bracket(const Point& a, const Point& b) const;
  Point zero() const { return Point::Zero(dim_); }

 private:
  void validate() const;

  std::string name_;
  std::vector<int> layer_dims_;
  std::vector<int> weights_;
  std::vector<double> constants_;
  std::vector<BracketEntry> entries_;
  int dim_ = 0;
  int homogeneous_dim_ = 0;
};

/// Group law x * y via the Baker-Campbell-Hausdorff series, truncated at the
/// step (exact for step <= 3).
Point multiply(const StratifiedAlgebra& alg, const Point& x, const Point& y);

/// Group inverse; in exponential coordinates this is -x.
Point inverse(const StratifiedAlgebra& alg, const Point& x);

/// Group dilation: coordinate i scaled by lambda^{w_i}. Requires lambda > 0.
Point dilate(const StratifiedAlgebra& alg, double lambda, const Point& x);

/// (A x_hat, x_check) for A in O(m1).
Point apply_horizontal_rotation(const StratifiedAlgebra& alg, const Matrix& A, const Point& x);

/// Embeds v in R^{m1} as the horizontal point (v, 0).
Point horizontal_point(const StratifiedAlgebra& alg, const HorizontalVector& v);
HorizontalVector horizontal_part(const StratifiedAlgebra& alg, const Point& x);

/// Coordinates of the left-invariant fields X_1..X_{m1} at x, as columns of
/// an N x m1 matrix: X_j(x) = e_j + [x, e_j]/2 + [x, [x, e_j]]/12.
Matrix left_invariant_frame(const StratifiedAlgebra& alg, const Point& x);

/// abelian(n), heisenberg(n) (heisenberg == heisenberg(1)), engel.
StratifiedAlgebra builtin_group(std::string_view name);

/// Interval enclosure of { x * y : x in a, y in b }.
Box enclose_product(const StratifiedAlgebra& alg, const Box& a, const Box& b);
Box enclose_inverse(const Box& a);
Box dilate(const StratifiedAlgebra& alg, double lambda, const Box& b);

void require_dim(const StratifiedAlgebra& alg, const Point& x);

}  // namespace carnot
