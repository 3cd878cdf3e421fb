#include "carnot/algebra.hpp"

#include <Eigen/LU>

#include <charconv>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace carnot {

namespace {

std::size_t flat(int n, int i, int j, int l) {
  return (static_cast<std::size_t>(i) * n + j) * n + l;
}

using IntervalVec = std::vector<Interval>;

IntervalVec bracket(const StratifiedAlgebra& alg, const IntervalVec& a, const IntervalVec& b) {
  IntervalVec out(a.size(), Interval::point(0.0));
  for (const auto& e : alg.entries()) out[e.l] = out[e.l] + e.c * (a[e.i] * b[e.j] - a[e.j] * b[e.i]);
  return out;
}

IntervalVec sides(const Box& b) { return b.sides; }

}  // namespace

StratifiedAlgebra::StratifiedAlgebra(std::string name, std::vector<int> layer_dims, std::vector<double> constants)
    : name_(std::move(name)), layer_dims_(std::move(layer_dims)), constants_(std::move(constants)) {
  if (layer_dims_.empty() || layer_dims_.size() > 3)
    throw std::invalid_argument("step must be between 1 and 3, got " + std::to_string(layer_dims_.size()));
  for (int m : layer_dims_)
    if (m <= 0) throw std::invalid_argument("layer dimensions must be positive");
  dim_ = std::accumulate(layer_dims_.begin(), layer_dims_.end(), 0);
  if (dim_ > kMaxDim)
    throw std::invalid_argument("dimension " + std::to_string(dim_) + " exceeds kMaxDim = " + std::to_string(kMaxDim));
  for (std::size_t j = 0; j < layer_dims_.size(); ++j) {
    homogeneous_dim_ += static_cast<int>(j + 1) * layer_dims_[j];
    weights_.insert(weights_.end(), static_cast<std::size_t>(layer_dims_[j]), static_cast<int>(j + 1));
  }
  const auto n3 = static_cast<std::size_t>(dim_) * dim_ * dim_;
  if (constants_.size() != n3)
    throw std::invalid_argument("structure constant tensor must have N^3 = " + std::to_string(n3) + " entries");
  for (int i = 0; i < dim_; ++i)
    for (int j = i + 1; j < dim_; ++j)
      for (int l = 0; l < dim_; ++l) {
        const double c = constants_[flat(dim_, i, j, l)];
        if (c != 0.0) entries_.push_back({i, j, l, c});
      }
  validate();
}

StratifiedAlgebra StratifiedAlgebra::from_entries(std::string name, std::vector<int> layer_dims,
                                                  const std::vector<BracketEntry>& entries) {
  const int n = std::accumulate(layer_dims.begin(), layer_dims.end(), 0);
  if (n <= 0 || n > kMaxDim) throw std::invalid_argument("invalid total dimension " + std::to_string(n));
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  std::vector<bool> given(c.size(), false);
  for (const auto& e : entries) {
    if (e.i < 0 || e.j < 0 || e.l < 0 || e.i >= n || e.j >= n || e.l >= n)
      throw std::invalid_argument("structure constant index out of range");
    const auto k = flat(n, e.i, e.j, e.l);
    if (given[k] && c[k] != e.c) throw std::invalid_argument("conflicting structure constants");
    c[k] = e.c;
    given[k] = true;
  }
  for (const auto& e : entries) {
    const auto partner = flat(n, e.j, e.i, e.l);
    if (!given[partner]) c[partner] = -e.c;
  }
  return StratifiedAlgebra(std::move(name), std::move(layer_dims), std::move(c));
}

int StratifiedAlgebra::layer_offset(int j) const {
  int off = 0;
  for (int k = 1; k < j; ++k) off += layer_dims_[static_cast<std::size_t>(k - 1)];
  return off;
}

double StratifiedAlgebra::constant(int i, int j, int l) const { return constants_[flat(dim_, i, j, l)]; }

Point StratifiedAlgebra::bracket(const Point& a, const Point& b) const {
  Point out = Point::Zero(dim_);
  for (const auto& e : entries_) out[e.l] += e.c * (a[e.i] * b[e.j] - a[e.j] * b[e.i]);
  return out;
}

void StratifiedAlgebra::validate() const {
  const int n = dim_;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        const double c = constant(i, j, l);
        if (std::abs(c + constant(j, i, l)) > kTolerance)
          throw std::invalid_argument("structure constants are not antisymmetric");
        if (c != 0.0 && weight(l) != weight(i) + weight(j))
          throw std::invalid_argument("structure constants violate the grading");
      }

  // Jacobi on basis triples.
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const Point ea = Point::Unit(n, a), eb = Point::Unit(n, b), ec = Point::Unit(n, c);
        const Point jac = bracket(ea, bracket(eb, ec)) + bracket(eb, bracket(ec, ea)) + bracket(ec, bracket(ea, eb));
        if (jac.cwiseAbs().maxCoeff() > kTolerance) throw std::invalid_argument("Jacobi identity fails");
      }

  // W_{j+1} = [W_1, W_j].
  for (int j = 1; j < step(); ++j) {
    const int m1 = layer_dims_[0];
    const int mj = layer_dims_[static_cast<std::size_t>(j - 1)];
    const int next = layer_dims_[static_cast<std::size_t>(j)];
    const int off_j = layer_offset(j), off_next = layer_offset(j + 1);
    Matrix span(next, m1 * mj);
    int col = 0;
    for (int a = 0; a < m1; ++a)
      for (int b = 0; b < mj; ++b, ++col) {
        const Point br = bracket(Point::Unit(n, a), Point::Unit(n, off_j + b));
        span.col(col) = br.segment(off_next, next);
      }
    Eigen::FullPivLU<Matrix> lu(span);
    lu.setThreshold(1e-10);
    if (lu.rank() != next) throw std::invalid_argument("first layer does not generate layer " + std::to_string(j + 1));
  }
}

void require_dim(const StratifiedAlgebra& alg, const Point& x) {
  if (x.size() != alg.dim())
    throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", group " + alg.name() +
                                " has dimension " + std::to_string(alg.dim()));
}

Point multiply(const StratifiedAlgebra& alg, const Point& x, const Point& y) {
  require_dim(alg, x);
  require_dim(alg, y);
  if (alg.step() == 1) return x + y;
  const Point xy = alg.bracket(x, y);
  Point out = x + y + 0.5 * xy;
  if (alg.step() == 3) out += (alg.bracket(x, xy) - alg.bracket(y, xy)) / 12.0;
  return out;
}

Point inverse(const StratifiedAlgebra& alg, const Point& x) {
  require_dim(alg, x);
  return -x;
}

Point dilate(const StratifiedAlgebra& alg, double lambda, const Point& x) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  require_dim(alg, x);
  Point out = x;
  double scale[4] = {1.0, lambda, lambda * lambda, lambda * lambda * lambda};
  for (int i = 0; i < alg.dim(); ++i) out[i] *= scale[alg.weight(i)];
  return out;
}

Point apply_horizontal_rotation(const StratifiedAlgebra& alg, const Matrix& A, const Point& x) {
  require_dim(alg, x);
  const int m = alg.horizontal_dim();
  if (A.rows() != m || A.cols() != m) throw std::invalid_argument("rotation must be m1 x m1");
  if ((A.transpose() * A - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10)
    throw std::invalid_argument("horizontal rotation matrix is not orthogonal");
  Point out = x;
  out.head(m) = A * x.head(m);
  return out;
}

Point horizontal_point(const StratifiedAlgebra& alg, const HorizontalVector& v) {
  if (v.size() != alg.horizontal_dim()) throw std::invalid_argument("horizontal vector has wrong dimension");
  Point p = alg.zero();
  p.head(alg.horizontal_dim()) = v;
  return p;
}

HorizontalVector horizontal_part(const StratifiedAlgebra& alg, const Point& x) {
  require_dim(alg, x);
  return x.head(alg.horizontal_dim());
}

Matrix left_invariant_frame(const StratifiedAlgebra& alg, const Point& x) {
  require_dim(alg, x);
  const int n = alg.dim(), m = alg.horizontal_dim();
  Matrix frame(n, m);
  for (int j = 0; j < m; ++j) {
    const Point e = Point::Unit(n, j);
    Point col = e;
    if (alg.step() >= 2) {
      const Point xe = alg.bracket(x, e);
      col += 0.5 * xe;
      if (alg.step() == 3) col += alg.bracket(x, xe) / 12.0;
    }
    frame.col(j) = col;
  }
  return frame;
}

namespace {

int parse_index(std::string_view name, std::string_view prefix, int fallback) {
  std::string_view rest = name.substr(prefix.size());
  if (rest.empty()) return fallback;
  if (rest.front() != '(' || rest.back() != ')') throw std::invalid_argument("malformed group name: " + std::string(name));
  rest = rest.substr(1, rest.size() - 2);
  int value = 0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (ec != std::errc() || ptr != rest.data() + rest.size() || value <= 0)
    throw std::invalid_argument("malformed group name: " + std::string(name));
  return value;
}

}  // namespace

StratifiedAlgebra builtin_group(std::string_view name) {
  if (name.starts_with("abelian")) {
    const int n = parse_index(name, "abelian", -1);
    if (n < 0) throw std::invalid_argument("abelian group needs a dimension, e.g. abelian(3)");
    return StratifiedAlgebra::from_entries("abelian(" + std::to_string(n) + ")", {n}, {});
  }
  if (name.starts_with("heisenberg")) {
    const int n = parse_index(name, "heisenberg", 1);
    std::vector<BracketEntry> e;
    for (int i = 0; i < n; ++i) e.push_back({i, n + i, 2 * n, 1.0});
    return StratifiedAlgebra::from_entries("heisenberg(" + std::to_string(n) + ")", {2 * n, 1}, e);
  }
  if (name == "engel") {
    return StratifiedAlgebra::from_entries("engel", {2, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}});
  }
  throw std::invalid_argument("unknown group: " + std::string(name));
}

Box enclose_product(const StratifiedAlgebra& alg, const Box& a, const Box& b) {
  if (a.dim() != alg.dim() || b.dim() != alg.dim()) throw std::invalid_argument("box dimension mismatch");
  const IntervalVec x = sides(a), y = sides(b);
  Box out;
  out.sides.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.sides[i] = x[i] + y[i];
  if (alg.step() == 1) return out;
  const IntervalVec xy = bracket(alg, x, y);
  for (std::size_t i = 0; i < x.size(); ++i) out.sides[i] = out.sides[i] + 0.5 * xy[i];
  if (alg.step() == 3) {
    const IntervalVec xxy = bracket(alg, x, xy), yxy = bracket(alg, y, xy);
    for (std::size_t i = 0; i < x.size(); ++i) out.sides[i] = out.sides[i] + (1.0 / 12.0) * (xxy[i] - yxy[i]);
  }
  return out;
}

Box enclose_inverse(const Box& a) {
  Box out = a;
  for (auto& s : out.sides) s = -s;
  return out;
}

Box dilate(const StratifiedAlgebra& alg, double lambda, const Box& b) {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation factor must be positive");
  Box out = b;
  for (int i = 0; i < b.dim(); ++i) out.sides[i] = std::pow(lambda, alg.weight(i)) * b.sides[i];
  return out;
}

}  // namespace carnot
