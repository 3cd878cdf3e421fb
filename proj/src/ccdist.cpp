#include "carnot/ccdist.hpp"

#include "carnot/montecarlo.hpp"
#include "carnot/rng.hpp"

#include <Eigen/LU>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnot {

double HorizontalPath::length() const {
  double l = 0.0;
  for (const auto& s : segments) l += std::abs(s.duration);
  return l;
}

double HorizontalPath::max_duration() const {
  double m = 0.0;
  for (const auto& s : segments) m = std::max(m, std::abs(s.duration));
  return m;
}

Point HorizontalPath::endpoint(const StratifiedAlgebra& alg) const {
  Point p = alg.zero();
  for (const auto& s : segments) {
    Point step = alg.zero();
    step[s.field] = s.duration;
    p = multiply(alg, p, step);
  }
  return p;
}

namespace {

struct Pair {
  int i, j;
};

struct Triple {
  int i;
  Pair inner;
};

// Greedy choice of horizontal pairs whose brackets span layer 2.
std::vector<Pair> layer2_basis(const StratifiedAlgebra& alg, Matrix& columns) {
  const int n = alg.dim(), m = alg.horizontal_dim();
  const int off = alg.layer_offset(2), dim2 = alg.layer_dims()[1];
  std::vector<Pair> basis;
  columns.resize(dim2, 0);
  for (int i = 0; i < m && static_cast<int>(basis.size()) < dim2; ++i)
    for (int j = i + 1; j < m && static_cast<int>(basis.size()) < dim2; ++j) {
      const Point v = alg.bracket(Point::Unit(n, i), Point::Unit(n, j)).segment(off, dim2);
      Matrix trial(dim2, columns.cols() + 1);
      trial << columns, v;
      Eigen::FullPivLU<Matrix> lu(trial);
      lu.setThreshold(1e-10);
      if (lu.rank() == trial.cols()) {
        columns = trial;
        basis.push_back({i, j});
      }
    }
  if (static_cast<int>(basis.size()) != dim2) throw std::invalid_argument("layer 2 is not spanned by horizontal brackets");
  return basis;
}

std::vector<Triple> layer3_basis(const StratifiedAlgebra& alg, Matrix& columns) {
  const int n = alg.dim(), m = alg.horizontal_dim();
  const int off = alg.layer_offset(3), dim3 = alg.layer_dims()[2];
  std::vector<Triple> basis;
  columns.resize(dim3, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        if (static_cast<int>(basis.size()) == dim3) break;
        const Point inner = alg.bracket(Point::Unit(n, j), Point::Unit(n, k));
        const Point v = alg.bracket(Point::Unit(n, i), inner).segment(off, dim3);
        Matrix trial(dim3, columns.cols() + 1);
        trial << columns, v;
        Eigen::FullPivLU<Matrix> lu(trial);
        lu.setThreshold(1e-10);
        if (lu.rank() == trial.cols()) {
          columns = trial;
          basis.push_back({i, {j, k}});
        }
      }
  if (static_cast<int>(basis.size()) != dim3) throw std::invalid_argument("layer 3 is not spanned by nested brackets");
  return basis;
}

void append_square(std::vector<PathSegment>& out, Pair p, double a, double b) {
  out.push_back({p.i, a});
  out.push_back({p.j, b});
  out.push_back({p.i, -a});
  out.push_back({p.j, -b});
}

// Inverse of the square above.
void append_square_inverse(std::vector<PathSegment>& out, Pair p, double a, double b) {
  out.push_back({p.j, b});
  out.push_back({p.i, a});
  out.push_back({p.j, -b});
  out.push_back({p.i, -a});
}

Point product(const StratifiedAlgebra& alg, const std::vector<PathSegment>& segs, std::size_t from = 0) {
  HorizontalPath p;
  p.segments.assign(segs.begin() + static_cast<std::ptrdiff_t>(from), segs.end());
  return p.endpoint(alg);
}

}  // namespace

int ballbox_segment_count(const StratifiedAlgebra& alg) {
  int m = 0;
  for (int l = 1; l <= alg.step(); ++l) m += (3 * (1 << (l - 1)) - 2) * alg.layer_dims()[l - 1];
  return m;
}

HorizontalPath ballbox_path(const StratifiedAlgebra& alg, const Point& z) {
  require_dim(alg, z);
  HorizontalPath path;
  auto& segs = path.segments;
  for (int i = 0; i < alg.horizontal_dim(); ++i) segs.push_back({i, z[i]});
  if (alg.step() >= 2) {
    Matrix cols;
    const auto pairs = layer2_basis(alg, cols);
    const Point rest = multiply(alg, inverse(alg, product(alg, segs)), z);
    const int off = alg.layer_offset(2), dim2 = alg.layer_dims()[1];
    const Eigen::VectorXd beta = cols.fullPivLu().solve(Eigen::VectorXd(rest.segment(off, dim2)));
    const std::size_t start = segs.size();
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const double s = std::sqrt(std::abs(beta[static_cast<Eigen::Index>(q)]));
      append_square(segs, pairs[q], beta[static_cast<Eigen::Index>(q)] < 0 ? -s : s, s);
    }
    if (alg.step() == 3) {
      Matrix cols3;
      const auto triples = layer3_basis(alg, cols3);
      const Point rest3 = multiply(alg, inverse(alg, product(alg, segs, start)), rest);
      const int off3 = alg.layer_offset(3), dim3 = alg.layer_dims()[2];
      const Eigen::VectorXd gamma = cols3.fullPivLu().solve(Eigen::VectorXd(rest3.segment(off3, dim3)));
      for (std::size_t q = 0; q < triples.size(); ++q) {
        const double g = gamma[static_cast<Eigen::Index>(q)];
        const double c = std::cbrt(std::abs(g));
        const double a = g < 0 ? -c : c;
        segs.push_back({triples[q].i, a});
        append_square(segs, triples[q].inner, c, c);
        segs.push_back({triples[q].i, -a});
        append_square_inverse(segs, triples[q].inner, c, c);
      }
    }
  }
  const Point end = path.endpoint(alg);
  const double err = (end - z).cwiseAbs().maxCoeff();
  if (err > 1e-9 * std::max(1.0, z.cwiseAbs().maxCoeff()))
    throw NumericalError("ballbox path misses its target by " + std::to_string(err));
  return path;
}

HorizontalPath BallBoxDecomposition::path(const Point& t) const {
  HorizontalPath p;
  for (int n = 0; n < M(); ++n) {
    const double s = t[J[static_cast<std::size_t>(n)]];
    p.segments.push_back({I[static_cast<std::size_t>(n)], omega[static_cast<std::size_t>(n)] ? -s : s});
  }
  return p;
}

Point BallBoxDecomposition::map(const StratifiedAlgebra& alg, const Point& t) const { return path(t).endpoint(alg); }

BallBoxDecomposition ballbox_decomposition(const StratifiedAlgebra& alg, const Gauge& gauge, double lambda,
                                           int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  BallBoxDecomposition d;
  auto add = [&](int i, int j, int w) {
    d.I.push_back(i);
    d.J.push_back(j);
    d.omega.push_back(w);
  };
  for (int i = 0; i < alg.horizontal_dim(); ++i) add(i, i, 0);
  if (alg.step() >= 2) {
    Matrix cols;
    const auto pairs = layer2_basis(alg, cols);
    const int off = alg.layer_offset(2);
    for (std::size_t q = 0; q < pairs.size(); ++q) {
      const int j = off + static_cast<int>(q);
      add(pairs[q].i, j, 0), add(pairs[q].j, j, 0), add(pairs[q].i, j, 1), add(pairs[q].j, j, 1);
    }
  }
  if (alg.step() == 3) {
    Matrix cols;
    const auto triples = layer3_basis(alg, cols);
    const int off = alg.layer_offset(3);
    for (std::size_t q = 0; q < triples.size(); ++q) {
      const int j = off + static_cast<int>(q);
      const auto& t = triples[q];
      add(t.i, j, 0);
      add(t.inner.i, j, 0), add(t.inner.j, j, 0), add(t.inner.i, j, 1), add(t.inner.j, j, 1);
      add(t.i, j, 1);
      add(t.inner.j, j, 0), add(t.inner.i, j, 0), add(t.inner.j, j, 1), add(t.inner.i, j, 1);
    }
  }
  d.a = 1.0 / d.M();

  const Point h = unit_ball_half_widths(gauge, alg);
  StreamRng rng(seed, stream_id("ballbox-b"), 0);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point u(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) u[i] = rng.uniform(-h[i], h[i]);
    if (gauge_norm(gauge, alg, u) == 0.0) continue;
    worst = std::max(worst, ballbox_path(alg, normalize_to_sphere(gauge, alg, u)).max_duration());
  }
  d.b = std::min(d.a / (std::max(lambda, 1.0) * std::max(worst, 1.0)), 0.99 * d.a);
  return d;
}

namespace {

class ControlProblem {
 public:
  ControlProblem(const StratifiedAlgebra& alg, Point target, int intervals)
      : alg_(alg), target_(std::move(target)), k_(intervals), m_(alg.horizontal_dim()) {}

  int size() const { return k_ * m_; }

  Point endpoint(const Eigen::VectorXd& v) const {
    Point p = alg_.zero();
    for (int k = 0; k < k_; ++k) {
      Point step = alg_.zero();
      step.head(m_) = v.segment(k * m_, m_);
      p = multiply(alg_, p, step);
    }
    return p;
  }

  Eigen::VectorXd constraint(const Eigen::VectorXd& v) const { return endpoint(v) - target_; }

  Matrix jacobian(const Eigen::VectorXd& v) const {
    Matrix jac(alg_.dim(), size());
    Eigen::VectorXd w = v;
    for (int c = 0; c < size(); ++c) {
      const double h = 1e-6 * std::max(1.0, std::abs(v[c]));
      w[c] = v[c] + h;
      const Point plus = endpoint(w);
      w[c] = v[c] - h;
      const Point minus = endpoint(w);
      w[c] = v[c];
      jac.col(c) = (plus - minus) / (2.0 * h);
    }
    return jac;
  }

  double length(const Eigen::VectorXd& v) const {
    double l = 0.0;
    for (int k = 0; k < k_; ++k) l += v.segment(k * m_, m_).norm();
    return l;
  }

  double tolerance() const { return 1e-9 * std::max(1.0, target_.cwiseAbs().maxCoeff()); }

  /// Gauss-Newton min-norm corrections until the endpoint constraint holds.
  bool restore(Eigen::VectorXd& v) const {
    Eigen::VectorXd c = constraint(v);
    for (int it = 0; it < 40; ++it) {
      const double err = c.cwiseAbs().maxCoeff();
      if (!std::isfinite(err)) return false;
      if (err <= 0.01 * tolerance()) return true;
      const Matrix jac = jacobian(v);
      v -= jac.completeOrthogonalDecomposition().solve(c);
      const Eigen::VectorXd next = constraint(v);
      if (!(next.cwiseAbs().maxCoeff() < 10.0 * err + tolerance())) return false;
      c = next;
    }
    return c.cwiseAbs().maxCoeff() <= tolerance();
  }

 private:
  const StratifiedAlgebra& alg_;
  Point target_;
  int k_;
  int m_;
};

// Spreads path segments over `intervals` controls; exact when the path has at
// most that many segments, since exp(sX) exp(tX) = exp((s+t)X).
Eigen::VectorXd controls_from_path(const HorizontalPath& path, int m, int intervals) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m) * intervals);
  const auto& segs = path.segments;
  const int s = static_cast<int>(segs.size());
  if (s == 0) return v;
  if (s <= intervals) {
    std::vector<int> pieces(static_cast<std::size_t>(s), 1);
    for (int extra = intervals - s; extra > 0; --extra) {
      int best = 0;
      for (int q = 1; q < s; ++q)
        if (std::abs(segs[q].duration) / pieces[q] > std::abs(segs[best].duration) / pieces[best]) best = q;
      ++pieces[static_cast<std::size_t>(best)];
    }
    int k = 0;
    for (int q = 0; q < s; ++q)
      for (int r = 0; r < pieces[static_cast<std::size_t>(q)]; ++r, ++k)
        v[k * m + segs[q].field] = segs[q].duration / pieces[static_cast<std::size_t>(q)];
    return v;
  }
  for (int q = 0; q < s; ++q) {
    const int k = static_cast<int>(static_cast<long>(q) * intervals / s);
    v[k * m + segs[q].field] += segs[q].duration;
  }
  return v;
}

struct Candidate {
  double length = std::numeric_limits<double>::infinity();
  Eigen::VectorXd v;
  bool converged = false;
};

Candidate optimize(const ControlProblem& prob, Eigen::VectorXd v, int iterations) {
  Candidate best;
  if (!prob.restore(v)) return best;
  best.length = prob.length(v);
  best.v = v;
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd c = prob.constraint(v);
    const Matrix jac = prob.jacobian(v);
    // Minimum-energy point of the linearized constraint set.
    const Eigen::VectorXd w = jac.completeOrthogonalDecomposition().solve(jac * v - c);
    const Eigen::VectorXd d = w - v;
    if (d.norm() <= 1e-11 * (1.0 + v.norm())) {
      best.converged = true;
      break;
    }
    bool accepted = false;
    for (double alpha = 1.0; alpha > 1e-6; alpha *= 0.5) {
      Eigen::VectorXd trial = v + alpha * d;
      if (prob.restore(trial) && trial.squaredNorm() < v.squaredNorm()) {
        v = std::move(trial);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      best.converged = true;
      break;
    }
    const double len = prob.length(v);
    if (len < best.length) {
      best.length = len;
      best.v = v;
    }
  }
  return best;
}

std::vector<HorizontalVector> split_controls(const Eigen::VectorXd& v, int m) {
  std::vector<HorizontalVector> out;
  for (Eigen::Index k = 0; k < v.size() / m; ++k) out.emplace_back(v.segment(k * m, m));
  return out;
}

CCResult solve(const StratifiedAlgebra& alg, const Point& z, const CCBudget& budget) {
  const int m = alg.horizontal_dim();
  const HorizontalPath init = ballbox_path(alg, z);
  CCResult result;
  result.lower_hint = z.head(m).norm();
  result.upper = init.length();
  result.converged = false;
  for (const auto& s : init.segments) {
    HorizontalVector u = HorizontalVector::Zero(m);
    u[s.field] = s.duration;
    result.controls.push_back(u);
  }
  if (result.upper == 0.0) {
    result.converged = true;
    return result;
  }

  const ControlProblem prob(alg, z, budget.intervals);
  auto consider = [&](const Candidate& c) {
    if (c.v.size() == 0) return;
    result.converged = result.converged || c.converged;
    if (c.length < result.upper) {
      result.upper = c.length;
      result.controls = split_controls(c.v, m);
    }
  };

  if (budget.intervals >= 2) {
    CCBudget half = budget;
    half.intervals = budget.intervals / 2;
    const CCResult coarse = solve(alg, z, half);
    result.converged = coarse.converged;
    if (coarse.upper < result.upper && coarse.controls.size() <= static_cast<std::size_t>(budget.intervals)) {
      // Each coarse control becomes one or two fine intervals.
      Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m) * budget.intervals);
      const int nc = static_cast<int>(coarse.controls.size());
      int k = 0;
      for (int q = 0; q < nc; ++q) {
        const int pieces = (q < budget.intervals - nc) ? 2 : 1;
        for (int r = 0; r < pieces; ++r, ++k) v.segment(k * m, m) = coarse.controls[q] / pieces;
      }
      consider(optimize(prob, v, budget.iterations));
      if (coarse.upper < result.upper) {
        result.upper = coarse.upper;
        result.controls = coarse.controls;
      }
    }
  }

  const Eigen::VectorXd v0 = controls_from_path(init, m, budget.intervals);
  const double scale = init.length() / budget.intervals;
  for (int s = 0; s < budget.starts; ++s) {
    Eigen::VectorXd v = v0;
    if (s > 0) {
      StreamRng rng(budget.seed, stream_id("cc-start"), static_cast<std::uint64_t>(s));
      for (Eigen::Index c = 0; c < v.size(); ++c) v[c] += 0.5 * scale * rng.normal();
    }
    consider(optimize(prob, v, budget.iterations));
  }
  return result;
}

}  // namespace

CCResult cc_distance(const StratifiedAlgebra& alg, const Point& x, const Point& y, const CCBudget& budget) {
  if (budget.intervals < 1 || budget.iterations < 0 || budget.starts < 1)
    throw std::invalid_argument("cc budget needs intervals >= 1, iterations >= 0, starts >= 1");
  const Point z = multiply(alg, inverse(alg, y), x);
  CCResult r = solve(alg, z, budget);
  Point end = alg.zero();
  for (const auto& u : r.controls) end = multiply(alg, end, horizontal_point(alg, u));
  r.residual = (end - z).cwiseAbs().maxCoeff();
  r.lower_hint = (x.head(alg.horizontal_dim()) - y.head(alg.horizontal_dim())).norm();
  if (r.residual > 1e-8 * std::max(1.0, z.cwiseAbs().maxCoeff()))
    throw NumericalError("cc optimizer returned an infeasible path (residual " + std::to_string(r.residual) + ")");
  return r;
}

MetricEquivalence estimate_equivalence_lambda(const Gauge& gauge, const StratifiedAlgebra& alg, int samples,
                                              std::uint64_t seed, const CCBudget& budget, double dilation) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  if (!(dilation > 0.0)) throw std::invalid_argument("dilation must be positive");
  const Point h = unit_ball_half_widths(gauge, alg);
  StreamRng rng(seed, stream_id("lambda"), 0);
  MetricEquivalence out;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  for (int s = 0; s < samples; ++s) {
    Point u(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) u[i] = rng.uniform(-h[i], h[i]);
    if (gauge_norm(gauge, alg, u) == 0.0) continue;
    const Point z = dilate(alg, dilation, normalize_to_sphere(gauge, alg, u));
    const double ratio = cc_distance(alg, z, alg.zero(), budget).upper / gauge_norm(gauge, alg, z);
    out.min_ratio = std::min(out.min_ratio, ratio);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.samples;
  }
  out.lambda = std::max({1.0, out.max_ratio, 1.0 / out.min_ratio});
  return out;
}

double estimate_quasi_triangle_alpha(const Gauge& gauge, const StratifiedAlgebra& alg, int samples,
                                     std::uint64_t seed, double dilation) {
  if (samples < 1) throw std::invalid_argument("samples must be positive");
  if (!(dilation > 0.0)) throw std::invalid_argument("dilation must be positive");
  const Gauge box_gauge = gauge.kind == GaugeKind::koranyi ? gauge : Gauge::koranyi(alg);
  const Point h = unit_ball_half_widths(box_gauge, alg);
  StreamRng rng(seed, stream_id("alpha"), 0);
  auto draw = [&] {
    Point u(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) u[i] = rng.uniform(-h[i], h[i]);
    return dilate(alg, dilation, u);
  };
  double alpha = 1.0;
  for (int s = 0; s < samples; ++s) {
    const Point x = draw(), y = draw(), z = draw();
    const double via = gauge_distance(gauge, alg, x, z) + gauge_distance(gauge, alg, z, y);
    if (via > 0.0) alpha = std::max(alpha, gauge_distance(gauge, alg, x, y) / via);
  }
  return alpha;
}

}  // namespace carnot
