#include "carnot/field.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnot {

ScalarField::ScalarField(std::string name, std::shared_ptr<const StratifiedAlgebra> alg, Fn f, GradFn grad,
                         Box support, bool compact, Smoothness smoothness)
    : name_(std::move(name)),
      alg_(std::move(alg)),
      f_(std::move(f)),
      grad_(std::move(grad)),
      support_(std::move(support)),
      compact_(compact),
      smoothness_(smoothness) {
  if (!alg_) throw std::invalid_argument("field needs an algebra");
  if (support_.dim() != alg_->dim()) throw std::invalid_argument("support box has the wrong dimension");
}

HorizontalVector ScalarField::gradient(const Point& x) const {
  if (!grad_) throw std::logic_error("field " + name_ + " has no analytic gradient");
  return grad_(x);
}

ScalarField ScalarField::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation must be positive");
  auto alg = alg_;
  auto f = f_;
  auto g = grad_;
  GradFn grad;
  if (g) grad = [alg, g, lambda](const Point& x) { return HorizontalVector(lambda * g(dilate(*alg, lambda, x))); };
  return ScalarField(name_ + "@dil" + std::to_string(lambda), alg,
                     [alg, f, lambda](const Point& x) { return f(dilate(*alg, lambda, x)); }, grad,
                     dilate(*alg, 1.0 / lambda, support_), compact_, smoothness_);
}

ScalarField ScalarField::translated(const Point& p) const {
  require_dim(*alg_, p);
  auto alg = alg_;
  auto f = f_;
  auto g = grad_;
  GradFn grad;
  // Horizontal derivatives are left invariant.
  if (g) grad = [alg, g, p](const Point& x) { return g(multiply(*alg, p, x)); };
  Box pinv;
  for (int i = 0; i < p.size(); ++i) pinv.sides.push_back(Interval::point(-p[i]));
  return ScalarField(name_ + "@tr", alg, [alg, f, p](const Point& x) { return f(multiply(*alg, p, x)); }, grad,
                     enclose_product(*alg, pinv, support_), compact_, smoothness_);
}

ScalarField ScalarField::scaled(double c) const {
  auto f = f_;
  auto g = grad_;
  GradFn grad;
  if (g) grad = [g, c](const Point& x) { return HorizontalVector(c * g(x)); };
  return ScalarField(name_, alg_, [f, c](const Point& x) { return c * f(x); }, grad, support_, compact_,
                     smoothness_);
}

HorizontalVector horizontal_from_euclidean(const StratifiedAlgebra& alg, const Point& x, const Point& euclidean) {
  return left_invariant_frame(alg, x).transpose() * euclidean;
}

namespace {

Box cube(int n, double half) { return Box::centered(Point::Constant(n, half)); }

Box whole_space(int n) { return cube(n, std::numeric_limits<double>::infinity()); }

// exp(-1/(1-q)) for q < 1, else 0.
double bump_of(double q) { return q < 1.0 ? std::exp(-1.0 / (1.0 - q)) : 0.0; }

constexpr double kWindow = 3.0;

}  // namespace

ScalarField builtin_field(std::string_view name, std::shared_ptr<const StratifiedAlgebra> alg) {
  if (!alg) throw std::invalid_argument("field needs an algebra");
  const int n = alg->dim();
  const StratifiedAlgebra* a = alg.get();
  auto wrap = [a](auto euclid) {
    return [a, euclid](const Point& x) { return horizontal_from_euclidean(*a, x, euclid(x)); };
  };

  if (name == "gaussian") {
    return ScalarField(
        "gaussian", alg, [](const Point& x) { return std::exp(-x.squaredNorm()); },
        wrap([](const Point& x) { return Point(-2.0 * std::exp(-x.squaredNorm()) * x); }), cube(n, 5.3), false);
  }
  if (name == "windowed_gaussian") {
    auto value = [](const Point& x) {
      const double q = x.squaredNorm(), s = q / (kWindow * kWindow);
      return s < 1.0 ? std::exp(-q - s / (1.0 - s)) : 0.0;
    };
    auto euclid = [value](const Point& x) {
      const double q = x.squaredNorm(), s = q / (kWindow * kWindow);
      if (s >= 1.0) return Point(Point::Zero(x.size()));
      const double dq = -1.0 - 1.0 / (kWindow * kWindow * (1.0 - s) * (1.0 - s));
      return Point(2.0 * dq * value(x) * x);
    };
    return ScalarField("windowed_gaussian", alg, value, wrap(euclid), cube(n, kWindow), true);
  }
  if (name == "bump") {
    auto euclid = [](const Point& x) {
      const double q = x.squaredNorm();
      if (q >= 1.0) return Point(Point::Zero(x.size()));
      return Point(-2.0 * bump_of(q) / ((1.0 - q) * (1.0 - q)) * x);
    };
    return ScalarField(
        "bump", alg, [](const Point& x) { return bump_of(x.squaredNorm()); }, wrap(euclid), cube(n, 1.0), true);
  }
  if (name == "x1_cutoff") {
    auto euclid = [](const Point& x) {
      const double q = x.squaredNorm();
      Point g = Point::Zero(x.size());
      if (q >= 1.0) return g;
      const double b = bump_of(q);
      g = -2.0 * x[0] * b / ((1.0 - q) * (1.0 - q)) * x;
      g[0] += b;
      return g;
    };
    return ScalarField(
        "x1_cutoff", alg, [](const Point& x) { return x[0] * bump_of(x.squaredNorm()); }, wrap(euclid),
        cube(n, 1.0), true);
  }
  if (name == "linear_x1") {
    return ScalarField(
        "linear_x1", alg, [](const Point& x) { return x[0]; },
        wrap([](const Point& x) { return Point(Point::Unit(x.size(), 0)); }), whole_space(n), false);
  }
  if (name == "constant") {
    return ScalarField(
        "constant", alg, [](const Point&) { return 1.0; },
        [a](const Point&) { return HorizontalVector(HorizontalVector::Zero(a->horizontal_dim())); }, whole_space(n),
        false);
  }
  if (name.starts_with("coordinate(") && name.ends_with(")")) {
    const std::string_view digits = name.substr(11, name.size() - 12);
    int k = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || k < 1 || k > n)
      throw std::invalid_argument("bad coordinate field: " + std::string(name));
    return ScalarField(
        std::string(name), alg, [k](const Point& x) { return x[k - 1]; },
        wrap([k](const Point& x) { return Point(Point::Unit(x.size(), k - 1)); }), whole_space(n), false);
  }
  throw std::invalid_argument("unknown field: " + std::string(name));
}

HorizontalVector fd_horizontal_gradient(const ScalarField& f, const Point& x, double step) {
  const StratifiedAlgebra& alg = f.algebra();
  require_dim(alg, x);
  HorizontalVector g(alg.horizontal_dim());
  for (int j = 0; j < alg.horizontal_dim(); ++j) {
    Point e = alg.zero();
    e[j] = step;
    const double plus = f(multiply(alg, x, e));
    const double minus = f(multiply(alg, x, Point(-e)));
    g[j] = (plus - minus) / (2.0 * step);
  }
  if (!g.allFinite()) throw NumericalError("finite-difference gradient of " + f.name() + " is not finite");
  return g;
}

double pansu_remainder(const ScalarField& f, const Point& x, const Point& h) {
  const StratifiedAlgebra& alg = f.algebra();
  const double linear = f.gradient(x).dot(horizontal_part(alg, h));
  return std::abs(f(multiply(alg, x, h)) - f(x) - linear);
}

}  // namespace carnot
