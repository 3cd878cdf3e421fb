#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carnot/ccdist.hpp"
#include "carnot/gauge.hpp"
#include "carnot/rng.hpp"

#include <cmath>

using namespace carnot;

namespace {

Point random_point(StreamRng& rng, int n, double scale = 1.0) {
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-scale, scale);
  return x;
}

Point vertical(double t) {
  Point z = Point::Zero(3);
  z[2] = t;
  return z;
}

}  // namespace

TEST_CASE("Koranyi gauge axioms") {
  for (const std::string name : {"abelian(2)", "heisenberg(1)", "heisenberg(2)", "engel"}) {
    const auto alg = builtin_group(name);
    const Gauge g = Gauge::koranyi(alg);
    CHECK(gauge_norm(g, alg, alg.zero()) == 0.0);
    StreamRng rng(1, 0, 0);
    for (int k = 0; k < 300; ++k) {
      const Point x = random_point(rng, alg.dim(), 3.0);
      const double l = rng.uniform(0.01, 50.0);
      const double nx = gauge_norm(g, alg, x);
      CHECK(nx > 0.0);
      CHECK(gauge_norm(g, alg, inverse(alg, x)) == doctest::Approx(nx).epsilon(1e-14));
      CHECK(gauge_norm(g, alg, dilate(alg, l, x)) == doctest::Approx(l * nx).epsilon(1e-12));
    }
  }
}

TEST_CASE("Koranyi gauge on H1 has the classical form") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  Point x(3);
  x << 1.0, 2.0, 3.0;
  CHECK(gauge_norm(g, h, x) == doctest::Approx(std::pow(25.0 + 16.0 * 9.0, 0.25)));
  CHECK(g.label() == "koranyi[1,16]");
}

TEST_CASE("rotation invariance") {
  const auto h2 = builtin_group("heisenberg(2)");
  const Gauge g = Gauge::koranyi(h2);
  CHECK(g.rotation_invariant());
  const double c = std::cos(0.7), s = std::sin(0.7);
  Matrix a = Matrix::Identity(4, 4);
  a(0, 0) = c;
  a(0, 2) = -s;
  a(2, 0) = s;
  a(2, 2) = c;
  StreamRng rng(2, 0, 0);
  for (int k = 0; k < 100; ++k) {
    const Point x = random_point(rng, 5);
    CHECK(gauge_norm(g, h2, apply_horizontal_rotation(h2, a, x)) == doctest::Approx(gauge_norm(g, h2, x)));
  }
  const Gauge skew = Gauge::koranyi(h2, {1.0, 16.0}, {1.0, 2.0, 1.0, 1.0});
  CHECK_FALSE(skew.rotation_invariant());
  CHECK_FALSE(Gauge::carnot_caratheodory().rotation_invariant());
  CHECK_THROWS_AS(Gauge::koranyi(h2, {1.0, -1.0}), std::invalid_argument);
  CHECK_THROWS_AS(Gauge::koranyi(h2, {1.0}), std::invalid_argument);
}

TEST_CASE("unit ball sits inside the analytic box") {
  for (const std::string name : {"heisenberg(1)", "engel"}) {
    const auto alg = builtin_group(name);
    const Gauge g = Gauge::koranyi(alg);
    const Box box = Box::centered(unit_ball_half_widths(g, alg));
    StreamRng rng(4, 0, 0);
    for (int k = 0; k < 2000; ++k) {
      const Point x = random_point(rng, alg.dim(), 5.0);
      const Point s = normalize_to_sphere(g, alg, x);
      CHECK(gauge_norm(g, alg, s) == doctest::Approx(1.0));
      CHECK(box.contains(s));
    }
    CHECK(max_norm_on_box(g, alg, box) >= 1.0);
  }
}

TEST_CASE("quasi triangle constant") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  const double alpha = estimate_quasi_triangle_alpha(g, h, 2000, 3);
  CHECK(alpha >= 1.0);
  CHECK(alpha < 2.0);
  // Homogeneity: rerunning on dilated samples gives the same constant.
  CHECK(estimate_quasi_triangle_alpha(g, h, 2000, 3, 7.0) == doctest::Approx(alpha).epsilon(1e-9));
  const auto r2 = builtin_group("abelian(2)");
  CHECK(estimate_quasi_triangle_alpha(Gauge::koranyi(r2), r2, 2000, 3) == doctest::Approx(1.0));
}

TEST_CASE("ball-box paths reach their targets") {
  for (const std::string name : {"heisenberg(1)", "heisenberg(2)", "engel"}) {
    const auto alg = builtin_group(name);
    StreamRng rng(6, 0, 0);
    for (int k = 0; k < 100; ++k) {
      const Point z = random_point(rng, alg.dim(), 2.0);
      const HorizontalPath path = ballbox_path(alg, z);
      CHECK(static_cast<int>(path.segments.size()) == ballbox_segment_count(alg));
      CHECK((path.endpoint(alg) - z).lpNorm<Eigen::Infinity>() < 1e-9);
    }
  }
  CHECK(ballbox_segment_count(builtin_group("heisenberg(1)")) == 6);
  CHECK(ballbox_segment_count(builtin_group("engel")) == 16);
}

TEST_CASE("ball-box decomposition constants") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  const BallBoxDecomposition d = ballbox_decomposition(h, g, 2.0, 500, 1);
  CHECK(d.M() == 6);
  CHECK(0.0 < d.b);
  CHECK(d.b < d.a);
  CHECK(d.a < 1.0);
  for (int i : d.I) CHECK((i >= 0 && i < 2));
  for (int w : d.omega) CHECK((w == 0 || w == 1));
}

TEST_CASE("CC distance on H1") {
  const auto h = builtin_group("heisenberg(1)");
  CCBudget budget;
  budget.intervals = 16;
  budget.iterations = 150;
  budget.starts = 4;

  SUBCASE("horizontal points are at Euclidean distance") {
    Point z(3);
    z << 0.6, -0.8, 0.0;
    const CCResult r = cc_distance(h, z, h.zero(), budget);
    CHECK(r.upper == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r.lower_hint == doctest::Approx(1.0));
  }
  SUBCASE("vertical points: d = sqrt(4 pi |t|)") {
    const double want = std::sqrt(4.0 * M_PI);
    const CCResult r = cc_distance(h, vertical(1.0), h.zero(), budget);
    CHECK(r.converged);
    CHECK(r.upper >= want * (1.0 - 1e-6));
    CHECK(r.upper <= want * 1.03);
    // Never worse than the commutator square of length 4.
    CHECK(r.upper <= 4.0 + 1e-9);
  }
  SUBCASE("monotone in the budget") {
    CCBudget small = budget;
    small.intervals = 8;
    const double coarse = cc_distance(h, vertical(0.5), h.zero(), small).upper;
    const double fine = cc_distance(h, vertical(0.5), h.zero(), budget).upper;
    CHECK(fine <= coarse + 1e-12);
  }
  SUBCASE("left invariance") {
    Point x(3), y(3);
    x << 0.3, 0.1, -0.2;
    y << -0.4, 0.2, 0.1;
    const double d1 = cc_distance(h, x, y, budget).upper;
    const Point p = vertical(2.0) + Point::Unit(3, 0);
    const double d2 = cc_distance(h, multiply(h, p, x), multiply(h, p, y), budget).upper;
    CHECK(d1 == doctest::Approx(d2).epsilon(1e-6));
  }
}

TEST_CASE("equivalence constant") {
  const auto r2 = builtin_group("abelian(2)");
  const MetricEquivalence e = estimate_equivalence_lambda(Gauge::koranyi(r2), r2, 20, 1);
  CHECK(e.lambda == doctest::Approx(1.0).epsilon(1e-6));
  const auto h = builtin_group("heisenberg(1)");
  CCBudget b;
  b.intervals = 8;
  b.iterations = 80;
  b.starts = 2;
  const MetricEquivalence eh = estimate_equivalence_lambda(Gauge::koranyi(h), h, 12, 1, b);
  CHECK(eh.lambda >= 1.0);
  // The vertical direction gives d_X / ||.|| = sqrt(4 pi) / 2.
  CHECK(eh.lambda <= 4.0);
  CHECK(eh.min_ratio <= eh.max_ratio);
}
