#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carnot/integrate.hpp"
#include "carnot/types.hpp"

#include <cmath>

using namespace carnot;

namespace {

IntegratorConfig mc(std::uint64_t samples, std::uint64_t seed = 1) {
  IntegratorConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("H1 Koranyi ball volume is pi^2 / 8") {
  // In coordinates (z, t) with |z|^4 + 16 t^2 <= 1 the ball has volume
  // int_{|z|<=1} sqrt(1 - |z|^4) / 2 dz = pi^2 / 8.
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  const Estimate cb = ball_volume_constant(mc(1'000'000), g, h);
  CHECK(std::abs(cb.value - M_PI * M_PI / 8.0) < 4.0 * cb.std_error);
  CHECK(cb.relative_error() < 2e-3);
  // Second moment of x1: int x1^2 over the ball = pi / 12.
  const Estimate m2 = integrate_ball(mc(1'000'000, 2), g, h, [](const Point& x) { return x[0] * x[0]; }, h.zero(), 1.0);
  CHECK(std::abs(m2.value - M_PI / 12.0) < 4.0 * m2.std_error);
}

TEST_CASE("Euclidean balls") {
  const auto r2 = builtin_group("abelian(2)");
  const Estimate cb = ball_volume_constant(mc(400'000), Gauge::koranyi(r2), r2);
  CHECK(std::abs(cb.value - M_PI) < 4.0 * cb.std_error);
  const auto r3 = builtin_group("abelian(3)");
  const Estimate c3 = ball_volume_constant(mc(400'000), Gauge::koranyi(r3), r3);
  CHECK(std::abs(c3.value - 4.0 * M_PI / 3.0) < 4.0 * c3.std_error);
}

TEST_CASE("ball volume scales with R^Q and is translation invariant") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  auto one = [](const Point&) { return 1.0; };
  Point c(3);
  c << 1.5, -2.0, 3.0;
  const Estimate a = integrate_ball(mc(200'000), g, h, one, c, 0.5);
  const Estimate b = integrate_ball(mc(200'000), g, h, one, h.zero(), 0.5);
  // Same proposals in offset coordinates: left translation is exact.
  CHECK(a.value == doctest::Approx(b.value).epsilon(1e-12));
  const double want = M_PI * M_PI / 8.0 * std::pow(0.5, 4);
  CHECK(std::abs(b.value - want) < 4.0 * b.std_error);
}

TEST_CASE("grid method agrees with Monte Carlo") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  IntegratorConfig grid;
  grid.method = IntegratorConfig::Method::grid;
  grid.grid_points = 96;
  const Estimate e = integrate_ball(grid, g, h, [](const Point&) { return 1.0; }, h.zero(), 1.0);
  CHECK(e.std_error == 0.0);
  CHECK(e.value == doctest::Approx(M_PI * M_PI / 8.0).epsilon(5e-3));
}

TEST_CASE("error target doubles the sample count") {
  const auto r2 = builtin_group("abelian(2)");
  IntegratorConfig c = mc(10'000);
  c.error_target = 2e-3;
  c.max_samples = 1ULL << 22;
  const Estimate e = integrate_ball(c, Gauge::koranyi(r2), r2, [](const Point&) { return 1.0; }, r2.zero(), 1.0);
  CHECK(e.relative_error() < 2e-3);
  CHECK(e.samples > 10'000);
}

TEST_CASE("config validation") {
  IntegratorConfig c;
  c.samples = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = IntegratorConfig{};
  c.grid_points = 0;
  c.method = IntegratorConfig::Method::grid;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  const auto h = builtin_group("heisenberg(1)");
  CHECK_THROWS_AS(integrate_ball(mc(100), Gauge::koranyi(h), h, [](const Point&) { return 1.0; }, h.zero(), -1.0),
                  std::invalid_argument);
}

TEST_CASE("one-dimensional quadrature") {
  CHECK(integrate_1d([](double x) { return std::exp(x); }, 0.0, 1.0) == doctest::Approx(M_E - 1.0).epsilon(1e-12));
  CHECK(integrate_1d([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 4.0) == doctest::Approx(4.0).epsilon(1e-9));
  CHECK(integrate_1d([](double x) { return std::log(x); }, 0.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("polar formula") {
  const auto h = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h);
  const IntegratorConfig c = mc(400'000, 3);
  for (auto profile : std::vector<std::function<double(double)>>{
           [](double) { return 1.0; }, [](double r) { return r * r; }, [](double r) { return std::exp(-r); }}) {
    const Estimate polar = folland_radial(c, g, h, profile, 1.0);
    const Estimate direct =
        integrate_ball(mc(400'000, 4), g, h, [&](const Point& x) { return profile(gauge_norm(g, h, x)); }, h.zero(), 1.0);
    CHECK(std::abs(polar.value - direct.value) < 4.0 * std::hypot(polar.std_error, direct.std_error));
  }
  // Annulus of constant 1: c_B (R^Q - r^Q).
  const Estimate cb = ball_volume_constant(c, g, h);
  const Estimate ann = folland_radial(c, g, h, [](double) { return 1.0; }, 2.0, 1.0);
  CHECK(ann.value == doctest::Approx(cb.value * 15.0).epsilon(1e-9));
}

TEST_CASE("tensor Gauss rule is exact on polynomials") {
  Box box;
  box.sides = {{-1.0, 2.0}, {0.0, 1.0}, {0.5, 1.5}};
  const double got = integrate_box_gauss(box, [](const Point& x) { return std::pow(x[0], 9) * x[1] * x[1] + x[2]; }, 1);
  const double want = (std::pow(2.0, 10) - 1.0) / 10.0 / 3.0 + 3.0 * 1.0;
  CHECK(got == doctest::Approx(want).epsilon(1e-13));
}
