#include "carnot/sobolev.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnot {

namespace {

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must satisfy 1 <= p < inf");
}

Box unit_box(const Gauge& gauge, const StratifiedAlgebra& alg) {
  return Box::centered(unit_ball_half_widths(gauge, alg));
}

Box finite_region(const ScalarField& f, const std::optional<Box>& window) {
  const Box region = window ? *window : f.support();
  if (region.dim() != f.algebra().dim()) throw std::invalid_argument("window has the wrong dimension");
  if (!std::isfinite(region.volume()))
    throw std::invalid_argument("field " + f.name() + " has unbounded support; pass an explicit window");
  return region;
}

// f must be constant outside the region for the pair-symmetric estimator.
void check_boundary(const ScalarField& f, const Box& region, std::uint64_t seed) {
  StreamRng rng(seed, stream_id("boundary-check"), 0);
  const int n = region.dim();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, scale = 0.0;
  for (int s = 0; s < 2000; ++s) {
    Point x = uniform_in_box(region, rng);
    scale = std::max(scale, std::abs(f(x)));
    const int face = static_cast<int>(rng.bits() % static_cast<std::uint64_t>(n));
    x[face] = (rng.bits() & 1) ? region.sides[face].hi : region.sides[face].lo;
    const double v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (hi - lo > 1e-9 * std::max(1.0, scale))
    throw std::invalid_argument("window too small: field " + f.name() + " is not constant on its boundary");
}

}  // namespace

Estimate sobolev_energy(const IntegratorConfig& cfg, const ScalarField& f, double p, const std::optional<Box>& window,
                        int panels) {
  require_p(p);
  const StratifiedAlgebra& alg = f.algebra();
  const Box region = finite_region(f, window);
  auto density = [&](const Point& x) { return std::pow(f.gradient(x).norm(), p); };
  if (alg.dim() <= 4) {
    const double v = integrate_box_gauss(region, density, panels);
    return {v, 0.0, 0};
  }
  const double volume = region.volume();
  const Moments m = accumulate(cfg.seed, stream_id("energy"), cfg.samples, cfg.execution,
                               [&](StreamRng& rng) { return Draw{density(uniform_in_box(region, rng))}; });
  if (m.nonfinite) throw NumericalError("gradient of " + f.name() + " is not finite");
  return {volume * m.mean(), volume * m.standard_error(), m.count};
}

Estimate kappa_n(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg, double p,
                 const MollifierFamily& family, int n, const HorizontalVector& v) {
  require_p(p);
  if (!gauge.rotation_invariant())
    throw std::invalid_argument("kappa_n needs a gauge invariant under horizontal rotations");
  if (v.size() != alg.horizontal_dim() || std::abs(v.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("kappa_n needs a unit vector of R^{m1}");
  const Box box = unit_box(gauge, alg);
  const int m = alg.horizontal_dim();
  const Moments mom = accumulate(cfg.seed, stream_id("kappa-n"), cfg.samples, cfg.execution, [&](StreamRng& rng) {
    const double r = family.sample_radius(n, rng);
    const Point omega = sample_sphere(alg, gauge, box, rng);
    if (r >= 1.0) return Draw{0.0};
    return Draw{std::pow(std::abs(v.dot(omega.head(m))), p)};
  });
  if (mom.nonfinite) throw NumericalError("kappa_n sample is not finite");
  return {mom.mean(), mom.standard_error(), mom.count};
}

Estimate kappa(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg, double p) {
  require_p(p);
  const Box box = unit_box(gauge, alg);
  const Moments mom = accumulate(cfg.seed, stream_id("kappa"), cfg.samples, cfg.execution, [&](StreamRng& rng) {
    const Point u = uniform_in_box(box, rng);
    const bool in = gauge_norm(gauge, alg, u) < 1.0;
    return Draw{std::pow(std::abs(u[0]), p), in, in};
  });
  if (mom.count == 0) throw NumericalError("kappa: no accepted samples");
  const double factor = (p + alg.homogeneous_dim()) / alg.homogeneous_dim();
  return {factor * mom.mean(), factor * mom.standard_error(), mom.count};
}

Estimate kappa_n_factorized(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg, double p,
                            const MollifierFamily& family, int n) {
  const Estimate k = kappa(cfg, gauge, alg, p);
  const double mass = family.cumulative(n, 1.0);
  return {k.value * mass, k.std_error * mass, k.samples};
}

Estimate bbm_functional(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                        const MollifierFamily& family, int n, const BBMOptions& options) {
  require_p(p);
  cfg.validate();
  const StratifiedAlgebra& alg = f.algebra();
  if (family.Q() != alg.homogeneous_dim())
    throw std::invalid_argument("mollifier family was built for a different homogeneous dimension");
  const Box region = finite_region(f, options.window);
  check_boundary(f, region, cfg.seed);
  const Box box = unit_box(gauge, alg);
  const double volume = region.volume();
  const int m = alg.horizontal_dim();

  // x ~ uniform(region), h ~ rho_n. Pairs with y = x h are symmetric under
  // (x, h) -> (x h, h^{-1}), so int int F = 2 int int_{x in region} F / (1 + [x h in region]).
  auto kernel = [&](StreamRng& rng) {
    const Point x = uniform_in_box(region, rng);
    const double r = family.sample_radius(n, rng);
    const Point omega = sample_sphere(alg, gauge, box, rng);
    double quotient = 0.0;
    double weight = 1.0;
    if (r < options.linearize_below) {
      const HorizontalVector g = f.has_gradient() ? f.gradient(x) : fd_horizontal_gradient(f, x);
      quotient = std::pow(std::abs(g.dot(omega.head(m))), p);
    } else {
      const Point y = multiply(alg, x, dilate(alg, r, omega));
      quotient = std::pow(std::abs(f(y) - f(x)) / r, p);
      weight = region.contains(y) ? 1.0 : 2.0;
    }
    return Draw{volume * weight * quotient};
  };
  const std::uint64_t stream = stream_id("bbm", static_cast<std::uint64_t>(n));
  std::uint64_t total = cfg.samples;
  Moments mom = accumulate(cfg.seed, stream, total, cfg.execution, kernel);
  while (cfg.error_target > 0.0 && total < cfg.max_samples && mom.mean() > 0.0 &&
         mom.standard_error() > cfg.error_target * mom.mean()) {
    const std::uint64_t more = std::min(total, cfg.max_samples - total);
    mom.merge(accumulate(cfg.seed, stream, more, cfg.execution, kernel, chunks_for(total)));
    total += more;
  }
  if (mom.nonfinite) throw NumericalError("I_n sample is not finite for field " + f.name());
  return {mom.mean(), mom.standard_error(), mom.count};
}

std::vector<BBMResult> convergence_experiment(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f,
                                              double p, const MollifierFamily& family, const std::vector<int>& n_list,
                                              const BBMOptions& options) {
  if (!(p > 1.0)) throw std::invalid_argument("the convergence theorem needs p > 1");
  const StratifiedAlgebra& alg = f.algebra();
  const Estimate k = kappa(cfg, gauge, alg, p);
  const Estimate energy = sobolev_energy(cfg, f, p, options.window);
  if (!std::isfinite(energy.value)) throw NumericalError("Sobolev energy is not finite");
  std::vector<BBMResult> out;
  for (int n : n_list) {
    BBMResult r;
    r.n = n;
    r.eps = family.epsilon(n);
    r.I_n = bbm_functional(cfg, gauge, f, p, family, n, options);
    r.kappa = k;
    r.energy = energy;
    r.degenerate = !(energy.value > 0.0);
    r.ratio = r.degenerate ? std::numeric_limits<double>::quiet_NaN() : r.I_n.value / (k.value * energy.value);
    out.push_back(r);
  }
  return out;
}

}  // namespace carnot
