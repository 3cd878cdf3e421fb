#include "carnot/poincare.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnot {

OneDimSample OneDimSample::from_function(const std::function<double(double)>& f, double t0, double T, int points) {
  if (points < 3) throw std::invalid_argument("a 1-D sample needs at least 3 grid points");
  std::vector<double> v(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) v[static_cast<std::size_t>(i)] = f(t0 + T * (-0.5 + static_cast<double>(i) / (points - 1)));
  return OneDimSample(std::move(v), t0, T);
}

OneDimSample::OneDimSample(std::vector<double> values, double t0, double T)
    : values_(std::move(values)), t0_(t0), T_(T) {
  if (values_.size() < 3) throw std::invalid_argument("a 1-D sample needs at least 3 grid points");
  if (!(T > 0.0)) throw std::invalid_argument("interval length T must be positive");
  for (double v : values_)
    if (!std::isfinite(v)) throw std::invalid_argument("1-D sample contains a non-finite value");
}

OneDimAnalysis::OneDimAnalysis(const OneDimSample& sample, double p) : p_(p), step_(sample.step()) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must satisfy 1 <= p < inf");
  const auto& v = sample.values();
  const int g = sample.points();
  const double h = step_;

  // Mean taken relative to v[0], so a constant sample has zero oscillation.
  double mean = 0.0;
  for (int i = 0; i < g; ++i) mean += (i == 0 || i == g - 1 ? 0.5 : 1.0) * h * (v[static_cast<std::size_t>(i)] - v[0]);
  mean += v[0];
  for (int i = 0; i < g; ++i)
    oscillation_ += (i == 0 || i == g - 1 ? 0.5 : 1.0) * h * std::pow(std::abs(v[static_cast<std::size_t>(i)] - mean), p);

  inner_.assign(static_cast<std::size_t>(g), 0.0);
  g_.assign(static_cast<std::size_t>(g), 0.0);
  for (int k = 1; k < g - 1; ++k) {
    const int last = g - 1 - k;
    double s = 0.0;
    for (int i = 0; i <= last; ++i) {
      const double d = std::pow(std::abs(v[static_cast<std::size_t>(i + k)] - v[static_cast<std::size_t>(i)]), p);
      s += (i == 0 || i == last ? 0.5 : 1.0) * d;
    }
    inner_[static_cast<std::size_t>(k)] = h * s;
    g_[static_cast<std::size_t>(k)] = inner_[static_cast<std::size_t>(k)] / std::pow(k * h, p);
  }
  g_[0] = g_[1];
}

double OneDimAnalysis::g(double tau) const {
  if (!(tau > 0.0 && tau < 1.0)) throw std::invalid_argument("g is defined for tau in (0, 1)");
  const double x = tau / step_;
  const auto k = static_cast<std::size_t>(std::floor(x));
  if (k + 1 >= g_.size()) return g_.back();
  const double w = x - static_cast<double>(k);
  return (1.0 - w) * g_[k] + w * g_[k + 1];
}

double OneDimAnalysis::weighted_double_integral(const std::function<double(double)>& primitive) const {
  double s = 0.0, prev = primitive(0.0);
  for (std::size_t k = 0; k + 1 < g_.size(); ++k) {
    const double next = primitive(static_cast<double>(k + 1) * step_);
    s += 0.5 * (g_[k] + g_[k + 1]) * (next - prev);
    prev = next;
  }
  return 2.0 * s;
}

double OneDimAnalysis::g_integral() const {
  double s = 0.0;
  for (std::size_t k = 0; k + 1 < g_.size(); ++k) s += 0.5 * (g_[k] + g_[k + 1]) * step_;
  return s;
}

double g_function(const OneDimAnalysis& a, double tau) { return a.g(tau); }

namespace {

void finish(PoincareReport& r, double slack) {
  const double base = r.prefactor > 0.0 ? r.rhs / r.prefactor : 0.0;
  r.implied_constant = base > 0.0 ? r.lhs / base : std::numeric_limits<double>::quiet_NaN();
  r.holds = r.lhs <= r.rhs + slack;
  r.hard_failure = r.lhs > 3.0 * r.lhs_stderr && r.lhs > 0.0 && !(r.rhs > 0.0);
}

}  // namespace

PoincareReport one_dim_inequality(const OneDimAnalysis& a, const Weight& phi) {
  return sigma_rescaled_inequality(a, phi, 1.0);
}

PoincareReport sigma_rescaled_inequality(const OneDimAnalysis& a, const Weight& phi, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (!phi.nonincreasing()) throw std::invalid_argument("the weight must be nonincreasing");
  const double mass = phi.cumulative(sigma);
  if (!(mass > 0.0)) throw std::invalid_argument("the weight has no mass on [0, sigma]");
  PoincareReport r;
  r.lhs = a.oscillation();
  r.double_integral = a.weighted_double_integral([&](double t) { return phi.cumulative(sigma * t) / sigma; });
  r.prefactor = 2.0 * sigma / mass;
  r.rhs = r.prefactor * r.double_integral;
  r.mass = mass;
  finish(r, 1e-9 * r.rhs + 1e-15);
  return r;
}

int threshold_n0(const MollifierFamily& family, double T, double target, int n_max) {
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  int n0 = -1;
  for (int n = n_max; n >= 1; --n) {
    if (family.cumulative(n, T) > target)
      n0 = n;
    else
      break;
  }
  if (n0 < 0) throw NumericalError("mollifier family never reaches the threshold mass below n_max");
  return n0;
}

PoincareReport scaled_interval_inequality(const OneDimAnalysis& a, double T, const MollifierFamily& family, int n,
                                          double C) {
  if (!(C > 2.0)) throw std::invalid_argument("the interval inequality needs C > 2");
  if (!(T > 0.0)) throw std::invalid_argument("T must be positive");
  if (!family.one_dim_nonincreasing()) throw std::invalid_argument("the 1-D mollifiers must be nonincreasing");
  const double p = a.p();
  PoincareReport r;
  r.lhs = T * a.oscillation();
  const double unit = a.weighted_double_integral([&](double s) { return family.cumulative(n, T * s) / T; });
  r.double_integral = std::pow(T, 2.0 - p) * unit;
  r.prefactor = C;
  r.rhs = C * std::pow(T, p) * r.double_integral;
  r.mass = family.cumulative(n, T);
  r.n0 = threshold_n0(family, T, 2.0 / C);
  finish(r, 1e-9 * r.rhs + 1e-15);
  return r;
}

Estimate mean_oscillation(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p, double R,
                          const Point& center) {
  const StratifiedAlgebra& alg = f.algebra();
  const BallSampler ball(alg, gauge, center, R);
  const std::uint64_t stream = stream_id("oscillation");
  const Moments mean = accumulate(cfg.seed, stream, cfg.samples, cfg.execution, [&](StreamRng& rng) {
    Point x;
    const bool in = ball.propose(rng, x);
    return Draw{in ? f(x) : 0.0, in, in};
  });
  if (mean.count == 0) throw NumericalError("ball sampler accepted no points");
  const double fb = mean.mean();
  const Moments osc = accumulate(cfg.seed, stream, cfg.samples, cfg.execution, [&](StreamRng& rng) {
    Point x;
    const bool in = ball.propose(rng, x);
    return Draw{in ? std::pow(std::abs(f(x) - fb), p) : 0.0};
  });
  if (osc.nonfinite || mean.nonfinite) throw NumericalError("field " + f.name() + " is not finite on the ball");
  return {ball.box_volume() * osc.mean(), ball.box_volume() * osc.standard_error(), osc.count};
}

Estimate window_pair_integral(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                              const Weight& psi, double factor, double radius, const Point& center,
                              double linearize_below, std::uint64_t stream) {
  const StratifiedAlgebra& alg = f.algebra();
  const BallSampler window(alg, gauge, center, radius);
  const Point center_inv = inverse(alg, center);
  Box point_box;
  for (int i = 0; i < alg.dim(); ++i) point_box.sides.push_back(Interval::point(center_inv[i]));

  // When f vanishes off a bounded box S, only pairs with x or y in S count,
  // and by the symmetry (x, y) -> (y, x) it suffices to draw x from S with
  // weight 2 / (1 + [y in S]).
  const Box& support = f.support();
  const bool use_support = std::isfinite(support.volume());
  Box region = window.offset_box();
  if (use_support) region = region.intersect(enclose_product(alg, point_box, support));
  const double volume = region.volume();
  if (!(volume > 0.0)) return {0.0, 0.0, 0};

  const double r_max = max_norm_on_box(gauge, alg, enclose_product(alg, enclose_inverse(region), window.offset_box()));
  // Defensive mixture for ||h||: half the draws from psi on (0, r_near], the
  // scale of pairs inside the region, half from psi on (0, r_max].
  const double r_near =
      std::min(r_max, max_norm_on_box(gauge, alg, enclose_product(alg, enclose_inverse(region), region)));
  const double mass_far = psi.cumulative(r_max), mass_near = psi.cumulative(r_near);
  if (!(mass_far > 0.0)) return {0.0, 0.0, 0};
  auto inv_density = [&](double r) {
    return 1.0 / (0.5 * (mass_near > 0.0 && r <= r_near ? 1.0 / mass_near : 0.0) + 0.5 / mass_far);
  };
  const double scale = volume * factor;
  const Box unit = Box::centered(unit_ball_half_widths(gauge, alg));
  const int m = alg.horizontal_dim();

  const Moments mom = accumulate(cfg.seed, stream, cfg.samples, cfg.execution, [&](StreamRng& rng) {
    const Point u = uniform_in_box(region, rng);
    const bool near = (rng.bits() & 1) && mass_near > 0.0;
    const double r = psi.sample(near ? r_near : r_max, rng);
    const Point omega = sample_sphere(alg, gauge, unit, rng);
    if (!(gauge_norm(gauge, alg, u) < radius)) return Draw{0.0};
    const double scale_r = scale * inv_density(r);
    const Point x = multiply(alg, center, u);
    if (use_support && !support.contains(x)) return Draw{0.0};
    if (r < linearize_below) {
      const HorizontalVector g = f.has_gradient() ? f.gradient(x) : fd_horizontal_gradient(f, x);
      return Draw{scale_r * std::pow(std::abs(g.dot(omega.head(m))), p)};
    }
    const Point v = multiply(alg, u, dilate(alg, r, omega));
    if (!(gauge_norm(gauge, alg, v) < radius)) return Draw{0.0};
    const Point y = multiply(alg, center, v);
    const double w = use_support ? (support.contains(y) ? 1.0 : 2.0) : 1.0;
    return Draw{w * scale_r * std::pow(std::abs(f(y) - f(x)) / r, p)};
  });
  if (mom.nonfinite) throw NumericalError("pair integral sample is not finite for field " + f.name());
  return {mom.mean(), mom.standard_error(), mom.count};
}

namespace {

void require_group_args(const ScalarField& f, double p, double R, const Point& center, const GroupPoincareOptions& opt) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("p must satisfy 1 <= p < inf");
  if (!(R > 0.0)) throw std::invalid_argument("ball radius must be positive");
  if (!(opt.mu >= 1.0) || !(opt.beta > 0.0)) throw std::invalid_argument("need mu >= 1 and beta > 0");
  require_dim(f.algebra(), center);
}

double combined(double a, double b) { return std::sqrt(a * a + b * b); }

}  // namespace

PoincareReport ball_poincare(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                             const Weight& phi, double R, const Point& center, const GroupPoincareOptions& opt) {
  require_group_args(f, p, R, center, opt);
  if (!phi.nonincreasing()) throw std::invalid_argument("the weight phi must be nonincreasing");
  const StratifiedAlgebra& alg = f.algebra();
  const double mass = phi.cumulative(opt.beta * R);
  if (!(mass > 0.0)) throw std::invalid_argument("phi has no mass on [0, beta R]");
  const Estimate cb = ball_volume_constant(cfg, gauge, alg);
  const double qcb = alg.homogeneous_dim() * cb.value;

  PoincareReport r;
  const Estimate lhs = mean_oscillation(cfg, gauge, f, p, R, center);
  const Estimate di = window_pair_integral(cfg, gauge, f, p, phi, qcb, opt.mu * R, center, opt.linearize_below,
                                           stream_id("ball-poincare"));
  r.lhs = lhs.value;
  r.lhs_stderr = lhs.std_error;
  r.double_integral = di.value;
  r.double_integral_stderr = combined(di.std_error, di.value * cb.relative_error());
  r.prefactor = 1.0;
  r.rhs = std::pow(R, p) * r.double_integral / mass;
  r.rhs_stderr = std::pow(R, p) * r.double_integral_stderr / mass;
  r.mass = mass;
  finish(r, 3.0 * combined(r.lhs_stderr, r.rhs_stderr));
  return r;
}

PoincareReport poincare_ponce(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                              const MollifierFamily& family, int n, double R, const Point& center, double C,
                              double C_pQ, const GroupPoincareOptions& opt) {
  require_group_args(f, p, R, center, opt);
  if (!(C > C_pQ) || !(C_pQ > 0.0)) throw std::invalid_argument("need C > C_pQ > 0");
  if (family.Q() != f.algebra().homogeneous_dim())
    throw std::invalid_argument("mollifier family was built for a different homogeneous dimension");

  PoincareReport r;
  const Estimate lhs = mean_oscillation(cfg, gauge, f, p, R, center);
  const Estimate di = window_pair_integral(cfg, gauge, f, p, Weight::mollifier(family, n), 1.0, opt.mu * R, center,
                                           opt.linearize_below, stream_id("poincare-ponce", static_cast<std::uint64_t>(n)));
  r.lhs = lhs.value;
  r.lhs_stderr = lhs.std_error;
  r.double_integral = di.value;
  r.double_integral_stderr = di.std_error;
  r.prefactor = C;
  r.rhs = C * std::pow(R, p) * di.value;
  r.rhs_stderr = C * std::pow(R, p) * di.std_error;
  r.mass = family.cumulative(n, opt.beta * R);
  r.n0 = threshold_n0(family, opt.beta * R, C_pQ / C);
  finish(r, 3.0 * combined(r.lhs_stderr, r.rhs_stderr));
  return r;
}

PoincareReport fractional_poincare(const IntegratorConfig& cfg, const Gauge& gauge, const ScalarField& f, double p,
                                   double s, double R, const Point& center, const GroupPoincareOptions& opt) {
  require_group_args(f, p, R, center, opt);
  if (!(s >= 1.0 - 1.0 / p - 1e-12 && s < 1.0)) throw std::invalid_argument("s must lie in [1 - 1/p, 1)");
  const StratifiedAlgebra& alg = f.algebra();
  const Estimate cb = ball_volume_constant(cfg, gauge, alg);
  const double qcb = alg.homogeneous_dim() * cb.value;
  const double a = (1.0 - s) * p;

  PoincareReport r;
  const Estimate lhs = mean_oscillation(cfg, gauge, f, p, R, center);
  // |h|^{-(Q + sp)} = phi(|h|) / |h|^{p + Q - 1} with phi(t) = t^{(1-s)p - 1}.
  const Estimate di = window_pair_integral(cfg, gauge, f, p, Weight::power(1.0 - a), qcb, opt.mu * R, center,
                                           opt.linearize_below, stream_id("fractional"));
  r.lhs = lhs.value;
  r.lhs_stderr = lhs.std_error;
  r.double_integral = di.value;
  r.double_integral_stderr = combined(di.std_error, di.value * cb.relative_error());
  r.prefactor = 1.0;
  r.rhs = a * std::pow(R, s * p) * r.double_integral;
  r.rhs_stderr = a * std::pow(R, s * p) * r.double_integral_stderr;
  finish(r, 3.0 * combined(r.lhs_stderr, r.rhs_stderr));
  return r;
}

}  // namespace carnot
