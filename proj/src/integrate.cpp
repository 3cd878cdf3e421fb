#include "carnot/integrate.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace carnot {

void IntegratorConfig::validate() const {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (grid_points < 1) throw std::invalid_argument("grid_points must be at least 1");
  if (error_target < 0.0) throw std::invalid_argument("error_target must be nonnegative");
  if (max_samples < samples) throw std::invalid_argument("max_samples must be at least samples");
}

BallSampler::BallSampler(const StratifiedAlgebra& alg, const Gauge& gauge, Point center, double radius)
    : alg_(alg), gauge_(gauge), center_(std::move(center)), radius_(radius) {
  require_dim(alg, center_);
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("ball radius must be positive");
  Point h = unit_ball_half_widths(gauge, alg);
  for (int i = 0; i < alg.dim(); ++i) h[i] *= std::pow(radius, alg.weight(i));
  box_ = Box::centered(h);
  box_volume_ = box_.volume();
}

Point uniform_in_box(const Box& box, StreamRng& rng) {
  Point x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.sides[i].lo, box.sides[i].hi);
  return x;
}

Point sample_sphere(const StratifiedAlgebra& alg, const Gauge& gauge, const Box& unit_box, StreamRng& rng) {
  for (int attempt = 0; attempt < 100000; ++attempt) {
    const Point u = uniform_in_box(unit_box, rng);
    const double n = gauge_norm(gauge, alg, u);
    if (n < 1.0 && n > 0.0) return dilate(alg, 1.0 / n, u);
  }
  throw NumericalError("sphere sampler accepted no points");
}

bool BallSampler::propose(StreamRng& rng, Point& x, Point& u) const {
  u = uniform_in_box(box_, rng);
  x = multiply(alg_, center_, u);
  return gauge_norm(gauge_, alg_, u) < radius_;
}

bool BallSampler::propose(StreamRng& rng, Point& x) const {
  Point u;
  return propose(rng, x, u);
}

namespace {

Estimate to_estimate(const Moments& m, double scale) {
  if (m.nonfinite > 0) throw NumericalError("integrand returned a non-finite value");
  return {scale * m.mean(), scale * m.standard_error(), m.count};
}

Estimate grid_ball(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                   const GroupFunction& f, const Point& center, double radius) {
  if (alg.dim() > 4) throw std::invalid_argument("grid integration supports N <= 4 only");
  const BallSampler sampler(alg, gauge, center, radius);
  const Box& box = sampler.offset_box();
  const int g = cfg.grid_points, n = alg.dim();
  std::uint64_t cells = 1;
  for (int i = 0; i < n; ++i) cells *= static_cast<std::uint64_t>(g);
  double sum = 0.0;
  Point u(n);
  for (std::uint64_t c = 0; c < cells; ++c) {
    std::uint64_t rest = c;
    for (int i = 0; i < n; ++i) {
      const auto k = static_cast<double>(rest % static_cast<std::uint64_t>(g));
      rest /= static_cast<std::uint64_t>(g);
      u[i] = box.sides[i].lo + (k + 0.5) * box.sides[i].width() / g;
    }
    if (gauge_norm(gauge, alg, u) < radius) sum += f(multiply(alg, center, u));
  }
  if (!std::isfinite(sum)) throw NumericalError("integrand returned a non-finite value");
  return {sum * sampler.box_volume() / static_cast<double>(cells), 0.0, cells};
}

}  // namespace

Estimate integrate_ball(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                        const GroupFunction& f, const Point& center, double radius, std::uint64_t stream) {
  cfg.validate();
  if (cfg.method == IntegratorConfig::Method::grid) return grid_ball(cfg, gauge, alg, f, center, radius);

  const BallSampler sampler(alg, gauge, center, radius);
  auto kernel = [&](StreamRng& rng) {
    Point x;
    const bool in = sampler.propose(rng, x);
    return Draw{in ? f(x) : 0.0, true, in};
  };
  std::uint64_t n = cfg.samples;
  Moments m = accumulate(cfg.seed, stream, n, cfg.execution, kernel);
  while (cfg.error_target > 0.0 && n < cfg.max_samples) {
    const Estimate e = to_estimate(m, sampler.box_volume());
    if (e.relative_error() <= cfg.error_target) break;
    const std::uint64_t more = std::min(n, cfg.max_samples - n);
    // Continue the same stream after the chunks already consumed.
    m.merge(accumulate(cfg.seed, stream, more, cfg.execution, kernel, chunks_for(n)));
    n += more;
  }
  if (m.hits == 0) throw NumericalError("ball sampler accepted no points");
  return to_estimate(m, sampler.box_volume());
}

Estimate ball_volume_constant(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg) {
  using Key = std::tuple<std::string, std::string, std::uint64_t, std::uint64_t, int, int, double>;
  static std::mutex mutex;
  static std::map<Key, Estimate> cache;
  const Key key{alg.name(), gauge.label(), cfg.samples, cfg.seed, static_cast<int>(cfg.method), cfg.grid_points,
                cfg.error_target};
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  const Estimate e =
      integrate_ball(cfg, gauge, alg, [](const Point&) { return 1.0; }, alg.zero(), 1.0, stream_id("ball-volume"));
  if (!(e.value > 0.0)) throw NumericalError("ball volume estimate is not positive");
  std::lock_guard<std::mutex> lock(mutex);
  cache.emplace(key, e);
  return e;
}

double integrate_1d(const std::function<double(double)>& g, double a, double b, double tolerance) {
  if (!(b >= a)) throw std::invalid_argument("integration bounds must satisfy a <= b");
  if (a == b) return 0.0;
  boost::math::quadrature::tanh_sinh<double> integrator;
  double value = 0.0;
  try {
    double error = 0.0, l1 = 0.0;
    value = integrator.integrate(g, a, b, tolerance, &error, &l1);
    if (!std::isfinite(value) || error > 1e-6 * std::max(1.0, l1))
      throw NumericalError("one-dimensional integral did not converge");
  } catch (const std::domain_error& e) {
    throw NumericalError(std::string("one-dimensional integral diverges: ") + e.what());
  } catch (const boost::math::evaluation_error& e) {
    throw NumericalError(std::string("one-dimensional integral failed: ") + e.what());
  }
  return value;
}

Estimate folland_radial(const IntegratorConfig& cfg, const Gauge& gauge, const StratifiedAlgebra& alg,
                        const std::function<double(double)>& g, double R, double inner) {
  if (!(R > inner) || inner < 0.0) throw std::invalid_argument("need 0 <= inner < R");
  const Estimate cb = ball_volume_constant(cfg, gauge, alg);
  const int q = alg.homogeneous_dim();
  const double radial = integrate_1d([&](double r) { return g(r) * std::pow(r, q - 1); }, inner, R);
  return {q * cb.value * radial, q * cb.std_error * std::abs(radial), cb.samples};
}

double integrate_box_gauss(const Box& box, const GroupFunction& f, int panels) {
  if (panels < 1) throw std::invalid_argument("panels must be positive");
  using rule = boost::math::quadrature::gauss<double, 8>;
  std::vector<double> nodes, weights;
  for (std::size_t i = 0; i < rule::abscissa().size(); ++i) {
    nodes.push_back(rule::abscissa()[i]);
    weights.push_back(rule::weights()[i]);
    if (rule::abscissa()[i] != 0.0) {
      nodes.push_back(-rule::abscissa()[i]);
      weights.push_back(rule::weights()[i]);
    }
  }
  const int n = box.dim();
  const int per_axis = panels * static_cast<int>(nodes.size());
  std::vector<std::vector<double>> xs(static_cast<std::size_t>(n)), ws(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double h = box.sides[d].width() / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        xs[d].push_back(box.sides[d].lo + h * (p + 0.5 + 0.5 * nodes[k]));
        ws[d].push_back(0.5 * h * weights[k]);
      }
  }
  std::uint64_t total = 1;
  for (int d = 0; d < n; ++d) total *= static_cast<std::uint64_t>(per_axis);

  // Fixed-order reduction over the outermost axis keeps the result
  // independent of the thread count.
  const auto outer = static_cast<std::int64_t>(per_axis);
  const std::uint64_t inner_count = total / static_cast<std::uint64_t>(per_axis);
  std::vector<double> partial(static_cast<std::size_t>(per_axis), 0.0);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t o = 0; o < outer; ++o) {
    Point x(n);
    double s = 0.0;
    for (std::uint64_t c = 0; c < inner_count; ++c) {
      std::uint64_t rest = c;
      double w = ws[0][static_cast<std::size_t>(o)];
      x[0] = xs[0][static_cast<std::size_t>(o)];
      for (int d = 1; d < n; ++d) {
        const auto k = static_cast<std::size_t>(rest % static_cast<std::uint64_t>(per_axis));
        rest /= static_cast<std::uint64_t>(per_axis);
        x[d] = xs[d][k];
        w *= ws[d][k];
      }
      s += w * f(x);
    }
    partial[static_cast<std::size_t>(o)] = s;
  }
  double sum = 0.0;
  for (double s : partial) sum += s;
  if (!std::isfinite(sum)) throw NumericalError("integrand returned a non-finite value");
  return sum;
}

}  // namespace carnot
