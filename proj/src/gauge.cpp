#include "carnot/gauge.hpp"

#include "carnot/ccdist.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carnot {

namespace {

int factorial(int k) { return k <= 1 ? 1 : k * factorial(k - 1); }

}  // namespace

Gauge Gauge::koranyi(const StratifiedAlgebra& alg) {
  std::vector<double> a(static_cast<std::size_t>(alg.step()), 16.0);
  a[0] = 1.0;
  return koranyi(alg, std::move(a));
}

Gauge Gauge::koranyi(const StratifiedAlgebra& alg, std::vector<double> layer_weights,
                     std::vector<double> horizontal_scales) {
  Gauge g;
  g.kind = GaugeKind::koranyi;
  g.layer_weights = std::move(layer_weights);
  g.horizontal_scales = horizontal_scales.empty()
                            ? std::vector<double>(static_cast<std::size_t>(alg.horizontal_dim()), 1.0)
                            : std::move(horizontal_scales);
  g.validate(alg);
  return g;
}

Gauge Gauge::carnot_caratheodory() {
  Gauge g;
  g.kind = GaugeKind::cc;
  return g;
}

bool Gauge::rotation_invariant() const {
  if (kind == GaugeKind::cc) return false;
  for (double s : horizontal_scales)
    if (s != horizontal_scales.front()) return false;
  return true;
}

std::string Gauge::label() const {
  if (kind == GaugeKind::cc) return "cc";
  std::ostringstream os;
  os << "koranyi[";
  for (std::size_t j = 0; j < layer_weights.size(); ++j) os << (j ? "," : "") << layer_weights[j];
  os << "]";
  if (!rotation_invariant()) {
    os << "{";
    for (std::size_t i = 0; i < horizontal_scales.size(); ++i) os << (i ? "," : "") << horizontal_scales[i];
    os << "}";
  }
  return os.str();
}

void Gauge::validate(const StratifiedAlgebra& alg) const {
  if (kind == GaugeKind::cc) return;
  if (static_cast<int>(layer_weights.size()) != alg.step())
    throw std::invalid_argument("gauge needs one layer weight per layer");
  for (double a : layer_weights)
    if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("gauge layer weights must be positive");
  if (static_cast<int>(horizontal_scales.size()) != alg.horizontal_dim())
    throw std::invalid_argument("gauge needs one horizontal scale per horizontal coordinate");
  for (double s : horizontal_scales)
    if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("gauge horizontal scales must be positive");
}

double gauge_norm(const Gauge& g, const StratifiedAlgebra& alg, const Point& x) {
  require_dim(alg, x);
  if (g.kind == GaugeKind::cc) return cc_distance(alg, x, alg.zero(), CCBudget{}).upper;

  const int k = alg.step();
  const int e = 2 * factorial(k);
  const int m = alg.horizontal_dim();
  double h = 0.0;
  for (int i = 0; i < m; ++i) h += g.horizontal_scales[static_cast<std::size_t>(i)] * x[i] * x[i];
  if (k == 1) return std::sqrt(g.layer_weights[0] * h);

  // Factor out a scale so that high powers neither overflow nor underflow.
  double scale = std::sqrt(h);
  for (int j = 2; j <= k; ++j)
    scale = std::max(scale, std::pow(x.segment(alg.layer_offset(j), alg.layer_dims()[j - 1]).norm(), 1.0 / j));
  if (scale == 0.0) return 0.0;

  double sum = g.layer_weights[0] * std::pow(h / (scale * scale), e / 2);
  for (int j = 2; j <= k; ++j) {
    const double block = x.segment(alg.layer_offset(j), alg.layer_dims()[j - 1]).norm() / std::pow(scale, j);
    sum += g.layer_weights[static_cast<std::size_t>(j - 1)] * std::pow(block, e / j);
  }
  return scale * std::pow(sum, 1.0 / e);
}

double gauge_distance(const Gauge& g, const StratifiedAlgebra& alg, const Point& x, const Point& y) {
  if (g.kind == GaugeKind::cc) return cc_distance(alg, x, y, CCBudget{}).upper;
  return gauge_norm(g, alg, multiply(alg, inverse(alg, y), x));
}

Point unit_ball_half_widths(const Gauge& g, const StratifiedAlgebra& alg) {
  if (g.kind != GaugeKind::koranyi)
    throw std::invalid_argument("ball sampling needs an explicit Korányi-type gauge, not the cc gauge");
  g.validate(alg);
  const int e = 2 * factorial(alg.step());
  Point h(alg.dim());
  for (int i = 0; i < alg.dim(); ++i) {
    const int w = alg.weight(i);
    const double a = g.layer_weights[static_cast<std::size_t>(w - 1)];
    h[i] = std::pow(a, -static_cast<double>(w) / e);
    if (w == 1) h[i] /= std::sqrt(g.horizontal_scales[static_cast<std::size_t>(i)]);
  }
  return h;
}

double max_norm_on_box(const Gauge& g, const StratifiedAlgebra& alg, const Box& box) {
  if (g.kind != GaugeKind::koranyi) throw std::invalid_argument("max_norm_on_box needs a Korányi-type gauge");
  return gauge_norm(g, alg, box.magnitudes());
}

Point normalize_to_sphere(const Gauge& g, const StratifiedAlgebra& alg, const Point& x) {
  const double n = gauge_norm(g, alg, x);
  if (!(n > 0.0)) throw std::invalid_argument("cannot normalize the identity");
  return dilate(alg, 1.0 / n, x);
}

}  // namespace carnot
