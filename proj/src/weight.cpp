#include "carnot/weight.hpp"

#include "carnot/types.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace carnot {

Weight Weight::constant() { return {Kind::constant, 0.0}; }

Weight Weight::linear() { return {Kind::linear, 0.0}; }

Weight Weight::power(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("power weight needs 0 <= alpha < 1");
  return {Kind::power, alpha};
}

Weight Weight::box(double width) {
  if (!(width > 0.0)) throw std::invalid_argument("box weight needs a positive width");
  return {Kind::box, width};
}

Weight Weight::mollifier(const MollifierFamily& family, int n) {
  Weight w(Kind::mollifier, 0.0);
  w.family_ = std::make_shared<const MollifierFamily>(family);
  w.n_ = n;
  (void)family.epsilon(n);
  return w;
}

double Weight::operator()(double t) const {
  if (t < 0.0) return 0.0;
  const double u = t / scale_;
  double v = 0.0;
  switch (kind_) {
    case Kind::constant: v = 1.0; break;
    case Kind::linear: v = u < 1.0 ? 1.0 - u : 0.0; break;
    case Kind::power: v = std::pow(u, -param_); break;
    case Kind::box: v = u <= param_ ? 1.0 : 0.0; break;
    case Kind::mollifier: v = family_->one_dim(n_, u); break;
  }
  return v / scale_;
}

double Weight::cumulative(double t) const {
  if (t <= 0.0) return 0.0;
  const double u = t / scale_;
  switch (kind_) {
    case Kind::constant: return u;
    case Kind::linear: return u < 1.0 ? u - 0.5 * u * u : 0.5;
    case Kind::power: return std::pow(u, 1.0 - param_) / (1.0 - param_);
    case Kind::box: return std::min(u, param_);
    case Kind::mollifier: return family_->cumulative(n_, u);
  }
  return 0.0;
}

double Weight::sample(double t_max, StreamRng& rng) const {
  if (!(t_max > 0.0)) throw std::invalid_argument("sampling range must be positive");
  const double u_max = t_max / scale_;
  const double v = rng.uniform_open();
  double u = 0.0;
  switch (kind_) {
    case Kind::constant: u = v * u_max; break;
    case Kind::linear: {
      const double m = std::min(u_max, 1.0);
      const double target = v * (m - 0.5 * m * m);
      u = target / (0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - 2.0 * target))));
      break;
    }
    case Kind::power: u = u_max * std::pow(v, 1.0 / (1.0 - param_)); break;
    case Kind::box: u = v * std::min(u_max, param_); break;
    case Kind::mollifier: {
      if (family_->cumulative(n_, u_max) < 1e-6)
        throw NumericalError("mollifier carries almost no mass below the sampling range");
      do {
        u = family_->sample_radius(n_, rng);
      } while (u > u_max);
      break;
    }
  }
  return u * scale_;
}

Weight Weight::rescaled(double s) const {
  if (!(s > 0.0)) throw std::invalid_argument("rescaling factor must be positive");
  Weight w = *this;
  w.scale_ *= s;
  return w;
}

bool Weight::nonincreasing() const {
  return kind_ == Kind::mollifier ? family_->one_dim_nonincreasing() : true;
}

std::string Weight::label() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::constant: os << "constant"; break;
    case Kind::linear: os << "linear"; break;
    case Kind::power: os << "power(" << param_ << ")"; break;
    case Kind::box: os << "box(" << param_ << ")"; break;
    case Kind::mollifier: os << to_string(family_->kind()) << "[n=" << n_ << "]"; break;
  }
  if (scale_ != 1.0) os << "@" << scale_;
  return os.str();
}

}  // namespace carnot
