#include "carnot/mollify.hpp"

#include "carnot/integrate.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace carnot {

namespace {

double psi(double s) { return s < 1.0 ? std::exp(-1.0 / (1.0 - s * s)) : 0.0; }

}  // namespace

MollifierKind parse_mollifier_kind(std::string_view name) {
  if (name == "box") return MollifierKind::box;
  if (name == "power_tail") return MollifierKind::power_tail;
  if (name == "smooth_bump") return MollifierKind::smooth_bump;
  throw std::invalid_argument("unknown mollifier kind: " + std::string(name));
}

std::string to_string(MollifierKind kind) {
  switch (kind) {
    case MollifierKind::box: return "box";
    case MollifierKind::power_tail: return "power_tail";
    case MollifierKind::smooth_bump: return "smooth_bump";
  }
  return "unknown";
}

MollifierFamily::MollifierFamily(MollifierKind kind, int Q, double c_B, double power)
    : kind_(kind), q_(Q), c_b_(c_B), power_(power) {
  if (Q < 1) throw std::invalid_argument("homogeneous dimension must be at least 1");
  if (!(c_B > 0.0)) throw std::invalid_argument("c_B must be positive");
  if (kind == MollifierKind::power_tail && !(power > 0.0 && power <= 1.0))
    throw std::invalid_argument("power_tail needs 0 < kappa_0 <= 1");
  if (kind == MollifierKind::smooth_bump)
    bump_norm_ = integrate_1d([Q](double s) { return psi(s) * std::pow(s, Q - 1); }, 0.0, 1.0, 1e-13);
}

double MollifierFamily::epsilon(int n) const {
  if (n < 1) throw std::invalid_argument("mollifier index n must be at least 1");
  return 1.0 / n;
}

MollifierFamily MollifierFamily::dilated(double lambda) const {
  if (!(lambda > 0.0)) throw std::invalid_argument("dilation must be positive");
  MollifierFamily out = *this;
  out.dilation_ *= lambda;
  return out;
}

double MollifierFamily::base_one_dim(double eps, double r) const {
  if (r <= 0.0) return 0.0;
  switch (kind_) {
    case MollifierKind::box:
      return r <= eps ? q_ * std::pow(r / eps, q_ - 1) / eps : 0.0;
    case MollifierKind::power_tail: {
      const double alpha = power_ * eps;
      return r <= 1.0 ? alpha * std::pow(r, alpha - 1.0) : 0.0;
    }
    case MollifierKind::smooth_bump:
      return psi(r / eps) * std::pow(r / eps, q_ - 1) / (eps * bump_norm_);
  }
  return 0.0;
}

double MollifierFamily::base_cumulative(double eps, double r) const {
  if (r <= 0.0) return 0.0;
  switch (kind_) {
    case MollifierKind::box:
      return r >= eps ? 1.0 : std::pow(r / eps, q_);
    case MollifierKind::power_tail:
      return r >= 1.0 ? 1.0 : std::pow(r, power_ * eps);
    case MollifierKind::smooth_bump: {
      const double s = std::min(r / eps, 1.0);
      if (s >= 1.0) return 1.0;
      const int q = q_;
      return integrate_1d([q](double t) { return psi(t) * std::pow(t, q - 1); }, 0.0, s, 1e-13) / bump_norm_;
    }
  }
  return 0.0;
}

double MollifierFamily::base_sample(double eps, StreamRng& rng) const {
  switch (kind_) {
    case MollifierKind::box:
      return eps * std::pow(rng.uniform_open(), 1.0 / q_);
    case MollifierKind::power_tail:
      return std::pow(rng.uniform_open(), 1.0 / (power_ * eps));
    case MollifierKind::smooth_bump:
      for (;;) {
        const double s = std::pow(rng.uniform_open(), 1.0 / q_);
        if (s < 1.0 && rng.uniform() < std::exp(1.0 - 1.0 / (1.0 - s * s))) return eps * s;
      }
  }
  return 0.0;
}

double MollifierFamily::one_dim(int n, double r) const {
  return dilation_ * base_one_dim(epsilon(n), dilation_ * r);
}

double MollifierFamily::cumulative(int n, double r) const { return base_cumulative(epsilon(n), dilation_ * r); }

double MollifierFamily::tail_mass(int n, double delta) const {
  if (!(delta > 0.0)) throw std::invalid_argument("tail radius must be positive");
  return std::max(0.0, 1.0 - cumulative(n, delta));
}

double MollifierFamily::profile(int n, double r) const {
  if (!(r > 0.0)) throw std::invalid_argument("profile needs r > 0");
  return one_dim(n, r) / (q_ * c_b_ * std::pow(r, q_ - 1));
}

double MollifierFamily::sample_radius(int n, StreamRng& rng) const { return base_sample(epsilon(n), rng) / dilation_; }

double MollifierFamily::support_radius(int n) const {
  const double base = kind_ == MollifierKind::power_tail ? 1.0 : epsilon(n);
  return base / dilation_;
}

bool MollifierFamily::nonincreasing() const { return true; }

bool MollifierFamily::one_dim_nonincreasing() const {
  switch (kind_) {
    case MollifierKind::box: return q_ == 1;
    case MollifierKind::power_tail: return true;
    case MollifierKind::smooth_bump: return q_ == 1;
  }
  return false;
}

}  // namespace carnot
