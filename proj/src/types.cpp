#include "carnot/types.hpp"

#include <algorithm>
#include <cmath>

namespace carnot {

double Interval::magnitude() const { return std::max(std::abs(lo), std::abs(hi)); }

Interval operator+(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }
Interval operator-(Interval a, Interval b) { return {a.lo - b.hi, a.hi - b.lo}; }
Interval operator-(Interval a) { return {-a.hi, -a.lo}; }

Interval operator*(Interval a, Interval b) {
  const double p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(p, p + 4), *std::max_element(p, p + 4)};
}

Interval operator*(double s, Interval a) {
  return s >= 0 ? Interval{s * a.lo, s * a.hi} : Interval{s * a.hi, s * a.lo};
}

Interval hull(Interval a, Interval b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Box Box::centered(const Point& half_widths) {
  Box b;
  for (int i = 0; i < half_widths.size(); ++i) b.sides.push_back({-half_widths[i], half_widths[i]});
  return b;
}

Box Box::around(const Point& center, const Point& half_widths) {
  Box b;
  for (int i = 0; i < half_widths.size(); ++i)
    b.sides.push_back({center[i] - half_widths[i], center[i] + half_widths[i]});
  return b;
}

double Box::volume() const {
  double v = 1.0;
  for (const auto& s : sides) v *= s.width();
  return v;
}

bool Box::contains(const Point& x) const {
  for (int i = 0; i < dim(); ++i)
    if (!sides[i].contains(x[i])) return false;
  return true;
}

bool Box::contains(const Box& other) const {
  for (int i = 0; i < dim(); ++i)
    if (other.sides[i].lo < sides[i].lo || other.sides[i].hi > sides[i].hi) return false;
  return true;
}

Point Box::lower() const {
  Point p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = sides[i].lo;
  return p;
}

Point Box::upper() const {
  Point p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = sides[i].hi;
  return p;
}

Point Box::magnitudes() const {
  Point p(dim());
  for (int i = 0; i < dim(); ++i) p[i] = sides[i].magnitude();
  return p;
}

Box Box::intersect(const Box& other) const {
  Box b;
  for (int i = 0; i < dim(); ++i) {
    Interval s{std::max(sides[i].lo, other.sides[i].lo), std::min(sides[i].hi, other.sides[i].hi)};
    if (s.hi < s.lo) s.hi = s.lo;
    b.sides.push_back(s);
  }
  return b;
}

}  // namespace carnot
