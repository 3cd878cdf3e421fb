#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "carnot/algebra.hpp"
#include "carnot/rng.hpp"

#include <Eigen/Dense>

using namespace carnot;

namespace {

Point random_point(StreamRng& rng, int n, double scale = 1.0) {
  Point x(n);
  for (int i = 0; i < n; ++i) x[i] = rng.uniform(-scale, scale);
  return x;
}

double err(const Point& a, const Point& b) { return (a - b).lpNorm<Eigen::Infinity>(); }

// Nilpotent matrix exponential and logarithm by truncated series.
Eigen::MatrixXd expm(const Eigen::MatrixXd& n) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Identity(n.rows(), n.cols()), term = out;
  for (int k = 1; k < n.rows(); ++k) {
    term = term * n / k;
    out += term;
  }
  return out;
}

Eigen::MatrixXd logm(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd l = m - Eigen::MatrixXd::Identity(m.rows(), m.cols());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(m.rows(), m.cols()), power = l;
  for (int k = 1; k < m.rows(); ++k) {
    out += ((k % 2) ? 1.0 : -1.0) / k * power;
    power = power * l;
  }
  return out;
}

// Faithful representations: basis matrices B_i with [B_i, B_j] matching the
// structure constants.
std::vector<Eigen::MatrixXd> heisenberg_basis() {
  std::vector<Eigen::MatrixXd> b(3, Eigen::MatrixXd::Zero(3, 3));
  b[0](0, 1) = 1.0;
  b[1](1, 2) = 1.0;
  b[2](0, 2) = 1.0;
  return b;
}

std::vector<Eigen::MatrixXd> engel_basis() {
  std::vector<Eigen::MatrixXd> b(4, Eigen::MatrixXd::Zero(4, 4));
  b[0](0, 1) = b[0](1, 2) = b[0](2, 3) = 1.0;
  b[1](2, 3) = 1.0;
  b[2](1, 3) = 1.0;
  b[3](0, 3) = 1.0;
  return b;
}

Eigen::MatrixXd embed(const std::vector<Eigen::MatrixXd>& basis, const Point& x) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(basis[0].rows(), basis[0].cols());
  for (int i = 0; i < x.size(); ++i) m += x[i] * basis[static_cast<std::size_t>(i)];
  return m;
}

// Coordinates of a matrix in the span of the basis (least squares on entries).
Point coords(const std::vector<Eigen::MatrixXd>& basis, const Eigen::MatrixXd& m) {
  const auto cells = m.size();
  Eigen::MatrixXd a(cells, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i)
    a.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(basis[i].data(), cells);
  const Eigen::VectorXd v = a.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(m.data(), cells));
  return Point(v);
}

void check_matrix_oracle(const StratifiedAlgebra& alg, const std::vector<Eigen::MatrixXd>& basis) {
  for (const auto& e : alg.entries()) {
    const Eigen::MatrixXd br = basis[e.i] * basis[e.j] - basis[e.j] * basis[e.i];
    CHECK((br - e.c * basis[e.l]).cwiseAbs().maxCoeff() < 1e-15);
  }
  StreamRng rng(3, 1, 0);
  for (int t = 0; t < 200; ++t) {
    const Point x = random_point(rng, alg.dim(), 2.0), y = random_point(rng, alg.dim(), 2.0);
    const Point want = coords(basis, logm(expm(embed(basis, x)) * expm(embed(basis, y))));
    CHECK(err(multiply(alg, x, y), want) < 1e-12);
  }
}

}  // namespace

TEST_CASE("built-in groups have the expected shape") {
  CHECK(builtin_group("abelian(3)").homogeneous_dim() == 3);
  CHECK(builtin_group("heisenberg").homogeneous_dim() == 4);
  const auto h2 = builtin_group("heisenberg(2)");
  CHECK(h2.dim() == 5);
  CHECK(h2.homogeneous_dim() == 6);
  const auto e = builtin_group("engel");
  CHECK(e.step() == 3);
  CHECK(e.homogeneous_dim() == 7);
  CHECK(e.weights() == std::vector<int>{1, 1, 2, 3});
  CHECK_THROWS_AS(builtin_group("cartan"), std::invalid_argument);
  CHECK_THROWS_AS(builtin_group("abelian"), std::invalid_argument);
}

TEST_CASE("Heisenberg law matches the 3x3 matrix group") {
  check_matrix_oracle(builtin_group("heisenberg(1)"), heisenberg_basis());
}

TEST_CASE("Engel law matches the 4x4 matrix group") { check_matrix_oracle(builtin_group("engel"), engel_basis()); }

TEST_CASE("Heisenberg twist convention") {
  const auto h = builtin_group("heisenberg(1)");
  Point x(3), y(3);
  x << 1.0, 2.0, 0.5;
  y << -3.0, 0.5, 1.0;
  const Point z = multiply(h, x, y);
  CHECK(z[2] == doctest::Approx(0.5 + 1.0 + 0.5 * (1.0 * 0.5 - (-3.0) * 2.0)));
}

TEST_CASE("group axioms hold on random tuples") {
  for (const std::string name : {"abelian(3)", "heisenberg(1)", "heisenberg(2)", "engel"}) {
    const auto alg = builtin_group(name);
    StreamRng rng(5, 2, 0);
    for (int t = 0; t < 300; ++t) {
      const Point x = random_point(rng, alg.dim()), y = random_point(rng, alg.dim()), z = random_point(rng, alg.dim());
      const double l = rng.uniform(0.1, 4.0), m = rng.uniform(0.1, 4.0);
      CHECK(err(multiply(alg, multiply(alg, x, y), z), multiply(alg, x, multiply(alg, y, z))) < 1e-12);
      CHECK(err(multiply(alg, x, inverse(alg, x)), alg.zero()) < 1e-12);
      CHECK(err(multiply(alg, x, alg.zero()), x) == 0.0);
      CHECK(err(dilate(alg, l, multiply(alg, x, y)), multiply(alg, dilate(alg, l, x), dilate(alg, l, y))) < 1e-12);
      CHECK(err(dilate(alg, l, dilate(alg, m, x)), dilate(alg, l * m, x)) < 1e-12);
    }
  }
}

TEST_CASE("construction rejects malformed algebras") {
  SUBCASE("grading") {
    // [X1, X2] landing in layer 1.
    CHECK_THROWS_AS(StratifiedAlgebra::from_entries("bad", {2, 1}, {{0, 1, 0, 1.0}}), std::invalid_argument);
  }
  SUBCASE("generation") {
    CHECK_THROWS_AS(StratifiedAlgebra::from_entries("bad", {2, 1}, {}), std::invalid_argument);
  }
  SUBCASE("antisymmetry") {
    std::vector<double> c(27, 0.0);
    c[(0 * 3 + 1) * 3 + 2] = 1.0;
    c[(1 * 3 + 0) * 3 + 2] = 1.0;
    CHECK_THROWS_AS(StratifiedAlgebra("bad", {2, 1}, c), std::invalid_argument);
  }
  SUBCASE("step above three") {
    CHECK_THROWS_AS(StratifiedAlgebra::from_entries("bad", {2, 1, 1, 1}, {{0, 1, 2, 1.0}, {0, 2, 3, 1.0}, {0, 3, 4, 1.0}}),
                    std::invalid_argument);
  }
  SUBCASE("Jacobi") {
    // A valid step-3 algebra, then one whose layer-3 brackets break Jacobi.
    std::vector<BracketEntry> e{{0, 1, 2, 1.0}, {0, 2, 3, 1.0}, {1, 2, 3, 1.0}};
    CHECK_NOTHROW(StratifiedAlgebra::from_entries("ok", {2, 1, 1}, e));
    CHECK_THROWS_AS(StratifiedAlgebra::from_entries("bad", {3, 1, 1}, {{0, 1, 3, 1.0}, {0, 2, 3, 1.0}, {1, 2, 3, 1.0},
                                                                        {0, 3, 4, 1.0}, {1, 3, 4, 1.0}, {2, 3, 4, 5.0}}),
                    std::invalid_argument);
  }
}

TEST_CASE("left-invariant frame is the derivative of right translation") {
  const auto alg = builtin_group("engel");
  StreamRng rng(9, 0, 0);
  const double t = 1e-6;
  for (int k = 0; k < 20; ++k) {
    const Point x = random_point(rng, alg.dim());
    const Matrix frame = left_invariant_frame(alg, x);
    for (int j = 0; j < alg.horizontal_dim(); ++j) {
      const Point e = Point::Unit(alg.dim(), j);
      const Point fd = (multiply(alg, x, t * e) - multiply(alg, x, -t * e)) / (2 * t);
      CHECK(err(fd, Point(frame.col(j))) < 1e-8);
    }
  }
}

TEST_CASE("horizontal rotations") {
  const auto h2 = builtin_group("heisenberg(2)");
  Matrix a = Matrix::Identity(4, 4);
  a(0, 0) = 0.0;
  a(0, 1) = -1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 0.0;
  Point x(5);
  x << 1, 2, 3, 4, 5;
  const Point r = apply_horizontal_rotation(h2, a, x);
  CHECK(r[0] == -2.0);
  CHECK(r[1] == 1.0);
  CHECK(r[4] == 5.0);
  CHECK_THROWS_AS(apply_horizontal_rotation(h2, 2.0 * a, x), std::invalid_argument);
}

TEST_CASE("interval enclosure of products contains sampled products") {
  for (const std::string name : {"heisenberg(1)", "engel"}) {
    const auto alg = builtin_group(name);
    StreamRng rng(12, 0, 0);
    Box a, b;
    for (int i = 0; i < alg.dim(); ++i) {
      a.sides.push_back({-0.5 - i, 1.0});
      b.sides.push_back({-1.0, 0.25 * i});
    }
    const Box c = enclose_product(alg, a, b);
    for (int k = 0; k < 500; ++k) {
      Point x(alg.dim()), y(alg.dim());
      for (int i = 0; i < alg.dim(); ++i) {
        x[i] = rng.uniform(a.sides[i].lo, a.sides[i].hi);
        y[i] = rng.uniform(b.sides[i].lo, b.sides[i].hi);
      }
      CHECK(c.contains(multiply(alg, x, y)));
      CHECK(enclose_inverse(a).contains(inverse(alg, x)));
    }
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const auto h = builtin_group("heisenberg(1)");
  CHECK_THROWS_AS(multiply(h, Point::Zero(2), Point::Zero(3)), std::invalid_argument);
  CHECK_THROWS_AS(dilate(h, -1.0, Point::Zero(3)), std::invalid_argument);
}
