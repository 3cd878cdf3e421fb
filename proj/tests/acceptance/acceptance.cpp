// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if
// any criterion fails.
// usage: acceptance <path-to-carnot-cli> <config-dir>

#include "carnot/experiment.hpp"
#include "carnot/integrate.hpp"
#include "carnot/poincare.hpp"
#include "carnot/sobolev.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

using namespace carnot;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  std::printf("criterion %2d %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

std::shared_ptr<const StratifiedAlgebra> group(const std::string& name) {
  return std::make_shared<const StratifiedAlgebra>(builtin_group(name));
}

IntegratorConfig mc(std::uint64_t samples, std::uint64_t seed = 1) {
  IntegratorConfig c;
  c.samples = samples;
  c.seed = seed;
  return c;
}

double inf_norm(const Point& x) { return x.lpNorm<Eigen::Infinity>(); }

// 1. Group axioms.
void group_axioms() {
  double worst = 0.0;
  for (const std::string name : {"abelian(3)", "heisenberg(1)", "heisenberg(2)", "engel"}) {
    const StratifiedAlgebra alg = builtin_group(name);
    StreamRng rng(11, stream_id("acceptance-axioms"), 0);
    auto draw = [&] {
      Point x(alg.dim());
      for (int i = 0; i < alg.dim(); ++i) x[i] = rng.uniform(-2.0, 2.0);
      return x;
    };
    for (int t = 0; t < 1000; ++t) {
      const Point x = draw(), y = draw(), z = draw();
      const double l = rng.uniform(0.2, 3.0), m = rng.uniform(0.2, 3.0);
      worst = std::max(worst, inf_norm(multiply(alg, multiply(alg, x, y), z) - multiply(alg, x, multiply(alg, y, z))));
      worst = std::max(worst, inf_norm(multiply(alg, x, alg.zero()) - x));
      worst = std::max(worst, inf_norm(multiply(alg, alg.zero(), x) - x));
      worst = std::max(worst, inf_norm(multiply(alg, x, inverse(alg, x))));
      worst = std::max(worst, inf_norm(multiply(alg, inverse(alg, x), x)));
      worst = std::max(worst, inf_norm(dilate(alg, l, multiply(alg, x, y)) -
                                       multiply(alg, dilate(alg, l, x), dilate(alg, l, y))));
      worst = std::max(worst, inf_norm(dilate(alg, l, dilate(alg, m, x)) - dilate(alg, l * m, x)));
    }
  }
  report(1, worst < 1e-12, "group axioms on 4 groups x 1000 tuples: max error " + num(worst) + " < 1e-12");
}

// 2. Ball volume scaling and the polar formula.
void measure() {
  bool ok = true;
  std::string detail;
  for (const std::string name : {"heisenberg(1)", "engel"}) {
    const StratifiedAlgebra alg = builtin_group(name);
    const Gauge g = Gauge::koranyi(alg);
    const IntegratorConfig cfg = mc(1'000'000);
    auto one = [](const Point&) { return 1.0; };
    const Estimate v1 = integrate_ball(cfg, g, alg, one, alg.zero(), 1.0, stream_id("acceptance-ball", 1));
    const Estimate v2 = integrate_ball(cfg, g, alg, one, alg.zero(), 2.0, stream_id("acceptance-ball", 2));
    const double ratio = v2.value / v1.value;
    const double se = ratio * std::hypot(v1.relative_error(), v2.relative_error());
    const double want = std::pow(2.0, alg.homogeneous_dim());
    const bool pass = std::abs(ratio - want) <= 3.0 * se;
    ok = ok && pass;
    detail += name + " ratio " + num(ratio) + " vs " + num(want) + " (3se " + num(3 * se) + "); ";
  }
  const StratifiedAlgebra h1 = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h1);
  const IntegratorConfig cfg = mc(1'000'000, 3);
  const std::vector<std::pair<std::string, std::function<double(double)>>> profiles{
      {"1", [](double) { return 1.0; }},
      {"r", [](double r) { return r; }},
      {"r^2", [](double r) { return r * r; }},
      {"exp(-r^2)", [](double r) { return std::exp(-r * r); }},
      {"(1-r)^2", [](double r) { return (1.0 - r) * (1.0 - r); }}};
  int agree = 0;
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const auto& prof = profiles[i].second;
    const Estimate radial = folland_radial(cfg, g, h1, prof, 1.0);
    const Estimate direct = integrate_ball(
        cfg, g, h1, [&](const Point& x) { return prof(gauge_norm(g, h1, x)); }, h1.zero(), 1.0,
        stream_id("acceptance-folland", i));
    if (std::abs(radial.value - direct.value) <= 3.0 * std::hypot(radial.std_error, direct.std_error)) ++agree;
  }
  ok = ok && agree == 5;
  report(2, ok, detail + "polar formula agrees on " + std::to_string(agree) + "/5 profiles within 3se");
}

// 3. kappa oracles.
void kappa_oracles() {
  const StratifiedAlgebra r2 = builtin_group("abelian(2)");
  const Estimate k = kappa(mc(10'000'000), Gauge::koranyi(r2), r2, 2.0);
  const double rel = std::abs(k.value - 0.5) / 0.5;
  const StratifiedAlgebra h1 = builtin_group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(h1);
  const MollifierFamily family(MollifierKind::box, 4, M_PI * M_PI / 8.0);
  int within = 0;
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    const double theta = 0.1 + 2.0 * M_PI * i / 20.0;
    HorizontalVector v(2);
    v << std::cos(theta), std::sin(theta);
    const Estimate kn = kappa_n(mc(1'000'000, 100 + static_cast<std::uint64_t>(i)), g, h1, 2.0, family, 8, v);
    const double z = std::abs(kn.value - 1.0 / M_PI) / kn.std_error;
    worst = std::max(worst, z);
    if (z <= 3.0) ++within;
  }
  report(3, rel < 0.01 && within == 20,
         "kappa(R^2, p=2) = " + num(k.value) + " (rel err " + num(rel) + " < 0.01); H1 kappa_n within 3se of 1/pi in " +
             std::to_string(within) + "/20 directions (max z " + num(worst) + ")");
}

// 4. I_n below the Sobolev energy.
void bbm_upper_bound() {
  struct Case {
    std::string group, field;
  };
  const std::vector<Case> cases{{"abelian(1)", "bump"},           {"abelian(2)", "bump"},
                                {"abelian(2)", "windowed_gaussian"}, {"heisenberg(1)", "windowed_gaussian"},
                                {"heisenberg(1)", "bump"},        {"heisenberg(1)", "x1_cutoff"},
                                {"heisenberg(1)", "gaussian"}};
  int combos = 0, violations = 0;
  double worst = -1e300;
  for (const auto& c : cases) {
    auto alg = group(c.group);
    const Gauge g = Gauge::koranyi(*alg);
    const ScalarField f = builtin_field(c.field, alg);
    const IntegratorConfig cfg = mc(100'000, 5);
    const double cb = ball_volume_constant(mc(1'000'000), g, *alg).value;
    for (double p : {1.0, 2.0}) {
      const Estimate energy = sobolev_energy(cfg, f, p);
      for (MollifierKind kind : {MollifierKind::box, MollifierKind::smooth_bump, MollifierKind::power_tail}) {
        const MollifierFamily family(kind, alg->homogeneous_dim(), cb);
        for (int n = 1; n <= 64; n *= 2) {
          const Estimate In = bbm_functional(cfg, g, f, p, family, n);
          const double margin = energy.value + 3.0 * std::hypot(In.std_error, energy.std_error);
          ++combos;
          worst = std::max(worst, (In.value - energy.value) / std::max(In.std_error, 1e-300));
          if (In.value > margin) {
            ++violations;
            std::printf("  violation: %s %s p=%g %s n=%d I_n=%g energy=%g\n", c.group.c_str(), c.field.c_str(), p,
                        to_string(kind).c_str(), n, In.value, energy.value);
          }
        }
      }
    }
  }
  report(4, violations == 0,
         std::to_string(violations) + " violations of I_n <= energy + 3se over " + std::to_string(combos) +
             " (fixture, p, family, n <= 64) combinations; max (I_n - energy)/se = " + num(worst));
}

// 5. Convergence of I_n / (kappa energy).
void bbm_convergence() {
  auto r1 = group("abelian(1)");
  const Gauge g1 = Gauge::koranyi(*r1);
  const MollifierFamily f1(MollifierKind::box, 1, 2.0);
  const auto res1 =
      convergence_experiment(mc(2'000'000, 9), g1, builtin_field("bump", r1), 2.0, f1, std::vector<int>{64});
  auto h1 = group("heisenberg(1)");
  const Gauge gh = Gauge::koranyi(*h1);
  const MollifierFamily fh(MollifierKind::box, 4, ball_volume_constant(mc(1'000'000), gh, *h1).value);
  const auto resh = convergence_experiment(mc(10'000'000, 9), gh, builtin_field("windowed_gaussian", h1), 2.0, fh,
                                           std::vector<int>{32});
  const double a = res1.front().ratio, b = resh.front().ratio;
  const bool pass = a >= 0.98 && a <= 1.02 && b >= 0.95 && b <= 1.05;
  report(5, pass,
         "R^1 bump eps=1/64 ratio " + num(a) + " in [0.98, 1.02]; H1 windowed gaussian eps=1/32 ratio " + num(b) +
             " in [0.95, 1.05]");
}

// Random piecewise function on [-1/2, 1/2]: a mix of jumps and linear pieces.
std::function<double(double)> random_piecewise(StreamRng& rng) {
  const int pieces = 1 + static_cast<int>(rng.bits() % 6);
  std::vector<double> cuts{-0.5}, a, b;
  for (int i = 0; i < pieces - 1; ++i) cuts.push_back(rng.uniform(-0.5, 0.5));
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(0.5);
  for (int i = 0; i < pieces; ++i) {
    a.push_back(rng.uniform(-2.0, 2.0));
    b.push_back((rng.bits() & 1) ? rng.uniform(-4.0, 4.0) : 0.0);
  }
  return [cuts, a, b](double t) {
    std::size_t k = std::upper_bound(cuts.begin() + 1, cuts.end() - 1, t) - cuts.begin() - 1;
    return a[k] + b[k] * t;
  };
}

// 6. The 1-D lemma.
void one_dim() {
  StreamRng rng(21, stream_id("acceptance-1d"), 0);
  const std::vector<Weight> weights{Weight::constant(), Weight::linear(), Weight::power(0.5)};
  int holds = 0, total = 0, halving_bad = 0;
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double p = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 2.0 : 1.5);
    const OneDimAnalysis a(OneDimSample::from_function(random_piecewise(rng), 0.0, 1.0, 2049), p);
    for (const auto& w : weights) {
      const PoincareReport r = one_dim_inequality(a, w);
      ++total;
      if (r.holds) ++holds;
      if (r.rhs > 0.0) worst = std::max(worst, r.lhs / r.rhs);
    }
    const auto& g = a.g_values();
    for (std::size_t k = 2; k < g.size(); k += 2)
      if (g[k] > g[k / 2] * (1.0 + 1e-6) + 1e-14) ++halving_bad;
  }
  const OneDimAnalysis id(OneDimSample::from_function([](double t) { return t; }), 1.0);
  const PoincareReport r = one_dim_inequality(id, Weight::constant());
  const bool exact = std::abs(r.lhs - 0.25) < 1e-9 && std::abs(r.rhs - 2.0) < 1e-6;
  report(6, holds == total && halving_bad == 0 && exact,
         std::to_string(holds) + "/" + std::to_string(total) + " lemma checks hold (max lhs/rhs " + num(worst) +
             "); g-halving violations " + std::to_string(halving_bad) + "; f(t)=t: lhs " + num(r.lhs) + ", rhs " +
             num(r.rhs));
}

// 7. Threshold n0 and the interval inequality.
void threshold() {
  const MollifierFamily box(MollifierKind::box, 1, 2.0);
  const double C = 4.0, target = 2.0 / C;
  bool ok = true;
  std::string detail;
  for (double T : {1.0, 0.1}) {
    const int n0 = threshold_n0(box, T, target);
    // mass = min(1, n T) > target  <=>  n > target / T.
    const int closed = static_cast<int>(std::floor(target / T + 1e-12)) + 1;
    ok = ok && n0 == closed;
    detail += "T=" + num(T) + ": n0 " + std::to_string(n0) + " (closed form " + std::to_string(closed) + "); ";
    int verified = 0;
    for (const auto& fn : {"identity", "sin", "step"}) {
      const OneDimAnalysis a(OneDimSample::from_function(builtin_function_1d(fn), 0.3, T), 2.0);
      for (int n : {n0 + 1, 2 * n0 + 1, 4 * n0 + 3}) {
        const PoincareReport r = scaled_interval_inequality(a, T, box, n, C);
        if (r.holds) ++verified;
      }
    }
    ok = ok && verified == 9;
    detail += std::to_string(verified) + "/9 checks above n0 hold; ";
  }
  ok = ok && threshold_n0(box, 1.0, 0.5) == 1 && threshold_n0(box, 0.1, 0.5) == 6;
  report(7, ok, detail);
}

// 8. Group Poincaré-Ponce.
void ponce() {
  auto h1 = group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(*h1);
  const auto cpq = load_fixtures().ponce_constant(h1->name(), 2.0);
  if (!cpq) {
    report(8, false, "no calibrated constant in data/fixtures.json");
    return;
  }
  const MollifierFamily family(MollifierKind::box, 4, ball_volume_constant(mc(1'000'000), g, *h1).value);
  const double C = 4.0;
  int hard = 0, runs = 0;
  double spread = 0.0;
  for (const std::string fname : {"windowed_gaussian", "bump", "x1_cutoff", "constant"}) {
    const ScalarField base = builtin_field(fname, h1);
    for (int n : {1, 8}) {
      std::vector<double> implied;
      std::uint64_t seed = 40;
      for (double R : {0.5, 1.0, 2.0}) {
        const ScalarField f = base.dilated(1.0 / R);
        const PoincareReport r =
            poincare_ponce(mc(400'000, seed++), g, f, 2.0, family.dilated(1.0 / R), n, R, h1->zero(), C, *cpq);
        ++runs;
        if (r.hard_failure) ++hard;
        if (std::isfinite(r.implied_constant)) implied.push_back(r.implied_constant);
      }
      if (implied.size() == 3)
        for (double c : implied) spread = std::max(spread, std::abs(c / implied[1] - 1.0));
    }
  }
  report(8, hard == 0 && spread <= 0.2,
         std::to_string(hard) + " hard failures in " + std::to_string(runs) +
             " runs; implied constant max deviation across R in {1/2, 1, 2}: " + num(100 * spread) + "% <= 20%");
}

// 9. Fractional compensation.
void fractional() {
  auto h1 = group("heisenberg(1)");
  const Gauge g = Gauge::koranyi(*h1);
  bool ok = true;
  std::string detail;
  for (const std::string fname : {"bump", "x1_cutoff", "windowed_gaussian", "gaussian"}) {
    const ScalarField f = builtin_field(fname, h1);
    std::vector<double> scaled, raw;
    for (double s : {0.5, 0.7, 0.9, 0.99}) {
      const PoincareReport r = fractional_poincare(mc(400'000, 60), g, f, 2.0, s, 1.0, h1->zero());
      raw.push_back(r.double_integral);
      scaled.push_back((1.0 - s) * r.double_integral);
    }
    const double band = *std::max_element(scaled.begin(), scaled.end()) / *std::min_element(scaled.begin(), scaled.end());
    const double blow = raw.back() / raw.front();
    const bool pass = band <= 2.0 && blow >= 5.0;
    ok = ok && pass;
    detail += fname + " band " + num(band) + (band <= 2.0 ? "" : " (>2)") + " blow-up " + num(blow) + "; ";
  }
  report(9, ok, detail);
}

// 10. CLI determinism.
void determinism(const std::string& cli, const fs::path& configs) {
  const fs::path work = fs::temp_directory_path() / "carnot_acceptance";
  fs::create_directories(work);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
  };
  int same = 0, total = 0;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(configs))
    if (e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  for (const auto& cfg : files) {
    ++total;
    std::string out[2];
    bool ran = true;
    for (int k = 0; k < 2; ++k) {
      const fs::path o = work / (cfg.stem().string() + "_" + std::to_string(k) + ".out");
      const std::string cmd = "CARNOT_BBM_THREADS=" + std::string(k == 0 ? "1" : "3") + " \"" + cli + "\" run \"" +
                              cfg.string() + "\" --seed 17 --out \"" + o.string() + "\" > /dev/null 2>&1";
      const int rc = std::system(cmd.c_str());
      if (rc == -1 || !WIFEXITED(rc) || WEXITSTATUS(rc) > 1) ran = false;
      out[k] = slurp(o);
    }
    if (ran && !out[0].empty() && out[0] == out[1]) ++same;
    else std::printf("  nondeterministic or failed: %s\n", cfg.filename().c_str());
  }
  report(10, total > 0 && same == total,
         std::to_string(same) + "/" + std::to_string(total) + " CLI experiments byte-identical across reruns");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::fprintf(stderr, "usage: acceptance <carnot-cli> <config-dir>\n");
    return 2;
  }
  group_axioms();
  measure();
  kappa_oracles();
  bbm_upper_bound();
  bbm_convergence();
  one_dim();
  threshold();
  ponce();
  fractional();
  determinism(argv[1], argv[2]);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
