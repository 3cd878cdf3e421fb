// Regenerates data/fixtures.json: the ball-inequality constant C_pQ taken as
// the largest implied constant over a suite of fields and weights, plus the
// ball volume constants it was computed with.

#include "carnot/experiment.hpp"
#include "carnot/integrate.hpp"
#include "carnot/poincare.hpp"
#include "carnot/sobolev.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Calibrate the constants in data/fixtures.json"};
  std::string out = std::string(CARNOT_DATA_DIR) + "/fixtures.json";
  std::uint64_t samples = 400'000;
  std::uint64_t seed = 7;
  app.add_option("--out", out);
  app.add_option("--samples", samples);
  app.add_option("--seed", seed);
  CLI11_PARSE(app, argc, argv);

  using namespace carnot;
  IntegratorConfig cfg;
  cfg.samples = samples;
  cfg.seed = seed;

  const std::vector<std::string> groups{"abelian(2)", "heisenberg(1)"};
  const std::vector<std::string> fields{"windowed_gaussian", "bump", "x1_cutoff"};
  const std::vector<std::string> weights{"constant", "linear", "power(0.5)", "box(0.5)"};
  const std::vector<double> ps{1.0, 2.0};

  Json doc;
  doc["samples"] = samples;
  doc["seed"] = seed;
  doc["fields"] = fields;
  doc["weights"] = weights;
  for (const auto& name : groups) {
    auto alg = std::make_shared<const StratifiedAlgebra>(builtin_group(name));
    const Gauge gauge = Gauge::koranyi(*alg);
    const Estimate cb = ball_volume_constant(cfg, gauge, *alg);
    doc["c_B"][name] = {{"value", cb.value}, {"stderr", cb.std_error}};
    for (double p : ps) {
      double worst = 0.0;
      for (const auto& fname : fields) {
        const ScalarField f = builtin_field(fname, alg);
        for (const auto& w : weights) {
          const PoincareReport r = ball_poincare(cfg, gauge, f, p, parse_weight(w), 1.0, alg->zero());
          const double rel = std::hypot(r.lhs_stderr / r.lhs, r.rhs_stderr / r.rhs);
          const double bound = r.implied_constant * (1.0 + 3.0 * rel);
          std::cerr << name << " p=" << p << " " << fname << " " << w << " implied " << r.implied_constant
                    << " +- " << r.implied_constant * rel << "\n";
          worst = std::max(worst, bound);
        }
      }
      const std::string key = fixture_key(name, p);
      doc["ball_constant"][key] = worst;
      doc["ponce_constant"][key] = worst * alg->homogeneous_dim() * cb.value;
    }
  }
  std::ofstream file(out);
  file << doc.dump(2) << "\n";
  return file ? 0 : 1;
}
