#include "carnot/experiment.hpp"

#include "carnot/ccdist.hpp"
#include "carnot/integrate.hpp"
#include "carnot/poincare.hpp"
#include "carnot/sobolev.hpp"

#include <boost/version.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <set>
#include <sstream>

namespace carnot {

const std::vector<std::string>& experiment_kinds() {
  static const std::vector<std::string> kinds{"group-info",  "cb-estimate",   "kappa",      "bbm-converge",
                                              "poincare-1d", "poincare-ball", "fractional", "selftest"};
  return kinds;
}

namespace {

const std::set<std::string> kKeys{"experiment", "group",   "gauge",    "field",     "field_1d", "p",
                                  "mollifier",  "n",       "s",        "radii",     "weights",  "center",
                                  "rescale",    "C",       "C_pQ",     "mu",        "beta",     "grid_points",
                                  "tuples",     "samples", "seed",     "output",    "target",   "cc_budget"};

double get_double(const Json& doc, const char* key, double def) {
  if (!doc.contains(key)) return def;
  const Json& v = doc[key];
  if (!v.is_number() || !std::isfinite(v.get<double>())) throw ConfigError(std::string("/") + key, "expected a number");
  return v.get<double>();
}

std::uint64_t get_count(const Json& doc, const char* key, std::uint64_t def) {
  if (!doc.contains(key)) return def;
  const Json& v = doc[key];
  const bool positive = v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() > 0);
  if (!positive || v.get<std::uint64_t>() < 1)
    throw ConfigError(std::string("/") + key, "expected a positive integer");
  return v.get<std::uint64_t>();
}

template <class T>
std::vector<T> get_list(const Json& doc, const char* key, std::vector<T> def) {
  if (!doc.contains(key)) return def;
  const Json& v = doc[key];
  const std::string ptr = std::string("/") + key;
  if (!v.is_array() || v.empty()) throw ConfigError(ptr, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    if constexpr (std::is_same_v<T, int>) {
      if (!v[i].is_number_integer() || v[i].get<int>() < 1) throw ConfigError(p, "expected a positive integer");
      out.push_back(v[i].get<int>());
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) throw ConfigError(p, "expected a number");
      out.push_back(v[i].get<double>());
    } else {
      if (!v[i].is_string()) throw ConfigError(p, "expected a string");
      out.push_back(v[i].get<std::string>());
    }
  }
  return out;
}

std::string get_string(const Json& doc, const char* key, std::string def) {
  if (!doc.contains(key)) return def;
  if (!doc[key].is_string()) throw ConfigError(std::string("/") + key, "expected a string");
  return doc[key].get<std::string>();
}

Point center_point(const ExperimentConfig& cfg) {
  Point c = Point::Zero(cfg.alg->dim());
  for (std::size_t i = 0; i < cfg.center.size(); ++i) c[static_cast<int>(i)] = cfg.center[i];
  return c;
}

IntegratorConfig integrator(const ExperimentConfig& cfg) {
  IntegratorConfig ic;
  ic.samples = cfg.samples;
  ic.seed = cfg.seed;
  ic.max_samples = std::max(ic.max_samples, cfg.samples);
  return ic;
}

std::string fmt(double v) { return format_double(v); }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os_ << (i ? "," : "") << cells[i];
    os_ << '\n';
  }
  std::string str() const { return os_.str(); }

 private:
  std::ostringstream os_;
};

ExperimentOutput group_info(const ExperimentConfig& cfg) {
  const StratifiedAlgebra& alg = *cfg.alg;
  Json out;
  out["group"] = group_to_json(alg);
  out["Q"] = alg.homogeneous_dim();
  out["dim"] = alg.dim();
  out["horizontal_dim"] = alg.horizontal_dim();
  out["gauge"] = gauge_to_json(cfg.gauge);
  if (cfg.gauge.kind == GaugeKind::koranyi) {
    const Point h = unit_ball_half_widths(cfg.gauge, alg);
    out["unit_ball_half_widths"] = std::vector<double>(h.data(), h.data() + h.size());
  }
  Point target = Point::Zero(alg.dim());
  if (cfg.document.contains("target")) {
    const auto t = get_list<double>(cfg.document, "target", {});
    if (static_cast<int>(t.size()) != alg.dim()) throw ConfigError("/target", "expected one entry per coordinate");
    for (int i = 0; i < alg.dim(); ++i) target[i] = t[static_cast<std::size_t>(i)];
  } else {
    target[alg.dim() - 1] = 1.0;
  }
  const HorizontalPath path = ballbox_path(alg, target);
  out["target"] = std::vector<double>(target.data(), target.data() + target.size());
  out["ballbox_segments"] = ballbox_segment_count(alg);
  out["ballbox_path"] = path_to_json(path);
  out["ballbox_length"] = path.length();
  if (cfg.document.contains("cc_budget")) {
    const Json& b = cfg.document["cc_budget"];
    if (!b.is_object()) throw ConfigError("/cc_budget", "expected an object");
    CCBudget budget;
    budget.intervals = static_cast<int>(get_count(b, "intervals", 16));
    budget.iterations = static_cast<int>(get_count(b, "iterations", 200));
    budget.starts = static_cast<int>(get_count(b, "starts", 8));
    budget.seed = cfg.seed;
    const CCResult r = cc_distance(alg, target, alg.zero(), budget);
    out["cc_distance"] = {{"upper", r.upper}, {"lower_hint", r.lower_hint}, {"converged", r.converged},
                          {"residual", r.residual}, {"intervals", budget.intervals}};
  }
  return {"json", out.dump(2) + "\n", {}};
}

ExperimentOutput cb_estimate(const ExperimentConfig& cfg) {
  const Estimate cb = ball_volume_constant(integrator(cfg), cfg.gauge, *cfg.alg);
  Json out{{"gauge", cfg.gauge.label()}, {"Q", cfg.alg->homogeneous_dim()}, {"c_B", cb.value},
           {"stderr", cb.std_error},     {"samples", cb.samples},           {"seed", cfg.seed}};
  return {"json", out.dump(2) + "\n", {}};
}

MollifierFamily family_for(const ExperimentConfig& cfg, const IntegratorConfig& ic) {
  const Estimate cb = ball_volume_constant(ic, cfg.gauge, *cfg.alg);
  return MollifierFamily(cfg.mollifier, cfg.alg->homogeneous_dim(), cb.value, cfg.mollifier_power);
}

ExperimentOutput kappa_table(const ExperimentConfig& cfg) {
  const IntegratorConfig ic = integrator(cfg);
  const MollifierFamily family = family_for(cfg, ic);
  const Estimate k = kappa(ic, cfg.gauge, *cfg.alg, cfg.p);
  HorizontalVector e1 = HorizontalVector::Zero(cfg.alg->horizontal_dim());
  e1[0] = 1.0;
  // Columns follow the BBM table: I_n holds kappa_n(e_1) and energy holds
  // the mass int_0^1 rho1_n, so ratio = kappa_n / (kappa * mass).
  Csv csv{"n", "eps", "I_n", "stderr", "kappa", "energy", "ratio"};
  ExperimentOutput out{"csv", "", {}};
  for (int n : cfg.n_list) {
    const Estimate kn = kappa_n(ic, cfg.gauge, *cfg.alg, cfg.p, family, n, e1);
    const double mass = family.cumulative(n, 1.0);
    const double ratio = kn.value / (k.value * mass);
    csv.row({std::to_string(n), fmt(family.epsilon(n)), fmt(kn.value), fmt(kn.std_error), fmt(k.value), fmt(mass),
             fmt(ratio)});
    const double sigma = std::hypot(kn.std_error, k.std_error * mass);
    if (std::abs(kn.value - k.value * mass) > 5.0 * sigma)
      out.violations.push_back("kappa_n does not factorize at n = " + std::to_string(n));
  }
  out.body = csv.str();
  return out;
}

ExperimentOutput bbm_converge(const ExperimentConfig& cfg) {
  const IntegratorConfig ic = integrator(cfg);
  auto f = builtin_field(cfg.field, cfg.alg);
  const MollifierFamily family = family_for(cfg, ic);
  Csv csv{"n", "eps", "I_n", "stderr", "kappa", "energy", "ratio"};
  ExperimentOutput out{"csv", "", {}};
  const Estimate k = kappa(ic, cfg.gauge, *cfg.alg, cfg.p);
  const Estimate energy = sobolev_energy(ic, f, cfg.p);
  for (int n : cfg.n_list) {
    const Estimate In = bbm_functional(ic, cfg.gauge, f, cfg.p, family, n);
    const double ratio = energy.value > 0.0 ? In.value / (k.value * energy.value) : std::nan("");
    csv.row({std::to_string(n), fmt(family.epsilon(n)), fmt(In.value), fmt(In.std_error), fmt(k.value),
             fmt(energy.value), fmt(ratio)});
    if (In.value > energy.value + 3.0 * std::hypot(In.std_error, energy.std_error))
      out.violations.push_back("I_n exceeds the Sobolev energy at n = " + std::to_string(n));
  }
  out.body = csv.str();
  return out;
}

void report_row(Csv& csv, const std::string& section, double R, const std::string& param, const PoincareReport& r) {
  csv.row({section, fmt(R), param, fmt(r.lhs), fmt(r.rhs), fmt(r.implied_constant), fmt(r.lhs_stderr),
           fmt(r.rhs_stderr), std::to_string(r.n0), fmt(r.mass), r.holds ? "1" : "0", r.hard_failure ? "1" : "0"});
}

ExperimentOutput poincare_1d(const ExperimentConfig& cfg) {
  const auto f = builtin_function_1d(cfg.field_1d);
  const MollifierFamily family(cfg.mollifier, 1, 2.0, cfg.mollifier_power);
  Csv csv{"section", "R", "n", "lhs", "rhs", "implied_constant", "lhs_stderr", "rhs_stderr", "n0", "mass", "holds",
          "hard_failure"};
  ExperimentOutput out{"csv", "", {}};
  const double t0 = cfg.center.empty() ? 0.0 : cfg.center.front();
  for (double T : cfg.radii) {
    const OneDimAnalysis a(OneDimSample::from_function(f, t0, T, cfg.grid_points), cfg.p);
    for (const auto& w : cfg.weights) {
      const PoincareReport r = one_dim_inequality(a, parse_weight(w));
      report_row(csv, "lemma:" + w, T, "0", r);
      if (!r.holds) out.violations.push_back("1-D lemma fails for weight " + w);
    }
    for (int n : cfg.n_list) {
      const PoincareReport r = scaled_interval_inequality(a, T, family, n, cfg.C);
      report_row(csv, "interval", T, std::to_string(n), r);
      if (n >= r.n0 && !r.holds)
        out.violations.push_back("interval inequality fails above the threshold at n = " + std::to_string(n));
    }
  }
  out.body = csv.str();
  return out;
}

ExperimentOutput poincare_ball(const ExperimentConfig& cfg) {
  const IntegratorConfig ic = integrator(cfg);
  const auto base = builtin_field(cfg.field, cfg.alg);
  const Point center = center_point(cfg);
  GroupPoincareOptions opt;
  opt.mu = cfg.mu;
  opt.beta = cfg.beta;
  const bool ponce = cfg.document.contains("mollifier");
  Csv csv{"section", "R", "n", "lhs", "rhs", "implied_constant", "lhs_stderr", "rhs_stderr", "n0", "mass", "holds",
          "hard_failure"};
  ExperimentOutput out{"csv", "", {}};
  std::optional<MollifierFamily> family;
  double cpq = 0.0;
  if (ponce) {
    family = family_for(cfg, ic);
    if (cfg.C_pQ) {
      cpq = *cfg.C_pQ;
    } else {
      const auto c = load_fixtures().ponce_constant(cfg.alg->name(), cfg.p);
      if (!c) throw ConfigError("/C_pQ", "no calibrated constant for " + fixture_key(cfg.alg->name(), cfg.p));
      cpq = *c;
    }
    if (!(cfg.C > cpq)) throw ConfigError("/C", "C must exceed the calibrated constant " + fmt(cpq));
  }
  for (double R : cfg.radii) {
    const ScalarField f = cfg.rescale ? base.dilated(1.0 / R) : base;
    if (ponce) {
      const MollifierFamily fam = cfg.rescale ? family->dilated(1.0 / R) : *family;
      for (int n : cfg.n_list) {
        const PoincareReport r = poincare_ponce(ic, cfg.gauge, f, cfg.p, fam, n, R, center, cfg.C, cpq, opt);
        report_row(csv, "ponce", R, std::to_string(n), r);
        if (r.hard_failure) out.violations.push_back("hard failure at R = " + fmt(R) + ", n = " + std::to_string(n));
        if (n >= r.n0 && !r.holds)
          out.violations.push_back("inequality fails above the threshold at R = " + fmt(R) + ", n = " + std::to_string(n));
      }
    } else {
      for (const auto& w : cfg.weights) {
        const Weight phi = cfg.rescale ? parse_weight(w).rescaled(R) : parse_weight(w);
        const PoincareReport r = ball_poincare(ic, cfg.gauge, f, cfg.p, phi, R, center, opt);
        report_row(csv, "ball:" + w, R, "0", r);
        if (r.hard_failure) out.violations.push_back("hard failure at R = " + fmt(R) + " for weight " + w);
      }
    }
  }
  out.body = csv.str();
  return out;
}

ExperimentOutput fractional(const ExperimentConfig& cfg) {
  const IntegratorConfig ic = integrator(cfg);
  const auto base = builtin_field(cfg.field, cfg.alg);
  const Point center = center_point(cfg);
  GroupPoincareOptions opt;
  opt.mu = cfg.mu;
  opt.beta = cfg.beta;
  Csv csv{"R", "s", "lhs", "rhs", "implied_constant", "lhs_stderr", "rhs_stderr", "gagliardo", "gagliardo_stderr",
          "scaled_gagliardo", "hard_failure"};
  ExperimentOutput out{"csv", "", {}};
  for (double R : cfg.radii) {
    const ScalarField f = cfg.rescale ? base.dilated(1.0 / R) : base;
    for (double s : cfg.s_list) {
      const PoincareReport r = fractional_poincare(ic, cfg.gauge, f, cfg.p, s, R, center, opt);
      csv.row({fmt(R), fmt(s), fmt(r.lhs), fmt(r.rhs), fmt(r.implied_constant), fmt(r.lhs_stderr), fmt(r.rhs_stderr),
               fmt(r.double_integral), fmt(r.double_integral_stderr), fmt((1.0 - s) * r.double_integral),
               r.hard_failure ? "1" : "0"});
      if (r.hard_failure) out.violations.push_back("hard failure at R = " + fmt(R) + ", s = " + fmt(s));
    }
  }
  out.body = csv.str();
  return out;
}

ExperimentOutput selftest(const ExperimentConfig& cfg) {
  const StratifiedAlgebra& alg = *cfg.alg;
  StreamRng rng(cfg.seed, stream_id("selftest"), 0);
  auto draw = [&] {
    Point x(alg.dim());
    for (int i = 0; i < alg.dim(); ++i) x[i] = rng.uniform(-1.0, 1.0);
    return x;
  };
  double assoc = 0.0, ident = 0.0, inv = 0.0, hom = 0.0, oneparam = 0.0;
  for (int t = 0; t < cfg.tuples; ++t) {
    const Point x = draw(), y = draw(), z = draw();
    const double l = rng.uniform(0.25, 2.0), m = rng.uniform(0.25, 2.0);
    assoc = std::max(assoc, (multiply(alg, multiply(alg, x, y), z) - multiply(alg, x, multiply(alg, y, z))).lpNorm<Eigen::Infinity>());
    ident = std::max({ident, (multiply(alg, x, alg.zero()) - x).lpNorm<Eigen::Infinity>(),
                      (multiply(alg, alg.zero(), x) - x).lpNorm<Eigen::Infinity>()});
    inv = std::max({inv, multiply(alg, x, inverse(alg, x)).lpNorm<Eigen::Infinity>(),
                    multiply(alg, inverse(alg, x), x).lpNorm<Eigen::Infinity>()});
    hom = std::max(hom, (dilate(alg, l, multiply(alg, x, y)) - multiply(alg, dilate(alg, l, x), dilate(alg, l, y)))
                            .lpNorm<Eigen::Infinity>());
    oneparam = std::max(oneparam, (dilate(alg, l, dilate(alg, m, x)) - dilate(alg, l * m, x)).lpNorm<Eigen::Infinity>());
  }
  ExperimentOutput out{"json", "", {}};
  Json checks = Json::array();
  auto check = [&](const char* name, double err) {
    const bool pass = err < 1e-12;
    checks.push_back({{"name", name}, {"max_error", err}, {"tolerance", 1e-12}, {"pass", pass}});
    if (!pass) out.violations.push_back(std::string(name) + " error " + fmt(err));
  };
  check("associativity", assoc);
  check("identity", ident);
  check("inverse", inv);
  check("dilation_homomorphism", hom);
  check("dilation_one_parameter", oneparam);
  Json doc{{"group", alg.name()}, {"tuples", cfg.tuples}, {"seed", cfg.seed}, {"checks", checks}, {"pass", out.ok()}};
  out.body = doc.dump(2) + "\n";
  return out;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

Json apply_overrides(Json doc, const Overrides& o) {
  if (!doc.is_object()) throw ConfigError("/", "config must be a JSON object");
  if (o.seed) doc["seed"] = *o.seed;
  if (o.samples) doc["samples"] = *o.samples;
  if (o.out) doc["output"] = *o.out;
  if (o.group) doc["group"] = *o.group;
  if (o.mollifier) {
    Json m = doc.contains("mollifier") && doc["mollifier"].is_object() ? doc["mollifier"] : Json::object();
    m["kind"] = *o.mollifier;
    doc["mollifier"] = m;
  }
  if (o.n) doc["n"] = Json::array({*o.n});
  return doc;
}

ExperimentConfig parse_config(const Json& doc, const std::string& forced) {
  if (!doc.is_object()) throw ConfigError("/", "config must be a JSON object");
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (!kKeys.count(it.key())) throw ConfigError("/" + it.key(), "unknown key");

  ExperimentConfig cfg;
  cfg.document = doc;
  cfg.experiment = get_string(doc, "experiment", forced);
  if (!forced.empty() && cfg.experiment != forced)
    throw ConfigError("/experiment", "config is for \"" + cfg.experiment + "\", not \"" + forced + "\"");
  if (std::find(experiment_kinds().begin(), experiment_kinds().end(), cfg.experiment) == experiment_kinds().end())
    throw ConfigError("/experiment", "unknown experiment \"" + cfg.experiment + "\"");

  cfg.alg = std::make_shared<const StratifiedAlgebra>(
      group_from_json(doc.contains("group") ? doc["group"] : Json("heisenberg(1)"), "/group"));
  cfg.gauge = gauge_from_json(doc.contains("gauge") ? doc["gauge"] : Json(), *cfg.alg, "/gauge");
  if (cfg.gauge.kind == GaugeKind::cc && cfg.experiment != "group-info")
    throw ConfigError("/gauge/kind", "the cc gauge has no sampler; use a koranyi gauge");

  cfg.field = get_string(doc, "field", cfg.field);
  cfg.field_1d = get_string(doc, "field_1d", cfg.field_1d);
  try {
    if (cfg.experiment == "bbm-converge" || cfg.experiment == "poincare-ball" || cfg.experiment == "fractional")
      (void)builtin_field(cfg.field, cfg.alg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/field", e.what());
  }
  try {
    if (cfg.experiment == "poincare-1d") (void)builtin_function_1d(cfg.field_1d);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("/field_1d", e.what());
  }

  cfg.p = get_double(doc, "p", cfg.p);
  if (!(cfg.p >= 1.0)) throw ConfigError("/p", "p must be at least 1");
  if (cfg.experiment == "bbm-converge" && !(cfg.p > 1.0)) throw ConfigError("/p", "convergence needs p > 1");

  if (doc.contains("mollifier")) {
    const Json& m = doc["mollifier"];
    const Json kind = m.is_object() ? m.value("kind", Json("box")) : m;
    if (!kind.is_string()) throw ConfigError("/mollifier/kind", "expected a string");
    try {
      cfg.mollifier = parse_mollifier_kind(kind.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(m.is_object() ? "/mollifier/kind" : "/mollifier", e.what());
    }
    if (m.is_object()) {
      for (auto it = m.begin(); it != m.end(); ++it)
        if (it.key() != "kind" && it.key() != "power") throw ConfigError("/mollifier/" + it.key(), "unknown key");
      if (m.contains("power")) {
        if (!m["power"].is_number() || !(m["power"].get<double>() > 0.0))
          throw ConfigError("/mollifier/power", "expected a positive number");
        cfg.mollifier_power = m["power"].get<double>();
      }
    }
  }
  cfg.n_list = get_list<int>(doc, "n", cfg.n_list);
  cfg.s_list = get_list<double>(doc, "s", cfg.s_list);
  for (std::size_t i = 0; i < cfg.s_list.size(); ++i) {
    const double s = cfg.s_list[i];
    if (!(s >= 1.0 - 1.0 / cfg.p - 1e-12 && s < 1.0))
      throw ConfigError("/s/" + std::to_string(i), "s must lie in [1 - 1/p, 1)");
  }
  cfg.radii = get_list<double>(doc, "radii", cfg.radii);
  for (std::size_t i = 0; i < cfg.radii.size(); ++i)
    if (!(cfg.radii[i] > 0.0)) throw ConfigError("/radii/" + std::to_string(i), "radii must be positive");
  cfg.weights = get_list<std::string>(doc, "weights", cfg.weights);
  for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
    try {
      (void)parse_weight(cfg.weights[i]);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("/weights/" + std::to_string(i), e.what());
    }
  }
  if (doc.contains("center")) {
    cfg.center = get_list<double>(doc, "center", {});
    const int want = cfg.experiment == "poincare-1d" ? 1 : cfg.alg->dim();
    if (static_cast<int>(cfg.center.size()) != want) throw ConfigError("/center", "expected " + std::to_string(want) + " entries");
  }
  if (doc.contains("rescale")) {
    if (!doc["rescale"].is_boolean()) throw ConfigError("/rescale", "expected a boolean");
    cfg.rescale = doc["rescale"].get<bool>();
  }
  cfg.C = get_double(doc, "C", cfg.C);
  if (cfg.experiment == "poincare-1d" && !(cfg.C > 2.0)) throw ConfigError("/C", "C must exceed 2");
  if (doc.contains("C_pQ")) {
    cfg.C_pQ = get_double(doc, "C_pQ", 0.0);
    if (!(*cfg.C_pQ > 0.0)) throw ConfigError("/C_pQ", "expected a positive number");
  }
  cfg.mu = get_double(doc, "mu", cfg.mu);
  if (!(cfg.mu >= 1.0)) throw ConfigError("/mu", "mu must be at least 1");
  cfg.beta = get_double(doc, "beta", cfg.beta);
  if (!(cfg.beta > 0.0)) throw ConfigError("/beta", "beta must be positive");
  cfg.grid_points = static_cast<int>(get_count(doc, "grid_points", static_cast<std::uint64_t>(cfg.grid_points)));
  if (cfg.grid_points < 3) throw ConfigError("/grid_points", "need at least 3 grid points");
  cfg.tuples = static_cast<int>(get_count(doc, "tuples", static_cast<std::uint64_t>(cfg.tuples)));
  cfg.samples = get_count(doc, "samples", cfg.samples);
  if (!doc.contains("seed")) {
    cfg.seed = 1;
  } else if (!doc["seed"].is_number_unsigned() &&
             !(doc["seed"].is_number_integer() && doc["seed"].get<std::int64_t>() >= 0)) {
    throw ConfigError("/seed", "expected a nonnegative integer");
  } else {
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  cfg.output = get_string(doc, "output", "");
  return cfg;
}

ExperimentOutput run_experiment(const ExperimentConfig& cfg) {
  const std::string& e = cfg.experiment;
  if (e == "group-info") return group_info(cfg);
  if (e == "cb-estimate") return cb_estimate(cfg);
  if (e == "kappa") return kappa_table(cfg);
  if (e == "bbm-converge") return bbm_converge(cfg);
  if (e == "poincare-1d") return poincare_1d(cfg);
  if (e == "poincare-ball") return poincare_ball(cfg);
  if (e == "fractional") return fractional(cfg);
  if (e == "selftest") return selftest(cfg);
  throw ConfigError("/experiment", "unknown experiment \"" + e + "\"");
}

std::function<double(double)> builtin_function_1d(const std::string& name) {
  if (name == "identity") return [](double t) { return t; };
  if (name == "sin") return [](double t) { return std::sin(2.0 * M_PI * t); };
  if (name == "abs") return [](double t) { return std::abs(t); };
  if (name == "step") return [](double t) { return t < 0.0 ? 0.0 : 1.0; };
  if (name == "cubic") return [](double t) { return t * t * t - 0.25 * t; };
  throw std::invalid_argument("unknown 1-D function: " + name);
}

Weight parse_weight(const std::string& spec) {
  if (spec == "constant") return Weight::constant();
  if (spec == "linear") return Weight::linear();
  auto arg = [&](const char* prefix) -> std::optional<double> {
    const std::string p(prefix);
    if (spec.rfind(p + "(", 0) != 0 || spec.back() != ')') return std::nullopt;
    const std::string inner = spec.substr(p.size() + 1, spec.size() - p.size() - 2);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(inner, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad weight parameter in " + spec);
    }
    if (used != inner.size()) throw std::invalid_argument("bad weight parameter in " + spec);
    return v;
  };
  if (auto a = arg("power")) return Weight::power(*a);
  if (auto w = arg("box")) return Weight::box(*w);
  throw std::invalid_argument("unknown weight: " + spec);
}

std::string content_hash(const std::string& text) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(text.data(), text.size());
  return os.str();
}

Json provenance(const ExperimentConfig& cfg, const ExperimentOutput& out) {
  Json versions{{"carnot", kVersion},
                {"compiler", __VERSION__},
                {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                              std::to_string(EIGEN_MINOR_VERSION)},
                {"boost", BOOST_LIB_VERSION},
                {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                      std::to_string(NLOHMANN_JSON_VERSION_PATCH)}};
#ifdef _OPENMP
  versions["openmp"] = _OPENMP;
#endif
  return {{"experiment", cfg.experiment},
          {"config_hash", content_hash(cfg.document.dump())},
          {"output_hash", content_hash(out.body)},
          {"seed", cfg.seed},
          {"samples", cfg.samples},
          {"threads", max_threads()},
          {"versions", versions},
          {"invariants_ok", out.ok()},
          {"violations", out.violations},
          {"timestamp", utc_timestamp()}};
}

Json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("/", "cannot read config file " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("/", std::string("config is not valid JSON: ") + e.what());
  }
}

int run_and_report(const Json& doc, const std::string& forced, const Overrides& overrides, std::ostream& out,
                   std::ostream& err) {
  try {
    const ExperimentConfig cfg = parse_config(apply_overrides(doc, overrides), forced);
    const ExperimentOutput result = run_experiment(cfg);
    if (cfg.output.empty()) {
      out << result.body;
    } else {
      std::ofstream file(cfg.output, std::ios::binary);
      if (!file) throw ConfigError("/output", "cannot write " + cfg.output);
      file << result.body;
      std::ofstream side(cfg.output + ".provenance.json", std::ios::binary);
      side << provenance(cfg, result).dump(2) << "\n";
    }
    for (const auto& v : result.violations) err << "invariant violation: " << v << "\n";
    return result.ok() ? 0 : 1;
  } catch (const ConfigError& e) {
    err << "schema violation at " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "schema violation at /: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "schema violation at /: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace carnot
