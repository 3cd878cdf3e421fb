#pragma once

// Batch experiments driven by one JSON config each. Every experiment returns
// its CSV or JSON body as a string so that reruns can be compared byte for
// byte; the provenance sidecar carries everything that may differ (time,
// thread count).

#include "carnot/field.hpp"
#include "carnot/gauge.hpp"
#include "carnot/mollify.hpp"
#include "carnot/serialize.hpp"
#include "carnot/weight.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace carnot {

inline constexpr const char* kVersion = "1.0.0";

/// Subcommands that run an experiment.
const std::vector<std::string>& experiment_kinds();

struct ExperimentConfig {
  std::string experiment;
  std::shared_ptr<const StratifiedAlgebra> alg;
  Gauge gauge;
  std::string field = "windowed_gaussian";
  std::string field_1d = "identity";
  double p = 2.0;
  MollifierKind mollifier = MollifierKind::box;
  double mollifier_power = 1.0;
  std::vector<int> n_list{1, 2, 4, 8, 16, 32};
  std::vector<double> s_list{0.5, 0.7, 0.9, 0.99};
  std::vector<double> radii{1.0};
  std::vector<std::string> weights{"constant"};
  std::vector<double> center;
  bool rescale = true;
  double C = 4.0;
  std::optional<double> C_pQ;
  double mu = 8.0;
  double beta = 1.0;
  int grid_points = 4097;
  int tuples = 1000;
  std::uint64_t samples = 200'000;
  std::uint64_t seed = 1;
  std::string output;
  /// The validated document after command-line overrides; hashed into the
  /// provenance block.
  Json document;
};

/// Command-line overrides applied to the document before validation.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> samples;
  std::optional<std::string> out;
  std::optional<std::string> mollifier;
  std::optional<int> n;
  std::optional<std::string> group;
};

Json apply_overrides(Json doc, const Overrides& o);

/// Validates the document; throws ConfigError naming the offending key. When
/// `forced` is non-empty it is the experiment kind and must agree with the
/// document's "experiment" key if present.
ExperimentConfig parse_config(const Json& doc, const std::string& forced = "");

struct ExperimentOutput {
  std::string format;  // "csv" or "json"
  std::string body;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

ExperimentOutput run_experiment(const ExperimentConfig& cfg);

/// 1-D test functions for poincare-1d: identity, sin, abs, step, cubic.
std::function<double(double)> builtin_function_1d(const std::string& name);

/// "constant", "linear", "power(a)", "box(w)".
Weight parse_weight(const std::string& spec);

/// {config_hash, output_hash, seed, samples, versions, threads, timestamp, ...}.
Json provenance(const ExperimentConfig& cfg, const ExperimentOutput& out);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string content_hash(const std::string& text);

/// Full CLI flow: validate, run, write the body to cfg.output (or `out` when
/// empty) plus `<output>.provenance.json`. Returns the exit code: 0 ok,
/// 1 invariant violation, 2 schema violation, 3 numerical failure.
int run_and_report(const Json& doc, const std::string& forced, const Overrides& overrides, std::ostream& out,
                   std::ostream& err);

/// Reads a config file; a missing file or bad JSON is a schema violation.
Json read_config_file(const std::string& path);

}  // namespace carnot
