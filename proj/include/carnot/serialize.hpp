#pragma once

// JSON documents for groups, gauges and paths, and the calibrated fixture
// table shipped under data/.

#include "carnot/algebra.hpp"
#include "carnot/ccdist.hpp"
#include "carnot/gauge.hpp"

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace carnot {

using Json = nlohmann::json;

/// A config or document violating its schema. `pointer` is a JSON pointer to
/// the offending key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string pointer, const std::string& message)
      : std::runtime_error(pointer + ": " + message), pointer_(std::move(pointer)) {}
  const std::string& pointer() const { return pointer_; }

 private:
  std::string pointer_;
};

/// {name, step, layer_dims, structure_constants: [[i, j, l, c], ...]} with
/// 0-based indices and i < j.
Json group_to_json(const StratifiedAlgebra& alg);
/// Accepts the document above or a built-in name such as "heisenberg(2)".
StratifiedAlgebra group_from_json(const Json& doc, const std::string& pointer = "");

Json gauge_to_json(const Gauge& g);
/// {kind, layer_weights?, horizontal_scales?}; missing weights take the defaults.
Gauge gauge_from_json(const Json& doc, const StratifiedAlgebra& alg, const std::string& pointer = "");

/// [[index, duration], ...] with 0-based field indices.
Json path_to_json(const HorizontalPath& path);
HorizontalPath path_from_json(const Json& doc, const std::string& pointer = "");

/// Calibrated constants from data/fixtures.json.
struct FixtureTable {
  Json doc;

  /// Max implied constant of the ball inequality over the calibration suite,
  /// for the group and p; nullopt when not calibrated.
  std::optional<double> ball_constant(const std::string& group, double p) const;
  /// The same constant multiplied by Q c_B, the normalization used by the
  /// Poincaré-Ponce threshold.
  std::optional<double> ponce_constant(const std::string& group, double p) const;
};

FixtureTable load_fixtures(const std::string& path = std::string(CARNOT_DATA_DIR) + "/fixtures.json");
std::string fixture_key(const std::string& group, double p);

/// Shortest round-trip text for a double.
std::string format_double(double v);

}  // namespace carnot
