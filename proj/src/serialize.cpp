#include "carnot/serialize.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

namespace carnot {

namespace {

const Json& require_key(const Json& doc, const std::string& key, const std::string& pointer) {
  if (!doc.is_object()) throw ConfigError(pointer.empty() ? "/" : pointer, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(pointer + "/" + key, "missing required key");
  return *it;
}

int as_int(const Json& v, const std::string& pointer) {
  if (!v.is_number_integer()) throw ConfigError(pointer, "expected an integer");
  return v.get<int>();
}

double as_double(const Json& v, const std::string& pointer) {
  if (!v.is_number()) throw ConfigError(pointer, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(pointer, "expected a finite number");
  return d;
}

std::vector<double> as_doubles(const Json& v, const std::string& pointer) {
  if (!v.is_array()) throw ConfigError(pointer, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(as_double(v[i], pointer + "/" + std::to_string(i)));
  return out;
}

}  // namespace

Json group_to_json(const StratifiedAlgebra& alg) {
  Json constants = Json::array();
  for (const auto& e : alg.entries()) constants.push_back(Json::array({e.i, e.j, e.l, e.c}));
  return {{"name", alg.name()}, {"step", alg.step()}, {"layer_dims", alg.layer_dims()},
          {"structure_constants", constants}};
}

StratifiedAlgebra group_from_json(const Json& doc, const std::string& pointer) {
  if (doc.is_string()) {
    try {
      return builtin_group(doc.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ConfigError(pointer.empty() ? "/" : pointer, e.what());
    }
  }
  const Json& name = require_key(doc, "name", pointer);
  if (!name.is_string()) throw ConfigError(pointer + "/name", "expected a string");
  const int step = as_int(require_key(doc, "step", pointer), pointer + "/step");
  const Json& dims_doc = require_key(doc, "layer_dims", pointer);
  if (!dims_doc.is_array()) throw ConfigError(pointer + "/layer_dims", "expected an array of integers");
  std::vector<int> dims;
  for (std::size_t i = 0; i < dims_doc.size(); ++i) {
    const int d = as_int(dims_doc[i], pointer + "/layer_dims/" + std::to_string(i));
    if (d < 1) throw ConfigError(pointer + "/layer_dims/" + std::to_string(i), "layer dimensions must be positive");
    dims.push_back(d);
  }
  if (static_cast<int>(dims.size()) != step) throw ConfigError(pointer + "/step", "step must equal len(layer_dims)");
  int n = 0;
  for (int d : dims) n += d;
  const Json& sc = require_key(doc, "structure_constants", pointer);
  if (!sc.is_array()) throw ConfigError(pointer + "/structure_constants", "expected an array of [i, j, l, c]");
  std::vector<BracketEntry> entries;
  for (std::size_t k = 0; k < sc.size(); ++k) {
    const std::string p = pointer + "/structure_constants/" + std::to_string(k);
    if (!sc[k].is_array() || sc[k].size() != 4) throw ConfigError(p, "expected [i, j, l, c]");
    BracketEntry e{as_int(sc[k][0], p + "/0"), as_int(sc[k][1], p + "/1"), as_int(sc[k][2], p + "/2"),
                   as_double(sc[k][3], p + "/3")};
    for (int idx : {e.i, e.j, e.l})
      if (idx < 0 || idx >= n) throw ConfigError(p, "index out of range for dimension " + std::to_string(n));
    entries.push_back(e);
  }
  try {
    return StratifiedAlgebra::from_entries(name.get<std::string>(), dims, entries);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(pointer + "/structure_constants", e.what());
  }
}

Json gauge_to_json(const Gauge& g) {
  if (g.kind == GaugeKind::cc) return {{"kind", "cc"}};
  return {{"kind", "koranyi"}, {"layer_weights", g.layer_weights}, {"horizontal_scales", g.horizontal_scales}};
}

Gauge gauge_from_json(const Json& doc, const StratifiedAlgebra& alg, const std::string& pointer) {
  if (doc.is_null()) return Gauge::koranyi(alg);
  if (!doc.is_object()) throw ConfigError(pointer, "expected an object");
  const std::string kind = doc.value("kind", std::string("koranyi"));
  if (kind == "cc") return Gauge::carnot_caratheodory();
  if (kind != "koranyi") throw ConfigError(pointer + "/kind", "expected \"koranyi\" or \"cc\"");
  Gauge def = Gauge::koranyi(alg);
  std::vector<double> a = def.layer_weights, s;
  if (doc.contains("layer_weights")) a = as_doubles(doc["layer_weights"], pointer + "/layer_weights");
  if (doc.contains("horizontal_scales")) s = as_doubles(doc["horizontal_scales"], pointer + "/horizontal_scales");
  try {
    return Gauge::koranyi(alg, a, s);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(pointer, e.what());
  }
}

Json path_to_json(const HorizontalPath& path) {
  Json out = Json::array();
  for (const auto& s : path.segments) out.push_back(Json::array({s.field, s.duration}));
  return out;
}

HorizontalPath path_from_json(const Json& doc, const std::string& pointer) {
  if (!doc.is_array()) throw ConfigError(pointer, "expected an array of [index, duration]");
  HorizontalPath path;
  for (std::size_t k = 0; k < doc.size(); ++k) {
    const std::string p = pointer + "/" + std::to_string(k);
    if (!doc[k].is_array() || doc[k].size() != 2) throw ConfigError(p, "expected [index, duration]");
    path.segments.push_back({as_int(doc[k][0], p + "/0"), as_double(doc[k][1], p + "/1")});
  }
  return path;
}

std::string fixture_key(const std::string& group, double p) { return group + "|p=" + format_double(p); }

std::optional<double> FixtureTable::ball_constant(const std::string& group, double p) const {
  const std::string key = fixture_key(group, p);
  if (!doc.contains("ball_constant") || !doc["ball_constant"].contains(key)) return std::nullopt;
  return doc["ball_constant"][key].get<double>();
}

std::optional<double> FixtureTable::ponce_constant(const std::string& group, double p) const {
  const std::string key = fixture_key(group, p);
  if (!doc.contains("ponce_constant") || !doc["ponce_constant"].contains(key)) return std::nullopt;
  return doc["ponce_constant"][key].get<double>();
}

FixtureTable load_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) return {};
  try {
    return {Json::parse(in)};
  } catch (const Json::parse_error& e) {
    throw ConfigError("/", std::string("fixtures file is not valid JSON: ") + e.what());
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace carnot
