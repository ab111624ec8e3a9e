#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <yaml-cpp/yaml.h>

#include "nvsim/errors.hpp"
#include "nvsim/units.hpp"

// Unit-aware reading of YAML scenario configs. Every dimensional value is a
// string "<number> <unit>"; the result is in internal units (rad/s, 1/s, G,
// rad, s, W, m^2, J). Unknown keys are rejected.
namespace nvsim::config {

enum class Quantity { Frequency, Rate, Field, Angle, Time, Power, Area, Energy, FaradayAmplitude, Dimensionless };

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::Frequency: return "frequency";
    case Quantity::Rate: return "rate";
    case Quantity::Field: return "magnetic field";
    case Quantity::Angle: return "angle";
    case Quantity::Time: return "time";
    case Quantity::Power: return "power";
    case Quantity::Area: return "area";
    case Quantity::Energy: return "energy";
    case Quantity::FaradayAmplitude: return "angle*frequency";
    case Quantity::Dimensionless: return "dimensionless";
  }
  return "?";
}

struct UnitScale {
  Quantity quantity;
  double scale;  // multiply the number by this to get internal units
};

inline const std::map<std::string, UnitScale>& unit_table() {
  using Q = Quantity;
  constexpr double tp = constants::two_pi;
  static const std::map<std::string, UnitScale> t{
      {"Hz", {Q::Frequency, tp}},      {"kHz", {Q::Frequency, tp * 1e3}}, {"MHz", {Q::Frequency, tp * 1e6}},
      {"GHz", {Q::Frequency, tp * 1e9}}, {"THz", {Q::Frequency, tp * 1e12}}, {"rad/s", {Q::Frequency, 1.0}},
      {"1/s", {Q::Rate, 1.0}},         {"1/ms", {Q::Rate, 1e3}},          {"1/us", {Q::Rate, 1e6}},
      {"1/ns", {Q::Rate, 1e9}},
      {"G", {Q::Field, 1.0}},          {"mT", {Q::Field, 10.0}},          {"T", {Q::Field, 1e4}},
      {"rad", {Q::Angle, 1.0}},        {"mrad", {Q::Angle, 1e-3}},        {"urad", {Q::Angle, 1e-6}},
      {"deg", {Q::Angle, constants::pi / 180}},
      {"s", {Q::Time, 1.0}},           {"ms", {Q::Time, 1e-3}},           {"us", {Q::Time, 1e-6}},
      {"ns", {Q::Time, 1e-9}},         {"ps", {Q::Time, 1e-12}},          {"fs", {Q::Time, 1e-15}},
      {"W", {Q::Power, 1.0}},          {"mW", {Q::Power, 1e-3}},          {"uW", {Q::Power, 1e-6}},
      {"nW", {Q::Power, 1e-9}},
      {"m^2", {Q::Area, 1.0}},         {"um^2", {Q::Area, 1e-12}},        {"nm^2", {Q::Area, 1e-18}},
      {"J", {Q::Energy, 1.0}},         {"eV", {Q::Energy, constants::electron_volt}},
      {"meV", {Q::Energy, 1e-3 * constants::electron_volt}},
  };
  return t;
}

// Looks up a unit, including the product form "<angle>*<frequency>".
inline std::optional<UnitScale> lookup_unit(const std::string& unit) {
  const auto& t = unit_table();
  if (auto it = t.find(unit); it != t.end()) return it->second;
  const auto star = unit.find('*');
  if (star == std::string::npos) return std::nullopt;
  auto a = t.find(unit.substr(0, star)), f = t.find(unit.substr(star + 1));
  if (a == t.end() || f == t.end() || a->second.quantity != Quantity::Angle || f->second.quantity != Quantity::Frequency)
    return std::nullopt;
  return UnitScale{Quantity::FaradayAmplitude, a->second.scale * f->second.scale};
}

inline double parse_number(const std::string& s, const std::string& key, int line) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v))
    throw ConfigError(ConfigError::Kind::Parse, key, line, "malformed number '" + s + "'");
  return v;
}

inline double parse_quantity(const std::string& text, Quantity q, const std::string& key, int line) {
  const auto first = text.find_first_not_of(' ');
  if (first == std::string::npos) throw ConfigError(ConfigError::Kind::Parse, key, line, "empty value");
  const auto last = text.find_last_not_of(' ');
  const std::string s = text.substr(first, last - first + 1);
  const auto space = s.find(' ');
  const std::string number = s.substr(0, space);
  const double v = parse_number(number, key, line);
  if (space == std::string::npos) {
    if (q == Quantity::Dimensionless) return v;
    throw ConfigError(ConfigError::Kind::Validation, key, line,
                      std::string("missing unit, expected a ") + quantity_name(q));
  }
  const std::string unit = s.substr(s.find_first_not_of(' ', space));
  const auto u = lookup_unit(unit);
  if (!u) throw ConfigError(ConfigError::Kind::Parse, key, line, "malformed unit '" + unit + "'");
  if (u->quantity != q)
    throw ConfigError(ConfigError::Kind::Validation, key, line,
                      "unit '" + unit + "' is a " + quantity_name(u->quantity) + ", expected a " + quantity_name(q));
  return v * u->scale;
}

inline int line_of(const YAML::Node& n) { return n.Mark().is_null() ? 0 : n.Mark().line + 1; }

// A YAML mapping whose keys must all be consumed before finish().
class Section {
 public:
  Section(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {
    if (node_ && !node_.IsNull() && !node_.IsMap())
      throw ConfigError(ConfigError::Kind::Parse, path_, line_of(node_), "expected a mapping");
  }

  const std::string& path() const { return path_; }
  bool has(const std::string& key) const { return node_.IsMap() && node_[key]; }

  double quantity(const std::string& key, Quantity q) {
    auto n = require(key);
    return parse_quantity(scalar(n, key), q, full(key), line_of(n));
  }
  double quantity(const std::string& key, Quantity q, double fallback) {
    return has(key) ? quantity(key, q) : (used_.insert(key), fallback);
  }

  std::vector<double> quantity_list(const std::string& key, Quantity q) {
    auto n = require(key);
    if (!n.IsSequence()) throw ConfigError(ConfigError::Kind::Parse, full(key), line_of(n), "expected a list");
    std::vector<double> out;
    for (const auto& item : n) out.push_back(parse_quantity(scalar(item, key), q, full(key), line_of(item)));
    return out;
  }

  std::string string(const std::string& key) { return scalar(require(key), key); }
  std::string string(const std::string& key, const std::string& fallback) {
    return has(key) ? string(key) : (used_.insert(key), fallback);
  }

  std::string choice(const std::string& key, const std::vector<std::string>& allowed, const std::string& fallback) {
    const int line = has(key) ? line_of(node_[key]) : 0;
    const std::string v = string(key, fallback);
    for (const auto& a : allowed)
      if (v == a) return v;
    std::string list;
    for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
    throw ConfigError(ConfigError::Kind::Validation, full(key), line, "'" + v + "' is not one of: " + list);
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return used_.insert(key), fallback;
    auto n = require(key);
    const std::string s = scalar(n, key);
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
      throw ConfigError(ConfigError::Kind::Parse, full(key), line_of(n), "malformed integer '" + s + "'");
    return v;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return used_.insert(key), fallback;
    auto n = require(key);
    const std::string s = scalar(n, key);
    if (s == "true") return true;
    if (s == "false") return false;
    throw ConfigError(ConfigError::Kind::Parse, full(key), line_of(n), "expected true or false, got '" + s + "'");
  }

  Section section(const std::string& key) {
    used_.insert(key);
    return Section(has(key) ? node_[key] : YAML::Node(), full(key));
  }

  std::vector<Section> section_list(const std::string& key) {
    auto n = require(key);
    if (!n.IsSequence()) throw ConfigError(ConfigError::Kind::Parse, full(key), line_of(n), "expected a list");
    std::vector<Section> out;
    for (size_t i = 0; i < n.size(); ++i) out.emplace_back(n[i], full(key) + "[" + std::to_string(i) + "]");
    return out;
  }

  void finish() const {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string k = kv.first.as<std::string>();
      if (!used_.count(k)) throw ConfigError(ConfigError::Kind::Parse, full(k), line_of(kv.first), "unknown key");
    }
  }

  ConfigError invalid(const std::string& key, const std::string& what) const {
    return ConfigError(ConfigError::Kind::Validation, full(key), has(key) ? line_of(node_[key]) : line_of(node_), what);
  }

 private:
  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node require(const std::string& key) {
    used_.insert(key);
    if (!has(key)) throw ConfigError(ConfigError::Kind::Validation, full(key), line_of(node_), "required key missing");
    return node_[key];
  }

  std::string scalar(const YAML::Node& n, const std::string& key) const {
    if (!n.IsScalar()) throw ConfigError(ConfigError::Kind::Parse, full(key), line_of(n), "expected a single value");
    return n.Scalar();
  }

  YAML::Node node_;
  std::string path_;
  std::set<std::string> used_;
};

inline Section load_file(const std::string& path) {
  try {
    return Section(YAML::LoadFile(path), "");
  } catch (const YAML::BadFile&) {
    throw ConfigError(ConfigError::Kind::Parse, "", 0, "cannot read " + path);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(ConfigError::Kind::Parse, "", e.mark.line + 1, e.msg);
  }
}

inline Section load_string(const std::string& text) {
  try {
    return Section(YAML::Load(text), "");
  } catch (const YAML::ParserException& e) {
    throw ConfigError(ConfigError::Kind::Parse, "", e.mark.line + 1, e.msg);
  }
}

}  // namespace nvsim::config
