#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace xc::sim {

enum class Placement : int { Random, Explicit };
enum class Mobility : int { None, Walk };

struct Pos {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;  // used when dim == 3
};

// Simulation parameters, mirrored one-to-one by the flat `key = value`
// config file format (see parse_config).
struct SimConfig {
  int devices = 10;
  int dim = 2;  // 2 planar (default) or 3 volumetric
  Placement placement = Placement::Random;
  std::vector<Pos> positions;  // Placement::Explicit
  double area_w = 100.0;
  double area_h = 100.0;
  double area_d = 0.0;  // depth, dim == 3 only
  double range = 15.0;
  double period = 1.0;
  double jitter = 0.1;       // fraction in [0, 1)
  double retention = -1.0;   // seconds; < 0 means 2.5 * period
  Mobility mobility = Mobility::None;
  double speed = 0.0;        // m/s, random walk
  double duration = 10.0;    // seconds
  std::uint64_t seed = 1;
  // scenario name and scenario-specific keys (gen.*, critic.*, mon.*, ...)
  std::map<std::string, std::string> extra;

  double retention_or_default() const { return retention < 0 ? 2.5 * period : retention; }

  // Empty when the config is valid.
  std::vector<std::string> validate() const;

  std::string extra_or(const std::string& key, const std::string& fallback) const;
  double extra_num(const std::string& key, double fallback) const;
};

struct ConfigResult {
  SimConfig config;
  std::vector<std::string> errors;
};

// Flat UTF-8 `key = value` file; '#' starts a comment; unknown keys land in
// `extra`. Explicit positions use pos.<id> = <x> <y>.
ConfigResult parse_config(const std::string& text);

}  // namespace xc::sim
