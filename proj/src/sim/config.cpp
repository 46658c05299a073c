#include "xc/sim/config.hpp"

#include <fmt/format.h>

#include <charconv>
#include <sstream>

namespace xc::sim {

std::vector<std::string> SimConfig::validate() const {
  std::vector<std::string> errs;
  if (devices < 1) errs.push_back("devices must be at least 1");
  if (range <= 0) errs.push_back("range must be positive");
  if (period <= 0) errs.push_back("period must be positive");
  if (jitter < 0 || jitter >= 1) errs.push_back("jitter must be in [0, 1)");
  if (retention >= 0 && retention < period)
    errs.push_back("retention must be at least the base period");
  if (area_w <= 0 || area_h <= 0) errs.push_back("area must be positive");
  if (dim != 2 && dim != 3) errs.push_back("dim must be 2 or 3");
  if (dim == 3 && area_d <= 0) errs.push_back("area.d must be positive in three dimensions");
  if (duration < 0) errs.push_back("duration must be non-negative");
  if (mobility == Mobility::Walk && speed < 0) errs.push_back("speed must be non-negative");
  if (placement == Placement::Explicit && static_cast<int>(positions.size()) != devices)
    errs.push_back(fmt::format("explicit placement needs {} positions, got {}", devices,
                               positions.size()));
  return errs;
}

std::string SimConfig::extra_or(const std::string& key, const std::string& fallback) const {
  auto it = extra.find(key);
  return it != extra.end() ? it->second : fallback;
}

double SimConfig::extra_num(const std::string& key, double fallback) const {
  auto it = extra.find(key);
  if (it == extra.end()) return fallback;
  try {
    return std::stod(it->second);
  } catch (...) {
    return fallback;
  }
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

bool to_num(const std::string& s, double& out) {
  try {
    size_t used = 0;
    out = std::stod(s, &used);
    return used == s.size();
  } catch (...) {
    return false;
  }
}

}  // namespace

ConfigResult parse_config(const std::string& text) {
  ConfigResult out;
  SimConfig& cfg = out.config;
  std::map<int, Pos> explicit_pos;

  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::string t = trim(line);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) {
      out.errors.push_back(fmt::format("line {}: expected key = value", lineno));
      continue;
    }
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    double num = 0;
    auto want_num = [&](double& slot) {
      if (to_num(value, num))
        slot = num;
      else
        out.errors.push_back(fmt::format("line {}: '{}' expects a number", lineno, key));
    };

    if (key == "devices") {
      if (to_num(value, num) && num >= 1)
        cfg.devices = static_cast<int>(num);
      else
        out.errors.push_back(fmt::format("line {}: bad device count", lineno));
    } else if (key == "placement") {
      if (value == "random")
        cfg.placement = Placement::Random;
      else if (value == "explicit")
        cfg.placement = Placement::Explicit;
      else
        out.errors.push_back(fmt::format("line {}: placement must be random|explicit", lineno));
    } else if (key == "dim") {
      if (to_num(value, num) && (num == 2 || num == 3))
        cfg.dim = static_cast<int>(num);
      else
        out.errors.push_back(fmt::format("line {}: dim must be 2 or 3", lineno));
    } else if (key == "area.w") {
      want_num(cfg.area_w);
    } else if (key == "area.h") {
      want_num(cfg.area_h);
    } else if (key == "area.d") {
      want_num(cfg.area_d);
    } else if (key == "range") {
      want_num(cfg.range);
    } else if (key == "period") {
      want_num(cfg.period);
    } else if (key == "jitter") {
      want_num(cfg.jitter);
    } else if (key == "retention") {
      want_num(cfg.retention);
    } else if (key == "mobility") {
      if (value == "none")
        cfg.mobility = Mobility::None;
      else if (value == "walk")
        cfg.mobility = Mobility::Walk;
      else
        out.errors.push_back(fmt::format("line {}: mobility must be none|walk", lineno));
    } else if (key == "speed") {
      want_num(cfg.speed);
    } else if (key == "duration") {
      want_num(cfg.duration);
    } else if (key == "seed") {
      if (to_num(value, num) && num >= 0)
        cfg.seed = static_cast<std::uint64_t>(num);
      else
        out.errors.push_back(fmt::format("line {}: bad seed", lineno));
    } else if (key.rfind("pos.", 0) == 0) {
      int id = -1;
      auto [p, ec] = std::from_chars(key.data() + 4, key.data() + key.size(), id);
      std::istringstream pv(value);
      Pos pos;
      if (ec == std::errc{} && p == key.data() + key.size() && id >= 0 && (pv >> pos.x >> pos.y)) {
        pv >> pos.z;  // optional third coordinate
        explicit_pos[id] = pos;
      } else {
        out.errors.push_back(fmt::format("line {}: bad position entry", lineno));
      }
    } else {
      cfg.extra[key] = value;
    }
  }

  if (!explicit_pos.empty()) {
    cfg.positions.assign(cfg.devices, Pos{});
    size_t placed = 0;
    for (const auto& [id, p] : explicit_pos) {
      if (id >= cfg.devices) {
        out.errors.push_back(fmt::format("pos.{} outside device range", id));
      } else {
        cfg.positions[id] = p;
        ++placed;
      }
    }
    if (cfg.placement == Placement::Explicit && placed != static_cast<size_t>(cfg.devices))
      out.errors.push_back(
          fmt::format("explicit placement needs {} positions, got {}", cfg.devices, placed));
  }
  for (const auto& e : cfg.validate()) out.errors.push_back(e);
  return out;
}

}  // namespace xc::sim
