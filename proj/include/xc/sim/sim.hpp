#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "xc/expr.hpp"
#include "xc/sim/config.hpp"
#include "xc/sim/trace.hpp"

namespace xc::sim {

// Snapshot handed to scenario sensor plugins when an event fires.
struct SensorContext {
  DeviceId device = 0;
  int round = 0;
  double time = 0.0;
  double prev_time = -1.0;  // previous event of this device; < 0 on round 1
  const std::vector<Pos>* positions = nullptr;
  const SimConfig* cfg = nullptr;
};

// Supplies scenario-specific scalar sensors per event. Implementations must
// be deterministic functions of (seed, device, round) and may keep caches,
// since the run loop is sequential and in deterministic order.
class SensorPlugin {
 public:
  virtual ~SensorPlugin() = default;
  virtual void scalars(const SensorContext& ctx, std::map<std::string, Local>& out) {
    (void)ctx;
    (void)out;
  }
};

struct RunOptions {
  bool record_trees = false;
  bool check_alignment = false;
};

// Per-device round times: round k+1 fires period*(1 + U(-jitter, +jitter))
// after round k. Fully determined by the seed.
std::vector<std::vector<double>> schedule(const SimConfig& cfg);

// Closed-ball neighbourhood: d' != d with euclidean distance <= range.
std::vector<std::vector<DeviceId>> neighbours(const std::vector<Pos>& positions, double range);

// Runs the whole simulation: processes the schedule in (time, device) order,
// interleaving movement and round execution, and returns the complete trace.
// Throws std::invalid_argument on config errors; per-event evaluation errors
// are recorded as failed events and the run continues.
Trace run(const SimConfig& cfg, const ExprPtr& program, SensorPlugin* sensors = nullptr,
          const RunOptions& opts = {});

}  // namespace xc::sim
