#pragma once

#include <memory>
#include <string>
#include <vector>

#include "xc/scenarios/metrics.hpp"
#include "xc/sim/sim.hpp"

namespace xc::scenarios {

// A process key for the message-propagation studies:
// (from, (to, (payload, creation-time))).
Local make_message_key(DeviceId from, DeviceId to, const std::string& payload, double creation);
DeviceId message_to(const Local& key);

struct Scenario {
  std::string name;
  ExprPtr program;
  std::unique_ptr<sim::SensorPlugin> sensors;
};

// Builds the scenario named by cfg.extra["scenario"]:
//   sphere      one message flooded outward from gen.from, exits after a round
//   tree        same message routed along a distributed spanning tree
//   multi       gen.count generators inject messages with prob gen.prob per
//               round during [gen.start, gen.end]
//   monitoring  critic / ever-critic / somewhere (distance) / somewhere
//               (replicated) predicates per device
// Throws std::invalid_argument on unknown names.
Scenario make_scenario(const sim::SimConfig& cfg);

// The per-scenario series written to metrics.csv.
std::vector<TimeSeries> scenario_metrics(const std::string& scenario_name,
                                         const sim::SimConfig& cfg, const sim::Trace& trace);

// The configured single message of the sphere/tree scenarios.
Local configured_message(const sim::SimConfig& cfg);
double configured_gen_time(const sim::SimConfig& cfg);

}  // namespace xc::scenarios
