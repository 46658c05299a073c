#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "xc/sim/trace.hpp"

namespace xc::scenarios {

// Uniformly sampled series: value i is at time t0 + i*dt.
struct TimeSeries {
  std::string name;
  double t0 = 0.0;
  double dt = 0.5;
  std::vector<double> values;

  double peak() const;
  double at_time(double t) const;  // nearest sample at or before t
};

// Mean over devices of the number of active process keys at each device's
// latest event at or before the sample time. Devices that have not fired
// yet (or whose round failed) count zero keys.
TimeSeries metric_aproc(const sim::Trace& t, double dt, double duration);

// Fraction of devices whose latest-event result holds `true` at position
// `idx` of the right-nested result tuple (arity 4 in the monitoring
// program).
TimeSeries metric_truth_fraction(const sim::Trace& t, int idx, double dt, double duration,
                                 std::string name);

// First time the target device runs the given process key; empty if never.
std::optional<double> delivery_time(const sim::Trace& t, DeviceId target, const Local& key);

// time,<name1>,<name2>,... with full-precision round-trippable numbers.
// Series must share t0, dt and length.
void export_csv(const std::vector<TimeSeries>& series, std::ostream& out);
bool export_csv_file(const std::vector<TimeSeries>& series, const std::string& path,
                     std::string* error);

// Pointwise mean across runs of the same shape.
TimeSeries mean_series(const std::vector<TimeSeries>& runs);

}  // namespace xc::scenarios
