#include "xc/scenarios/metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <ostream>
#include <stdexcept>

namespace xc::scenarios {

double TimeSeries::peak() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, v);
  return m;
}

double TimeSeries::at_time(double t) const {
  if (values.empty() || t < t0) return 0.0;
  size_t i = static_cast<size_t>(std::floor((t - t0) / dt + 1e-9));
  if (i >= values.size()) i = values.size() - 1;
  return values[i];
}

namespace {

size_t sample_count(double dt, double duration) {
  return static_cast<size_t>(std::floor(duration / dt + 1e-9)) + 1;
}

// Walks each device's event list once while sampling; extract() maps a
// recorded result to the sampled value, missing events map to fallback.
template <typename Extract>
TimeSeries sample_latest(const sim::Trace& t, double dt, double duration, std::string name,
                         double fallback, Extract extract) {
  TimeSeries out;
  out.name = std::move(name);
  out.dt = dt;
  size_t samples = sample_count(dt, duration);
  out.values.assign(samples, 0.0);

  std::vector<std::vector<size_t>> per_dev(static_cast<size_t>(t.device_count));
  for (size_t i = 0; i < t.events.size(); ++i)
    per_dev[static_cast<size_t>(t.events[i].device)].push_back(i);

  std::vector<double> latest(static_cast<size_t>(t.device_count), fallback);
  std::vector<size_t> cursor(static_cast<size_t>(t.device_count), 0);
  for (size_t s = 0; s < samples; ++s) {
    double now = out.t0 + static_cast<double>(s) * dt;
    double acc = 0.0;
    for (size_t d = 0; d < per_dev.size(); ++d) {
      while (cursor[d] < per_dev[d].size() && t.events[per_dev[d][cursor[d]]].time <= now) {
        size_t i = per_dev[d][cursor[d]];
        latest[d] = t.results[i] ? extract(*t.results[i], t.events[i].device) : fallback;
        ++cursor[d];
      }
      acc += latest[d];
    }
    out.values[s] = acc / static_cast<double>(t.device_count);
  }
  return out;
}

}  // namespace

TimeSeries metric_aproc(const sim::Trace& t, double dt, double duration) {
  return sample_latest(t, dt, duration, "aproc", 0.0, [](const NValue& w, DeviceId d) {
    const Local& v = w.get(d);
    return v.kind() == Kind::Map ? static_cast<double>(v.as_map().size()) : 0.0;
  });
}

TimeSeries metric_truth_fraction(const sim::Trace& t, int idx, double dt, double duration,
                                 std::string name) {
  return sample_latest(t, dt, duration, std::move(name), 0.0,
                       [idx](const NValue& w, DeviceId d) {
                         Local v = w.get(d);
                         for (int k = 0; k < idx && v.kind() == Kind::Pair; ++k)
                           v = v.as_pair().second;
                         if (idx < 3 && v.kind() == Kind::Pair) v = v.as_pair().first;
                         return v.kind() == Kind::Bool && v.as_bool() ? 1.0 : 0.0;
                       });
}

std::optional<double> delivery_time(const sim::Trace& t, DeviceId target, const Local& key) {
  for (size_t i = 0; i < t.events.size(); ++i) {
    if (t.events[i].device != target || !t.results[i]) continue;
    const Local& v = t.results[i]->get(target);
    if (v.kind() != Kind::Map) continue;
    const auto& m = v.as_map();
    auto it = std::lower_bound(m.begin(), m.end(), key,
                               [](const auto& e, const Local& k) { return e.first < k; });
    if (it != m.end() && it->first == key) return t.events[i].time;
  }
  return std::nullopt;
}

void export_csv(const std::vector<TimeSeries>& series, std::ostream& out) {
  for (const auto& s : series)
    if (s.values.size() != series.front().values.size() || s.dt != series.front().dt)
      throw std::invalid_argument("csv export requires equal-shape series");
  out << "time";
  for (const auto& s : series) out << ',' << s.name;
  out << '\n';
  size_t n = series.empty() ? 0 : series.front().values.size();
  for (size_t i = 0; i < n; ++i) {
    out << fmt::format("{}", series.front().t0 + static_cast<double>(i) * series.front().dt);
    for (const auto& s : series) out << ',' << fmt::format("{}", s.values[i]);
    out << '\n';
  }
}

bool export_csv_file(const std::vector<TimeSeries>& series, const std::string& path,
                     std::string* error) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    if (error) *error = "cannot open " + path + " for writing";
    return false;
  }
  export_csv(series, f);
  if (!f.good()) {
    if (error) *error = "write failed for " + path;
    return false;
  }
  return true;
}

TimeSeries mean_series(const std::vector<TimeSeries>& runs) {
  if (runs.empty()) return {};
  TimeSeries out = runs.front();
  for (size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].values.size() != out.values.size())
      throw std::invalid_argument("mean over series of different lengths");
    for (size_t i = 0; i < out.values.size(); ++i) out.values[i] += runs[r].values[i];
  }
  for (double& v : out.values) v /= static_cast<double>(runs.size());
  return out;
}

}  // namespace xc::scenarios
