#include "xc/sim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "xc/eval.hpp"
#include "xc/sim/rand.hpp"

namespace xc::sim {

std::vector<std::vector<double>> schedule(const SimConfig& cfg) {
  std::vector<std::vector<double>> times(static_cast<size_t>(cfg.devices));
  for (int d = 0; d < cfg.devices; ++d) {
    SplitMix rng = stream(cfg.seed, "sched", static_cast<std::uint64_t>(d));
    double t = 0.0;
    while (true) {
      t += cfg.period * (1.0 + rng.range(-cfg.jitter, cfg.jitter));
      if (t > cfg.duration) break;
      times[static_cast<size_t>(d)].push_back(t);
    }
  }
  return times;
}

std::vector<std::vector<DeviceId>> neighbours(const std::vector<Pos>& positions, double range) {
  std::vector<std::vector<DeviceId>> out(positions.size());
  for (size_t a = 0; a < positions.size(); ++a)
    for (size_t b = a + 1; b < positions.size(); ++b) {
      double dx = positions[a].x - positions[b].x;
      double dy = positions[a].y - positions[b].y;
      double dz = positions[a].z - positions[b].z;
      if (dx * dx + dy * dy + dz * dz <= range * range) {
        out[a].push_back(static_cast<DeviceId>(b));
        out[b].push_back(static_cast<DeviceId>(a));
      }
    }
  return out;
}

namespace {

double reflect_into(double v, double hi) {
  if (hi <= 0) return 0.0;
  double w = std::fmod(v, 2.0 * hi);
  if (w < 0) w += 2.0 * hi;
  return w <= hi ? w : 2.0 * hi - w;
}

struct StoredTree {
  TreePtr tree;
  EventId event = -1;
  double time = 0.0;
};

}  // namespace

Trace run(const SimConfig& cfg, const ExprPtr& program, SensorPlugin* sensors,
          const RunOptions& opts) {
  {
    auto errs = cfg.validate();
    if (!errs.empty()) throw std::invalid_argument("invalid config: " + errs.front());
  }

  const size_t n = static_cast<size_t>(cfg.devices);
  std::vector<Pos> positions(n);
  if (cfg.placement == Placement::Explicit) {
    positions.assign(cfg.positions.begin(), cfg.positions.end());
  } else {
    for (size_t d = 0; d < n; ++d) {
      SplitMix rng = stream(cfg.seed, "place", d);
      positions[d] = {rng.unit() * cfg.area_w, rng.unit() * cfg.area_h,
                      cfg.dim == 3 ? rng.unit() * cfg.area_d : 0.0};
    }
  }

  struct Pending {
    double time;
    DeviceId device;
    int round;
  };
  std::vector<Pending> queue;
  auto times = schedule(cfg);
  for (size_t d = 0; d < n; ++d)
    for (size_t k = 0; k < times[d].size(); ++k)
      queue.push_back({times[d][k], static_cast<DeviceId>(d), static_cast<int>(k) + 1});
  std::sort(queue.begin(), queue.end(), [](const Pending& a, const Pending& b) {
    if (a.time != b.time) return a.time < b.time;
    return a.device < b.device;
  });

  const double retention = cfg.retention_or_default();
  std::vector<StoredTree> store(n);
  std::vector<double> last_move(n, 0.0);
  std::vector<double> prev_event_time(n, -1.0);

  Trace trace;
  trace.device_count = cfg.devices;
  trace.events.reserve(queue.size());
  trace.results.reserve(queue.size());
  trace.sensors.reserve(queue.size());

  EvalOptions eval_opts;
  eval_opts.check_alignment = opts.check_alignment;

  for (const Pending& ev : queue) {
    const DeviceId d = ev.device;
    const size_t di = static_cast<size_t>(d);
    const EventId id = static_cast<EventId>(trace.events.size());

    if (cfg.mobility == Mobility::Walk && cfg.speed > 0) {
      double dt = ev.time - last_move[di];
      SplitMix rng = stream(cfg.seed, "head", di, static_cast<std::uint64_t>(ev.round));
      double angle = rng.unit() * 2.0 * std::numbers::pi;
      double ux = std::cos(angle), uy = std::sin(angle), uz = 0.0;
      if (cfg.dim == 3) {
        double c = 2.0 * rng.unit() - 1.0;  // uniform direction on the sphere
        double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        ux *= s;
        uy *= s;
        uz = c;
      }
      positions[di].x = reflect_into(positions[di].x + ux * cfg.speed * dt, cfg.area_w);
      positions[di].y = reflect_into(positions[di].y + uy * cfg.speed * dt, cfg.area_h);
      if (cfg.dim == 3)
        positions[di].z = reflect_into(positions[di].z + uz * cfg.speed * dt, cfg.area_d);
    }
    last_move[di] = ev.time;

    // context: non-expired trees of current geometric neighbours, plus the
    // device's own previous tree; one edge per contributor's source event
    TreeEnv::Items items;
    auto consider = [&](DeviceId s) {
      const StoredTree& st = store[static_cast<size_t>(s)];
      if (!st.tree) return;
      if (ev.time - st.time > retention) return;
      items.emplace_back(s, st.tree);
      trace.edges.emplace_back(st.event, id);
    };
    consider(d);
    for (size_t o = 0; o < n; ++o) {
      if (static_cast<DeviceId>(o) == d) continue;
      double dx = positions[di].x - positions[o].x;
      double dy = positions[di].y - positions[o].y;
      double dz = positions[di].z - positions[o].z;
      if (dx * dx + dy * dy + dz * dz <= cfg.range * cfg.range) consider(static_cast<DeviceId>(o));
    }
    TreeEnv env(std::move(items));

    SensorState st;
    st.scalars["current_time"] = Local::real(ev.time);
    st.scalars["pos_x"] = Local::real(positions[di].x);
    st.scalars["pos_y"] = Local::real(positions[di].y);
    if (cfg.dim == 3) st.scalars["pos_z"] = Local::real(positions[di].z);
    if (sensors) {
      SensorContext ctx;
      ctx.device = d;
      ctx.round = ev.round;
      ctx.time = ev.time;
      ctx.prev_time = prev_event_time[di];
      ctx.positions = &positions;
      ctx.cfg = &cfg;
      sensors->scalars(ctx, st.scalars);
    }
    NValue::Overrides dist_over, uid_over;
    for (const auto& [s, tree] : env.items()) {
      (void)tree;
      double dist = 0.0;
      if (s != d) {
        double dx = positions[di].x - positions[static_cast<size_t>(s)].x;
        double dy = positions[di].y - positions[static_cast<size_t>(s)].y;
        double dz = positions[di].z - positions[static_cast<size_t>(s)].z;
        dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      }
      dist_over.emplace_back(s, Local::real(dist));
      uid_over.emplace_back(s, Local::device(s));
    }
    st.relational["nbr_dist"] =
        NValue(Local::real(std::numeric_limits<double>::infinity()), std::move(dist_over));
    st.relational["nbr_uid"] = NValue(Local::device(d), std::move(uid_over));

    prev_event_time[di] = ev.time;

    trace.events.push_back(Event{id, d, ev.time, ev.round});
    trace.sensors.push_back(st);
    try {
      EvalResult r = evaluate(d, env, st, program, eval_opts);
      store[di] = StoredTree{r.tree, id, ev.time};
      trace.results.emplace_back(std::move(r.value));
      trace.trees.push_back(opts.record_trees ? r.tree : nullptr);
    } catch (const EvalError&) {
      // fault tolerance: the round is lost, no message goes out
      trace.results.emplace_back(std::nullopt);
      trace.trees.push_back(nullptr);
    }
  }
  return trace;
}

}  // namespace xc::sim
