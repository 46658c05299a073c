#include "xc/scenarios/scenarios.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "xc/sim/rand.hpp"
#include "xc/stdlib.hpp"

namespace xc::scenarios {

Local make_message_key(DeviceId from, DeviceId to, const std::string& payload, double creation) {
  return Local::pair(Local::device(from),
                     Local::pair(Local::device(to),
                                 Local::pair(Local::text(payload), Local::real(creation))));
}

DeviceId message_to(const Local& key) { return key.as_pair().second.as_pair().first.as_device(); }

namespace {

std::string real_lit(double x) {
  std::string s = fmt::format("{}", x);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos) s += ".0";
  return s;
}

// Process body shared by the sphere scenario: flood outward, mark the known
// senders so the wave never walks back, leave after one round.
const char* kSphereProgram = R"XC(
val res = spawn((m) => (
  val to = fst(snd(m));
  val round = counter();
  val seen = exchange(false, (q) => pair(q, true));
  val status = if (to == uid()) { false } else {
    if (round == 1) { updateSelf(updateDefault(nmap((q) => false, seen), true), true) }
    else { false } };
  pair(sense("current_time"), status)
), sense("gen_keys"));
res
)XC";

// Routed variant: only the parent link and the child whose below-set holds
// the destination are invited.
const char* kTreeProgram = R"XC(
val t = spanningTree(sense("is_root"));
val myParent = fst(snd(self(t)));
val nvParent = nmap((x) => fst(snd(x)), t);
val nvBelow = nmap((x) => snd(snd(x)), t);
val nvId = nsense("nbr_uid");
val res = spawn((m) => (
  val to = fst(snd(m));
  val round = counter();
  val nvUp = nmap((d) => d == myParent, nvId);
  val nvDown = nmap((p, s) => (p == uid()) and setHas(s, to), nvParent, nvBelow);
  val status = if (to == uid()) { false } else {
    if (round == 1) { updateDefault(nvUp or nvDown, false) } else { false } };
  pair(sense("current_time"), status)
), sense("gen_keys"));
res
)XC";

class MessagePlugin : public sim::SensorPlugin {
 public:
  MessagePlugin(DeviceId from, Local key, double gen_time, std::optional<DeviceId> root)
      : from_(from), key_(std::move(key)), gen_time_(gen_time), root_(root) {}

  void scalars(const sim::SensorContext& ctx, std::map<std::string, Local>& out) override {
    if (root_) out["is_root"] = Local::boolean(ctx.device == *root_);
    bool fire = ctx.device == from_ && ctx.time >= gen_time_ && ctx.prev_time < gen_time_;
    out["gen_keys"] = fire ? Local::set({key_}) : Local::set({});
  }

 private:
  DeviceId from_;
  Local key_;
  double gen_time_;
  std::optional<DeviceId> root_;
};

class MultiMessagePlugin : public sim::SensorPlugin {
 public:
  MultiMessagePlugin(int generators, double prob, double start, double end)
      : generators_(generators), prob_(prob), start_(start), end_(end) {}

  void scalars(const sim::SensorContext& ctx, std::map<std::string, Local>& out) override {
    out["gen_keys"] = Local::set({});
    if (ctx.device >= generators_ || ctx.time < start_ || ctx.time > end_) return;
    sim::SplitMix rng = sim::stream(ctx.cfg->seed, "gen", static_cast<std::uint64_t>(ctx.device),
                                    static_cast<std::uint64_t>(ctx.round));
    if (rng.unit() >= prob_) return;
    auto dest = static_cast<DeviceId>(rng.below(static_cast<std::uint64_t>(ctx.cfg->devices - 1)));
    if (dest >= ctx.device) ++dest;  // uniform over devices != self
    out["gen_keys"] = Local::set({make_message_key(ctx.device, dest, "msg", ctx.time)});
  }

 private:
  DeviceId generators_;
  double prob_;
  double start_;
  double end_;
};

class CriticPlugin : public sim::SensorPlugin {
 public:
  CriticPlugin(double start, double end, bool select_center, DeviceId fixed)
      : start_(start), end_(end), select_center_(select_center), fixed_(fixed) {}

  void scalars(const sim::SensorContext& ctx, std::map<std::string, Local>& out) override {
    if (!chosen_ && ctx.time >= start_) {
      if (select_center_) {
        double cx = ctx.cfg->area_w / 2.0, cy = ctx.cfg->area_h / 2.0;
        double cz = ctx.cfg->dim == 3 ? ctx.cfg->area_d / 2.0 : 0.0;
        double best = std::numeric_limits<double>::infinity();
        DeviceId best_d = 0;
        for (size_t d = 0; d < ctx.positions->size(); ++d) {
          double dx = (*ctx.positions)[d].x - cx;
          double dy = (*ctx.positions)[d].y - cy;
          double dz = (*ctx.positions)[d].z - cz;
          double dist = dx * dx + dy * dy + dz * dz;
          if (dist < best) {
            best = dist;
            best_d = static_cast<DeviceId>(d);
          }
        }
        chosen_ = best_d;
      } else {
        chosen_ = fixed_;
      }
    }
    bool critic =
        chosen_ && ctx.device == *chosen_ && ctx.time >= start_ && ctx.time <= end_;
    out["critic"] = Local::boolean(critic);
  }

 private:
  double start_;
  double end_;
  bool select_center_;
  DeviceId fixed_;
  std::optional<DeviceId> chosen_;
};

}  // namespace

Local configured_message(const sim::SimConfig& cfg) {
  auto from = static_cast<DeviceId>(cfg.extra_num("gen.from", 0));
  auto to = static_cast<DeviceId>(cfg.extra_num("gen.to", cfg.devices - 1));
  return make_message_key(from, to, "msg", configured_gen_time(cfg));
}

double configured_gen_time(const sim::SimConfig& cfg) {
  double t = cfg.extra_num("gen.time", 10.0);
  if (cfg.extra_or("scenario", "") == "tree") {
    double warmup = cfg.extra_num("tree.warmup", 20.0) * cfg.period;
    t = std::max(t, warmup);
  }
  return t;
}

Scenario make_scenario(const sim::SimConfig& cfg) {
  std::string name = cfg.extra_or("scenario", "");
  Scenario s;
  s.name = name;
  if (name == "sphere" || name == "tree") {
    auto from = static_cast<DeviceId>(cfg.extra_num("gen.from", 0));
    Local key = configured_message(cfg);
    std::optional<DeviceId> root;
    if (name == "tree") root = static_cast<DeviceId>(cfg.extra_num("tree.root", 0));
    s.program = lib::compile_program(name == "tree" ? kTreeProgram : kSphereProgram);
    s.sensors = std::make_unique<MessagePlugin>(from, key, configured_gen_time(cfg), root);
    return s;
  }
  if (name == "multi") {
    int gens = static_cast<int>(cfg.extra_num("gen.count", 10));
    gens = std::min(gens, cfg.devices);
    s.program = lib::compile_program(kSphereProgram);
    s.sensors = std::make_unique<MultiMessagePlugin>(gens, cfg.extra_num("gen.prob", 0.05),
                                                     cfg.extra_num("gen.start", 1.0),
                                                     cfg.extra_num("gen.end", 25.0));
    return s;
  }
  if (name == "monitoring") {
    int replicas = static_cast<int>(cfg.extra_num("mon.replicas", 5));
    double diameter = cfg.extra_num("mon.diameter", 900.0);
    double infospeed = cfg.extra_num("mon.infospeed", 50.0);
    std::string body = fmt::format(
        "val c = sense(\"critic\");\n"
        "val everC = ep(c);\n"
        "val slcsC = somewhereSlcs(c, {dia});\n"
        "val replC = somewhereRep(c, {n}, {dia}, {v});\n"
        "pair(c, pair(everC, pair(slcsC, replC)))\n",
        fmt::arg("dia", real_lit(diameter)), fmt::arg("n", replicas),
        fmt::arg("v", real_lit(infospeed)));
    s.program = lib::compile_program(body);
    s.sensors = std::make_unique<CriticPlugin>(
        cfg.extra_num("critic.start", 20.0), cfg.extra_num("critic.end", 25.0),
        cfg.extra_or("critic.select", "center") == "center",
        static_cast<DeviceId>(cfg.extra_num("critic.device", 0)));
    return s;
  }
  throw std::invalid_argument("unknown scenario '" + name + "'");
}

std::vector<TimeSeries> scenario_metrics(const std::string& scenario_name,
                                         const sim::SimConfig& cfg, const sim::Trace& trace) {
  double dt = cfg.extra_num("sample.dt", 0.5);
  if (scenario_name == "monitoring") {
    return {metric_truth_fraction(trace, 0, dt, cfg.duration, "critic"),
            metric_truth_fraction(trace, 1, dt, cfg.duration, "ever_critic"),
            metric_truth_fraction(trace, 2, dt, cfg.duration, "somewhere_slcs"),
            metric_truth_fraction(trace, 3, dt, cfg.duration, "somewhere_replicated")};
  }
  return {metric_aproc(trace, dt, cfg.duration)};
}

}  // namespace xc::scenarios
