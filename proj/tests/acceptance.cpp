// Acceptance driver: one PASS/FAIL line per criterion, non-zero exit when
// any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "daas/cli/metrics.hpp"
#include "daas/cli/replay.hpp"
#include "daas/cli/runner.hpp"
#include "daas/cli/trace.hpp"
#include "daas/controlplane/service.hpp"
#include "daas/core/wire.hpp"
#include "daas/navigation/scheduler.hpp"
#include "oracles.hpp"

using namespace daas;
namespace fs = std::filesystem;
namespace t = daas::testing;

namespace {

// Collects failures for one criterion; the first few are reported.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_.push_back(s); }
  bool pass() const { return failures_.empty(); }
  std::string detail() const {
    std::ostringstream out;
    const auto& list = pass() ? notes_ : failures_;
    for (std::size_t i = 0; i < list.size() && i < 4; ++i) out << (i ? "; " : "") << list[i];
    if (list.size() > 4) out << "; +" << list.size() - 4 << " more";
    return out.str();
  }

 private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int precision = 2) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(precision) << v;
  return out.str();
}

std::string read(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + DAAS_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::vector<t::Point> points_of(const std::vector<Waypoint>& wps) {
  std::vector<t::Point> out;
  for (const auto& w : wps) out.push_back(t::Point{w.id, w.target.x(), w.target.y()});
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

bool unique(const std::vector<std::string>& v) {
  auto s = sorted(v);
  return std::adjacent_find(s.begin(), s.end()) == s.end();
}

std::string event_of(const std::string& reason) { return reason.substr(0, reason.find(':')); }

struct Timed {
  cli::SimulationResult result;
  double wall_seconds = 0.0;
};

Timed timed_run(const std::string& name) {
  const auto scenario = t::load(name);
  const auto start = std::chrono::steady_clock::now();
  Timed out{cli::simulate(scenario), 0.0};
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

void common_run_checks(Check& c, const std::string& name, const Timed& run) {
  c.expect(run.wall_seconds < 30.0, name + " took " + fmt(run.wall_seconds) + " s wall");
  const auto path = t::check_state_path(run.result.events);
  c.expect(path.empty(), name + ": " + path);
}

// ---- criteria ----

Check five_patterns() {
  Check c;
  double slowest = 0.0;

  {
    const auto run = timed_run("farm_survey");
    common_run_checks(c, "farm_survey", run);
    slowest = std::max(slowest, run.wall_seconds);
    const auto visits = t::visit_ids(run.result.events);
    c.expect(sorted(visits) == std::vector<std::string>{"wp1", "wp2", "wp3", "wp4"} && unique(visits),
             "static: visits were not wp1..wp4 once each");
    std::size_t injects = 0;
    for (const auto& cmd : t::records<CommandEvent>(run.result.events)) {
      if (cmd.kind != "inject_batch") continue;
      ++injects;
      c.expect(!cmd.accepted, "static: an injection was accepted");
    }
    c.expect(injects > 0, "static: no injection was attempted");
    c.note("static 4/4 visits, " + std::to_string(injects) + " injection refused");
  }

  {
    const auto run = timed_run("disaster_survey");
    common_run_checks(c, "disaster_survey", run);
    slowest = std::max(slowest, run.wall_seconds);
    const auto visits = t::visit_ids(run.result.events);
    c.expect(sorted(visits) == std::vector<std::string>{"d1", "d2", "d3", "d4", "r1", "r2", "r3"} && unique(visits),
             "dynamic: visits were not the 4 + 3 waypoints once each");
    c.note("dynamic " + std::to_string(visits.size()) + "/7 visits");
  }

  {
    const auto scenario = t::load("vip_follow");
    const auto run = timed_run("vip_follow");
    common_run_checks(c, "vip_follow", run);
    slowest = std::max(slowest, run.wall_seconds);
    c.expect(scenario.batches.empty(), "sensor-driven: scenario pre-loads waypoints");
    for (const auto& q : t::records<QueueEvent>(run.result.events)) {
      c.expect(q.op != "add" && q.op != "dispatch", "sensor-driven: queue " + q.op + " at " + fmt(q.sim_time));
    }
    std::size_t moving = 0;
    for (const auto& tel : t::records<TelemetryEvent>(run.result.events)) {
      if (std::hypot(tel.velocity.x(), tel.velocity.y()) <= 1e-9) continue;
      ++moving;
      c.expect(tel.state == MissionState::Tracking,
               "sensor-driven: horizontal motion in state " + std::string(to_string(tel.state)) + " at " +
                   fmt(tel.sim_time));
    }
    c.expect(moving > 0, "sensor-driven: the drone never moved");
    c.note("sensor-driven 0 waypoints, " + std::to_string(moving) + " moving samples all while tracking");
  }

  for (const std::string name : {"survey_inspection", "surveillance_tracking"}) {
    const auto run = timed_run(name);
    common_run_checks(c, name, run);
    slowest = std::max(slowest, run.wall_seconds);
    const auto& events = run.result.events;
    const auto visits = t::records<VisitEvent>(events);
    auto visit_time = [&](const std::string& id) -> std::optional<double> {
      for (const auto& v : visits) {
        if (v.id == id) return v.sim_time;
      }
      return std::nullopt;
    };
    std::size_t preempts = 0;
    for (const auto& q : t::records<QueueEvent>(events)) {
      if (q.op == "preempt") {
        ++preempts;
        for (const auto& id : q.ids) {
          const auto when = visit_time(id);
          c.expect(when && *when > q.sim_time, name + ": suspended " + id + " was not restored and visited");
        }
      }
      if (q.op == "add" && q.priority == 1 && q.sim_time > 0.0) {
        std::optional<double> last_p1;
        for (const auto& id : q.ids) {
          const auto when = visit_time(id);
          c.expect(when.has_value(), name + ": priority-1 " + id + " never visited");
          if (when) last_p1 = std::max(last_p1.value_or(0.0), *when);
        }
        for (const auto& v : visits) {
          if (v.sim_time <= q.sim_time || std::find(q.ids.begin(), q.ids.end(), v.id) != q.ids.end()) continue;
          c.expect(last_p1 && v.sim_time > *last_p1,
                   name + ": priority-2 " + v.id + " visited before the priority-1 batch finished");
        }
      }
    }
    c.expect(preempts > 0, name + ": no preemption happened");
    c.note(name + " " + std::to_string(preempts) + " preemption restored");
  }

  for (const std::string name : {"search_rescue", "tower_inspection"}) {
    const auto run = timed_run(name);
    common_run_checks(c, name, run);
    slowest = std::max(slowest, run.wall_seconds);
    const auto& events = run.result.events;
    // Pending at the abort: added and not yet visited, in stream order, before the clear record.
    std::set<std::string> pending;
    std::vector<std::string> cleared;
    std::size_t after = 0;
    bool aborted = false;
    for (const auto& e : events) {
      if (const auto* q = std::get_if<QueueEvent>(&e)) {
        if (q->op == "clear" && !aborted) {
          aborted = true;
          cleared = q->ids;
        } else if (q->op == "add" && !aborted) {
          pending.insert(q->ids.begin(), q->ids.end());
        }
      }
      if (const auto* v = std::get_if<VisitEvent>(&e)) {
        if (!aborted) {
          pending.erase(v->id);
          continue;
        }
        ++after;
        c.expect(!pending.contains(v->id), name + ": visited pre-abort waypoint " + v->id + " after the abort");
      }
    }
    c.expect(aborted, name + ": never aborted");
    c.expect(!pending.empty(), name + ": nothing was pending at the abort");
    c.expect(std::set<std::string>(cleared.begin(), cleared.end()) == pending,
             name + ": clear record does not name the pending waypoints");
    if (name == "search_rescue") {
      bool tracked = false;
      for (const auto& s : t::records<StatStreamEvent>(events)) tracked |= s.to_state == MissionState::Tracking;
      c.expect(tracked, name + ": never entered tracking");
    }
    c.note(name + " " + std::to_string(pending.size()) + " cleared, " + std::to_string(after) + " visited after");
  }
  c.note("slowest " + fmt(slowest, 3) + " s wall");
  return c;
}

Check nearest_neighbor() {
  Check c;
  const std::vector<Waypoint> farm = {
      Waypoint{"wp1", Position3(20, 20, 10), 0.0, WaypointFrame::Absolute, std::nullopt},
      Waypoint{"wp2", Position3(20, 100, 10), 0.0, WaypointFrame::Absolute, std::nullopt},
      Waypoint{"wp3", Position3(60, 100, 10), 0.0, WaypointFrame::Absolute, std::nullopt},
      Waypoint{"wp4", Position3(60, 20, 10), 0.0, WaypointFrame::Absolute, std::nullopt}};
  const Position3 start(0, 0, 10);
  const auto nn = navigation::NearestNeighborScheduler().order(farm, start);
  std::vector<std::string> order;
  for (const auto& w : nn) order.push_back(w.id);
  c.expect(order == std::vector<std::string>{"wp1", "wp4", "wp3", "wp2"}, "NN order differs");
  const double nn_len = t::tour_length(0, 0, points_of(nn));
  const double ordered_len = t::tour_length(0, 0, points_of(farm));
  c.expect(std::abs(nn_len - 188.28) <= 0.01, "NN tour " + fmt(nn_len, 4));
  c.expect(std::abs(ordered_len - 228.28) <= 0.01, "ordered tour " + fmt(ordered_len, 4));
  const double best = t::brute_force_best(0, 0, points_of(farm));
  c.expect(std::abs(best - nn_len) <= 1e-9, "brute force found " + fmt(best, 4));

  // End to end through the engine and the metrics report.
  auto ordered_scenario = t::load("farm_survey");
  auto nn_scenario = ordered_scenario;
  nn_scenario.scheduler = "nearest_neighbor";
  const auto ordered_report = cli::compute_metrics(cli::simulate(ordered_scenario).events);
  const auto nn_report = cli::compute_metrics(cli::simulate(nn_scenario).events);
  c.expect(nn_report.visit_order == order, "engine NN visit order differs");
  c.expect(std::abs(nn_report.tour_length - nn_len) <= 0.01, "engine NN tour " + fmt(nn_report.tour_length, 4));
  c.expect(std::abs(ordered_report.tour_length - ordered_len) <= 0.01,
           "engine ordered tour " + fmt(ordered_report.tour_length, 4));

  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> count(4, 8);
  std::uniform_real_distribution<double> coord(-150.0, 150.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Waypoint> wps;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) {
      wps.push_back(Waypoint{"q" + std::to_string(i), Position3(coord(rng), coord(rng), 10), 0.0,
                             WaypointFrame::Absolute, std::nullopt});
    }
    const Position3 from(coord(rng), coord(rng), 10);
    const auto got = navigation::NearestNeighborScheduler().order(wps, from);
    const auto err = t::check_greedy(from.x(), from.y(), points_of(wps), points_of(got));
    c.expect(err.empty(), "trial " + std::to_string(trial) + ": " + err);
  }

  const auto cmp = cli::compare_schedulers(t::load("disaster_survey"), {"ordered", "nearest_neighbor"});
  const double savings = cmp.rows[0].tour_length - cmp.rows[1].tour_length;
  c.expect(cmp.identical_visit_sets, "disaster: schedulers visited different sets");
  c.expect(savings > 0.0, "disaster: savings " + fmt(savings));
  c.note("NN " + fmt(nn_len) + " m vs ordered " + fmt(ordered_len) + " m");
  c.note("200 random sets greedy and permutation");
  c.note("disaster savings " + fmt(savings) + " m");
  return c;
}

Check overhead_budget() {
  Check c;
  const auto scenario = t::load("vip_follow");
  double camera_rate = 0.0;
  for (const auto& s : scenario.sensors) {
    if (s.kind == sensing::SensorKind::Camera) camera_rate = s.rate;
  }
  c.expect(camera_rate == 15.0, "camera runs at " + fmt(camera_rate) + " FPS");
  controlplane::MissionService service;
  const auto h = service.start_mission(scenario);
  service.wait(h.mission_id);
  try {
    const auto report = service.overhead_report(h.mission_id);
    c.expect(report.frames >= 1000, "only " + std::to_string(report.frames) + " frames");
    c.expect(report.median_ms <= 20.0, "median " + fmt(report.median_ms, 4) + " ms");
    c.expect(std::isfinite(report.p95_ms) && report.p95_ms >= report.median_ms, "p95 missing");
    c.note("median " + fmt(report.median_ms, 4) + " ms, p95 " + fmt(report.p95_ms, 4) + " ms over " +
           std::to_string(report.frames) + " frames at " + fmt(camera_rate, 0) + " FPS");
  } catch (const Error& e) {
    c.expect(false, e.what());
  }
  return c;
}

Check follow_convergence() {
  Check c;
  for (const double speed : {0.5, 0.75, 1.0}) {
    const auto scenario = navigation::parse_scenario(t::follow_scenario_json(speed, 70.0));
    const auto run = cli::simulate(scenario);
    const double fraction = t::follow_fraction(run.events, speed, 10.0, 70.0);
    c.expect(fraction >= 0.95, fmt(speed) + " m/s: " + fmt(100 * fraction, 1) + " % in band");
    c.note(fmt(speed) + " m/s " + fmt(100 * fraction, 1) + " %");
  }
  return c;
}

Check determinism(const fs::path& a, const fs::path& b) {
  Check c;
  for (const auto& name : t::acceptance_scenarios()) {
    const auto first = cli::simulate(t::load(name)).trace;
    const auto second = cli::simulate(t::load(name)).trace;
    c.expect(first == second, name + ": in-process traces differ");
    c.expect(run_cli("run \"" + t::scenario_path(name) + "\" --out \"" + a.string() + "\"") != 2 &&
                 run_cli("run \"" + t::scenario_path(name) + "\" --out \"" + b.string() + "\"") != 2,
             name + ": run failed");
    const std::string file = name + ".trace.ndjson";
    const std::string text = read(a / file);
    c.expect(!text.empty() && text == read(b / file), name + ": trace files differ");
  }
  c.note(std::to_string(t::acceptance_scenarios().size()) + " scenarios byte-identical");
  return c;
}

Check fsm_integrity(const fs::path& traces) {
  Check c;
  const auto [checked, mismatch] = t::walk_fsm(sensing::TransitionTable::standard());
  c.expect(mismatch.empty(), mismatch);
  c.expect(checked == 13 * 14, "walked " + std::to_string(checked) + " pairs");
  for (const auto e : sensing::kAllMissionEvents) {
    c.expect(!sensing::TransitionTable::standard().next(MissionState::Landed, e),
             "landed leaves on " + std::string(sensing::to_string(e)));
  }
  std::set<std::tuple<std::string, std::string, std::string>> allowed(t::expected_transitions().begin(),
                                                                        t::expected_transitions().end());
  for (const auto& name : t::acceptance_scenarios()) {
    const auto events = cli::read_trace_file((traces / (name + ".trace.ndjson")).string());
    const auto path = t::check_state_path(events);
    c.expect(path.empty(), name + ": " + path);
    for (const auto& s : t::records<StatStreamEvent>(events)) {
      const auto edge = std::make_tuple(std::string(to_string(s.from_state)), event_of(s.reason),
                                        std::string(to_string(s.to_state)));
      c.expect(allowed.contains(edge), name + ": edge " + std::get<0>(edge) + " --" + std::get<1>(edge) + "--> " +
                                           std::get<2>(edge) + " not in the table");
    }
  }
  c.note(std::to_string(checked) + " pairs walked");
  c.note("all traces Init to Landed");
  return c;
}

Check queue_oracle() {
  Check c;
  const auto err = t::run_queue_oracle(7, 10000);
  c.expect(err.empty(), err);
  c.note("10000 sequences agree");
  return c;
}

Check replay(const fs::path& traces, const fs::path& scratch) {
  Check c;
  for (const auto& name : t::acceptance_scenarios()) {
    const fs::path file = traces / (name + ".trace.ndjson");
    c.expect(run_cli("replay \"" + file.string() + "\"") == 0, name + ": replay did not pass");
  }
  // Teleport: shift one mid-flight telemetry pose by 30 m.
  const auto lines = cli::read_trace_file((traces / "disaster_survey.trace.ndjson").string());
  std::ofstream out(scratch / "teleport.ndjson", std::ios::binary);
  std::size_t telemetry = 0;
  for (auto e : lines) {
    if (auto* tel = std::get_if<TelemetryEvent>(&e); tel && ++telemetry == 2000) tel->pose.x() += 30.0;
    out << serialize_event(e) << "\n";
  }
  out.close();
  c.expect(run_cli("replay \"" + (scratch / "teleport.ndjson").string() + "\"") == 3, "teleport trace was not flagged");
  bool speed_flag = false;
  for (const auto& v : cli::verify_trace(cli::read_trace_file((scratch / "teleport.ndjson").string())).violations) {
    speed_flag |= v.check == "speed_clamp";
  }
  c.expect(speed_flag, "teleport not attributed to the speed clamp");
  c.note(std::to_string(t::acceptance_scenarios().size()) + " traces pass");
  c.note("teleport flagged (exit 3, speed_clamp)");
  return c;
}

}  // namespace

int main() {
  const fs::path root = fs::temp_directory_path() / ("daas_acceptance_" + std::to_string(::getpid()));
  const fs::path run_a = root / "a";
  const fs::path run_b = root / "b";
  fs::create_directories(run_a);
  fs::create_directories(run_b);

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"five_pattern_conformance", five_patterns},
      {"nn_scheduler", nearest_neighbor},
      {"overhead_budget", overhead_budget},
      {"follow_convergence", follow_convergence},
      {"determinism", [&] { return determinism(run_a, run_b); }},
      {"fsm_integrity", [&] { return fsm_integrity(run_a); }},
      {"queue_oracle", queue_oracle},
      {"replay_verification", [&] { return replay(run_a, root); }},
  };

  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.expect(false, std::string("exception: ") + e.what());
    }
    std::cout << (result.pass() ? "PASS " : "FAIL ") << name << ": " << result.detail() << std::endl;
    failed += result.pass() ? 0 : 1;
  }
  fs::remove_all(root);
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
