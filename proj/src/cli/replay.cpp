#include "daas/cli/replay.hpp"

#include <map>
#include <set>
#include <sstream>

#include "daas/core/error.hpp"
#include "daas/sensing/stat_stream.hpp"

namespace daas::cli {

namespace {

constexpr double kTol = 1e-6;

class Checker {
 public:
  explicit Checker(const TraceHeader& header) : header_(header) {}

  void run(std::span<const MissionEvent> events) {
    for (std::size_t i = 1; i < events.size(); ++i) {
      std::visit([this](const auto& e) { on(e); }, events[i]);
    }
  }

  void finish(const EndEvent& end) {
    if (end.status == "completed" || end.status == "aborted") {
      if (fsm_state_ != MissionState::Landed) {
        flag("fsm_path", end.sim_time, "mission ended " + end.status + " in state " + std::string(to_string(fsm_state_)));
      }
    }
    if (!saw_telemetry_) flag("monotonic_time", end.sim_time, "trace has no telemetry");
  }

  std::vector<Violation> violations;

 private:
  void flag(const std::string& check, double t, const std::string& message) {
    violations.push_back(Violation{check, t, message});
  }

  void advance_time(double t, const char* what) {
    if (t + kTol < now_) {
      std::ostringstream msg;
      msg << what << " at " << t << " precedes " << now_;
      flag("monotonic_time", t, msg.str());
    }
    now_ = std::max(now_, t);
  }

  void on(const TraceHeader& h) { flag("structure", 0.0, "second header record for scenario " + h.scenario); }

  void on(const TelemetryEvent& e) {
    if (saw_telemetry_ && !(e.sim_time > last_.sim_time)) {
      std::ostringstream msg;
      msg << "telemetry time " << e.sim_time << " not after " << last_.sim_time;
      flag("monotonic_time", e.sim_time, msg.str());
    }
    advance_time(e.sim_time, "telemetry");
    if (e.state != fsm_state_) {
      flag("fsm_path", e.sim_time,
           "telemetry reports " + std::string(to_string(e.state)) + " but state stream is at " +
               std::string(to_string(fsm_state_)));
    }
    if (saw_telemetry_) {
      const double dt = e.sim_time - last_.sim_time;
      const double dh = horizontal_distance(e.pose, last_.pose);
      const double dv = std::abs(e.pose.z() - last_.pose.z());
      if (dh > header_.max_horizontal_speed * dt + kTol) {
        std::ostringstream msg;
        msg << "horizontal displacement " << dh << " m in " << dt << " s exceeds " << header_.max_horizontal_speed
            << " m/s";
        flag("speed_clamp", e.sim_time, msg.str());
      }
      if (dv > header_.max_vertical_speed * dt + kTol) {
        std::ostringstream msg;
        msg << "vertical displacement " << dv << " m in " << dt << " s exceeds " << header_.max_vertical_speed
            << " m/s";
        flag("speed_clamp", e.sim_time, msg.str());
      }
      if (e.battery > last_.battery + kTol) flag("battery", e.sim_time, "battery increased");
      if (!is_airborne(e.state) && !is_airborne(last_.state) && std::abs(e.battery - last_.battery) > kTol) {
        flag("battery", e.sim_time, "battery changed while on the ground");
      }
    }
    last_ = e;
    saw_telemetry_ = true;
  }

  void on(const StatStreamEvent& e) {
    advance_time(e.sim_time, "state change");
    if (e.from_state != fsm_state_) {
      flag("fsm_path", e.sim_time,
           "transition from " + std::string(to_string(e.from_state)) + " but current state is " +
               std::string(to_string(fsm_state_)));
    }
    if (fsm_state_ == MissionState::Landed) flag("fsm_path", e.sim_time, "transition out of landed");
    const std::string event_name = e.reason.substr(0, e.reason.find(':'));
    try {
      const auto event = sensing::parse_mission_event(event_name);
      const auto next = sensing::TransitionTable::standard().next(e.from_state, event);
      if (!next || *next != e.to_state) {
        flag("fsm_path", e.sim_time,
             "illegal edge " + std::string(to_string(e.from_state)) + " --" + event_name + "--> " +
                 std::string(to_string(e.to_state)));
      }
    } catch (const Error&) {
      flag("fsm_path", e.sim_time, "unknown event '" + event_name + "'");
    }
    fsm_state_ = e.to_state;
  }

  void on(const QueueEvent& e) {
    advance_time(e.sim_time, "queue event");
    if (e.op == "add") {
      for (const auto& id : e.ids) added_.insert(id);
    } else if (e.op == "clear") {
      for (const auto& id : e.ids) cleared_.insert(id);
    } else if (e.op == "dispatch") {
      for (const auto& id : e.ids) {
        if (cleared_.contains(id)) flag("abort_safety", e.sim_time, "cleared waypoint " + id + " dispatched");
        if (!added_.contains(id)) flag("queue", e.sim_time, "waypoint " + id + " dispatched without being added");
      }
    }
  }

  void on(const VisitEvent& e) {
    advance_time(e.sim_time, "visit");
    if (!visited_.insert(e.id).second) flag("visit_once", e.sim_time, "waypoint " + e.id + " visited twice");
    if (cleared_.contains(e.id)) flag("abort_safety", e.sim_time, "cleared waypoint " + e.id + " visited");
    const double miss = euclidean_distance(e.pose, e.target);
    if (miss > header_.arrival_epsilon + kTol) {
      std::ostringstream msg;
      msg << "visit of " << e.id << " recorded " << miss << " m from its target";
      flag("arrival_pose", e.sim_time, msg.str());
    }
  }

  void on(const CommandEvent& e) { advance_time(e.sim_time, "command"); }

  void on(const DetectionEvent& e) {
    if (e.emit_time + kTol < e.frame_time) flag("detection_causality", e.emit_time, "detection emitted before its frame");
    if (now_ + kTol < e.emit_time) {
      std::ostringstream msg;
      msg << "detection due at " << e.emit_time << " delivered at " << now_;
      flag("detection_causality", e.emit_time, msg.str());
    }
  }

  void on(const NoticeEvent& e) { advance_time(e.sim_time, "notice"); }
  void on(const EndEvent&) {}

  TraceHeader header_;
  double now_ = 0.0;
  bool saw_telemetry_ = false;
  TelemetryEvent last_;
  MissionState fsm_state_ = MissionState::Init;
  std::set<std::string> added_;
  std::set<std::string> cleared_;
  std::set<std::string> visited_;
};

}  // namespace

Verdict verify_trace(std::span<const MissionEvent> events) {
  if (events.empty() || !std::holds_alternative<TraceHeader>(events.front())) {
    throw Error(ErrorCode::Schema, "trace does not start with a header record", "/line/1");
  }
  std::size_t end_index = events.size();
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (std::holds_alternative<EndEvent>(events[i])) {
      end_index = i;
      break;
    }
  }
  if (end_index == events.size()) throw Error(ErrorCode::Schema, "trace has no end record (truncated?)", "/");

  Verdict v;
  v.events = events.size();
  v.checks = {"structure",   "monotonic_time", "speed_clamp",  "battery",           "visit_once",
              "abort_safety", "fsm_path",       "arrival_pose", "detection_causality", "queue"};
  Checker checker(std::get<TraceHeader>(events.front()));
  checker.run(events.first(end_index));
  checker.finish(std::get<EndEvent>(events[end_index]));
  v.violations = std::move(checker.violations);
  if (end_index + 1 != events.size()) {
    v.violations.push_back(Violation{"structure", std::get<EndEvent>(events[end_index]).sim_time,
                                     "records after the end record"});
  }
  return v;
}

nlohmann::json to_json(const Verdict& v) {
  nlohmann::json violations = nlohmann::json::array();
  for (const auto& x : v.violations) {
    violations.push_back({{"check", x.check}, {"sim_time", x.sim_time}, {"message", x.message}});
  }
  return {{"verdict", v.pass() ? "PASS" : "FAIL"},
          {"events", v.events},
          {"checks", v.checks},
          {"violations", violations}};
}

std::string format_verdict(const Verdict& v) {
  std::ostringstream out;
  out << "verdict: " << (v.pass() ? "PASS" : "FAIL") << " (" << v.events << " events, " << v.checks.size()
      << " checks)\n";
  std::map<std::string, std::size_t> per_check;
  for (const auto& x : v.violations) ++per_check[x.check];
  for (const auto& check : v.checks) {
    out << "  " << check << ": " << (per_check.contains(check) ? "FAIL" : "ok");
    if (per_check.contains(check)) out << " (" << per_check[check] << ")";
    out << "\n";
  }
  const std::size_t shown = std::min<std::size_t>(v.violations.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    out << "  [" << v.violations[i].check << "] t=" << v.violations[i].sim_time << " " << v.violations[i].message
        << "\n";
  }
  if (v.violations.size() > shown) out << "  ... " << (v.violations.size() - shown) << " more\n";
  return out.str();
}

}  // namespace daas::cli
