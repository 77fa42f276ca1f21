#pragma once

// Reference models and helpers shared by the unit tests and the acceptance
// driver. Everything here is written against plain doubles and std
// containers so that it does not reuse the code under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <list>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "daas/core/error.hpp"
#include "daas/core/events.hpp"
#include "daas/navigation/queue.hpp"
#include "daas/navigation/scenario.hpp"
#include "daas/sensing/stat_stream.hpp"

namespace daas::testing {

inline std::string scenario_path(const std::string& name) {
  return std::string(DAAS_SCENARIO_DIR) + "/" + name + ".json";
}

inline navigation::Scenario load(const std::string& name) { return navigation::load_scenario(scenario_path(name)); }

inline const std::vector<std::string>& acceptance_scenarios() {
  static const std::vector<std::string> names = {"farm_survey",           "disaster_survey",   "vip_follow",
                                                 "survey_inspection",     "surveillance_tracking",
                                                 "search_rescue",         "tower_inspection"};
  return names;
}

// ---- tours ----

struct Point {
  std::string id;
  double x = 0.0;
  double y = 0.0;
};

inline double hop(double ax, double ay, double bx, double by) { return std::hypot(bx - ax, by - ay); }

inline double tour_length(double x0, double y0, const std::vector<Point>& order) {
  double total = 0.0;
  double x = x0;
  double y = y0;
  for (const auto& p : order) {
    total += hop(x, y, p.x, p.y);
    x = p.x;
    y = p.y;
  }
  return total;
}

// Shortest open tour over every permutation.
inline double brute_force_best(double x0, double y0, std::vector<Point> points) {
  std::sort(points.begin(), points.end(), [](const Point& a, const Point& b) { return a.id < b.id; });
  double best = std::numeric_limits<double>::infinity();
  do {
    best = std::min(best, tour_length(x0, y0, points));
  } while (std::next_permutation(points.begin(), points.end(),
                                 [](const Point& a, const Point& b) { return a.id < b.id; }));
  return best;
}

// Empty when `order` is a permutation of `input` in which every hop goes to
// a closest remaining point.
inline std::string check_greedy(double x0, double y0, const std::vector<Point>& input,
                                const std::vector<Point>& order) {
  if (order.size() != input.size()) return "length differs";
  std::multiset<std::string> a;
  std::multiset<std::string> b;
  for (const auto& p : input) a.insert(p.id);
  for (const auto& p : order) b.insert(p.id);
  if (a != b) return "not a permutation";
  std::vector<Point> remaining = input;
  double x = x0;
  double y = y0;
  for (const auto& chosen : order) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& r : remaining) best = std::min(best, hop(x, y, r.x, r.y));
    const double d = hop(x, y, chosen.x, chosen.y);
    if (d > best + 1e-9) {
      std::ostringstream msg;
      msg << "hop to " << chosen.id << " is " << d << " but " << best << " was available";
      return msg.str();
    }
    remaining.erase(std::find_if(remaining.begin(), remaining.end(),
                                 [&](const Point& r) { return r.id == chosen.id; }));
    x = chosen.x;
    y = chosen.y;
  }
  return {};
}

// ---- queue ----

// Priority buckets of plain lists; a suspended waypoint goes back to the
// front of its bucket.
class ReferenceQueue {
 public:
  struct Item {
    std::string id;
    int priority;
  };

  bool add(const std::vector<std::string>& ids, int priority, bool allow_preempt) {
    for (const auto& id : ids) {
      if (live(id)) return false;
    }
    for (const auto& id : ids) buckets_[priority].push_back(Item{id, priority});
    if (allow_preempt && !ids.empty() && in_flight_ && priority < in_flight_->priority) {
      buckets_[in_flight_->priority].push_front(*in_flight_);
      in_flight_.reset();
    }
    return true;
  }

  std::optional<Item> pop() {
    finish_in_flight();
    for (auto& [prio, bucket] : buckets_) {
      if (bucket.empty()) continue;
      in_flight_ = bucket.front();
      bucket.pop_front();
      return in_flight_;
    }
    return std::nullopt;
  }

  void complete() { finish_in_flight(); }

  std::vector<std::string> clear() {
    std::vector<std::string> ids;
    if (in_flight_) ids.push_back(in_flight_->id);
    for (const auto& id : pending()) ids.push_back(id);
    buckets_.clear();
    in_flight_.reset();
    return ids;
  }

  std::vector<std::string> pending() const {
    std::vector<std::string> out;
    for (const auto& [prio, bucket] : buckets_) {
      for (const auto& item : bucket) out.push_back(item.id);
    }
    return out;
  }

  std::vector<std::string> live_ids() const {
    auto out = pending();
    if (in_flight_) out.push_back(in_flight_->id);
    return out;
  }

  const std::set<std::string>& completed() const { return completed_; }
  bool visited_twice() const { return visited_twice_; }

 private:
  bool live(const std::string& id) const {
    const auto ids = live_ids();
    return std::find(ids.begin(), ids.end(), id) != ids.end();
  }

  void finish_in_flight() {
    if (!in_flight_) return;
    if (!completed_.insert(in_flight_->id).second) visited_twice_ = true;
    in_flight_.reset();
  }

  std::map<int, std::list<Item>> buckets_;
  std::optional<Item> in_flight_;
  std::set<std::string> completed_;
  bool visited_twice_ = false;
};

inline std::vector<std::string> ids_of(const std::vector<navigation::QueuedWaypoint>& items) {
  std::vector<std::string> out;
  for (const auto& q : items) out.push_back(q.waypoint.id);
  return out;
}

// Runs `sequences` random add/clear/pop/complete sequences against both the
// real queue and the reference. Returns the first disagreement, or empty.
inline std::string run_queue_oracle(std::uint64_t seed, int sequences, int ops_per_sequence = 40) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> op_dist(0, 99);
  std::uniform_int_distribution<int> prio_dist(1, 4);
  std::uniform_int_distribution<int> size_dist(1, 3);
  int next_id = 0;

  for (int s = 0; s < sequences; ++s) {
    navigation::WaypointQueue queue;
    ReferenceQueue model;
    std::set<std::string> completed;
    std::optional<std::string> in_flight;
    const auto where = [&](int op, const std::string& what) {
      return "sequence " + std::to_string(s) + " op " + std::to_string(op) + ": " + what;
    };

    for (int op = 0; op < ops_per_sequence; ++op) {
      const int roll = op_dist(rng);
      if (roll < 45) {
        NavigationBatch batch;
        batch.priority = prio_dist(rng);
        const int n = size_dist(rng);
        const auto live = model.live_ids();
        const bool duplicate = !live.empty() && op_dist(rng) < 10;
        for (int i = 0; i < n; ++i) {
          Waypoint wp;
          wp.id = (duplicate && i == 0) ? live[static_cast<std::size_t>(op_dist(rng)) % live.size()]
                                        : "w" + std::to_string(next_id++);
          wp.target = Position3(static_cast<double>(i), 0.0, 5.0);
          batch.waypoints.push_back(wp);
        }
        const bool allow_preempt = op_dist(rng) < 50;
        std::vector<std::string> ids;
        for (const auto& wp : batch.waypoints) ids.push_back(wp.id);
        const bool expected = model.add(ids, batch.priority, allow_preempt);
        bool accepted = true;
        try {
          const auto result = queue.add(batch, allow_preempt);
          if (result.preempted) in_flight.reset();
        } catch (const Error& e) {
          if (e.code() != ErrorCode::DuplicateId) return where(op, "unexpected error " + std::string(e.what()));
          accepted = false;
        }
        if (accepted != expected) return where(op, "duplicate handling differs");
      } else if (roll < 80) {
        if (in_flight) {
          if (!completed.insert(*in_flight).second) return where(op, *in_flight + " visited twice");
        }
        const auto got = queue.pop();
        const auto want = model.pop();
        if (got.has_value() != want.has_value()) return where(op, "pop emptiness differs");
        if (got && (got->waypoint.id != want->id || got->priority != want->priority)) {
          return where(op, "pop returned " + got->waypoint.id + ", expected " + want->id);
        }
        in_flight = got ? std::optional(got->waypoint.id) : std::nullopt;
        if (got && completed.contains(got->waypoint.id)) return where(op, "popped a visited waypoint");
      } else if (roll < 90) {
        if (in_flight) completed.insert(*in_flight);
        in_flight.reset();
        queue.complete_in_flight();
        model.complete();
      } else {
        auto got = queue.clear();
        auto want = model.clear();
        if (got != want) return where(op, "clear removed a different set");
        in_flight.reset();
        if (!queue.clear().empty() || !queue.empty() || queue.in_flight()) return where(op, "clear not idempotent");
        if (queue.pop()) return where(op, "pop after clear returned a waypoint");
        model.pop();
      }
      if (ids_of(queue.pending()) != model.pending()) return where(op, "pending order differs");
      if (queue.size() != model.pending().size()) return where(op, "size differs");
    }
    if (model.visited_twice()) return "sequence " + std::to_string(s) + ": reference visited twice";
  }
  return {};
}

// ---- state machine ----

// The authored transition table, one (from, event, to) triple per edge.
inline const std::vector<std::tuple<std::string, std::string, std::string>>& expected_transitions() {
  static const std::vector<std::tuple<std::string, std::string, std::string>> table = {
      {"init", "arm", "armed"},
      {"init", "abort", "aborted"},
      {"armed", "takeoff", "taking_off"},
      {"armed", "abort", "aborted"},
      {"taking_off", "takeoff_complete", "hover"},
      {"taking_off", "abort", "aborted"},
      {"taking_off", "land_command", "landing"},
      {"hover", "waypoint_dispatched", "en_route"},
      {"hover", "track_acquired", "tracking"},
      {"hover", "pause", "paused"},
      {"hover", "abort", "aborted"},
      {"hover", "land_command", "landing"},
      {"en_route", "arrival", "waypoint_hover"},
      {"en_route", "preempt", "preempted"},
      {"en_route", "pause", "paused"},
      {"en_route", "abort", "aborted"},
      {"en_route", "land_command", "landing"},
      {"waypoint_hover", "hover_elapsed", "hover"},
      {"waypoint_hover", "preempt", "preempted"},
      {"waypoint_hover", "pause", "paused"},
      {"waypoint_hover", "abort", "aborted"},
      {"waypoint_hover", "land_command", "landing"},
      {"tracking", "track_lost", "hover"},
      {"tracking", "pause", "paused"},
      {"tracking", "abort", "aborted"},
      {"tracking", "land_command", "landing"},
      {"preempted", "waypoint_dispatched", "en_route"},
      {"preempted", "track_acquired", "tracking"},
      {"preempted", "pause", "paused"},
      {"preempted", "abort", "aborted"},
      {"preempted", "land_command", "landing"},
      {"paused", "resume", "resuming"},
      {"paused", "abort", "aborted"},
      {"paused", "land_command", "landing"},
      {"resuming", "waypoint_dispatched", "en_route"},
      {"resuming", "track_acquired", "tracking"},
      {"resuming", "hover_elapsed", "hover"},
      {"resuming", "abort", "aborted"},
      {"resuming", "land_command", "landing"},
      {"aborted", "track_acquired", "tracking"},
      {"aborted", "waypoint_dispatched", "en_route"},
      {"aborted", "land_command", "landing"},
      {"aborted", "touchdown", "landed"},
      {"landing", "touchdown", "landed"},
  };
  return table;
}

// Walks every (state, event) pair through a fresh StatStream-style lookup.
// Returns the number of pairs checked and the first mismatch.
inline std::pair<std::size_t, std::string> walk_fsm(const sensing::TransitionTable& table) {
  std::map<std::pair<std::string, std::string>, std::string> expected;
  for (const auto& [from, event, to] : expected_transitions()) expected[{from, event}] = to;
  std::size_t checked = 0;
  for (const MissionState s : kAllMissionStates) {
    for (const auto e : sensing::kAllMissionEvents) {
      ++checked;
      const std::string from(to_string(s));
      const std::string event(sensing::to_string(e));
      const auto it = expected.find({from, event});
      std::optional<MissionState> got;
      bool threw = false;
      try {
        got = sensing::stat_stream_transition(table, s, e);
      } catch (const Error& err) {
        threw = err.code() == ErrorCode::IllegalTransition;
        if (!threw) return {checked, from + "/" + event + ": wrong error code"};
      }
      if (it == expected.end()) {
        if (!threw) return {checked, from + "/" + event + " should be illegal"};
      } else if (!got || std::string(to_string(*got)) != it->second) {
        return {checked, from + "/" + event + " should go to " + it->second};
      }
    }
  }
  if (table.size() != expected.size()) return {checked, "table has extra entries"};
  return {checked, {}};
}

// ---- traces ----

template <typename T>
std::vector<T> records(const std::vector<MissionEvent>& events) {
  std::vector<T> out;
  for (const auto& e : events) {
    if (const auto* r = std::get_if<T>(&e)) out.push_back(*r);
  }
  return out;
}

inline std::vector<std::string> visit_ids(const std::vector<MissionEvent>& events) {
  std::vector<std::string> out;
  for (const auto& v : records<VisitEvent>(events)) out.push_back(v.id);
  return out;
}

// Empty when the state records chain from Init to Landed and nothing follows
// Landed.
inline std::string check_state_path(const std::vector<MissionEvent>& events) {
  const auto states = records<StatStreamEvent>(events);
  if (states.empty()) return "no state records";
  if (states.front().from_state != MissionState::Init) return "path does not start at init";
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i].from_state != states[i - 1].to_state) return "path breaks at " + std::to_string(states[i].sim_time);
    if (states[i - 1].to_state == MissionState::Landed) return "transition out of landed";
  }
  if (states.back().to_state != MissionState::Landed) return "path ends in " + std::string(to_string(states.back().to_state));
  return {};
}

// Sensor-driven follow scenario: a target walking in a straight line along
// +x from (4, 0) at `speed`, a 15 FPS camera and a 2 m follow controller.
inline nlohmann::json follow_scenario_json(double speed, double duration, std::uint64_t seed = 21) {
  const double run = speed * (duration + 20.0);
  return nlohmann::json{
      {"schema", 1},
      {"name", "follow_line"},
      {"pattern", "sensor_driven"},
      {"seed", seed},
      {"duration_limit", duration},
      {"sensors", {{{"id", "cam"}, {"kind", "camera"}, {"rate", 15}}}},
      {"targets",
       {{{"id", "walker"},
         {"path", {{{"x", 4}, {"y", 0}, {"z", 0}}, {{"x", 4 + run}, {"y", 0}, {"z", 0}, {"speed", speed}}}}}}},
      {"analytics",
       {{{"id", "det"}, {"kind", "detector"}, {"input", "cam"}, {"targets", {"walker"}}},
        {{"id", "fol"},
         {"kind", "follow_controller"},
         {"input", "det"},
         {"follow_target", "walker"},
         {"follow", {{"setpoint_distance", 2.0}}}}}}};
}

// Fraction of telemetry samples in [settle, end] whose horizontal distance to
// the walker (x = 4 + speed * t, y = 0) lies within [lo, hi].
inline double follow_fraction(const std::vector<MissionEvent>& events, double speed, double settle, double end,
                              double lo = 1.5, double hi = 2.5) {
  std::size_t in = 0;
  std::size_t total = 0;
  for (const auto& t : records<TelemetryEvent>(events)) {
    if (t.sim_time < settle || t.sim_time > end) continue;
    const double d = hop(t.pose.x(), t.pose.y(), 4.0 + speed * t.sim_time, 0.0);
    ++total;
    if (d >= lo && d <= hi) ++in;
  }
  return total == 0 ? 0.0 : static_cast<double>(in) / static_cast<double>(total);
}

}  // namespace daas::testing
