#include "daas/sensing/stat_stream.hpp"

#include "daas/core/error.hpp"

namespace daas::sensing {

namespace {

constexpr std::array<std::string_view, kAllMissionEvents.size()> kEventNames = {
    "arm",   "takeoff", "takeoff_complete", "waypoint_dispatched", "arrival",    "hover_elapsed", "preempt",
    "pause", "resume",  "abort",            "land_command",        "touchdown", "track_acquired", "track_lost",
};

TransitionTable make_standard() {
  using S = MissionState;
  using E = MissionEventKind;
  TransitionTable t;
  t.set(S::Init, E::Arm, S::Armed);
  t.set(S::Init, E::Abort, S::Aborted);

  t.set(S::Armed, E::Takeoff, S::TakingOff);
  t.set(S::Armed, E::Abort, S::Aborted);

  t.set(S::TakingOff, E::TakeoffComplete, S::Hover);
  t.set(S::TakingOff, E::Abort, S::Aborted);
  t.set(S::TakingOff, E::LandCommand, S::Landing);

  t.set(S::Hover, E::WaypointDispatched, S::EnRoute);
  t.set(S::Hover, E::TrackAcquired, S::Tracking);
  t.set(S::Hover, E::Pause, S::Paused);
  t.set(S::Hover, E::Abort, S::Aborted);
  t.set(S::Hover, E::LandCommand, S::Landing);

  t.set(S::EnRoute, E::Arrival, S::WaypointHover);
  t.set(S::EnRoute, E::Preempt, S::Preempted);
  t.set(S::EnRoute, E::Pause, S::Paused);
  t.set(S::EnRoute, E::Abort, S::Aborted);
  t.set(S::EnRoute, E::LandCommand, S::Landing);

  t.set(S::WaypointHover, E::HoverElapsed, S::Hover);
  t.set(S::WaypointHover, E::Preempt, S::Preempted);
  t.set(S::WaypointHover, E::Pause, S::Paused);
  t.set(S::WaypointHover, E::Abort, S::Aborted);
  t.set(S::WaypointHover, E::LandCommand, S::Landing);

  t.set(S::Tracking, E::TrackLost, S::Hover);
  t.set(S::Tracking, E::Pause, S::Paused);
  t.set(S::Tracking, E::Abort, S::Aborted);
  t.set(S::Tracking, E::LandCommand, S::Landing);

  t.set(S::Preempted, E::WaypointDispatched, S::EnRoute);
  t.set(S::Preempted, E::TrackAcquired, S::Tracking);
  t.set(S::Preempted, E::Pause, S::Paused);
  t.set(S::Preempted, E::Abort, S::Aborted);
  t.set(S::Preempted, E::LandCommand, S::Landing);

  t.set(S::Paused, E::Resume, S::Resuming);
  t.set(S::Paused, E::Abort, S::Aborted);
  t.set(S::Paused, E::LandCommand, S::Landing);

  t.set(S::Resuming, E::WaypointDispatched, S::EnRoute);
  t.set(S::Resuming, E::TrackAcquired, S::Tracking);
  t.set(S::Resuming, E::HoverElapsed, S::Hover);
  t.set(S::Resuming, E::Abort, S::Aborted);
  t.set(S::Resuming, E::LandCommand, S::Landing);

  t.set(S::Aborted, E::TrackAcquired, S::Tracking);
  t.set(S::Aborted, E::WaypointDispatched, S::EnRoute);
  t.set(S::Aborted, E::LandCommand, S::Landing);
  t.set(S::Aborted, E::Touchdown, S::Landed);

  t.set(S::Landing, E::Touchdown, S::Landed);
  return t;
}

}  // namespace

std::string_view to_string(MissionEventKind e) { return kEventNames[static_cast<std::size_t>(e)]; }

MissionEventKind parse_mission_event(std::string_view s) {
  for (std::size_t i = 0; i < kEventNames.size(); ++i) {
    if (kEventNames[i] == s) return kAllMissionEvents[i];
  }
  throw Error(ErrorCode::Validation, "unknown mission event '" + std::string(s) + "'");
}

const TransitionTable& TransitionTable::standard() {
  static const TransitionTable table = make_standard();
  return table;
}

void TransitionTable::set(MissionState from, MissionEventKind event, MissionState to) {
  if (from == MissionState::Landed) throw Error(ErrorCode::Configuration, "landed is absorbing");
  table_[{from, event}] = to;
}

std::optional<MissionState> TransitionTable::next(MissionState from, MissionEventKind event) const {
  auto it = table_.find({from, event});
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

std::vector<Transition> TransitionTable::entries() const {
  std::vector<Transition> out;
  out.reserve(table_.size());
  for (const auto& [key, to] : table_) out.push_back(Transition{key.first, key.second, to});
  return out;
}

MissionState stat_stream_transition(const TransitionTable& table, MissionState current, MissionEventKind event) {
  if (auto next = table.next(current, event)) return *next;
  throw Error(ErrorCode::IllegalTransition, "illegal transition: " + std::string(to_string(current)) + " --" +
                                                std::string(to_string(event)) + "-->");
}

StatStreamEvent StatStream::apply(MissionEventKind event, double sim_time, std::string_view reason) {
  const MissionState next = stat_stream_transition(table_, current_, event);
  std::string label(to_string(event));
  if (!reason.empty()) label += ":" + std::string(reason);
  StatStreamEvent out{sim_time, current_, next, std::move(label)};
  current_ = next;
  return out;
}

}  // namespace daas::sensing
