#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "daas/core/types.hpp"

namespace daas::sensing {

// Event alphabet driving the mission state machine.
enum class MissionEventKind : std::uint8_t {
  Arm,
  Takeoff,
  TakeoffComplete,
  WaypointDispatched,
  Arrival,
  HoverElapsed,
  Preempt,
  Pause,
  Resume,
  Abort,
  LandCommand,
  Touchdown,
  TrackAcquired,
  TrackLost,
};

inline constexpr std::array<MissionEventKind, 14> kAllMissionEvents = {
    MissionEventKind::Arm,          MissionEventKind::Takeoff,       MissionEventKind::TakeoffComplete,
    MissionEventKind::WaypointDispatched, MissionEventKind::Arrival, MissionEventKind::HoverElapsed,
    MissionEventKind::Preempt,      MissionEventKind::Pause,         MissionEventKind::Resume,
    MissionEventKind::Abort,        MissionEventKind::LandCommand,   MissionEventKind::Touchdown,
    MissionEventKind::TrackAcquired, MissionEventKind::TrackLost,
};

std::string_view to_string(MissionEventKind e);
MissionEventKind parse_mission_event(std::string_view s);

struct Transition {
  MissionState from;
  MissionEventKind event;
  MissionState to;
};

// (state, event) -> state. Kept as data so scenarios can carry their own table.
class TransitionTable {
 public:
  static const TransitionTable& standard();

  void set(MissionState from, MissionEventKind event, MissionState to);
  std::optional<MissionState> next(MissionState from, MissionEventKind event) const;
  std::vector<Transition> entries() const;
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::pair<MissionState, MissionEventKind>, MissionState> table_;
};

// Throws Error{IllegalTransition} for pairs absent from the table.
MissionState stat_stream_transition(const TransitionTable& table, MissionState current, MissionEventKind event);

// Software odometry sensor: tracks the current mission state and records
// every transition as a StatStreamEvent.
class StatStream {
 public:
  explicit StatStream(const TransitionTable& table = TransitionTable::standard()) : table_(table) {}

  MissionState current() const { return current_; }
  StatStreamEvent apply(MissionEventKind event, double sim_time, std::string_view reason = {});
  bool accepts(MissionEventKind event) const { return table_.next(current_, event).has_value(); }

 private:
  TransitionTable table_;
  MissionState current_ = MissionState::Init;
};

}  // namespace daas::sensing
