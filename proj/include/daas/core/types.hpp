#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "daas/core/geometry.hpp"

namespace daas {

enum class WaypointFrame : std::uint8_t { Relative, Absolute };
enum class NavigationType : std::uint8_t { DistanceDriven, AnalyticsDriven };
enum class SchedulingType : std::uint8_t { Ordered, Unordered };

struct Waypoint {
  std::string id;
  Position3 target = Position3::Zero();
  double hover_duration = 0.0;
  WaypointFrame frame = WaypointFrame::Relative;
  std::optional<double> deadline;  // seconds since mission start

  bool operator==(const Waypoint&) const = default;
};

// Lower priority value wins.
struct NavigationBatch {
  NavigationType nav_type = NavigationType::DistanceDriven;
  std::vector<Waypoint> waypoints;
  SchedulingType scheduling = SchedulingType::Ordered;
  int priority = 1;

  bool operator==(const NavigationBatch&) const = default;
};

enum class MissionState : std::uint8_t {
  Init,
  Armed,
  TakingOff,
  Hover,
  EnRoute,
  WaypointHover,
  Tracking,
  Preempted,
  Paused,
  Resuming,
  Aborted,
  Landing,
  Landed,
};

inline constexpr std::size_t kMissionStateCount = 13;

inline constexpr std::array<MissionState, kMissionStateCount> kAllMissionStates = {
    MissionState::Init,      MissionState::Armed,     MissionState::TakingOff,     MissionState::Hover,
    MissionState::EnRoute,   MissionState::WaypointHover, MissionState::Tracking,  MissionState::Preempted,
    MissionState::Paused,    MissionState::Resuming,  MissionState::Aborted,       MissionState::Landing,
    MissionState::Landed,
};

// Airborne here means "not sitting on the ground": every state except the
// pre-flight pair and Landed.
constexpr bool is_airborne(MissionState s) {
  return s != MissionState::Init && s != MissionState::Armed && s != MissionState::Landed;
}

struct TelemetryEvent {
  double sim_time = 0.0;
  Position3 pose = Position3::Zero();
  Velocity3 velocity = Velocity3::Zero();
  double battery = 100.0;
  MissionState state = MissionState::Init;
  std::vector<std::string> visited_waypoint_ids;

  bool operator==(const TelemetryEvent&) const = default;
};

struct StatStreamEvent {
  double sim_time = 0.0;
  MissionState from_state = MissionState::Init;
  MissionState to_state = MissionState::Init;
  std::string reason;

  bool operator==(const StatStreamEvent&) const = default;
};

// Enum <-> wire string. Parsers throw Error{Validation} on unknown names.
std::string_view to_string(WaypointFrame v);
std::string_view to_string(NavigationType v);
std::string_view to_string(SchedulingType v);
std::string_view to_string(MissionState v);

WaypointFrame parse_waypoint_frame(std::string_view s);
NavigationType parse_navigation_type(std::string_view s);
SchedulingType parse_scheduling_type(std::string_view s);
MissionState parse_mission_state(std::string_view s);

void validate(const Position3& p, std::string_view what = "position");
void validate(const Waypoint& wp);
void validate(const NavigationBatch& batch);

Position3 resolve_waypoint(const Waypoint& wp, const Position3& takeoff_origin);

// Copy of `wp` with an Absolute frame and resolved coordinates.
Waypoint resolved(const Waypoint& wp, const Position3& takeoff_origin);

}  // namespace daas
