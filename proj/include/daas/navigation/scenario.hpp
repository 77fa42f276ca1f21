#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "daas/analytics/placement.hpp"
#include "daas/analytics/tasks.hpp"
#include "daas/core/types.hpp"
#include "daas/sensing/sensors.hpp"
#include "daas/sensing/stat_stream.hpp"
#include "daas/sim/world.hpp"

namespace daas::navigation {

enum class MissionPattern : std::uint8_t {
  StaticPredefined,
  DynamicPredefined,
  SensorDriven,
  AnalyticsUpdate,
  AnalyticsAbort,
};

std::string_view to_string(MissionPattern p);
MissionPattern parse_mission_pattern(std::string_view s);

enum class Pacing : std::uint8_t { Max, Realtime };
std::string_view to_string(Pacing p);
Pacing parse_pacing(std::string_view s);

// What the mission does once it has nothing left to fly.
enum class IdleBehavior : std::uint8_t { Land, Hover };

enum class CommandKind : std::uint8_t { InjectBatch, Pause, Resume, Abort };
std::string_view to_string(CommandKind k);
CommandKind parse_command_kind(std::string_view s);

// Operator command delivered through the mission inbox. InjectBatch carries
// a payload; the other kinds must not.
struct ControlCommand {
  CommandKind kind = CommandKind::Pause;
  std::optional<NavigationBatch> payload;
  std::int64_t issued_at_ms = 0;  // wall clock, informational only

  void validate() const;
};

ControlCommand parse_control_command(const nlohmann::json& j, const std::string& path = "");
nlohmann::json to_json(const ControlCommand& c);

struct ScriptedCommand {
  double at = 0.0;  // sim seconds; applied at the first tick boundary >= at
  ControlCommand command;
};

struct Scenario {
  int schema = 1;
  std::string name;
  MissionPattern pattern = MissionPattern::StaticPredefined;
  std::uint64_t seed = 0;
  double dt = 0.05;
  double duration_limit = 600.0;
  double landing_grace = 120.0;
  Pacing pacing = Pacing::Max;
  double time_scale = 1.0;

  sim::DroneModel drone;
  Position3 takeoff_origin = Position3::Zero();
  bool return_home = false;
  IdleBehavior on_idle = IdleBehavior::Land;

  std::string scheduler = "ordered";
  std::vector<sensing::SensorDescriptor> sensors;
  std::vector<sim::TargetTrack> targets;
  std::vector<analytics::ComputeResource> compute;
  analytics::PlacementPolicy placement = analytics::PlacementPolicy::LeastLatency;
  std::map<std::string, std::string> deploy;  // explicit task -> resource pinning
  std::vector<analytics::AnalyticsTask> analytics;
  std::vector<NavigationBatch> batches;
  std::vector<ScriptedCommand> commands;
  std::optional<sensing::TransitionTable> transition_table;

  // Cross-field and pattern checks. Throws Error{Schema} with a field path.
  void validate() const;
};

// Throws Error{Schema} with the JSON path of the offending field.
Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

// Default edge resource used when a scenario declares no compute.
analytics::ComputeResource default_edge_resource();

}  // namespace daas::navigation
