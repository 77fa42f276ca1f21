#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "daas/core/types.hpp"

namespace daas::analytics {

enum class TaskKind : std::uint8_t { Detector, FollowController, Monitor, Remote };
enum class Tier : std::uint8_t { Edge, Cloud };

std::string_view to_string(TaskKind k);
std::string_view to_string(Tier t);
TaskKind parse_task_kind(std::string_view s);
Tier parse_tier(std::string_view s);

struct ComputeResource {
  std::string id;
  Tier tier = Tier::Edge;
  std::map<std::string, double> inference_latency;  // keyed by task kind name, sim-seconds
  double round_trip_network = 0.0;
  int capacity = 1;

  void validate() const;
  double inference_for(TaskKind kind) const;  // 0 when the kind is not listed
  double total_latency(TaskKind kind) const { return inference_for(kind) + round_trip_network; }
  std::map<std::string, std::string> properties() const;
};

// Geometry-only stand-in for a bounding box.
struct Detection {
  double frame_time = 0.0;
  double emit_time = 0.0;
  std::uint64_t frame_seq = 0;
  std::string task_id;
  std::string target_id;
  double bearing = 0.0;  // world azimuth, radians
  double range = 0.0;    // horizontal meters
  double confidence = 1.0;
  Position3 observer = Position3::Zero();  // drone pose when the frame was taken

  Position3 target_estimate() const;
};

struct TriggerPredicate {
  std::vector<std::string> targets;  // empty matches any target
  double min_confidence = 0.0;
  std::optional<double> max_range;
  bool once = true;

  bool matches(const Detection& d) const;
};

enum class ActionKind : std::uint8_t { LaunchTask, SubmitBatch, ClearNavigation, Land };

std::string_view to_string(ActionKind k);
ActionKind parse_action_kind(std::string_view s);

struct TriggerAction {
  ActionKind kind = ActionKind::ClearNavigation;
  std::string task;        // LaunchTask
  NavigationBatch batch;   // SubmitBatch
  // SubmitBatch waypoints are offsets from the detected target's ground
  // position instead of mission-frame coordinates.
  bool relative_to_target = false;
};

struct TriggerBinding {
  TriggerPredicate when;
  std::vector<TriggerAction> actions;
};

// Materializes a SubmitBatch action for a concrete detection: target-relative
// offsets become absolute coordinates.
NavigationBatch batch_for(const TriggerAction& action, const Detection& detection);

struct FollowGains {
  double kp = 0.5;
  double ki = 0.02;
  double kd = 0.1;
  double kp_vertical = 0.8;
};

struct FollowConfig {
  FollowGains gains;
  double setpoint_distance = 2.0;
  double integral_limit = 2.0;
  double loss_timeout = 2.0;
  std::optional<double> altitude;  // hold this altitude while following
  bool feedforward = true;         // add the estimated target velocity
  double max_horizontal_speed = 1.5;
  double max_vertical_speed = 1.0;
};

struct AnalyticsTask {
  std::string id;
  TaskKind kind = TaskKind::Detector;
  std::string input;  // sensor id, or detector task id for follow controllers
  double per_inference_cost = 0.0;
  std::optional<double> deadline;
  int stride = 1;  // analyse every n-th frame
  bool active = true;
  int priority = 1;  // follow controllers: navigation priority while tracking

  // Detector / Remote
  std::vector<std::string> targets;
  double miss_rate = 0.0;
  double bearing_noise = 0.0;  // radians, std-dev
  std::vector<TriggerBinding> triggers;

  // FollowController
  std::string follow_target;
  FollowConfig follow;

  // Monitor
  std::vector<std::string> fields;

  void validate() const;
};

}  // namespace daas::analytics
