#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "daas/core/types.hpp"

namespace daas {

// First record of every trace. Carries what offline verification needs.
struct TraceHeader {
  int schema = 1;
  std::string scenario;
  std::string pattern;
  std::string scheduler;
  std::uint64_t seed = 0;
  double dt = 0.05;
  double max_horizontal_speed = 1.5;
  double max_vertical_speed = 1.0;
  double arrival_epsilon = 0.2;
  Position3 takeoff_origin = Position3::Zero();

  bool operator==(const TraceHeader&) const = default;
};

// Queue mutations. `op` is one of add, dispatch, complete, preempt, clear.
struct QueueEvent {
  double sim_time = 0.0;
  std::string op;
  std::vector<std::string> ids;
  int priority = 0;
  std::size_t size = 0;

  bool operator==(const QueueEvent&) const = default;
};

struct VisitEvent {
  double sim_time = 0.0;
  std::string id;
  Position3 target = Position3::Zero();
  Position3 pose = Position3::Zero();

  bool operator==(const VisitEvent&) const = default;
};

struct CommandEvent {
  double sim_time = 0.0;
  std::uint64_t tick = 0;
  std::uint64_t seq = 0;
  std::string kind;
  bool accepted = false;
  std::string reason;
  std::optional<NavigationBatch> payload;

  bool operator==(const CommandEvent&) const = default;
};

struct DetectionEvent {
  double frame_time = 0.0;
  double emit_time = 0.0;
  std::string task;
  std::string target;
  double bearing = 0.0;
  double range = 0.0;
  double confidence = 0.0;

  bool operator==(const DetectionEvent&) const = default;
};

// Non-fatal notices: command rejections, deadline warnings, forced landing,
// monitor reconciliation flags, track loss.
struct NoticeEvent {
  double sim_time = 0.0;
  std::string kind;
  std::string message;

  bool operator==(const NoticeEvent&) const = default;
};

struct EndEvent {
  double sim_time = 0.0;
  std::string status;
  std::string reason;

  bool operator==(const EndEvent&) const = default;
};

using MissionEvent = std::variant<TraceHeader, TelemetryEvent, StatStreamEvent, QueueEvent, VisitEvent,
                                  CommandEvent, DetectionEvent, NoticeEvent, EndEvent>;

}  // namespace daas
