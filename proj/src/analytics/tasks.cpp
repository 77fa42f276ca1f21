#include "daas/analytics/tasks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "daas/core/error.hpp"

namespace daas::analytics {

namespace {

const std::vector<std::string> kMonitorFields = {"battery", "height", "gps", "camera"};

std::string number_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string_view to_string(TaskKind k) {
  switch (k) {
    case TaskKind::Detector: return "detector";
    case TaskKind::FollowController: return "follow_controller";
    case TaskKind::Monitor: return "monitor";
    case TaskKind::Remote: return "remote";
  }
  return "unknown";
}

std::string_view to_string(Tier t) { return t == Tier::Edge ? "edge" : "cloud"; }

TaskKind parse_task_kind(std::string_view s) {
  if (s == "detector") return TaskKind::Detector;
  if (s == "follow_controller") return TaskKind::FollowController;
  if (s == "monitor") return TaskKind::Monitor;
  if (s == "remote") return TaskKind::Remote;
  throw Error(ErrorCode::Validation, "unknown task kind '" + std::string(s) + "'");
}

Tier parse_tier(std::string_view s) {
  if (s == "edge") return Tier::Edge;
  if (s == "cloud") return Tier::Cloud;
  throw Error(ErrorCode::Validation, "unknown tier '" + std::string(s) + "'");
}

std::string_view to_string(ActionKind k) {
  switch (k) {
    case ActionKind::LaunchTask: return "launch_task";
    case ActionKind::SubmitBatch: return "submit_batch";
    case ActionKind::ClearNavigation: return "clear_navigation";
    case ActionKind::Land: return "land";
  }
  return "unknown";
}

ActionKind parse_action_kind(std::string_view s) {
  if (s == "launch_task") return ActionKind::LaunchTask;
  if (s == "submit_batch") return ActionKind::SubmitBatch;
  if (s == "clear_navigation") return ActionKind::ClearNavigation;
  if (s == "land") return ActionKind::Land;
  throw Error(ErrorCode::Validation, "unknown trigger action '" + std::string(s) + "'");
}

void ComputeResource::validate() const {
  if (id.empty()) throw Error(ErrorCode::Validation, "compute resource id must be non-empty");
  if (capacity < 1) throw Error(ErrorCode::Validation, "compute resource '" + id + "' capacity must be >= 1");
  if (!(round_trip_network >= 0.0)) throw Error(ErrorCode::Validation, "round_trip_network must be >= 0");
  for (const auto& [kind, latency] : inference_latency) {
    parse_task_kind(kind);
    if (!(latency >= 0.0)) throw Error(ErrorCode::Validation, "inference latency must be >= 0");
  }
}

double ComputeResource::inference_for(TaskKind kind) const {
  auto it = inference_latency.find(std::string(to_string(kind)));
  return it == inference_latency.end() ? 0.0 : it->second;
}

std::map<std::string, std::string> ComputeResource::properties() const {
  std::map<std::string, std::string> props{{"id", id},
                                           {"tier", std::string(to_string(tier))},
                                           {"round_trip_network", number_text(round_trip_network)},
                                           {"capacity", std::to_string(capacity)}};
  for (const auto& [kind, latency] : inference_latency) props["inference_latency." + kind] = number_text(latency);
  return props;
}

Position3 Detection::target_estimate() const {
  return Position3(observer.x() + range * std::cos(bearing), observer.y() + range * std::sin(bearing), 0.0);
}

bool TriggerPredicate::matches(const Detection& d) const {
  if (!targets.empty() && std::find(targets.begin(), targets.end(), d.target_id) == targets.end()) return false;
  if (d.confidence < min_confidence) return false;
  if (max_range && d.range > *max_range) return false;
  return true;
}

NavigationBatch batch_for(const TriggerAction& action, const Detection& detection) {
  NavigationBatch batch = action.batch;
  if (action.relative_to_target) {
    const Position3 anchor = detection.target_estimate();
    for (auto& wp : batch.waypoints) {
      wp.target = anchor + wp.target;
      wp.frame = WaypointFrame::Absolute;
    }
  }
  return batch;
}

void AnalyticsTask::validate() const {
  if (id.empty()) throw Error(ErrorCode::Validation, "analytics task id must be non-empty");
  if (!(per_inference_cost >= 0.0)) throw Error(ErrorCode::Validation, "task '" + id + "' per_inference_cost must be >= 0");
  if (stride < 1) throw Error(ErrorCode::Validation, "task '" + id + "' stride must be >= 1");
  if (miss_rate < 0.0 || miss_rate > 1.0) throw Error(ErrorCode::Validation, "task '" + id + "' miss_rate outside [0,1]");
  if (!(bearing_noise >= 0.0)) throw Error(ErrorCode::Validation, "task '" + id + "' bearing_noise must be >= 0");
  if (deadline && !(*deadline > 0.0)) throw Error(ErrorCode::Validation, "task '" + id + "' deadline must be > 0");
  if (priority < 1) throw Error(ErrorCode::Validation, "task '" + id + "' priority must be >= 1");
  if (kind == TaskKind::FollowController) {
    if (!(follow.setpoint_distance >= 0.0) || !(follow.loss_timeout > 0.0) || !(follow.integral_limit >= 0.0)) {
      throw Error(ErrorCode::Validation, "task '" + id + "' has invalid follow parameters");
    }
  }
  if (kind == TaskKind::Monitor) {
    for (const auto& f : fields) {
      if (std::find(kMonitorFields.begin(), kMonitorFields.end(), f) == kMonitorFields.end()) {
        throw Error(ErrorCode::Configuration, "task '" + id + "' has unknown monitor field '" + f + "'");
      }
    }
  }
  for (const auto& binding : triggers) {
    for (const auto& action : binding.actions) {
      if (action.kind == ActionKind::LaunchTask && action.task.empty()) {
        throw Error(ErrorCode::Configuration, "task '" + id + "' launch_task binding names no task");
      }
      if (action.kind == ActionKind::SubmitBatch) daas::validate(action.batch);
    }
  }
}

}  // namespace daas::analytics
