#include "daas/core/types.hpp"

#include <unordered_set>

#include "daas/core/error.hpp"

namespace daas {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Validation: return "validation";
    case ErrorCode::NotFound: return "not_found";
    case ErrorCode::Rejected: return "rejected";
    case ErrorCode::DuplicateId: return "duplicate_id";
    case ErrorCode::IllegalTransition: return "illegal_transition";
    case ErrorCode::Configuration: return "configuration";
    case ErrorCode::Schema: return "schema";
    case ErrorCode::NotDeployed: return "not_deployed";
    case ErrorCode::Placement: return "placement";
    case ErrorCode::NotReady: return "not_ready";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, kMissionStateCount> kStateNames = {
    "init",    "armed",     "taking_off", "hover",   "en_route", "waypoint_hover", "tracking",
    "preempted", "paused", "resuming",   "aborted", "landing",  "landed",
};

[[noreturn]] void unknown(std::string_view what, std::string_view s) {
  throw Error(ErrorCode::Validation, "unknown " + std::string(what) + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(WaypointFrame v) { return v == WaypointFrame::Relative ? "relative" : "absolute"; }

std::string_view to_string(NavigationType v) {
  return v == NavigationType::DistanceDriven ? "distance_driven" : "analytics_driven";
}

std::string_view to_string(SchedulingType v) { return v == SchedulingType::Ordered ? "ordered" : "unordered"; }

std::string_view to_string(MissionState v) { return kStateNames[static_cast<std::size_t>(v)]; }

WaypointFrame parse_waypoint_frame(std::string_view s) {
  if (s == "relative") return WaypointFrame::Relative;
  if (s == "absolute") return WaypointFrame::Absolute;
  unknown("waypoint frame", s);
}

NavigationType parse_navigation_type(std::string_view s) {
  if (s == "distance_driven") return NavigationType::DistanceDriven;
  if (s == "analytics_driven") return NavigationType::AnalyticsDriven;
  unknown("navigation type", s);
}

SchedulingType parse_scheduling_type(std::string_view s) {
  if (s == "ordered") return SchedulingType::Ordered;
  if (s == "unordered") return SchedulingType::Unordered;
  unknown("scheduling type", s);
}

MissionState parse_mission_state(std::string_view s) {
  for (std::size_t i = 0; i < kStateNames.size(); ++i) {
    if (kStateNames[i] == s) return kAllMissionStates[i];
  }
  unknown("mission state", s);
}

void validate(const Position3& p, std::string_view what) {
  if (!all_finite(p)) throw Error(ErrorCode::Validation, std::string(what) + " has non-finite coordinates");
}

void validate(const Waypoint& wp) {
  if (wp.id.empty()) throw Error(ErrorCode::Validation, "waypoint id must be non-empty");
  validate(wp.target, "waypoint '" + wp.id + "'");
  if (!(wp.hover_duration >= 0.0)) {
    throw Error(ErrorCode::Validation, "waypoint '" + wp.id + "' has negative hover_duration");
  }
  if (wp.deadline && !(*wp.deadline > 0.0)) {
    throw Error(ErrorCode::Validation, "waypoint '" + wp.id + "' deadline must be > 0");
  }
}

void validate(const NavigationBatch& batch) {
  if (batch.priority < 1) throw Error(ErrorCode::Validation, "batch priority must be >= 1");
  std::unordered_set<std::string> seen;
  for (const auto& wp : batch.waypoints) {
    validate(wp);
    if (!seen.insert(wp.id).second) throw Error(ErrorCode::DuplicateId, "duplicate waypoint id '" + wp.id + "' in batch");
  }
}

Position3 resolve_waypoint(const Waypoint& wp, const Position3& takeoff_origin) {
  validate(takeoff_origin, "takeoff origin");
  validate(wp.target, "waypoint '" + wp.id + "'");
  if (wp.frame == WaypointFrame::Absolute) return wp.target;
  return takeoff_origin + wp.target;
}

Waypoint resolved(const Waypoint& wp, const Position3& takeoff_origin) {
  Waypoint out = wp;
  out.target = resolve_waypoint(wp, takeoff_origin);
  out.frame = WaypointFrame::Absolute;
  return out;
}

}  // namespace daas
