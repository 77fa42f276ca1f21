#include "daas/core/wire.hpp"

#include "daas/core/error.hpp"

namespace daas {

namespace wire {

std::string join(const std::string& path, const std::string& key) { return path + "/" + key; }
std::string join(const std::string& path, std::size_t index) { return path + "/" + std::to_string(index); }

const Json& require(const Json& j, const std::string& key, const std::string& path) {
  if (!j.is_object()) throw Error(ErrorCode::Schema, "expected an object", path.empty() ? "/" : path);
  auto it = j.find(key);
  if (it == j.end()) throw Error(ErrorCode::Schema, "missing field '" + key + "'", join(path, key));
  return *it;
}

double number(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_number()) throw Error(ErrorCode::Schema, "expected a number", join(path, key));
  return v.get<double>();
}

double number_or(const Json& j, const std::string& key, double fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return number(j, key, path);
}

std::string string(const Json& j, const std::string& key, const std::string& path) {
  const Json& v = require(j, key, path);
  if (!v.is_string()) throw Error(ErrorCode::Schema, "expected a string", join(path, key));
  return v.get<std::string>();
}

std::string string_or(const Json& j, const std::string& key, const std::string& fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  return string(j, key, path);
}

bool boolean_or(const Json& j, const std::string& key, bool fallback, const std::string& path) {
  if (!j.contains(key)) return fallback;
  const Json& v = j.at(key);
  if (!v.is_boolean()) throw Error(ErrorCode::Schema, "expected a boolean", join(path, key));
  return v.get<bool>();
}

}  // namespace wire

namespace {

// Enum parse failures become schema errors pointing at the field.
template <typename F>
auto parse_field(const Json& j, const std::string& key, const std::string& path, F parse) {
  const std::string s = wire::string(j, key, path);
  try {
    return parse(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::Schema, e.what(), wire::join(path, key));
  }
}

std::vector<std::string> string_list(const Json& j) {
  std::vector<std::string> out;
  for (const auto& v : j) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

Json position_to_json(const Position3& p) { return Json{{"x", p.x()}, {"y", p.y()}, {"z", p.z()}}; }

Position3 position_from_json(const Json& j, const std::string& path) {
  return Position3(wire::number(j, "x", path), wire::number(j, "y", path), wire::number(j, "z", path));
}

void to_json(Json& j, const Waypoint& wp) {
  j = Json{{"id", wp.id},
           {"x", wp.target.x()},
           {"y", wp.target.y()},
           {"z", wp.target.z()},
           {"hover_duration", wp.hover_duration},
           {"waypoint_type", to_string(wp.frame)}};
  if (wp.deadline) j["deadline"] = *wp.deadline;
}

void from_json(const Json& j, Waypoint& wp) {
  wp.id = wire::string(j, "id", "");
  wp.target = Position3(wire::number(j, "x", ""), wire::number(j, "y", ""), wire::number(j, "z", ""));
  wp.hover_duration = wire::number_or(j, "hover_duration", 0.0, "");
  wp.frame = j.contains("waypoint_type") ? parse_field(j, "waypoint_type", "", parse_waypoint_frame)
                                         : WaypointFrame::Relative;
  wp.deadline.reset();
  if (j.contains("deadline") && !j.at("deadline").is_null()) wp.deadline = wire::number(j, "deadline", "");
}

void to_json(Json& j, const NavigationBatch& b) {
  j = Json{{"nav_type", to_string(b.nav_type)},
           {"scheduling", to_string(b.scheduling)},
           {"priority", b.priority},
           {"waypoints", b.waypoints}};
}

void from_json(const Json& j, NavigationBatch& b) {
  b.nav_type = j.contains("nav_type") ? parse_field(j, "nav_type", "", parse_navigation_type)
                                      : NavigationType::DistanceDriven;
  b.scheduling = j.contains("scheduling") ? parse_field(j, "scheduling", "", parse_scheduling_type)
                                          : SchedulingType::Ordered;
  const Json& prio = wire::require(j, "priority", "");
  if (!prio.is_number_integer()) throw Error(ErrorCode::Schema, "priority must be an integer", "/priority");
  b.priority = prio.get<int>();
  const Json& wps = wire::require(j, "waypoints", "");
  if (!wps.is_array()) throw Error(ErrorCode::Schema, "waypoints must be an array", "/waypoints");
  b.waypoints.clear();
  for (std::size_t i = 0; i < wps.size(); ++i) {
    try {
      b.waypoints.push_back(wps[i].get<Waypoint>());
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), wire::join("/waypoints", i) + e.path());
    }
  }
}

void to_json(Json& j, const TelemetryEvent& e) {
  j = Json{{"sim_time", e.sim_time},
           {"pose", position_to_json(e.pose)},
           {"velocity", position_to_json(e.velocity)},
           {"battery", e.battery},
           {"state", to_string(e.state)},
           {"visited_waypoint_ids", e.visited_waypoint_ids}};
}

void from_json(const Json& j, TelemetryEvent& e) {
  e.sim_time = wire::number(j, "sim_time", "");
  e.pose = position_from_json(wire::require(j, "pose", ""), "/pose");
  e.velocity = position_from_json(wire::require(j, "velocity", ""), "/velocity");
  e.battery = wire::number(j, "battery", "");
  e.state = parse_field(j, "state", "", parse_mission_state);
  e.visited_waypoint_ids = string_list(wire::require(j, "visited_waypoint_ids", ""));
}

void to_json(Json& j, const StatStreamEvent& e) {
  j = Json{{"sim_time", e.sim_time},
           {"from_state", to_string(e.from_state)},
           {"to_state", to_string(e.to_state)},
           {"reason", e.reason}};
}

void from_json(const Json& j, StatStreamEvent& e) {
  e.sim_time = wire::number(j, "sim_time", "");
  e.from_state = parse_field(j, "from_state", "", parse_mission_state);
  e.to_state = parse_field(j, "to_state", "", parse_mission_state);
  e.reason = wire::string_or(j, "reason", "", "");
}

namespace {

struct EventWriter {
  Json operator()(const TraceHeader& h) const {
    return Json{{"type", "header"},
                {"schema", h.schema},
                {"scenario", h.scenario},
                {"pattern", h.pattern},
                {"scheduler", h.scheduler},
                {"seed", h.seed},
                {"dt", h.dt},
                {"max_horizontal_speed", h.max_horizontal_speed},
                {"max_vertical_speed", h.max_vertical_speed},
                {"arrival_epsilon", h.arrival_epsilon},
                {"takeoff_origin", position_to_json(h.takeoff_origin)}};
  }
  Json operator()(const TelemetryEvent& e) const {
    Json j = e;
    j["type"] = "telemetry";
    return j;
  }
  Json operator()(const StatStreamEvent& e) const {
    Json j = e;
    j["type"] = "state";
    return j;
  }
  Json operator()(const QueueEvent& e) const {
    return Json{{"type", "queue"}, {"sim_time", e.sim_time}, {"op", e.op},
                {"ids", e.ids},    {"priority", e.priority}, {"size", e.size}};
  }
  Json operator()(const VisitEvent& e) const {
    return Json{{"type", "visit"},
                {"sim_time", e.sim_time},
                {"id", e.id},
                {"target", position_to_json(e.target)},
                {"pose", position_to_json(e.pose)}};
  }
  Json operator()(const CommandEvent& e) const {
    Json j{{"type", "command"}, {"sim_time", e.sim_time}, {"tick", e.tick},     {"seq", e.seq},
           {"kind", e.kind},    {"accepted", e.accepted}, {"reason", e.reason}};
    if (e.payload) j["payload"] = *e.payload;
    return j;
  }
  Json operator()(const DetectionEvent& e) const {
    return Json{{"type", "detection"}, {"frame_time", e.frame_time}, {"emit_time", e.emit_time},
                {"task", e.task},      {"target", e.target},         {"bearing", e.bearing},
                {"range", e.range},    {"confidence", e.confidence}};
  }
  Json operator()(const NoticeEvent& e) const {
    return Json{{"type", "notice"}, {"sim_time", e.sim_time}, {"kind", e.kind}, {"message", e.message}};
  }
  Json operator()(const EndEvent& e) const {
    return Json{{"type", "end"}, {"sim_time", e.sim_time}, {"status", e.status}, {"reason", e.reason}};
  }
};

std::vector<std::string> ids_of(const Json& j, const std::string& key) {
  return string_list(wire::require(j, key, ""));
}

}  // namespace

Json event_to_json(const MissionEvent& e) { return std::visit(EventWriter{}, e); }

MissionEvent event_from_json(const Json& j) {
  const std::string type = wire::string(j, "type", "");
  if (type == "header") {
    TraceHeader h;
    h.schema = static_cast<int>(wire::number(j, "schema", ""));
    h.scenario = wire::string(j, "scenario", "");
    h.pattern = wire::string(j, "pattern", "");
    h.scheduler = wire::string(j, "scheduler", "");
    h.seed = wire::require(j, "seed", "").get<std::uint64_t>();
    h.dt = wire::number(j, "dt", "");
    h.max_horizontal_speed = wire::number(j, "max_horizontal_speed", "");
    h.max_vertical_speed = wire::number(j, "max_vertical_speed", "");
    h.arrival_epsilon = wire::number(j, "arrival_epsilon", "");
    h.takeoff_origin = position_from_json(wire::require(j, "takeoff_origin", ""), "/takeoff_origin");
    return h;
  }
  if (type == "telemetry") return j.get<TelemetryEvent>();
  if (type == "state") return j.get<StatStreamEvent>();
  if (type == "queue") {
    QueueEvent e;
    e.sim_time = wire::number(j, "sim_time", "");
    e.op = wire::string(j, "op", "");
    e.ids = ids_of(j, "ids");
    e.priority = static_cast<int>(wire::number(j, "priority", ""));
    e.size = wire::require(j, "size", "").get<std::size_t>();
    return e;
  }
  if (type == "visit") {
    VisitEvent e;
    e.sim_time = wire::number(j, "sim_time", "");
    e.id = wire::string(j, "id", "");
    e.target = position_from_json(wire::require(j, "target", ""), "/target");
    e.pose = position_from_json(wire::require(j, "pose", ""), "/pose");
    return e;
  }
  if (type == "command") {
    CommandEvent e;
    e.sim_time = wire::number(j, "sim_time", "");
    e.tick = wire::require(j, "tick", "").get<std::uint64_t>();
    e.seq = wire::require(j, "seq", "").get<std::uint64_t>();
    e.kind = wire::string(j, "kind", "");
    e.accepted = wire::require(j, "accepted", "").get<bool>();
    e.reason = wire::string_or(j, "reason", "", "");
    if (j.contains("payload")) e.payload = j.at("payload").get<NavigationBatch>();
    return e;
  }
  if (type == "detection") {
    DetectionEvent e;
    e.frame_time = wire::number(j, "frame_time", "");
    e.emit_time = wire::number(j, "emit_time", "");
    e.task = wire::string(j, "task", "");
    e.target = wire::string(j, "target", "");
    e.bearing = wire::number(j, "bearing", "");
    e.range = wire::number(j, "range", "");
    e.confidence = wire::number(j, "confidence", "");
    return e;
  }
  if (type == "notice") {
    return NoticeEvent{wire::number(j, "sim_time", ""), wire::string(j, "kind", ""), wire::string_or(j, "message", "", "")};
  }
  if (type == "end") {
    return EndEvent{wire::number(j, "sim_time", ""), wire::string(j, "status", ""), wire::string_or(j, "reason", "", "")};
  }
  throw Error(ErrorCode::Schema, "unknown event type '" + type + "'", "/type");
}

std::string serialize_event(const MissionEvent& e) { return event_to_json(e).dump(); }

}  // namespace daas
